#pragma once

#include "mvdm/spectral.hpp"
#include "mvdm/types.hpp"

namespace mvdm {

// Per-view diffusion coordinates at a (t, delta) truncation. Coordinate c of
// sample i in view l is lambda^t * psi[i + (l-1)M] for the c-th retained
// non-trivial pair. `pairs` records which model pairs were kept, in order.
struct Embedding {
    std::vector<Matrix> per_view_coords; // L matrices, M x r
    int t = 1;
    double delta = 0.05;
    int r = 0;
    std::vector<int> pairs;
    SpectralModel model;

    int n_views() const { return static_cast<int>(per_view_coords.size()); }
    Index samples() const { return per_view_coords.empty() ? 0 : per_view_coords.front().rows(); }
};

// Retains the non-trivial pairs with |lambda_k|^t > delta * |lambda_1|^t,
// lambda_1 being the leading non-trivial eigenvalue. Rejects truncations
// that keep nothing, reporting the largest delta that would work.
Embedding multiview_embed(const SpectralModel& model, int t, double delta);

// Classic single-view diffusion map: P = D^{-1} K, eigendecomposition,
// coordinates weighted by lambda^t.
Embedding single_view_embed(const ViewMatrix& view, double sigma, int t, double delta,
                            KernelKind kind = KernelKind::gaussian);

// Spectral form of the inner-view diffusion distance:
//   sum_{k>=1} lambda_k^{2t} (psi_k[i+l~] - psi_k[j+l~])^2,  l~ = (l-1)M.
// Sums every pair except the all-ones mode; for L = 2 the parity mode's
// same-view differences vanish, so flagged pairs can be skipped safely.
double inner_view_distance(const SpectralModel& model, int view, Index i, Index j, int t);

// Direct definition || (e_{l~+i} - e_{l~+j})^T P-hat^t ||^2_{D-hat^{-1}},
// evaluated through an explicit matrix power. Independent route kept for
// the identity checks.
double inner_view_distance_direct(const MultiViewOperator& op, int view, Index i, Index j, int t);

// sum_l || psi-hat_t^r(x_i^l) - psi-hat_t^r(x_j^l) ||^2 over the truncated
// per-view coordinates; the squared Euclidean distance in the concatenated map.
double multiview_distance(const Embedding& emb, Index i, Index j);

// Cross-view diffusion distance for L = 2: summed coordinate distance
// between the two blocks of every coupled sample, over the untruncated
// positive-branch non-trivial pairs (the paper's R^{M-1} map).
double cross_view_distance(const SpectralModel& model, int t);

// Coordinates from a non-symmetric stochastic operator (alternating
// diffusion): general eigendecomposition sorted by |lambda|, lambda ~ 1
// dropped, delta truncation on |lambda|^t, complex-conjugate eigenpairs
// mapped to (Re, Im) column pairs.
Matrix alternating_embed(const StochasticOperator& op, int t, double delta);

// Distance between two independently computed single-view embeddings,
// matched by coordinate index up to min(r_a, r_b). With align_signs the
// per-coordinate sign minimizing the contribution is used (the median-run
// mitigation); raw mode keeps the eigenvector signs as produced.
double single_view_cross_distance(const Embedding& a, const Embedding& b,
                                  bool align_signs = true);

} // namespace mvdm
