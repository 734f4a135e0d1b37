#pragma once

#include "mvdm/types.hpp"

#include <cstdint>

namespace mvdm {

// Eigenstructure of a row-stochastic diffusion operator, obtained through
// its symmetric conjugate P_s = D^{-1/2} K D^{-1/2}. Right eigenvectors
// psi = D^{-1/2} pi, left eigenvectors phi = D^{1/2} pi, so psi^T phi = I.
//
// Pairs are sorted by |lambda| descending; runs of equal magnitude (within
// 1e-12 relative) are ordered by algebraic value descending, which keeps
// +lambda ahead of its mirrored -lambda twin. Each eigenvector's
// largest-magnitude entry is made positive, so repeated runs are
// bit-identical and cross-route comparisons only need per-column signs.
struct SpectralModel {
    Vector eigenvalues;
    Matrix psi; // right eigenvectors, LM x R
    Matrix phi; // left eigenvectors, LM x R
    std::vector<std::uint8_t> trivial_flags;
    Vector degrees;
    int n_views = 1;
    Index points_per_view = 0;
    bool truncated = false;  // top-k model (subspace iteration) rather than full
    bool converged = true;
    double max_residual = 0.0;

    Index rows() const { return psi.rows(); }
    int pair_count() const { return static_cast<int>(eigenvalues.size()); }
    std::vector<int> nontrivial_indices() const;
};

// Full dense decomposition of the block multi-view operator.
SpectralModel decompose(const MultiViewOperator& op);

// Full dense decomposition of a kernel-backed stochastic operator
// (single view, kernel product, kernel sum). Rejects operators without a
// symmetric kernel behind them (alternating diffusion).
SpectralModel decompose(const StochasticOperator& op);

// L = 2 shortcut: the SVD of the doubly normalized cross kernel
// Kbar = Drows^{-1/2} (K1 K2) Dcols^{-1/2} assembles the full eigensystem as
// Pi = (1/sqrt(2)) [[V, V], [U, -U]], Lambda = diag(Sigma, -Sigma).
SpectralModel decompose_svd_route(const KernelMatrix& k1, const KernelMatrix& k2);

// Truncated counterparts: top pairs by |lambda| via deterministic block
// subspace iteration. For the two-view route, k_pairs counts singular
// triplets and the model carries 2*k_pairs eigenpairs (both branches).
SpectralModel decompose_truncated(const MultiViewOperator& op, int k_pairs,
                                  int max_iters = 400, double tol = 1e-9);
SpectralModel decompose_truncated(const StochasticOperator& op, int k_pairs,
                                  int max_iters = 400, double tol = 1e-9);
SpectralModel decompose_svd_truncated(const KernelMatrix& k1, const KernelMatrix& k2, int k_pairs,
                                      int max_iters = 400, double tol = 1e-9);

// Connectivity-preservation objective of the two-view coupled mapping:
//   sum_ij (rho_x[i] - rho_y[j])^2 Kz_ij + (rho_y[i] - rho_x[j])^2 Kz_ji
// over Kz = K1 * K2, with rho = [rho_x; rho_y] of length 2M. Equals
// 2 rho^T (D-hat - K-hat) rho. Minimized by psi_1 under the D-hat
// normalization constraints.
double coupled_mapping_objective(const Vector& rho, const KernelMatrix& k1,
                                 const KernelMatrix& k2);

// Spectral-decay diagnostics for a two-view kernel pair: eigenvalue
// magnitude sequences per fusion method, the trailing-product inequality of
// the matrix vs Hadamard product, and the delta tail bound.
struct DecayReport {
    std::vector<std::string> method_names;
    std::vector<Vector> magnitudes; // per method, |lambda| descending

    Vector product_eigenvalues;  // eig(K1 K2) via the symmetric similar form
    Vector hadamard_eigenvalues; // eig(K1 o K2)
    int r_delta = 0;             // #{ eig(K1 o K2) > delta }
    bool product_inequality_ok = false;
    bool tail_bound_ok = false;
    double worst_product_margin = 0.0; // min over k of rhs - lhs (trailing products)
    double worst_tail_margin = 0.0;

    std::vector<int> t_grid;
    std::vector<int> power_numerical_rank; // #{ |lambda_k|^t > 1e-6 } of P-hat per t
};

DecayReport decay_report(const KernelMatrix& k1, const KernelMatrix& k2, double delta,
                         std::vector<int> t_grid = {1, 2, 4, 8});

// #{ |lambda_k|^t > threshold } of an already decomposed operator.
int power_numerical_rank(const SpectralModel& model, int t, double threshold = 1e-6);

namespace detail {

// Deterministic block subspace iteration for the top-|lambda| pairs of a
// symmetric operator given through its matrix action.
struct TopkResult {
    Vector values;
    Matrix vectors;
    bool converged = false;
    double max_residual = 0.0;
};

TopkResult topk_symmetric(const std::function<Matrix(const Matrix&)>& apply, Index n, int k,
                          int max_iters, double tol);

// Shared post-processing: ordering, sign convention, trivial-mode flags and
// residual verification against the stochastic action D^{-1} K.
SpectralModel finalize_model(Vector eigenvalues, Matrix pi, Vector degrees, int n_views,
                             Index points_per_view,
                             const std::function<Matrix(const Matrix&)>& apply_phat,
                             bool truncated, double residual_tol);

} // namespace detail

} // namespace mvdm
