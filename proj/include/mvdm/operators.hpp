#pragma once

#include "mvdm/types.hpp"

namespace mvdm {

// Assembles the block operator: block (l, m) = K^l * K^m for l != m, zero
// diagonal blocks; degrees are the row sums of the block matrix and P-hat
// is the row normalization. Rejects isolated samples (zero degree).
MultiViewOperator assemble_multiview(const std::vector<KernelMatrix>& kernels);

// [P-hat^t] entry from (view l, sample i) to (view m, sample j). Views are
// 1-based, samples 0-based. t >= 1.
double transition_probability(const MultiViewOperator& op, int t,
                              int view_from, Index i, int view_to, Index j);

// Hadamard product of all kernels, row-normalized.
StochasticOperator kernel_product(const std::vector<KernelMatrix>& kernels);

// Sum of all kernels, row-normalized.
StochasticOperator kernel_sum(const std::vector<KernelMatrix>& kernels);

// Plain single-view diffusion operator P = D^{-1} K.
StochasticOperator single_view_operator(const KernelMatrix& kernel);

// Two-view operator with within-view bias: diagonal blocks (1-alpha) (K)^2,
// off-diagonal alpha K^x K^y; row-normalized. alpha = 1 recovers the
// multi-view operator, alpha = 0 is block-diagonal.
StochasticOperator generalized_multiview(const KernelMatrix& k1, const KernelMatrix& k2,
                                         double alpha);

// Same construction exposed with the block structure intact, so the
// spectral and embedding machinery can treat it like any block operator.
MultiViewOperator generalized_multiview_operator(const KernelMatrix& k1, const KernelMatrix& k2,
                                                 double alpha);

// Symmetrically normalized two-view operator A-bar = D^{-1/2} A D^{-1/2}
// over A = [[0, W], [W^T, 0]], W = K^1 K^2, plus the squared-eigenvector
// clustering map over its top n_clusters eigenvectors.
struct DeSaResult {
    Matrix a_bar;          // 2M x 2M symmetric
    Vector degrees;        // row sums of A (W row sums, then W column sums)
    Vector eigenvalues;    // full spectrum, algebraic descending
    Matrix clustering_map; // 2M x n_clusters, rows normalized by s[i]
};

DeSaResult desa_operator(const KernelMatrix& k1, const KernelMatrix& k2, int n_clusters);

// Canonical correlations and paired coefficient vectors from the
// regularized two-view generalized eigenproblem.
struct KccaResult {
    Vector correlations; // top n_components by |rho|, in that order
    Matrix v1;           // M x n_components
    Matrix v2;           // M x n_components
};

KccaResult kcca(const KernelMatrix& k1, const KernelMatrix& k2, double gamma, int n_components);

// P^AD = P1 * P2 (products of row-stochastic matrices stay row-stochastic).
StochasticOperator alternating_diffusion(const StochasticOperator& p1,
                                         const StochasticOperator& p2);

} // namespace mvdm
