#pragma once

#include "mvdm/types.hpp"

namespace mvdm {

// K_ij = exp(-||x_i - x_j||^2 / (2 sigma^2)), symmetrized, unit diagonal.
KernelMatrix gaussian_kernel(const ViewMatrix& view, double sigma);

// K_ij = exp(-||x_i - x_j||_1 / sigma). The L1 norm is a deliberate reading
// of the source's |x_i - x_j|; swap the distance lambda below to change it.
KernelMatrix laplacian_kernel(const ViewMatrix& view, double sigma);

// K_ij = exp((T_ij - 1) / (2 sigma^2)) with T the Pearson correlation of the
// mean-subtracted rows. Rows with zero variance are rejected by index.
KernelMatrix correlation_kernel(const ViewMatrix& view, double sigma);

KernelMatrix make_kernel(const ViewMatrix& view, KernelKind kind, double sigma);

// Wraps a raw symmetric affinity matrix (kind = custom) with validation.
KernelMatrix custom_kernel(const Matrix& values);

// sigma^2 = C * max_j min_{i != j} ||x_i - x_j||^2  (returns the squared scale).
double max_min_bandwidth(const ViewMatrix& view, double C);

// Log-sum surfaces of the pairwise multi-view kernels over a bandwidth grid,
// and the per-view bandwidth picked from their linear region.
struct BandwidthScan {
    struct PairSurface {
        int view_l = 0; // 1-based
        int view_m = 0;
        Matrix log_sum; // grid_l.size() x grid_m.size(); S = log sum_ij [K^l K^m]_ij
    };

    std::vector<std::vector<double>> grids;  // per view
    std::vector<PairSurface> surfaces;       // all ordered pairs l != m
    std::vector<double> selected_sigma;      // per view
    std::vector<std::vector<double>> diagonal_slopes; // per view: d S / d log sigma on the diagonal slice
};

// All per-view grids must be strictly increasing, have equal length >= 3 and
// span at least four decades. Views get Gaussian kernels.
BandwidthScan bandwidth_scan(const ViewSet& views,
                             const std::vector<std::vector<double>>& sigma_grid);

// Convenience grid: n log-spaced points on [1e-6, 1e6] * median pairwise distance.
std::vector<double> default_scan_grid(const ViewMatrix& view, int n_points = 25);

} // namespace mvdm
