#include "mvdm/kernels.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace mvdm {

namespace {

// Pairwise kernel over an explicit per-pair distance functional. Distances
// are computed by direct differencing (never the expanded-norm trick), so
// close pairs keep full precision.
Matrix pairwise_apply(const ViewMatrix& view,
                      const std::function<double(Index, Index)>& entry) {
    const Index m = view.samples();
    Matrix k(m, m);
    for (Index i = 0; i < m; ++i) {
        k(i, i) = 1.0;
        for (Index j = i + 1; j < m; ++j) {
            const double v = entry(i, j);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    // Entries are written symmetrically above; the explicit (K + K^T)/2 pass
    // keeps the postcondition obvious and costs nothing at desk scale.
    k = 0.5 * (k + k.transpose()).eval();
    return k;
}

void require_sigma(double sigma) {
    require(std::isfinite(sigma) && sigma > 0.0,
            "kernel bandwidth must be a positive finite number, got " + std::to_string(sigma));
}

} // namespace

KernelMatrix gaussian_kernel(const ViewMatrix& view, double sigma) {
    validate_view(view);
    require_sigma(sigma);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    const auto& x = view.data;
    Matrix k = pairwise_apply(view, [&](Index i, Index j) {
        const double d2 = (x.row(i) - x.row(j)).squaredNorm();
        return std::exp(-d2 * inv);
    });
    return KernelMatrix{std::move(k), sigma, KernelKind::gaussian};
}

KernelMatrix laplacian_kernel(const ViewMatrix& view, double sigma) {
    validate_view(view);
    require_sigma(sigma);
    const double inv = 1.0 / sigma;
    const auto& x = view.data;
    Matrix k = pairwise_apply(view, [&](Index i, Index j) {
        const double d1 = (x.row(i) - x.row(j)).cwiseAbs().sum();
        return std::exp(-d1 * inv);
    });
    return KernelMatrix{std::move(k), sigma, KernelKind::laplacian};
}

KernelMatrix correlation_kernel(const ViewMatrix& view, double sigma) {
    validate_view(view);
    require_sigma(sigma);
    const Index m = view.samples();
    Matrix centered = view.data;
    Vector norms(m);
    for (Index i = 0; i < m; ++i) {
        centered.row(i).array() -= centered.row(i).mean();
        norms[i] = centered.row(i).norm();
        require_numeric(norms[i] > 0.0,
                        "correlation kernel: row " + std::to_string(i) + " of view " +
                            std::to_string(view.view_id) + " has zero variance");
    }
    const double inv = 1.0 / (2.0 * sigma * sigma);
    Matrix k = pairwise_apply(view, [&](Index i, Index j) {
        double t = centered.row(i).dot(centered.row(j)) / (norms[i] * norms[j]);
        t = std::clamp(t, -1.0, 1.0);
        return std::exp((t - 1.0) * inv);
    });
    return KernelMatrix{std::move(k), sigma, KernelKind::correlation};
}

KernelMatrix make_kernel(const ViewMatrix& view, KernelKind kind, double sigma) {
    switch (kind) {
        case KernelKind::gaussian: return gaussian_kernel(view, sigma);
        case KernelKind::laplacian: return laplacian_kernel(view, sigma);
        case KernelKind::correlation: return correlation_kernel(view, sigma);
        case KernelKind::custom: break;
    }
    throw invalid_input("make_kernel: 'custom' kernels are built from a matrix, not a view");
}

KernelMatrix custom_kernel(const Matrix& values) {
    require(values.rows() == values.cols(), "custom kernel must be square");
    require(values.allFinite(), "custom kernel has non-finite entries");
    require((values.array() >= 0.0).all(), "custom kernel has negative entries");
    require((values - values.transpose()).cwiseAbs().maxCoeff() == 0.0,
            "custom kernel must be exactly symmetric");
    return KernelMatrix{values, 0.0, KernelKind::custom};
}

double max_min_bandwidth(const ViewMatrix& view, double C) {
    validate_view(view);
    require(std::isfinite(C) && C > 0.0, "max-min bandwidth: C must be positive");
    const auto& x = view.data;
    const Index m = view.samples();
    double max_min = 0.0;
    for (Index j = 0; j < m; ++j) {
        double min_d2 = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < m; ++i) {
            if (i == j) continue;
            min_d2 = std::min(min_d2, (x.row(i) - x.row(j)).squaredNorm());
        }
        max_min = std::max(max_min, min_d2);
    }
    return C * max_min;
}

std::vector<double> default_scan_grid(const ViewMatrix& view, int n_points) {
    validate_view(view);
    require(n_points >= 3, "scan grid needs at least 3 points");
    const auto& x = view.data;
    const Index m = view.samples();
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (Index i = 0; i < m; ++i)
        for (Index j = i + 1; j < m; ++j)
            dists.push_back((x.row(i) - x.row(j)).norm());
    std::sort(dists.begin(), dists.end());
    double median = dists[dists.size() / 2];
    if (median <= 0.0) median = 1.0; // degenerate all-duplicate view
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    const double lo = std::log10(1e-6 * median);
    const double hi = std::log10(1e6 * median);
    for (int g = 0; g < n_points; ++g)
        grid[static_cast<std::size_t>(g)] =
            std::pow(10.0, lo + (hi - lo) * g / static_cast<double>(n_points - 1));
    return grid;
}

BandwidthScan bandwidth_scan(const ViewSet& views,
                             const std::vector<std::vector<double>>& sigma_grid) {
    validate_view_set(views);
    const int n_views = views.count();
    require(n_views >= 2, "bandwidth scan needs at least two views");
    require(sigma_grid.size() == static_cast<std::size_t>(n_views),
            "bandwidth scan: one sigma grid per view required");

    const std::size_t grid_len = sigma_grid.front().size();
    for (std::size_t l = 0; l < sigma_grid.size(); ++l) {
        const auto& g = sigma_grid[l];
        require(!g.empty(), "bandwidth scan: grid for view " + std::to_string(l + 1) + " is empty");
        require(g.size() == grid_len, "bandwidth scan: all grids must have equal length");
        require(g.size() >= 3, "bandwidth scan: grids need at least 3 points");
        for (std::size_t i = 0; i + 1 < g.size(); ++i)
            require(g[i] > 0.0 && g[i] < g[i + 1],
                    "bandwidth scan: grid for view " + std::to_string(l + 1) +
                        " must be positive and strictly increasing");
        require(g.back() / g.front() >= 1e4,
                "bandwidth scan: grid for view " + std::to_string(l + 1) +
                    " must span at least four decades");
    }

    // Kernels for every (view, grid point).
    std::vector<std::vector<Matrix>> kernels(static_cast<std::size_t>(n_views));
    for (int l = 0; l < n_views; ++l) {
        kernels[static_cast<std::size_t>(l)].reserve(grid_len);
        for (double s : sigma_grid[static_cast<std::size_t>(l)])
            kernels[static_cast<std::size_t>(l)].push_back(
                gaussian_kernel(views.views[static_cast<std::size_t>(l)], s).values);
    }

    BandwidthScan out;
    out.grids = sigma_grid;
    out.selected_sigma.assign(static_cast<std::size_t>(n_views), 0.0);
    out.diagonal_slopes.assign(static_cast<std::size_t>(n_views), {});

    for (int l = 0; l < n_views; ++l) {
        for (int m = 0; m < n_views; ++m) {
            if (l == m) continue;
            BandwidthScan::PairSurface surf;
            surf.view_l = l + 1;
            surf.view_m = m + 1;
            surf.log_sum.resize(static_cast<Index>(grid_len), static_cast<Index>(grid_len));
            for (std::size_t gl = 0; gl < grid_len; ++gl) {
                for (std::size_t gm = 0; gm < grid_len; ++gm) {
                    const double total =
                        (kernels[static_cast<std::size_t>(l)][gl] *
                         kernels[static_cast<std::size_t>(m)][gm])
                            .sum();
                    surf.log_sum(static_cast<Index>(gl), static_cast<Index>(gm)) = std::log(total);
                }
            }
            out.surfaces.push_back(std::move(surf));
        }
    }

    // Linear-region pick: slope of the diagonal slice in log sigma; a grid
    // point is "linear" when its slope is within 20% of the slice's maximum
    // interior slope. Selected sigma_l = smallest grid value linear for all m.
    for (int l = 0; l < n_views; ++l) {
        std::vector<bool> linear_all(grid_len, true);
        std::vector<double> mean_slope(grid_len, 0.0);
        int pair_count = 0;
        for (const auto& surf : out.surfaces) {
            if (surf.view_l != l + 1) continue;
            ++pair_count;
            const auto& grid = sigma_grid[static_cast<std::size_t>(l)];
            std::vector<double> slope(grid_len, 0.0);
            for (std::size_t g = 1; g + 1 < grid_len; ++g) {
                const double ds = surf.log_sum(static_cast<Index>(g + 1), static_cast<Index>(g + 1)) -
                                  surf.log_sum(static_cast<Index>(g - 1), static_cast<Index>(g - 1));
                const double dlog = std::log(grid[g + 1]) - std::log(grid[g - 1]);
                slope[g] = ds / dlog;
            }
            double max_slope = 0.0;
            for (std::size_t g = 1; g + 1 < grid_len; ++g) max_slope = std::max(max_slope, slope[g]);
            for (std::size_t g = 0; g < grid_len; ++g) {
                mean_slope[g] += slope[g];
                const bool interior = g > 0 && g + 1 < grid_len;
                const bool linear = interior && max_slope > 0.0 &&
                                    slope[g] >= 0.8 * max_slope;
                if (!linear) linear_all[g] = false;
            }
        }
        for (std::size_t g = 0; g < grid_len; ++g)
            mean_slope[g] /= std::max(pair_count, 1);
        out.diagonal_slopes[static_cast<std::size_t>(l)] = mean_slope;

        double selected = 0.0;
        for (std::size_t g = 0; g < grid_len; ++g) {
            if (linear_all[g]) {
                selected = sigma_grid[static_cast<std::size_t>(l)][g];
                break;
            }
        }
        require_numeric(selected > 0.0,
                        "bandwidth scan: no linear region found for view " + std::to_string(l + 1) +
                            "; widen or refine the grid");
        out.selected_sigma[static_cast<std::size_t>(l)] = selected;
    }
    return out;
}

} // namespace mvdm
