#include "mvdm/bench.hpp"

#include "mvdm/embedding.hpp"
#include "mvdm/evaluation.hpp"
#include "mvdm/kernels.hpp"
#include "mvdm/operators.hpp"
#include "mvdm/rng.hpp"
#include "mvdm/spectral.hpp"
#include "mvdm/synthetic.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace mvdm {

int thread_budget() {
    if (const char* env = std::getenv("MVDM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

// First non-trivial coordinate of a truncated single-operator model.
Vector leading_coordinate(const SpectralModel& model) {
    for (int k = 0; k < model.pair_count(); ++k)
        if (!model.trivial_flags[static_cast<std::size_t>(k)])
            return model.eigenvalues[k] * model.psi.col(k);
    throw numeric_error("bench: no non-trivial mode among the computed pairs");
}

void run_parallel(int jobs, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || jobs <= 1) {
        for (int j = 0; j < jobs; ++j) body(j);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, jobs);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const int j = next.fetch_add(1);
                if (j >= jobs) return;
                body(j);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

const std::vector<std::string>& circles_method_names() {
    static const std::vector<std::string> names{
        "multiview", "single_view_1", "single_view_2", "kernel_product", "kernel_sum"};
    return names;
}

std::vector<double> circles_trial(std::uint64_t trial_seed, double noise_var, int m,
                                  double maxmin_c) {
    const LabeledViewSet data = gen_coupled_circles(trial_seed, m, noise_var);
    const ViewMatrix& x = data.views.views[0];
    const ViewMatrix& y = data.views.views[1];

    const double sx = std::sqrt(max_min_bandwidth(x, maxmin_c));
    const double sy = std::sqrt(max_min_bandwidth(y, maxmin_c));
    const KernelMatrix kx = gaussian_kernel(x, sx);
    const KernelMatrix ky = gaussian_kernel(y, sy);

    auto cluster_accuracy = [&](const Matrix& features, std::uint64_t salt) {
        const ClusteringResult cr =
            kmeans(features, 2, rng::SplitMix64(trial_seed ^ salt).next());
        return clustering_accuracy(cr.labels, data.labels);
    };

    std::vector<double> acc(circles_method_names().size(), 0.0);

    // Multi-view: first coordinate of each view, concatenated.
    {
        const SpectralModel model = decompose_svd_truncated(kx, ky, 3, 300, 1e-7);
        const Embedding emb = multiview_embed(model, 1, 0.5);
        Matrix features(m, 2);
        features.col(0) = emb.per_view_coords[0].col(0);
        features.col(1) = emb.per_view_coords[1].col(0);
        acc[0] = cluster_accuracy(features, 0x6d76);
    }
    // Single views: first diffusion coordinate.
    acc[1] = cluster_accuracy(
        leading_coordinate(decompose_truncated(single_view_operator(kx), 3, 300, 1e-7)), 0x7331);
    acc[2] = cluster_accuracy(
        leading_coordinate(decompose_truncated(single_view_operator(ky), 3, 300, 1e-7)), 0x7332);
    // Kernel product over the concatenation scale sqrt(sx^2 + sy^2).
    {
        const double so = std::sqrt(sx * sx + sy * sy);
        const std::vector<KernelMatrix> ks{gaussian_kernel(x, so), gaussian_kernel(y, so)};
        acc[3] = cluster_accuracy(
            leading_coordinate(decompose_truncated(kernel_product(ks), 3, 300, 1e-7)), 0x6b70);
    }
    // Kernel sum over the per-view scales.
    {
        const std::vector<KernelMatrix> ks{kx, ky};
        acc[4] = cluster_accuracy(
            leading_coordinate(decompose_truncated(kernel_sum(ks), 3, 300, 1e-7)), 0x6b73);
    }
    return acc;
}

CirclesBenchResult circles_bench(const std::vector<double>& noise_grid, int trials,
                                 std::uint64_t seed, int m, double maxmin_c) {
    require(!noise_grid.empty(), "circles bench: empty noise grid");
    require(trials >= 1, "circles bench: trials must be >= 1");

    CirclesBenchResult res;
    res.noise_grid = noise_grid;
    res.methods = circles_method_names();
    res.trials = trials;
    res.m = m;
    res.seed = seed;
    res.mean_accuracy.assign(res.methods.size(),
                             std::vector<double>(noise_grid.size(), 0.0));

    const int jobs = static_cast<int>(noise_grid.size()) * trials;
    std::vector<std::vector<double>> per_job(static_cast<std::size_t>(jobs));
    run_parallel(jobs, thread_budget(), [&](int j) {
        const int noise_idx = j / trials;
        const int trial = j % trials;
        const std::uint64_t trial_seed =
            rng::SplitMix64(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(j)).next();
        per_job[static_cast<std::size_t>(j)] =
            circles_trial(trial_seed, noise_grid[static_cast<std::size_t>(noise_idx)], m,
                          maxmin_c);
    });

    for (int j = 0; j < jobs; ++j) {
        const int noise_idx = j / trials;
        for (std::size_t method = 0; method < res.methods.size(); ++method)
            res.mean_accuracy[method][static_cast<std::size_t>(noise_idx)] +=
                per_job[static_cast<std::size_t>(j)][method] / static_cast<double>(trials);
    }
    return res;
}

HelixBenchResult helix_bench(char which, std::uint64_t seed, int m, double maxmin_c) {
    require(which == 'a' || which == 'b', "helix bench: which must be 'a' or 'b'");
    const LabeledViewSet data = which == 'a' ? gen_helix_a(seed, m) : gen_helix_b(seed, m);
    const ViewMatrix& x = data.views.views[0];
    const ViewMatrix& y = data.views.views[1];

    const double sx = std::sqrt(max_min_bandwidth(x, maxmin_c));
    const double sy = std::sqrt(max_min_bandwidth(y, maxmin_c));
    const KernelMatrix kx = gaussian_kernel(x, sx);
    const KernelMatrix ky = gaussian_kernel(y, sy);

    HelixBenchResult res;
    res.latent_a = data.latent.col(0);
    res.latent_b = data.latent.col(1);

    // Multi-view: first two positive non-trivial pairs carry the circular
    // structure (their mirrored twins duplicate the same view blocks).
    {
        const SpectralModel model = decompose_svd_truncated(kx, ky, 4, 400, 1e-8);
        std::vector<int> kept;
        for (int k = 0; k < model.pair_count() && kept.size() < 2; ++k) {
            if (model.trivial_flags[static_cast<std::size_t>(k)]) continue;
            if (model.eigenvalues[k] <= 0.0) continue;
            kept.push_back(k);
        }
        require_numeric(kept.size() == 2, "helix bench: fewer than two usable multi-view modes");
        res.mv_coords_view1.resize(m, 2);
        res.mv_coords_view2.resize(m, 2);
        for (int c = 0; c < 2; ++c) {
            const int k = kept[static_cast<std::size_t>(c)];
            const double w = model.eigenvalues[k];
            res.mv_coords_view1.col(c) = w * model.psi.col(k).head(m);
            res.mv_coords_view2.col(c) = w * model.psi.col(k).tail(m);
        }
        Vector angle1(m), angle2(m);
        for (Index i = 0; i < m; ++i) {
            angle1[i] = std::atan2(res.mv_coords_view1(i, 1), res.mv_coords_view1(i, 0));
            angle2[i] = std::atan2(res.mv_coords_view2(i, 1), res.mv_coords_view2(i, 0));
        }
        res.mv_corr_view1_a = circular_rank_correlation(angle1, res.latent_a);
        res.mv_corr_view2_b = circular_rank_correlation(angle2, res.latent_b);
    }

    // Kernel product on the concatenation scale; one shared embedding.
    {
        const double so = std::sqrt(sx * sx + sy * sy);
        const std::vector<KernelMatrix> ks{gaussian_kernel(x, so), gaussian_kernel(y, so)};
        const SpectralModel model = decompose_truncated(kernel_product(ks), 4, 400, 1e-8);
        std::vector<int> kept;
        for (int k = 0; k < model.pair_count() && kept.size() < 2; ++k) {
            if (model.trivial_flags[static_cast<std::size_t>(k)]) continue;
            kept.push_back(k);
        }
        require_numeric(kept.size() == 2, "helix bench: fewer than two usable kernel-product modes");
        res.kp_coords.resize(m, 2);
        for (int c = 0; c < 2; ++c) {
            const int k = kept[static_cast<std::size_t>(c)];
            res.kp_coords.col(c) = model.eigenvalues[k] * model.psi.col(k);
        }
        Vector angle(m);
        for (Index i = 0; i < m; ++i)
            angle[i] = std::atan2(res.kp_coords(i, 1), res.kp_coords(i, 0));
        res.kp_corr_a = circular_rank_correlation(angle, res.latent_a);
        res.kp_corr_b = circular_rank_correlation(angle, res.latent_b);
    }
    return res;
}

} // namespace mvdm
