#pragma once

#include "mvdm/types.hpp"

#include <cstdint>

namespace mvdm {

// Coupled-circles clustering sweep: per noise level, mean clustering
// accuracy over `trials` seeded runs of every method. Trials run in
// parallel (MVDM_THREADS caps the pool); per-trial seeds derive from
// (seed, trial index), so the thread count never changes the numbers.
struct CirclesBenchResult {
    std::vector<double> noise_grid; // noise variances
    std::vector<std::string> methods;
    // mean_accuracy[method][noise]
    std::vector<std::vector<double>> mean_accuracy;
    int trials = 0;
    int m = 0;
    std::uint64_t seed = 0;
};

CirclesBenchResult circles_bench(const std::vector<double>& noise_grid, int trials,
                                 std::uint64_t seed, int m = 1600, double maxmin_c = 1.0);

// Single coupled-circles trial; returns per-method accuracy in the order of
// `circles_method_names()`.
std::vector<double> circles_trial(std::uint64_t trial_seed, double noise_var, int m,
                                  double maxmin_c);
const std::vector<std::string>& circles_method_names();

// Helix manifold recovery: 2-D multi-view embedding per view plus the
// circular rank correlation of the embedding angle against the latent
// angles; kernel-product embedding reported alongside.
struct HelixBenchResult {
    Matrix mv_coords_view1; // M x 2
    Matrix mv_coords_view2;
    Matrix kp_coords;       // M x 2, shared embedding
    double mv_corr_view1_a = 0.0;
    double mv_corr_view2_b = 0.0;
    double kp_corr_a = 0.0;
    double kp_corr_b = 0.0;
    Vector latent_a;
    Vector latent_b;
};

HelixBenchResult helix_bench(char which, std::uint64_t seed, int m = 1000, double maxmin_c = 1.0);

// Thread budget: MVDM_THREADS when set (>= 1), hardware concurrency otherwise.
int thread_budget();

} // namespace mvdm
