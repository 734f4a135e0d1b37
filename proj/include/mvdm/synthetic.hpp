#pragma once

#include "mvdm/types.hpp"

#include <cstdint>

namespace mvdm {

// Seeded synthetic dataset: row-aligned views, ground-truth labels and the
// per-sample generative parameters (named columns of `latent`). Views that
// were produced by an orthonormal transform of a base manifold carry it in
// `view_transforms` (identity for untransformed views), so the noiseless
// data is exactly reconstructible from the latent block.
struct LabeledViewSet {
    ViewSet views;
    std::vector<int> labels;
    Matrix latent;
    std::vector<std::string> latent_names;
    std::vector<Matrix> view_transforms;

    Index samples() const { return views.samples(); }
};

// Gaussian mixtures with shared cluster centers across views. M =
// n_clusters_per_view[0] * points_per_cluster; every other view's cluster
// count must divide M (the 6-vs-3 split uses {6, 3}). Labels follow the
// first view's (finest) clustering.
LabeledViewSet gen_gaussian_clusters(std::uint64_t seed,
                                     const std::vector<int>& n_clusters_per_view = {6, 6},
                                     int points_per_cluster = 100, int dim = 9,
                                     double center_var = 8.0, double cluster_var = 2.0);

// Swiss rolls: view 1 is the parametric roll plus noise, every further view
// applies an independent random orthonormal transform before adding noise.
// theta_i = 1.5 pi s_i with s_i equally spaced on [1, 3]; h_i uniform on
// [0, 100] and shared across views.
LabeledViewSet gen_noisy_swiss_rolls(std::uint64_t seed, int m = 1000, double noise_var = 0.0,
                                     int n_views = 2);

// Two concentric circles (radius 2 then 4, M/2 points each) pushed through
// the conditional-shift distortions of the two views. Labels are circle
// membership.
LabeledViewSet gen_coupled_circles(std::uint64_t seed, int m = 1600, double noise_var = 0.03);

// Coupled helix manifolds over a_i equally spaced on [0, 2 pi] and
// b_i = a_i + pi/2 (mod 2 pi).
LabeledViewSet gen_helix_a(std::uint64_t seed, int m = 1000);
LabeledViewSet gen_helix_b(std::uint64_t seed, int m = 1000);

// Random orthonormal matrix: Gram-Schmidt over iid Gaussian columns.
Matrix random_orthonormal(std::uint64_t seed, int dim, std::uint64_t stream_index = 0);

} // namespace mvdm
