#include "mvdm/synthetic.hpp"

#include "mvdm/rng.hpp"

#include <cmath>

namespace mvdm {

namespace {

constexpr double kPi = 3.14159265358979323846;

// M values equally spaced on [lo, hi], both endpoints included.
Vector linspace(double lo, double hi, int m) {
    Vector v(m);
    for (int i = 0; i < m; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1);
    return v;
}

} // namespace

Matrix random_orthonormal(std::uint64_t seed, int dim, std::uint64_t stream_index) {
    auto gen = rng::stream(seed, "orthonormal", stream_index);
    Matrix g(dim, dim);
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r) g(r, c) = gen.normal();
    // Modified Gram-Schmidt; a fresh Gaussian column replaces any that
    // collapses (probability ~0, but the loop must terminate orthonormal).
    Matrix q(dim, dim);
    for (int c = 0; c < dim; ++c) {
        Vector v = g.col(c);
        for (;;) {
            for (int p = 0; p < c; ++p) v -= q.col(p).dot(v) * q.col(p);
            const double norm = v.norm();
            if (norm > 1e-12) {
                q.col(c) = v / norm;
                break;
            }
            for (int r = 0; r < dim; ++r) v[r] = gen.normal();
        }
    }
    return q;
}

LabeledViewSet gen_gaussian_clusters(std::uint64_t seed,
                                     const std::vector<int>& n_clusters_per_view,
                                     int points_per_cluster, int dim, double center_var,
                                     double cluster_var) {
    require(!n_clusters_per_view.empty(), "gaussian clusters: need at least one view");
    require(points_per_cluster >= 1, "gaussian clusters: points_per_cluster must be >= 1");
    require(dim >= 1, "gaussian clusters: dim must be >= 1");
    require(center_var >= 0.0 && cluster_var >= 0.0,
            "gaussian clusters: variances must be nonnegative");
    const int m = n_clusters_per_view.front() * points_per_cluster;
    int max_clusters = 0;
    for (int c : n_clusters_per_view) {
        require(c >= 1, "gaussian clusters: cluster counts must be >= 1");
        require(m % c == 0, "gaussian clusters: cluster count " + std::to_string(c) +
                                " does not divide the sample count " + std::to_string(m));
        max_clusters = std::max(max_clusters, c);
    }

    // Shared centers across views.
    auto center_gen = rng::stream(seed, "centers");
    Matrix centers(max_clusters, dim);
    const double center_std = std::sqrt(center_var);
    for (int j = 0; j < max_clusters; ++j)
        for (int d = 0; d < dim; ++d) centers(j, d) = center_gen.normal(0.0, center_std);

    LabeledViewSet out;
    const double cluster_std = std::sqrt(cluster_var);
    for (std::size_t l = 0; l < n_clusters_per_view.size(); ++l) {
        const int clusters = n_clusters_per_view[l];
        const int per_cluster = m / clusters;
        auto gen = rng::stream(seed, "cluster-view", l);
        Matrix data(m, dim);
        for (int i = 0; i < m; ++i) {
            const int j = i / per_cluster;
            for (int d = 0; d < dim; ++d)
                data(i, d) = centers(j, d) + gen.normal(0.0, cluster_std);
        }
        out.views.views.push_back(ViewMatrix{std::move(data), static_cast<int>(l) + 1});
        out.view_transforms.push_back(Matrix::Identity(dim, dim));
    }

    out.labels.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out.labels[static_cast<std::size_t>(i)] = i / points_per_cluster;

    out.latent.resize(m, static_cast<Index>(n_clusters_per_view.size()));
    out.latent_names.clear();
    for (std::size_t l = 0; l < n_clusters_per_view.size(); ++l) {
        out.latent_names.push_back("cluster_view_" + std::to_string(l + 1));
        const int per_cluster = m / n_clusters_per_view[l];
        for (int i = 0; i < m; ++i) out.latent(i, static_cast<Index>(l)) = i / per_cluster;
    }
    return out;
}

LabeledViewSet gen_noisy_swiss_rolls(std::uint64_t seed, int m, double noise_var, int n_views) {
    require(m >= 2, "swiss rolls: need at least 2 samples");
    require(n_views >= 2, "swiss rolls: need at least 2 views");
    require(noise_var >= 0.0, "swiss rolls: noise variance must be nonnegative");

    const Vector s = linspace(1.0, 3.0, m);
    auto h_gen = rng::stream(seed, "swiss-height");
    Vector h(m);
    for (int i = 0; i < m; ++i) h[i] = h_gen.uniform(0.0, 100.0);

    Matrix clean(m, 3);
    for (int i = 0; i < m; ++i) {
        const double theta = 1.5 * kPi * s[i];
        clean(i, 0) = 6.0 * theta * std::cos(theta);
        clean(i, 1) = h[i];
        clean(i, 2) = 6.0 * theta * std::sin(theta);
    }

    LabeledViewSet out;
    const double noise_std = std::sqrt(noise_var);
    for (int l = 0; l < n_views; ++l) {
        const Matrix transform =
            l == 0 ? Matrix::Identity(3, 3)
                   : random_orthonormal(seed, 3, static_cast<std::uint64_t>(l));
        Matrix data = clean * transform.transpose();
        auto noise_gen = rng::stream(seed, "swiss-noise", static_cast<std::uint64_t>(l));
        for (int i = 0; i < m; ++i)
            for (int d = 0; d < 3; ++d) data(i, d) += noise_gen.normal(0.0, noise_std);
        out.views.views.push_back(ViewMatrix{std::move(data), l + 1});
        out.view_transforms.push_back(transform);
    }

    out.labels.assign(static_cast<std::size_t>(m), 0);
    out.latent.resize(m, 3);
    for (int i = 0; i < m; ++i) {
        out.latent(i, 0) = s[i];
        out.latent(i, 1) = 1.5 * kPi * s[i];
        out.latent(i, 2) = h[i];
    }
    out.latent_names = {"s", "theta", "h"};
    return out;
}

LabeledViewSet gen_coupled_circles(std::uint64_t seed, int m, double noise_var) {
    require(m >= 4 && m % 2 == 0, "coupled circles: sample count must be even and >= 4");
    require(noise_var >= 0.0, "coupled circles: noise variance must be nonnegative");

    const Vector theta = linspace(0.0, 4.0 * kPi, m);
    const int half = m / 2;
    auto noise_gen = rng::stream(seed, "circle-noise");

    Matrix x(m, 2), y(m, 2);
    LabeledViewSet out;
    out.labels.resize(static_cast<std::size_t>(m));
    out.latent.resize(m, 4);
    out.latent_names = {"theta", "radius", "z1", "z2"};

    const double noise_std = std::sqrt(noise_var);
    for (int i = 0; i < m; ++i) {
        const double r = i < half ? 2.0 : 4.0;
        const double z1 = r * std::cos(theta[i]);
        const double z2 = r * std::sin(theta[i]);
        double n[7];
        for (int k = 1; k <= 6; ++k) n[k] = noise_gen.normal(0.0, noise_std);

        // View I: the first coordinate shifts by +1 on the upper half-plane.
        x(i, 0) = z2 >= 0.0 ? z1 + 1.0 + n[2] : z1 + n[3];
        x(i, 1) = z2 + n[1];
        // View II: the second coordinate shifts by +1 on the right half-plane.
        y(i, 0) = z1 + n[4];
        y(i, 1) = z1 >= 0.0 ? z2 + 1.0 + n[6] : z2 + n[6];

        out.labels[static_cast<std::size_t>(i)] = i < half ? 0 : 1;
        out.latent(i, 0) = theta[i];
        out.latent(i, 1) = r;
        out.latent(i, 2) = z1;
        out.latent(i, 3) = z2;
    }

    out.views.views.push_back(ViewMatrix{std::move(x), 1});
    out.views.views.push_back(ViewMatrix{std::move(y), 2});
    out.view_transforms = {Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
    return out;
}

namespace {

LabeledViewSet gen_helix(std::uint64_t /*seed*/, int m, bool variant_a) {
    require(m >= 2, "helix: need at least 2 samples");
    const Vector a = linspace(0.0, 2.0 * kPi, m);
    Matrix x(m, 3), y(m, 3);

    LabeledViewSet out;
    out.latent.resize(m, 2);
    out.latent_names = {"a", "b"};
    for (int i = 0; i < m; ++i) {
        const double ai = a[i];
        const double bi = std::fmod(ai + 0.5 * kPi, 2.0 * kPi);
        if (variant_a) {
            x(i, 0) = 4.0 * std::cos(0.9 * ai) + 0.3 * std::cos(20.0 * ai);
            x(i, 1) = 4.0 * std::sin(0.9 * ai) + 0.3 * std::sin(20.0 * ai);
            x(i, 2) = 0.1 * (6.3 * ai * ai - ai * ai * ai);
            y(i, 0) = 4.0 * std::cos(0.9 * bi) + 0.3 * std::cos(20.0 * bi);
            y(i, 1) = 4.0 * std::sin(0.9 * bi) + 0.3 * std::sin(20.0 * bi);
            y(i, 2) = 0.1 * (6.3 * bi - bi * bi);
        } else {
            x(i, 0) = 4.0 * std::cos(5.0 * ai);
            x(i, 1) = 4.0 * std::sin(5.0 * ai);
            x(i, 2) = 4.0 * ai;
            y(i, 0) = 4.0 * std::cos(5.0 * bi);
            y(i, 1) = 4.0 * std::sin(5.0 * bi);
            y(i, 2) = 4.0 * bi;
        }
        out.latent(i, 0) = ai;
        out.latent(i, 1) = bi;
    }

    out.views.views.push_back(ViewMatrix{std::move(x), 1});
    out.views.views.push_back(ViewMatrix{std::move(y), 2});
    out.view_transforms = {Matrix::Identity(3, 3), Matrix::Identity(3, 3)};
    out.labels.assign(static_cast<std::size_t>(m), 0);
    return out;
}

} // namespace

LabeledViewSet gen_helix_a(std::uint64_t seed, int m) { return gen_helix(seed, m, true); }

LabeledViewSet gen_helix_b(std::uint64_t seed, int m) { return gen_helix(seed, m, false); }

} // namespace mvdm
