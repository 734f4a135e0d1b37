#include "mvdm/embedding.hpp"
#include "mvdm/extension.hpp"
#include "mvdm/rng.hpp"
#include "mvdm/synthetic.hpp"

#include <doctest.h>

#include <cmath>

using namespace mvdm;

namespace {

ExtensionModel swiss_extension_model(std::uint64_t seed, int m, double sigma) {
    const LabeledViewSet roll = gen_noisy_swiss_rolls(seed, m, 0.0);
    return build_extension_model(roll.views.views[0], roll.views.views[1], sigma, sigma, 1);
}

} // namespace

TEST_CASE("training points reproduce their embedding coordinates") {
    const ExtensionModel em = swiss_extension_model(3, 60, 25.0);
    const Index m = em.train_x.samples();

    for (Index i = 0; i < m; ++i) {
        const ExtendedPoint px = extend_x(em, em.train_x.data.row(i).transpose());
        const ExtendedPoint py = extend_y(em, em.train_y.data.row(i).transpose());
        CHECK(!px.low_confidence);
        CHECK(px.max_kernel_weight == doctest::Approx(1.0));
        for (std::size_t c = 0; c < px.pairs.size(); ++c) {
            const int k = px.pairs[c];
            const double expect =
                std::pow(em.model.eigenvalues[k], em.t) * em.model.psi(i, k);
            CHECK(px.coords[static_cast<Index>(c)] == doctest::Approx(expect).epsilon(1e-6));
        }
        for (std::size_t c = 0; c < py.pairs.size(); ++c) {
            const int k = py.pairs[c];
            const double expect =
                std::pow(em.model.eigenvalues[k], em.t) * em.model.psi(m + i, k);
            CHECK(py.coords[static_cast<Index>(c)] == doctest::Approx(expect).epsilon(1e-6));
        }
    }
}

TEST_CASE("extension is local: a midpoint lands near its neighbors") {
    const ExtensionModel em = swiss_extension_model(5, 120, 22.0);
    const Index m = em.train_x.samples();

    // Midpoint of two adjacent samples on the roll (consecutive arc order).
    const Index a = 40, b = 41;
    const Vector mid = 0.5 * (em.train_x.data.row(a) + em.train_x.data.row(b)).transpose();
    const ExtendedPoint ep = extend_x(em, mid);

    // Coordinates of the 5 nearest training points in input space.
    std::vector<std::pair<double, Index>> by_dist;
    for (Index i = 0; i < m; ++i)
        by_dist.emplace_back((em.train_x.data.row(i).transpose() - mid).squaredNorm(), i);
    std::sort(by_dist.begin(), by_dist.end());

    for (std::size_t c = 0; c < std::min<std::size_t>(ep.pairs.size(), 4); ++c) {
        const int k = ep.pairs[c];
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int n = 0; n < 5; ++n) {
            const Index i = by_dist[static_cast<std::size_t>(n)].second;
            const double coord = std::pow(em.model.eigenvalues[k], em.t) * em.model.psi(i, k);
            lo = std::min(lo, coord);
            hi = std::max(hi, coord);
        }
        const double spread = std::max(hi - lo, 1e-12);
        CHECK(ep.coords[static_cast<Index>(c)] >= lo - 0.1 * spread);
        CHECK(ep.coords[static_cast<Index>(c)] <= hi + 0.1 * spread);
    }
}

TEST_CASE("far points trigger the low-confidence flag") {
    const ExtensionModel em = swiss_extension_model(7, 50, 10.0);
    Vector far = Vector::Constant(3, 1e5);
    const ExtendedPoint ep = extend_x(em, far);
    CHECK(ep.max_kernel_weight < 1e-6);
    CHECK(ep.low_confidence);
}

TEST_CASE("mirrored extend_y behaves like extend_x under view swap") {
    const LabeledViewSet roll = gen_noisy_swiss_rolls(11, 40, 0.0);
    const double sigma = 25.0;
    const ExtensionModel fwd =
        build_extension_model(roll.views.views[0], roll.views.views[1], sigma, sigma, 1);
    const ExtensionModel swapped =
        build_extension_model(roll.views.views[1], roll.views.views[0], sigma, sigma, 1);

    const Vector probe = roll.views.views[1].data.row(17).transpose();
    const ExtendedPoint via_y = extend_y(fwd, probe);
    const ExtendedPoint via_x = extend_x(swapped, probe);
    REQUIRE(via_y.coords.size() == via_x.coords.size());
    // Same distances, so the coordinate magnitudes agree up to mode signs.
    for (Index c = 0; c < via_y.coords.size(); ++c)
        CHECK(std::abs(via_y.coords[c]) == doctest::Approx(std::abs(via_x.coords[c])).epsilon(1e-6));
}

TEST_CASE("extension never mutates the stored model") {
    const ExtensionModel em = swiss_extension_model(13, 30, 20.0);
    const Matrix psi_before = em.model.psi;
    const Vector values_before = em.model.eigenvalues;
    const Matrix kx_before = em.kernel_x;

    (void)extend_x(em, em.train_x.data.row(3).transpose());
    (void)extend_y(em, em.train_y.data.row(4).transpose());
    const Vector far = Vector::Constant(3, 9e4);
    (void)extend_x(em, far);

    CHECK((em.model.psi - psi_before).cwiseAbs().maxCoeff() == 0.0);
    CHECK((em.model.eigenvalues - values_before).cwiseAbs().maxCoeff() == 0.0);
    CHECK((em.kernel_x - kx_before).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("extension is continuous in the new point") {
    const ExtensionModel em = swiss_extension_model(17, 60, 24.0);
    const Vector base = em.train_x.data.row(20).transpose();
    Vector prev;
    double prev_step = 0.0;
    for (double step : {1.0, 0.1, 0.01, 0.001}) {
        Vector shifted = base;
        shifted[0] += step;
        const ExtendedPoint ep = extend_x(em, shifted);
        if (prev.size() > 0) {
            // Shrinking input steps shrink coordinate changes.
            const ExtendedPoint at_base = extend_x(em, base);
            const double d_prev = (prev - at_base.coords).norm();
            const double d_now = (ep.coords - at_base.coords).norm();
            CHECK(d_now < d_prev + 1e-12);
        }
        prev = ep.coords;
        prev_step = step;
    }
    (void)prev_step;
}

TEST_CASE("extension input validation") {
    const ExtensionModel em = swiss_extension_model(19, 30, 20.0);
    Vector wrong_dim(5);
    wrong_dim.setZero();
    CHECK_THROWS_WITH_AS(extend_x(em, wrong_dim), doctest::Contains("features"), invalid_input);
    CHECK_THROWS_AS(extend_y(em, wrong_dim), invalid_input);
    CHECK_THROWS_AS(build_extension_model(em.train_x, em.train_y, 1.0, 1.0, 0), invalid_input);
}

TEST_CASE("small-eigenvalue coordinates are omitted and reported") {
    ExtensionModel em = swiss_extension_model(23, 40, 18.0);
    em.lambda_floor = 0.5; // force omissions
    const ExtendedPoint ep = extend_x(em, em.train_x.data.row(0).transpose());
    CHECK(!ep.omitted.empty());
    for (int k : ep.omitted) CHECK(std::abs(em.model.eigenvalues[k]) < 0.5);
    for (int k : ep.pairs) CHECK(std::abs(em.model.eigenvalues[k]) >= 0.5);
}
