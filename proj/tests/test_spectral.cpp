#include "mvdm/kernels.hpp"
#include "mvdm/operators.hpp"
#include "mvdm/rng.hpp"
#include "mvdm/spectral.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

using namespace mvdm;

namespace {

ViewMatrix random_view(std::uint64_t seed, Index m, Index n) {
    auto gen = rng::stream(seed, "test-view");
    Matrix data(m, n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) data(i, j) = gen.normal();
    return ViewMatrix{std::move(data), 1};
}

std::vector<KernelMatrix> random_kernels(std::uint64_t seed, int n_views, Index m) {
    std::vector<KernelMatrix> kernels;
    for (int l = 0; l < n_views; ++l) {
        ViewMatrix v = random_view(seed + static_cast<std::uint64_t>(l), m, 3);
        v.view_id = l + 1;
        kernels.push_back(gaussian_kernel(v, 0.8 + 0.2 * l));
    }
    return kernels;
}

} // namespace

TEST_CASE("decompose: permutation operator") {
    Matrix k(1, 1);
    k << 0.5;
    const MultiViewOperator op = assemble_multiview({custom_kernel(k), custom_kernel(k)});
    const SpectralModel model = decompose(op);
    REQUIRE(model.pair_count() == 2);
    CHECK(model.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(model.trivial_flags[0]);
    CHECK(model.trivial_flags[1]);
}

TEST_CASE("decompose invariants on random operators") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        for (int n_views : {2, 3}) {
            const MultiViewOperator op = assemble_multiview(random_kernels(seed, n_views, 10));
            const SpectralModel model = decompose(op);

            // Bounded real spectrum, leading eigenvalue 1.
            CHECK(model.eigenvalues.cwiseAbs().maxCoeff() <= 1.0 + 1e-10);
            CHECK(model.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
            // Constant leading right eigenvector.
            const Vector psi0 = model.psi.col(0);
            CHECK((psi0.array() - psi0.mean()).abs().maxCoeff() < 1e-9 * psi0.cwiseAbs().maxCoeff());
            // Biorthogonality.
            const Matrix gram = model.psi.transpose() * model.phi;
            CHECK((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-8);
            // Residuals.
            const Matrix pv = op.phat * model.psi;
            for (int c = 0; c < model.pair_count(); ++c)
                CHECK((pv.col(c) - model.eigenvalues[c] * model.psi.col(c)).cwiseAbs().maxCoeff() <
                      1e-8);
            // Magnitude-sorted.
            for (int c = 1; c < model.pair_count(); ++c)
                CHECK(std::abs(model.eigenvalues[c]) <=
                      std::abs(model.eigenvalues[c - 1]) + 1e-12);
        }
    }
}

TEST_CASE("two-view spectrum is symmetric about zero") {
    const MultiViewOperator op = assemble_multiview(random_kernels(5, 2, 12));
    const SpectralModel model = decompose(op);
    const int r = model.pair_count();
    Vector algebraic = model.eigenvalues;
    std::sort(algebraic.data(), algebraic.data() + r, std::greater<double>());
    for (int c = 0; c < r; ++c)
        CHECK(algebraic[c] == doctest::Approx(-algebraic[r - 1 - c]).epsilon(1e-8));
}

TEST_CASE("svd route: scalar case reproduces the closed form") {
    Matrix kx(1, 1), ky(1, 1);
    kx << 1.0;
    ky << 1.0;
    const SpectralModel model = decompose_svd_route(custom_kernel(kx), custom_kernel(ky));
    REQUIRE(model.pair_count() == 2);
    CHECK(model.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(model.eigenvalues[1] == doctest::Approx(-1.0));
    // Pi = (1/sqrt 2)[[1, 1], [1, -1]] up to the sign convention; psi folds in
    // the unit degrees.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(model.psi(0, 0)) == doctest::Approx(inv_sqrt2));
    CHECK(std::abs(model.psi(1, 0)) == doctest::Approx(inv_sqrt2));
    CHECK(model.psi(0, 0) * model.psi(1, 0) > 0.0);
    CHECK(model.psi(0, 1) * model.psi(1, 1) < 0.0);
}

TEST_CASE("svd route: raw cross-kernel SVD reconstructs K-hat") {
    // The assembled eigen system of the unnormalized block kernel, checked
    // directly against the raw SVD of Kz = K1 K2.
    const std::vector<KernelMatrix> ks = random_kernels(7, 2, 5);
    const Matrix kz = ks[0].values * ks[1].values;
    Eigen::JacobiSVD<Matrix> svd(kz, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Index m = 5;
    Matrix pi(2 * m, 2 * m);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    pi.topLeftCorner(m, m) = inv_sqrt2 * svd.matrixU();
    pi.topRightCorner(m, m) = inv_sqrt2 * svd.matrixU();
    pi.bottomLeftCorner(m, m) = inv_sqrt2 * svd.matrixV();
    pi.bottomRightCorner(m, m) = -inv_sqrt2 * svd.matrixV();
    Vector lambda(2 * m);
    lambda.head(m) = svd.singularValues();
    lambda.tail(m) = -svd.singularValues();

    CHECK((pi * pi.transpose() - Matrix::Identity(2 * m, 2 * m)).cwiseAbs().maxCoeff() < 1e-10);
    Matrix khat = Matrix::Zero(2 * m, 2 * m);
    khat.topRightCorner(m, m) = kz;
    khat.bottomLeftCorner(m, m) = kz.transpose();
    CHECK((pi * lambda.asDiagonal() * pi.transpose() - khat).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("svd route: orthonormal Pi and agreement with decompose") {
    const std::vector<KernelMatrix> ks = random_kernels(11, 2, 6);
    const SpectralModel svd_model = decompose_svd_route(ks[0], ks[1]);
    const SpectralModel eig_model = decompose(assemble_multiview(ks));

    // Pi orthonormality surfaces as psi^T D psi = I.
    const Matrix gram =
        svd_model.psi.transpose() * svd_model.degrees.asDiagonal() * svd_model.psi;
    CHECK((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-10);

    REQUIRE(svd_model.pair_count() == eig_model.pair_count());
    for (int c = 0; c < svd_model.pair_count(); ++c)
        CHECK(svd_model.eigenvalues[c] == doctest::Approx(eig_model.eigenvalues[c]).epsilon(1e-8));

    // Eigenvectors match up to sign within non-degenerate pairs.
    for (int c = 0; c < svd_model.pair_count(); ++c) {
        const bool degenerate =
            (c > 0 && std::abs(std::abs(svd_model.eigenvalues[c]) -
                               std::abs(svd_model.eigenvalues[c - 1])) < 1e-7) ||
            (c + 1 < svd_model.pair_count() &&
             std::abs(std::abs(svd_model.eigenvalues[c]) -
                      std::abs(svd_model.eigenvalues[c + 1])) < 1e-7);
        if (degenerate || std::abs(svd_model.eigenvalues[c]) < 1e-7) continue;
        const Vector a = svd_model.psi.col(c);
        const Vector b = eig_model.psi.col(c);
        const double sign = a.dot(b) >= 0.0 ? 1.0 : -1.0;
        CHECK((a - sign * b).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("svd route input validation") {
    const std::vector<KernelMatrix> ks = random_kernels(13, 2, 4);
    const KernelMatrix small = random_kernels(13, 1, 3).front();
    CHECK_THROWS_AS(decompose_svd_route(ks[0], small), invalid_input);
}

TEST_CASE("deterministic output across repeated runs") {
    const std::vector<KernelMatrix> ks = random_kernels(17, 2, 8);
    const SpectralModel a = decompose(assemble_multiview(ks));
    const SpectralModel b = decompose(assemble_multiview(ks));
    CHECK((a.psi - b.psi).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
    // Sign convention: the largest-magnitude entry of each pi column is
    // positive; spot check through phi (same signs).
    for (int c = 0; c < a.pair_count(); ++c) {
        Index arg = 0;
        (a.degrees.cwiseSqrt().asDiagonal() * a.psi.col(c)).cwiseAbs().maxCoeff(&arg);
        CHECK((a.degrees.cwiseSqrt().asDiagonal() * a.psi.col(c))(arg) > 0.0);
    }
}

TEST_CASE("coupled mapping objective") {
    const std::vector<KernelMatrix> ks = random_kernels(19, 2, 7);
    const Index m = 7;

    SUBCASE("constant rho reaches zero") {
        const Vector rho = Vector::Constant(2 * m, 3.7);
        CHECK(coupled_mapping_objective(rho, ks[0], ks[1]) == doctest::Approx(0.0));
    }
    SUBCASE("scaling is quadratic") {
        auto gen = rng::stream(23, "rho");
        Vector rho(2 * m);
        for (Index i = 0; i < 2 * m; ++i) rho[i] = gen.normal();
        const double base = coupled_mapping_objective(rho, ks[0], ks[1]);
        const double scaled = coupled_mapping_objective(3.0 * rho, ks[0], ks[1]);
        CHECK(scaled == doctest::Approx(9.0 * base).epsilon(1e-12));
    }
    SUBCASE("objective equals the quadratic form 2 rho (D - K) rho") {
        const MultiViewOperator op = assemble_multiview(ks);
        auto gen = rng::stream(29, "rho2");
        Vector rho(2 * m);
        for (Index i = 0; i < 2 * m; ++i) rho[i] = gen.normal();
        const double direct = coupled_mapping_objective(rho, ks[0], ks[1]);
        const double quad =
            2.0 * (rho.dot(op.degrees.cwiseProduct(rho)) - rho.dot(op.khat * rho));
        CHECK(direct == doctest::Approx(quad).epsilon(1e-10));
    }
    SUBCASE("psi_1 beats 100 random constrained competitors") {
        const MultiViewOperator op = assemble_multiview(ks);
        const SpectralModel model = decompose(op);
        const Vector d = op.degrees;
        const Vector ones = Vector::Ones(2 * m);

        const std::vector<int> usable = model.nontrivial_indices();
        REQUIRE(!usable.empty());
        const Vector psi1 = model.psi.col(usable.front());
        const double best = coupled_mapping_objective(psi1, ks[0], ks[1]);

        auto gen = rng::stream(31, "competitors");
        for (int trial = 0; trial < 100; ++trial) {
            Vector u(2 * m);
            for (Index i = 0; i < 2 * m; ++i) u[i] = gen.normal();
            // Enforce u D 1 = 0 then u D u = 1.
            u -= (u.dot(d.cwiseProduct(ones)) / ones.dot(d.cwiseProduct(ones))) * ones;
            u /= std::sqrt(u.dot(d.cwiseProduct(u)));
            CHECK(best <= coupled_mapping_objective(u, ks[0], ks[1]) + 1e-9);
        }
    }
}

TEST_CASE("truncated decomposition agrees with the full one") {
    const std::vector<KernelMatrix> ks = random_kernels(37, 2, 30);

    SUBCASE("multi-view block operator") {
        const MultiViewOperator op = assemble_multiview(ks);
        const SpectralModel full = decompose(op);
        const SpectralModel top = decompose_truncated(op, 6, 600, 1e-12);
        REQUIRE(top.pair_count() == 6);
        for (int c = 0; c < 6; ++c)
            CHECK(top.eigenvalues[c] == doctest::Approx(full.eigenvalues[c]).epsilon(1e-8));
    }
    SUBCASE("svd route truncation") {
        const SpectralModel full = decompose_svd_route(ks[0], ks[1]);
        const SpectralModel top = decompose_svd_truncated(ks[0], ks[1], 3, 600, 1e-12);
        REQUIRE(top.pair_count() == 6);
        // Truncated carries both branches of the kept triplets.
        Vector full_mag = full.eigenvalues.cwiseAbs().head(6);
        Vector top_mag = top.eigenvalues.cwiseAbs();
        std::sort(full_mag.data(), full_mag.data() + 6, std::greater<double>());
        std::sort(top_mag.data(), top_mag.data() + 6, std::greater<double>());
        CHECK((full_mag - top_mag).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("single-view operator") {
        const StochasticOperator op = single_view_operator(ks[0]);
        const SpectralModel full = decompose(op);
        const SpectralModel top = decompose_truncated(op, 4, 600, 1e-12);
        for (int c = 0; c < 4; ++c)
            CHECK(top.eigenvalues[c] == doctest::Approx(full.eigenvalues[c]).epsilon(1e-8));
    }
}

TEST_CASE("decay report") {
    SUBCASE("identity kernels saturate the inequality") {
        const Matrix eye = Matrix::Identity(6, 6);
        const DecayReport rep =
            decay_report(custom_kernel(eye), custom_kernel(eye), 0.5, {1, 2});
        CHECK(rep.product_inequality_ok);
        CHECK(rep.tail_bound_ok);
        // All eigenvalues are exactly 1, so every trailing product is 1.
        CHECK(rep.product_eigenvalues.minCoeff() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rep.hadamard_eigenvalues.minCoeff() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("random Gaussian pair satisfies both inequalities") {
        const std::vector<KernelMatrix> ks = random_kernels(41, 2, 10);
        const DecayReport rep = decay_report(ks[0], ks[1], 0.1);
        CHECK(rep.product_inequality_ok);
        CHECK(rep.tail_bound_ok);
        CHECK(rep.r_delta >= 1);
        REQUIRE(rep.method_names.size() == 5);
        // Power ranks non-increasing over the t grid.
        for (std::size_t i = 1; i < rep.power_numerical_rank.size(); ++i)
            CHECK(rep.power_numerical_rank[i] <= rep.power_numerical_rank[i - 1]);
    }
    SUBCASE("spectrum of P-hat^t equals lambda^t (matrix-power oracle)") {
        const std::vector<KernelMatrix> ks = random_kernels(43, 2, 8);
        const MultiViewOperator op = assemble_multiview(ks);
        const SpectralModel model = decompose(op);
        for (int t : {2, 4}) {
            Matrix power = op.phat;
            for (int s = 1; s < t; ++s) power = (power * op.phat).eval();
            // Similar symmetric form of the power for clean eigenvalues.
            const Vector dsq = op.degrees.cwiseSqrt();
            const Matrix sym = dsq.asDiagonal() * power * dsq.cwiseInverse().asDiagonal();
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sym + sym.transpose()));
            Vector expect = model.eigenvalues;
            for (Index i = 0; i < expect.size(); ++i) expect[i] = std::pow(expect[i], t);
            Vector got = es.eigenvalues();
            std::sort(expect.data(), expect.data() + expect.size());
            std::sort(got.data(), got.data() + got.size());
            CHECK((expect - got).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
    SUBCASE("non-PSD input is rejected in inequality mode") {
        Matrix bad = -0.5 * Matrix::Identity(4, 4);
        bad.array() += 0.6; // symmetric, nonnegative entries, but indefinite
        const KernelMatrix k = custom_kernel(bad);
        const std::vector<KernelMatrix> ks = random_kernels(47, 1, 4);
        CHECK_THROWS_AS(decay_report(k, ks[0], 0.1), numeric_error);
    }
}
