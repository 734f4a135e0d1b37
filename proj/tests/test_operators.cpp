#include "mvdm/kernels.hpp"
#include "mvdm/operators.hpp"
#include "mvdm/rng.hpp"
#include "mvdm/spectral.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

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

KernelMatrix scalar_kernel(double v) {
    Matrix k(1, 1);
    k << v;
    return custom_kernel(k);
}

std::vector<KernelMatrix> random_gaussian_pair(std::uint64_t seed, Index m, double s1 = 0.9,
                                               double s2 = 1.2) {
    ViewMatrix a = random_view(seed, m, 3);
    ViewMatrix b = random_view(seed + 1, m, 4);
    b.view_id = 2;
    return {gaussian_kernel(a, s1), gaussian_kernel(b, s2)};
}

} // namespace

TEST_CASE("assemble_multiview scalar blocks") {
    const MultiViewOperator op = assemble_multiview({scalar_kernel(0.5), scalar_kernel(0.4)});
    Matrix khat(2, 2);
    khat << 0.0, 0.2, 0.2, 0.0;
    CHECK((op.khat - khat).cwiseAbs().maxCoeff() < 1e-15);
    Matrix phat(2, 2);
    phat << 0.0, 1.0, 1.0, 0.0;
    CHECK((op.phat - phat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assemble_multiview all-ones three views") {
    const std::vector<KernelMatrix> ones(3, scalar_kernel(1.0));
    const MultiViewOperator op = assemble_multiview(ones);
    CHECK(op.khat.diagonal().cwiseAbs().maxCoeff() == 0.0);
    for (Index i = 0; i < 3; ++i) {
        for (Index j = 0; j < 3; ++j) {
            if (i == j) continue;
            CHECK(op.khat(i, j) == 1.0);
            CHECK(op.phat(i, j) == doctest::Approx(0.5));
        }
    }
}

TEST_CASE("assemble_multiview matches the triple-loop product oracle") {
    const std::vector<KernelMatrix> kernels = random_gaussian_pair(7, 3);
    const MultiViewOperator op = assemble_multiview(kernels);
    const Index m = 3;
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
            double prod = 0.0;
            for (Index s = 0; s < m; ++s)
                prod += kernels[0].values(i, s) * kernels[1].values(s, j);
            CHECK(op.khat(i, m + j) == doctest::Approx(prod).epsilon(1e-12));
            CHECK(op.khat(m + j, i) == doctest::Approx(prod).epsilon(1e-12));
        }
    }
}

TEST_CASE("assemble_multiview invariants on random kernels") {
    const std::vector<KernelMatrix> kernels = random_gaussian_pair(19, 12);
    const MultiViewOperator op = assemble_multiview(kernels);
    CHECK((op.khat - op.khat.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((op.khat.array() >= 0.0).all());
    const Vector row_sums = op.phat.rowwise().sum();
    CHECK((row_sums.array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(op.degrees.minCoeff() > 0.0);
}

TEST_CASE("bipartite parity: K-hat v = -degrees for the two-view sign vector") {
    const std::vector<KernelMatrix> kernels = random_gaussian_pair(23, 9);
    const MultiViewOperator op = assemble_multiview(kernels);
    Vector v(18);
    v.head(9).setOnes();
    v.tail(9).setConstant(-1.0);
    // Same matvec kernel as the degree computation, so the identity is exact:
    // block-1 rows see only the -1 block, block-2 rows only the +1 block.
    const Vector khat_v = op.khat * v;
    CHECK((khat_v + op.degrees.cwiseProduct(v)).cwiseAbs().maxCoeff() == 0.0);
    const Vector phat_v = khat_v.cwiseQuotient(op.degrees);
    CHECK((phat_v + v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assemble_multiview rejections") {
    CHECK_THROWS_AS(assemble_multiview({scalar_kernel(1.0)}), invalid_input);
    // A sample isolated in every view: zero row in both kernels.
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = 1.0; // sample 1 has no affinity anywhere
    const KernelMatrix k = custom_kernel(z);
    CHECK_THROWS_WITH_AS(assemble_multiview({k, k}), doctest::Contains("sample 1"),
                         numeric_error);
}

TEST_CASE("transition probability") {
    const std::vector<KernelMatrix> kernels = random_gaussian_pair(31, 6);
    const MultiViewOperator op = assemble_multiview(kernels);

    SUBCASE("same view at t = 1 is structurally zero") {
        for (Index i = 0; i < 6; ++i)
            for (Index j = 0; j < 6; ++j) {
                CHECK(transition_probability(op, 1, 1, i, 1, j) == 0.0);
                CHECK(transition_probability(op, 1, 2, i, 2, j) == 0.0);
            }
    }
    SUBCASE("t = 0 is rejected") {
        CHECK_THROWS_AS(transition_probability(op, 0, 1, 0, 1, 0), invalid_input);
    }
    SUBCASE("rows of P-hat^t stay stochastic") {
        Matrix p2 = op.phat * op.phat;
        CHECK((p2.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("permutation operator squares to identity transitions") {
    const MultiViewOperator op = assemble_multiview({scalar_kernel(0.5), scalar_kernel(0.4)});
    CHECK(transition_probability(op, 2, 1, 0, 1, 0) == doctest::Approx(1.0));
    CHECK(transition_probability(op, 2, 1, 0, 2, 0) == doctest::Approx(0.0));
}

TEST_CASE("smoothing: a common neighbor connects kernel-zero pairs") {
    // Three 1-D points; sigma small enough that the far pair underflows to
    // an exact kernel zero while the product of the two chain links stays
    // positive (exp(-1000) = 0, exp(-250)^2 = exp(-500) > 0).
    ViewMatrix view{Matrix(3, 1), 1};
    view.data << 0.0, 1.0, 2.0;
    const double sigma = std::sqrt(0.002);
    const KernelMatrix k = gaussian_kernel(view, sigma);
    REQUIRE(k.values(0, 2) == 0.0);
    REQUIRE(k.values(0, 1) > 0.0);
    REQUIRE(k.values(1, 2) > 0.0);

    const MultiViewOperator op = assemble_multiview({k, k});
    const double p = transition_probability(op, 1, 1, 0, 2, 2);
    // Hand evaluation of sum_s K1_{0,s} K2_{s,2} / degree.
    double numer = 0.0;
    for (Index s = 0; s < 3; ++s) numer += k.values(0, s) * k.values(s, 2);
    CHECK(p == doctest::Approx(numer / op.degrees[0]).epsilon(1e-12));
    CHECK(p > 0.0);
}

TEST_CASE("kernel product") {
    SUBCASE("identical kernels raise entries to the L-th power") {
        const std::vector<KernelMatrix> kernels = random_gaussian_pair(37, 5);
        const std::vector<KernelMatrix> three(3, kernels[0]);
        const StochasticOperator op = kernel_product(three);
        for (Index i = 0; i < 5; ++i)
            for (Index j = 0; j < 5; ++j)
                CHECK(op.kernel(i, j) ==
                      doctest::Approx(std::pow(kernels[0].values(i, j), 3)).epsilon(1e-12));
    }
    SUBCASE("combined-scale product equals the concatenated-vector kernel") {
        // Per-view bandwidth sigma_1; the kernel-product construction runs
        // its factors at the combined scale sigma_w = sqrt(L * sigma_1^2),
        // which is what makes it coincide with the concatenated kernel.
        const double sigma1 = 1.1;
        const double sw = std::sqrt(2.0 * sigma1 * sigma1);
        ViewMatrix a = random_view(41, 8, 3);
        ViewMatrix b = random_view(42, 8, 5);
        const std::vector<KernelMatrix> ks{gaussian_kernel(a, sw), gaussian_kernel(b, sw)};
        const StochasticOperator prod = kernel_product(ks);

        Matrix concat(8, 8);
        for (Index i = 0; i < 8; ++i)
            for (Index j = 0; j < 8; ++j) {
                const double d2 = (a.data.row(i) - a.data.row(j)).squaredNorm() +
                                  (b.data.row(i) - b.data.row(j)).squaredNorm();
                concat(i, j) = std::exp(-d2 / (2.0 * sw * sw));
            }
        CHECK((prod.kernel - concat).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("matches the elementwise-loop oracle") {
        std::vector<KernelMatrix> ks = random_gaussian_pair(43, 4);
        ks.push_back(gaussian_kernel(random_view(44, 4, 2), 0.8));
        const StochasticOperator op = kernel_product(ks);
        for (Index i = 0; i < 4; ++i)
            for (Index j = 0; j < 4; ++j)
                CHECK(op.kernel(i, j) == doctest::Approx(ks[0].values(i, j) * ks[1].values(i, j) *
                                                         ks[2].values(i, j))
                                             .epsilon(1e-12));
    }
}

TEST_CASE("kernel sum") {
    SUBCASE("identical kernels reproduce the single-view operator") {
        const std::vector<KernelMatrix> kernels = random_gaussian_pair(47, 6);
        const std::vector<KernelMatrix> two(2, kernels[0]);
        const StochasticOperator sum = kernel_sum(two);
        const StochasticOperator single = single_view_operator(kernels[0]);
        CHECK((sum.matrix - single.matrix).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("degenerate single sample") {
        const StochasticOperator op = kernel_sum({scalar_kernel(1.0), scalar_kernel(1.0)});
        CHECK(op.matrix(0, 0) == 1.0);
    }
    SUBCASE("matches sum-then-normalize oracle") {
        const std::vector<KernelMatrix> ks = random_gaussian_pair(53, 7);
        const StochasticOperator op = kernel_sum(ks);
        const Matrix manual = ks[0].values + ks[1].values;
        for (Index i = 0; i < 7; ++i) {
            const double d = manual.row(i).sum();
            for (Index j = 0; j < 7; ++j)
                CHECK(op.matrix(i, j) == doctest::Approx(manual(i, j) / d).epsilon(1e-12));
        }
        CHECK((op.matrix.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("generalized multi-view kernel") {
    const std::vector<KernelMatrix> ks = random_gaussian_pair(59, 4);

    SUBCASE("alpha = 1 equals the multi-view operator") {
        const StochasticOperator gen = generalized_multiview(ks[0], ks[1], 1.0);
        const MultiViewOperator mv = assemble_multiview(ks);
        CHECK((gen.matrix - mv.phat).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("alpha = 0 keeps all mass within views") {
        const StochasticOperator gen = generalized_multiview(ks[0], ks[1], 0.0);
        CHECK(gen.matrix.topRightCorner(4, 4).cwiseAbs().maxCoeff() == 0.0);
        CHECK(gen.matrix.bottomLeftCorner(4, 4).cwiseAbs().maxCoeff() == 0.0);
        CHECK((gen.matrix.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
    SUBCASE("alpha = 0.5 matches the blockwise oracle") {
        const double alpha = 0.5;
        const StochasticOperator gen = generalized_multiview(ks[0], ks[1], alpha);
        Matrix khat(8, 8);
        khat.topLeftCorner(4, 4) = (1 - alpha) * (ks[0].values * ks[0].values);
        khat.bottomRightCorner(4, 4) = (1 - alpha) * (ks[1].values * ks[1].values);
        khat.topRightCorner(4, 4) = alpha * (ks[0].values * ks[1].values);
        khat.bottomLeftCorner(4, 4) = alpha * (ks[1].values * ks[0].values);
        for (Index i = 0; i < 8; ++i) {
            const double d = khat.row(i).sum();
            for (Index j = 0; j < 8; ++j)
                CHECK(gen.matrix(i, j) == doctest::Approx(khat(i, j) / d).epsilon(1e-12));
        }
    }
    SUBCASE("alpha outside [0,1] is rejected") {
        CHECK_THROWS_AS(generalized_multiview(ks[0], ks[1], -0.1), invalid_input);
        CHECK_THROWS_AS(generalized_multiview(ks[0], ks[1], 1.1), invalid_input);
    }
}

TEST_CASE("De Sa operator") {
    SUBCASE("scalar case") {
        const DeSaResult r = desa_operator(scalar_kernel(1.0), scalar_kernel(1.0), 1);
        Matrix expect(2, 2);
        expect << 0.0, 1.0, 1.0, 0.0;
        CHECK((r.a_bar - expect).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("symmetric and spectrum matches the multi-view operator") {
        const std::vector<KernelMatrix> ks = random_gaussian_pair(61, 8);
        const DeSaResult r = desa_operator(ks[0], ks[1], 2);
        CHECK((r.a_bar - r.a_bar.transpose()).cwiseAbs().maxCoeff() < 1e-12);

        const SpectralModel mv = decompose(assemble_multiview(ks));
        Vector desa_sorted = r.eigenvalues;
        Vector mv_sorted = mv.eigenvalues;
        std::sort(desa_sorted.data(), desa_sorted.data() + desa_sorted.size());
        std::sort(mv_sorted.data(), mv_sorted.data() + mv_sorted.size());
        CHECK((desa_sorted - mv_sorted).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("clustering map rows are normalized") {
        const std::vector<KernelMatrix> ks = random_gaussian_pair(67, 6);
        const DeSaResult r = desa_operator(ks[0], ks[1], 3);
        CHECK(r.clustering_map.rows() == 12);
        CHECK(r.clustering_map.cols() == 3);
        CHECK((r.clustering_map.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("KCCA") {
    SUBCASE("scalar kernels solve in closed form") {
        const double a = 0.8, b = 0.6, gamma = 0.1;
        const KccaResult r = kcca(scalar_kernel(a), scalar_kernel(b), gamma, 2);
        const double expect = a * b / ((a + gamma) * (b + gamma));
        CHECK(std::abs(r.correlations[0]) == doctest::Approx(expect).epsilon(1e-10));
        CHECK(std::abs(r.correlations[1]) == doctest::Approx(expect).epsilon(1e-10));
        CHECK(r.correlations[0] * r.correlations[1] < 0.0);
    }
    SUBCASE("large gamma kills the correlations") {
        const KccaResult r = kcca(scalar_kernel(0.8), scalar_kernel(0.6), 1e6, 1);
        CHECK(std::abs(r.correlations[0]) < 1e-6);
    }
    SUBCASE("matches a dense generalized eigensolver oracle") {
        const std::vector<KernelMatrix> ks = random_gaussian_pair(71, 4);
        const double gamma = 0.05;
        const KccaResult r = kcca(ks[0], ks[1], gamma, 3);

        Matrix a = Matrix::Zero(8, 8), bmat = Matrix::Zero(8, 8);
        a.topRightCorner(4, 4) = ks[0].values * ks[1].values;
        a.bottomLeftCorner(4, 4) = ks[1].values * ks[0].values;
        const Matrix r1 = ks[0].values + gamma * Matrix::Identity(4, 4);
        const Matrix r2 = ks[1].values + gamma * Matrix::Identity(4, 4);
        bmat.topLeftCorner(4, 4) = r1 * r1;
        bmat.bottomRightCorner(4, 4) = r2 * r2;
        // Reduce to a standard eigenproblem through B^{-1} A.
        Eigen::EigenSolver<Matrix> es(bmat.inverse() * a);
        std::vector<double> oracle;
        for (Index i = 0; i < 8; ++i) oracle.push_back(es.eigenvalues()[i].real());
        std::sort(oracle.begin(), oracle.end(),
                  [](double x, double y) { return std::abs(x) > std::abs(y); });
        for (int c = 0; c < 3; ++c)
            CHECK(std::abs(r.correlations[c]) ==
                  doctest::Approx(std::abs(oracle[static_cast<std::size_t>(c)])).epsilon(1e-8));
        for (int c = 0; c < 3; ++c) CHECK(std::abs(r.correlations[c]) <= 1.0 + 1e-8);
    }
}

TEST_CASE("alternating diffusion") {
    SUBCASE("product of stochastic matrices stays stochastic") {
        const std::vector<KernelMatrix> ks = random_gaussian_pair(73, 9);
        const StochasticOperator ad =
            alternating_diffusion(single_view_operator(ks[0]), single_view_operator(ks[1]));
        CHECK((ad.matrix.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
        CHECK((ad.matrix.array() >= 0.0).all());
        // Matrix-product oracle.
        const Matrix manual = single_view_operator(ks[0]).matrix * single_view_operator(ks[1]).matrix;
        CHECK((ad.matrix - manual).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("permutation factors compose") {
        Matrix swap(2, 2);
        swap << 0.0, 1.0, 1.0, 0.0;
        StochasticOperator p{swap, Matrix(), Vector(), Provenance::single_view};
        const StochasticOperator ad = alternating_diffusion(p, p);
        CHECK((ad.matrix - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("shape mismatch rejected") {
        StochasticOperator a{Matrix::Identity(2, 2), Matrix(), Vector(), Provenance::single_view};
        StochasticOperator b{Matrix::Identity(3, 3), Matrix(), Vector(), Provenance::single_view};
        CHECK_THROWS_AS(alternating_diffusion(a, b), invalid_input);
    }
}
