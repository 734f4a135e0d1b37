#include "mvdm/operators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace mvdm {

namespace {

void check_kernel_family(const std::vector<KernelMatrix>& kernels, const char* who,
                         std::size_t min_count) {
    require(kernels.size() >= min_count,
            std::string(who) + ": needs at least " + std::to_string(min_count) + " kernels, got " +
                std::to_string(kernels.size()));
    const Index m = kernels.front().size();
    for (std::size_t l = 0; l < kernels.size(); ++l) {
        require(kernels[l].values.rows() == kernels[l].values.cols(),
                std::string(who) + ": kernel " + std::to_string(l + 1) + " is not square");
        require(kernels[l].size() == m,
                std::string(who) + ": kernel " + std::to_string(l + 1) + " has size " +
                    std::to_string(kernels[l].size()) + ", expected " + std::to_string(m));
    }
}

// Degrees via an explicit ones-matvec so that any later matvec against a
// blockwise-constant vector reproduces the same per-row summation order
// (this is what makes the L = 2 parity identity exact in floating point).
Vector row_degrees(const Matrix& kernel) {
    return kernel * Vector::Ones(kernel.cols());
}

Matrix row_normalize(const Matrix& kernel, const Vector& degrees, const char* who) {
    for (Index i = 0; i < degrees.size(); ++i)
        require_numeric(degrees[i] > 0.0, std::string(who) + ": zero row sum at sample index " +
                                              std::to_string(i));
    return degrees.cwiseInverse().asDiagonal() * kernel;
}

} // namespace

MultiViewOperator assemble_multiview(const std::vector<KernelMatrix>& kernels) {
    check_kernel_family(kernels, "assemble_multiview", 2);
    const int n_views = static_cast<int>(kernels.size());
    const Index m = kernels.front().size();
    const Index n = static_cast<Index>(n_views) * m;

    MultiViewOperator op;
    op.n_views = n_views;
    op.points_per_view = m;
    op.khat = Matrix::Zero(n, n);
    for (int l = 0; l < n_views; ++l) {
        for (int v = l + 1; v < n_views; ++v) {
            const Matrix block = kernels[static_cast<std::size_t>(l)].values *
                                 kernels[static_cast<std::size_t>(v)].values;
            op.khat.block(static_cast<Index>(l) * m, static_cast<Index>(v) * m, m, m) = block;
            // (K^l K^v)^T = K^v K^l for symmetric factors; writing the
            // transpose keeps K-hat exactly symmetric entrywise.
            op.khat.block(static_cast<Index>(v) * m, static_cast<Index>(l) * m, m, m) =
                block.transpose();
        }
    }

    op.degrees = row_degrees(op.khat);
    for (Index i = 0; i < n; ++i) {
        if (op.degrees[i] > 0.0) continue;
        const Index view = i / m + 1;
        const Index sample = i % m;
        throw numeric_error("assemble_multiview: sample " + std::to_string(sample) + " of view " +
                            std::to_string(view) +
                            " is isolated across all views (zero multi-view degree)");
    }
    op.phat = op.degrees.cwiseInverse().asDiagonal() * op.khat;
    return op;
}

double transition_probability(const MultiViewOperator& op, int t,
                              int view_from, Index i, int view_to, Index j) {
    require(t >= 1, "transition_probability: t must be >= 1 (the identity is not a diffusion step)");
    require(view_from >= 1 && view_from <= op.n_views && view_to >= 1 && view_to <= op.n_views,
            "transition_probability: view index out of range");
    require(i >= 0 && i < op.points_per_view && j >= 0 && j < op.points_per_view,
            "transition_probability: sample index out of range");
    Matrix power = op.phat;
    for (int s = 1; s < t; ++s) power = (power * op.phat).eval();
    return power(op.flat_index(view_from, i), op.flat_index(view_to, j));
}

StochasticOperator kernel_product(const std::vector<KernelMatrix>& kernels) {
    check_kernel_family(kernels, "kernel_product", 1);
    Matrix k = kernels.front().values;
    for (std::size_t l = 1; l < kernels.size(); ++l)
        k = k.cwiseProduct(kernels[l].values).eval();
    Vector d = row_degrees(k);
    Matrix p = row_normalize(k, d, "kernel_product");
    return StochasticOperator{std::move(p), std::move(k), std::move(d), Provenance::kernel_product};
}

StochasticOperator kernel_sum(const std::vector<KernelMatrix>& kernels) {
    check_kernel_family(kernels, "kernel_sum", 1);
    Matrix k = kernels.front().values;
    for (std::size_t l = 1; l < kernels.size(); ++l) k += kernels[l].values;
    Vector d = row_degrees(k);
    Matrix p = row_normalize(k, d, "kernel_sum");
    return StochasticOperator{std::move(p), std::move(k), std::move(d), Provenance::kernel_sum};
}

StochasticOperator single_view_operator(const KernelMatrix& kernel) {
    Matrix k = kernel.values;
    Vector d = row_degrees(k);
    Matrix p = row_normalize(k, d, "single_view_operator");
    return StochasticOperator{std::move(p), std::move(k), std::move(d), Provenance::single_view};
}

MultiViewOperator generalized_multiview_operator(const KernelMatrix& k1, const KernelMatrix& k2,
                                                 double alpha) {
    require(k1.size() == k2.size(), "generalized_multiview: kernel sizes differ");
    require(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0,
            "generalized_multiview: alpha must lie in [0, 1], got " + std::to_string(alpha));
    const Index m = k1.size();

    MultiViewOperator op;
    op.n_views = 2;
    op.points_per_view = m;
    op.khat.resize(2 * m, 2 * m);
    const Matrix cross = k1.values * k2.values;
    op.khat.topLeftCorner(m, m) = (1.0 - alpha) * (k1.values * k1.values);
    op.khat.bottomRightCorner(m, m) = (1.0 - alpha) * (k2.values * k2.values);
    op.khat.topRightCorner(m, m) = alpha * cross;
    op.khat.bottomLeftCorner(m, m) = alpha * cross.transpose();

    op.degrees = row_degrees(op.khat);
    for (Index i = 0; i < op.degrees.size(); ++i)
        require_numeric(op.degrees[i] > 0.0,
                        "generalized_multiview: zero degree at flat index " + std::to_string(i));
    op.phat = op.degrees.cwiseInverse().asDiagonal() * op.khat;
    return op;
}

StochasticOperator generalized_multiview(const KernelMatrix& k1, const KernelMatrix& k2,
                                         double alpha) {
    MultiViewOperator op = generalized_multiview_operator(k1, k2, alpha);
    return StochasticOperator{std::move(op.phat), std::move(op.khat), std::move(op.degrees),
                              Provenance::generalized_alpha};
}

DeSaResult desa_operator(const KernelMatrix& k1, const KernelMatrix& k2, int n_clusters) {
    require(k1.size() == k2.size(), "desa_operator: kernel sizes differ");
    const Index m = k1.size();
    require(n_clusters >= 1 && n_clusters <= 2 * m,
            "desa_operator: cluster count out of range");

    const Matrix w = k1.values * k2.values;

    DeSaResult res;
    res.degrees.resize(2 * m);
    res.degrees.head(m) = w.rowwise().sum();
    // W's column sums normalize the second block, so A-bar's degree vector
    // equals A's row sums.
    res.degrees.tail(m) = w.colwise().sum().transpose();
    for (Index i = 0; i < 2 * m; ++i)
        require_numeric(res.degrees[i] > 0.0,
                        "desa_operator: zero degree at flat index " + std::to_string(i));

    const Vector dinv_sqrt = res.degrees.cwiseSqrt().cwiseInverse();
    res.a_bar = Matrix::Zero(2 * m, 2 * m);
    const Matrix w_bar = dinv_sqrt.head(m).asDiagonal() * w * dinv_sqrt.tail(m).asDiagonal();
    res.a_bar.topRightCorner(m, m) = w_bar;
    res.a_bar.bottomLeftCorner(m, m) = w_bar.transpose();

    Eigen::SelfAdjointEigenSolver<Matrix> es(res.a_bar);
    require_numeric(es.info() == Eigen::Success, "desa_operator: eigensolver failed to converge");

    // Eigen returns ascending order; flip to algebraic descending.
    res.eigenvalues = es.eigenvalues().reverse();
    Matrix vectors = es.eigenvectors().rowwise().reverse();

    res.clustering_map.resize(2 * m, n_clusters);
    for (Index i = 0; i < 2 * m; ++i) {
        double s = 0.0;
        for (int c = 0; c < n_clusters; ++c) {
            const double phi2 = vectors(i, c) * vectors(i, c);
            res.clustering_map(i, c) = phi2;
            s += phi2;
        }
        require_numeric(s > 0.0, "desa_operator: normalizer s[" + std::to_string(i) +
                                     "] is zero; increase the cluster count");
        res.clustering_map.row(i) /= s;
    }
    return res;
}

KccaResult kcca(const KernelMatrix& k1, const KernelMatrix& k2, double gamma, int n_components) {
    require(k1.size() == k2.size(), "kcca: kernel sizes differ");
    require(std::isfinite(gamma) && gamma > 0.0, "kcca: gamma must be positive");
    const Index m = k1.size();
    require(n_components >= 1 && n_components <= 2 * m, "kcca: component count out of range");

    Matrix a = Matrix::Zero(2 * m, 2 * m);
    const Matrix cross = k1.values * k2.values;
    a.topRightCorner(m, m) = cross;
    a.bottomLeftCorner(m, m) = cross.transpose();

    Matrix b = Matrix::Zero(2 * m, 2 * m);
    const Matrix r1 = k1.values + gamma * Matrix::Identity(m, m);
    const Matrix r2 = k2.values + gamma * Matrix::Identity(m, m);
    b.topLeftCorner(m, m) = r1 * r1;
    b.bottomRightCorner(m, m) = r2 * r2;

    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(a, b);
    if (es.info() != Eigen::Success)
        throw numeric_error("kcca: generalized eigensolve failed; the regularized right-hand "
                            "matrix is singular despite gamma = " +
                            std::to_string(gamma));

    // Ascending eigenvalues; pick the top n_components by |rho|.
    std::vector<Index> order(static_cast<std::size_t>(2 * m));
    for (Index i = 0; i < 2 * m; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Index lhs, Index rhs) {
        const double la = std::abs(es.eigenvalues()[lhs]);
        const double lb = std::abs(es.eigenvalues()[rhs]);
        if (la != lb) return la > lb;
        return es.eigenvalues()[lhs] > es.eigenvalues()[rhs];
    });

    KccaResult res;
    res.correlations.resize(n_components);
    res.v1.resize(m, n_components);
    res.v2.resize(m, n_components);
    for (int c = 0; c < n_components; ++c) {
        const Index k = order[static_cast<std::size_t>(c)];
        res.correlations[c] = es.eigenvalues()[k];
        res.v1.col(c) = es.eigenvectors().col(k).head(m);
        res.v2.col(c) = es.eigenvectors().col(k).tail(m);
    }
    return res;
}

StochasticOperator alternating_diffusion(const StochasticOperator& p1,
                                         const StochasticOperator& p2) {
    require(p1.matrix.rows() == p1.matrix.cols() && p2.matrix.rows() == p2.matrix.cols(),
            "alternating_diffusion: operators must be square");
    require(p1.matrix.rows() == p2.matrix.rows(),
            "alternating_diffusion: operator sizes differ (" + std::to_string(p1.matrix.rows()) +
                " vs " + std::to_string(p2.matrix.rows()) + ")");
    StochasticOperator out;
    out.matrix = p1.matrix * p2.matrix;
    out.provenance = Provenance::alternating;
    return out;
}

} // namespace mvdm
