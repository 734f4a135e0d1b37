#include "mvdm/spectral.hpp"

#include "mvdm/operators.hpp"
#include "mvdm/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace mvdm {

namespace {

constexpr double kTieRelTol = 1e-12;
constexpr double kTrivialLambdaTol = 1e-9;
constexpr double kTrivialShapeTol = 1e-6;
constexpr double kResidualTol = 1e-8;

// |lambda| descending, with runs of near-equal magnitude reordered
// algebraic-descending. A plain epsilon comparator is not a strict weak
// order, so sort exactly first and fix up tie runs in a second pass.
std::vector<Index> magnitude_order(const Vector& values) {
    std::vector<Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        const double ma = std::abs(values[a]);
        const double mb = std::abs(values[b]);
        if (ma != mb) return ma > mb;
        return values[a] > values[b];
    });
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= order.size(); ++i) {
        const bool close =
            i < order.size() &&
            std::abs(std::abs(values[order[i]]) - std::abs(values[order[run_start]])) <=
                kTieRelTol * std::max(1e-300, std::abs(values[order[run_start]]));
        if (close) continue;
        if (i - run_start > 1)
            std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(run_start),
                             order.begin() + static_cast<std::ptrdiff_t>(i),
                             [&](Index a, Index b) { return values[a] > values[b]; });
        run_start = i;
    }
    return order;
}

void fix_signs(Matrix& pi) {
    for (Index c = 0; c < pi.cols(); ++c) {
        Index arg = 0;
        double best = -1.0;
        for (Index r = 0; r < pi.rows(); ++r) {
            const double a = std::abs(pi(r, c));
            if (a > best) {
                best = a;
                arg = r;
            }
        }
        if (pi(arg, c) < 0.0) pi.col(c) = -pi.col(c);
    }
}

bool is_constant_vector(const Vector& v) {
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale == 0.0) return false;
    const double mean = v.mean();
    return (v.array() - mean).abs().maxCoeff() <= kTrivialShapeTol * scale;
}

bool is_parity_vector(const Vector& v, Index half) {
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale == 0.0) return false;
    const double top = v.head(half).mean();
    const double bottom = v.tail(half).mean();
    return (v.head(half).array() - top).abs().maxCoeff() <= kTrivialShapeTol * scale &&
           (v.tail(half).array() - bottom).abs().maxCoeff() <= kTrivialShapeTol * scale &&
           std::abs(top + bottom) <= kTrivialShapeTol * scale;
}

} // namespace

std::vector<int> SpectralModel::nontrivial_indices() const {
    std::vector<int> idx;
    idx.reserve(trivial_flags.size());
    for (int k = 0; k < pair_count(); ++k)
        if (!trivial_flags[static_cast<std::size_t>(k)]) idx.push_back(k);
    return idx;
}

namespace detail {

SpectralModel finalize_model(Vector eigenvalues, Matrix pi, Vector degrees, int n_views,
                             Index points_per_view,
                             const std::function<Matrix(const Matrix&)>& apply_phat,
                             bool truncated, double residual_tol) {
    const std::vector<Index> order = magnitude_order(eigenvalues);
    Vector sorted_values(eigenvalues.size());
    Matrix sorted_pi(pi.rows(), pi.cols());
    for (Index c = 0; c < eigenvalues.size(); ++c) {
        sorted_values[c] = eigenvalues[order[static_cast<std::size_t>(c)]];
        sorted_pi.col(c) = pi.col(order[static_cast<std::size_t>(c)]);
    }
    fix_signs(sorted_pi);

    SpectralModel model;
    model.eigenvalues = std::move(sorted_values);
    model.degrees = std::move(degrees);
    model.n_views = n_views;
    model.points_per_view = points_per_view;
    model.truncated = truncated;

    const Vector d_inv_sqrt = model.degrees.cwiseSqrt().cwiseInverse();
    const Vector d_sqrt = model.degrees.cwiseSqrt();
    model.psi = d_inv_sqrt.asDiagonal() * sorted_pi;
    model.phi = d_sqrt.asDiagonal() * sorted_pi;

    model.trivial_flags.assign(static_cast<std::size_t>(model.pair_count()), 0);
    for (int k = 0; k < model.pair_count(); ++k) {
        const double lambda = model.eigenvalues[k];
        if (std::abs(lambda - 1.0) <= kTrivialLambdaTol && is_constant_vector(model.psi.col(k)))
            model.trivial_flags[static_cast<std::size_t>(k)] = 1;
        if (n_views == 2 && std::abs(lambda + 1.0) <= kTrivialLambdaTol &&
            is_parity_vector(model.psi.col(k), points_per_view))
            model.trivial_flags[static_cast<std::size_t>(k)] = 1;
    }

    const Matrix propagated = apply_phat(model.psi);
    double max_residual = 0.0;
    for (int k = 0; k < model.pair_count(); ++k) {
        const double r =
            (propagated.col(k) - model.eigenvalues[k] * model.psi.col(k)).cwiseAbs().maxCoeff();
        max_residual = std::max(max_residual, r);
    }
    model.max_residual = max_residual;
    model.converged = max_residual <= residual_tol;
    if (!truncated && !model.converged) {
        std::ostringstream msg;
        msg << "spectral decomposition failed to converge: max eigenpair residual "
            << max_residual << " exceeds " << residual_tol;
        throw numeric_error(msg.str());
    }
    return model;
}

TopkResult topk_symmetric(const std::function<Matrix(const Matrix&)>& apply, Index n, int k,
                          int max_iters, double tol) {
    const int buffer = std::min<Index>(n - k, std::max(4, k / 2));
    const Index b = std::min<Index>(n, k + buffer);

    Matrix q(n, b);
    auto gen = rng::stream(0x5u, "subspace-init");
    for (Index j = 0; j < b; ++j)
        for (Index i = 0; i < n; ++i) q(i, j) = gen.normal();
    q = Eigen::HouseholderQR<Matrix>(q).householderQ() * Matrix::Identity(n, b);

    Vector prev = Vector::Zero(k);
    Matrix y;
    for (int iter = 0; iter < max_iters; ++iter) {
        y = apply(q);
        Matrix t = q.transpose() * y;
        t = 0.5 * (t + t.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Matrix> small(t);
        Vector ritz = small.eigenvalues();
        std::vector<Index> order = magnitude_order(ritz);
        Vector top(k);
        for (int c = 0; c < k; ++c) top[c] = ritz[order[static_cast<std::size_t>(c)]];
        const double change = (top - prev).cwiseAbs().maxCoeff();
        prev = top;
        q = Eigen::HouseholderQR<Matrix>(y).householderQ() * Matrix::Identity(n, b);
        if (iter > 0 && change <= tol * std::max(1.0, top.cwiseAbs().maxCoeff())) break;
    }

    // Rayleigh-Ritz extraction on the converged subspace.
    y = apply(q);
    Matrix t = q.transpose() * y;
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> small(t);
    const std::vector<Index> order = magnitude_order(small.eigenvalues());

    TopkResult res;
    res.values.resize(k);
    res.vectors.resize(n, k);
    for (int c = 0; c < k; ++c) {
        const Index idx = order[static_cast<std::size_t>(c)];
        res.values[c] = small.eigenvalues()[idx];
        res.vectors.col(c) = q * small.eigenvectors().col(idx);
    }
    const Matrix check = apply(res.vectors);
    res.max_residual = 0.0;
    for (int c = 0; c < k; ++c)
        res.max_residual = std::max(
            res.max_residual,
            (check.col(c) - res.values[c] * res.vectors.col(c)).cwiseAbs().maxCoeff());
    res.converged = res.max_residual <= std::max(tol * 10.0, 1e-8);
    return res;
}

} // namespace detail

namespace {

SpectralModel decompose_kernel_backed(const Matrix& kernel, const Vector& degrees, int n_views,
                                      Index points_per_view) {
    for (Index i = 0; i < degrees.size(); ++i)
        require_numeric(degrees[i] > 0.0,
                        "decompose: zero degree at flat index " + std::to_string(i));
    const Vector d_inv_sqrt = degrees.cwiseSqrt().cwiseInverse();
    Matrix p_s = d_inv_sqrt.asDiagonal() * kernel * d_inv_sqrt.asDiagonal();
    p_s = 0.5 * (p_s + p_s.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> es(p_s);
    require_numeric(es.info() == Eigen::Success, "decompose: symmetric eigensolver failed");

    const Vector d_inv = degrees.cwiseInverse();
    auto apply_phat = [&](const Matrix& v) -> Matrix {
        return d_inv.asDiagonal() * (kernel * v);
    };
    return detail::finalize_model(es.eigenvalues(), es.eigenvectors(), degrees, n_views,
                                  points_per_view, apply_phat, false, kResidualTol);
}

} // namespace

SpectralModel decompose(const MultiViewOperator& op) {
    require(op.n_views >= 2 && op.khat.rows() == op.n_views * op.points_per_view,
            "decompose: invalid multi-view operator");
    return decompose_kernel_backed(op.khat, op.degrees, op.n_views, op.points_per_view);
}

SpectralModel decompose(const StochasticOperator& op) {
    require(op.kernel.size() > 0,
            "decompose: operator has no symmetric kernel backing (provenance " +
                std::string(to_string(op.provenance)) + ")");
    const Index n = op.kernel.rows();
    const bool two_view_block = op.provenance == Provenance::generalized_alpha;
    const int n_views = two_view_block ? 2 : 1;
    const Index ppv = two_view_block ? n / 2 : n;
    return decompose_kernel_backed(op.kernel, op.degrees, n_views, ppv);
}

namespace {

struct CrossKernelParts {
    Matrix kz;
    Vector d_rows;
    Vector d_cols;
    Matrix kbar;
};

CrossKernelParts cross_kernel(const KernelMatrix& k1, const KernelMatrix& k2) {
    require(k1.values.rows() == k1.values.cols() && k2.values.rows() == k2.values.cols(),
            "svd route: kernels must be square");
    require(k1.size() == k2.size(), "svd route: kernel sizes differ");
    CrossKernelParts parts;
    parts.kz = k1.values * k2.values;
    parts.d_rows = parts.kz.rowwise().sum();
    parts.d_cols = parts.kz.colwise().sum().transpose();
    for (Index i = 0; i < parts.kz.rows(); ++i) {
        require_numeric(parts.d_rows[i] > 0.0,
                        "svd route: zero row degree at sample " + std::to_string(i));
        require_numeric(parts.d_cols[i] > 0.0,
                        "svd route: zero column degree at sample " + std::to_string(i));
    }
    parts.kbar = parts.d_rows.cwiseSqrt().cwiseInverse().asDiagonal() * parts.kz *
                 parts.d_cols.cwiseSqrt().cwiseInverse().asDiagonal();
    return parts;
}

SpectralModel assemble_two_view_model(const CrossKernelParts& parts, const Vector& sigma,
                                      const Matrix& u_left, const Matrix& v_right, bool truncated,
                                      double residual_tol) {
    const Index m = parts.kz.rows();
    const Index k = sigma.size();
    Vector eigenvalues(2 * k);
    eigenvalues.head(k) = sigma;
    eigenvalues.tail(k) = -sigma;

    // Pi = (1/sqrt 2) [[V, V], [U, -U]] columnwise over the kept triplets.
    Matrix pi(2 * m, 2 * k);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    pi.topLeftCorner(m, k) = inv_sqrt2 * u_left;
    pi.topRightCorner(m, k) = inv_sqrt2 * u_left;
    pi.bottomLeftCorner(m, k) = inv_sqrt2 * v_right;
    pi.bottomRightCorner(m, k) = -inv_sqrt2 * v_right;

    Vector degrees(2 * m);
    degrees.head(m) = parts.d_rows;
    degrees.tail(m) = parts.d_cols;

    const Vector inv_rows = parts.d_rows.cwiseInverse();
    const Vector inv_cols = parts.d_cols.cwiseInverse();
    auto apply_phat = [&](const Matrix& v) -> Matrix {
        Matrix out(v.rows(), v.cols());
        out.topRows(m) = inv_rows.asDiagonal() * (parts.kz * v.bottomRows(m));
        out.bottomRows(m) = inv_cols.asDiagonal() * (parts.kz.transpose() * v.topRows(m));
        return out;
    };
    return detail::finalize_model(std::move(eigenvalues), std::move(pi), std::move(degrees), 2, m,
                                  apply_phat, truncated, residual_tol);
}

} // namespace

SpectralModel decompose_svd_route(const KernelMatrix& k1, const KernelMatrix& k2) {
    const CrossKernelParts parts = cross_kernel(k1, k2);
    Eigen::BDCSVD<Matrix> svd(parts.kbar, Eigen::ComputeThinU | Eigen::ComputeThinV);
    require_numeric(svd.info() == Eigen::Success, "svd route: SVD failed to converge");
    // Kz = V Sigma U^T in the source convention; Eigen's svd.matrixU() holds
    // the left singular vectors, i.e. the view-1 blocks.
    return assemble_two_view_model(parts, svd.singularValues(), svd.matrixU(), svd.matrixV(),
                                   false, kResidualTol);
}

SpectralModel decompose_svd_truncated(const KernelMatrix& k1, const KernelMatrix& k2, int k_pairs,
                                      int max_iters, double tol) {
    const CrossKernelParts parts = cross_kernel(k1, k2);
    const Index m = parts.kz.rows();
    require(k_pairs >= 1 && k_pairs <= m, "svd truncated: pair count out of range");

    // Top singular triplets through the PSD product Kbar Kbar^T.
    auto apply_gram = [&](const Matrix& v) -> Matrix {
        return parts.kbar * (parts.kbar.transpose() * v);
    };
    detail::TopkResult gram = detail::topk_symmetric(apply_gram, m, k_pairs, max_iters, tol);

    Vector sigma(k_pairs);
    Matrix u_left = gram.vectors;
    Matrix v_right(m, k_pairs);
    for (int c = 0; c < k_pairs; ++c) {
        sigma[c] = std::sqrt(std::max(0.0, gram.values[c]));
        Vector w = parts.kbar.transpose() * u_left.col(c);
        const double norm = w.norm();
        require_numeric(sigma[c] > 0.0 && norm > 0.0,
                        "svd truncated: rank deficiency inside the requested top-" +
                            std::to_string(k_pairs) + " triplets");
        v_right.col(c) = w / norm;
    }
    SpectralModel model =
        assemble_two_view_model(parts, sigma, u_left, v_right, true, kResidualTol);
    model.converged = gram.converged;
    return model;
}

namespace {

SpectralModel truncated_kernel_backed(const Matrix& kernel, const Vector& degrees, int n_views,
                                      Index points_per_view, int k_pairs, int max_iters,
                                      double tol) {
    const Index n = kernel.rows();
    require(k_pairs >= 1 && k_pairs <= n, "decompose_truncated: pair count out of range");
    for (Index i = 0; i < degrees.size(); ++i)
        require_numeric(degrees[i] > 0.0,
                        "decompose_truncated: zero degree at flat index " + std::to_string(i));
    const Vector d_inv_sqrt = degrees.cwiseSqrt().cwiseInverse();
    Matrix p_s = d_inv_sqrt.asDiagonal() * kernel * d_inv_sqrt.asDiagonal();
    p_s = 0.5 * (p_s + p_s.transpose()).eval();

    auto apply_ps = [&](const Matrix& v) -> Matrix { return p_s * v; };
    detail::TopkResult top = detail::topk_symmetric(apply_ps, n, k_pairs, max_iters, tol);

    const Vector d_inv = degrees.cwiseInverse();
    auto apply_phat = [&](const Matrix& v) -> Matrix {
        return d_inv.asDiagonal() * (kernel * v);
    };
    SpectralModel model = detail::finalize_model(top.values, top.vectors, degrees, n_views,
                                                 points_per_view, apply_phat, true, kResidualTol);
    model.converged = top.converged;
    return model;
}

} // namespace

SpectralModel decompose_truncated(const MultiViewOperator& op, int k_pairs, int max_iters,
                                  double tol) {
    return truncated_kernel_backed(op.khat, op.degrees, op.n_views, op.points_per_view, k_pairs,
                                   max_iters, tol);
}

SpectralModel decompose_truncated(const StochasticOperator& op, int k_pairs, int max_iters,
                                  double tol) {
    require(op.kernel.size() > 0, "decompose_truncated: operator has no symmetric kernel backing");
    const bool two_view_block = op.provenance == Provenance::generalized_alpha;
    const Index n = op.kernel.rows();
    return truncated_kernel_backed(op.kernel, op.degrees, two_view_block ? 2 : 1,
                                   two_view_block ? n / 2 : n, k_pairs, max_iters, tol);
}

double coupled_mapping_objective(const Vector& rho, const KernelMatrix& k1,
                                 const KernelMatrix& k2) {
    require(k1.size() == k2.size(), "coupled_mapping_objective: kernel sizes differ");
    const Index m = k1.size();
    require(rho.size() == 2 * m,
            "coupled_mapping_objective: rho must have length 2M = " + std::to_string(2 * m));
    const Matrix kz = k1.values * k2.values;
    double obj = 0.0;
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
            const double dxy = rho[i] - rho[m + j];
            const double dyx = rho[m + i] - rho[j];
            obj += dxy * dxy * kz(i, j) + dyx * dyx * kz(j, i);
        }
    }
    return obj;
}

namespace {

Vector psd_eigenvalues_descending(const Matrix& sym, const char* who) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sym + sym.transpose()));
    require_numeric(es.info() == Eigen::Success,
                    std::string(who) + ": symmetric eigensolve failed");
    return es.eigenvalues().reverse();
}

void require_psd(const Vector& eigs_desc, const char* name) {
    const double max_eig = std::max(eigs_desc[0], 0.0);
    require_numeric(eigs_desc[eigs_desc.size() - 1] >= -1e-8 * std::max(max_eig, 1.0),
                    std::string(name) + " is not positive semi-definite; the spectral-decay "
                                        "inequalities require PSD kernels");
}

// Trailing product prod_{l=k}^{M-1} lambda_l in extended precision.
long double trailing_product(const Vector& desc, Index from) {
    long double p = 1.0L;
    for (Index l = from; l < desc.size(); ++l) p *= static_cast<long double>(std::max(desc[l], 0.0));
    return p;
}

} // namespace

DecayReport decay_report(const KernelMatrix& k1, const KernelMatrix& k2, double delta,
                         std::vector<int> t_grid) {
    require(k1.size() == k2.size(), "decay_report: kernel sizes differ");
    require(delta > 0.0 && delta < 1.0, "decay_report: delta must lie in (0, 1)");
    const Index m = k1.size();

    DecayReport report;
    report.t_grid = std::move(t_grid);

    // Per-method magnitude sequences.
    const std::vector<KernelMatrix> pair{k1, k2};
    auto push_method = [&](const std::string& name, const SpectralModel& model) {
        report.method_names.push_back(name);
        report.magnitudes.push_back(model.eigenvalues.cwiseAbs());
    };
    push_method("single_view_1", decompose(single_view_operator(k1)));
    push_method("single_view_2", decompose(single_view_operator(k2)));
    push_method("kernel_sum", decompose(kernel_sum(pair)));
    push_method("kernel_product", decompose(kernel_product(pair)));
    const SpectralModel mv = decompose(assemble_multiview(pair));
    push_method("multiview", mv);

    report.power_numerical_rank.reserve(report.t_grid.size());
    for (int t : report.t_grid)
        report.power_numerical_rank.push_back(power_numerical_rank(mv, t));

    // Inequality checks need PSD factors.
    const Vector eig1 = psd_eigenvalues_descending(k1.values, "decay_report");
    const Vector eig2 = psd_eigenvalues_descending(k2.values, "decay_report");
    require_psd(eig1, "kernel 1");
    require_psd(eig2, "kernel 2");

    // K1 K2 is similar (up to shared null space) to sqrt(K1) K2 sqrt(K1),
    // which is symmetric PSD, so its eigenvalues come out real and clean.
    Eigen::SelfAdjointEigenSolver<Matrix> es1(0.5 * (k1.values + k1.values.transpose()));
    const Vector clamped = es1.eigenvalues().cwiseMax(0.0);
    const Matrix sqrt1 =
        es1.eigenvectors() * clamped.cwiseSqrt().asDiagonal() * es1.eigenvectors().transpose();
    report.product_eigenvalues =
        psd_eigenvalues_descending(sqrt1 * k2.values * sqrt1, "decay_report");
    report.hadamard_eigenvalues =
        psd_eigenvalues_descending(k1.values.cwiseProduct(k2.values), "decay_report");

    report.product_inequality_ok = true;
    report.worst_product_margin = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < m; ++k) {
        const long double lhs = trailing_product(report.product_eigenvalues, k);
        const long double rhs = trailing_product(report.hadamard_eigenvalues, k);
        const double margin = static_cast<double>(rhs - lhs);
        report.worst_product_margin = std::min(report.worst_product_margin, margin);
        if (lhs > rhs * (1.0L + 1e-9L) + 1e-300L) report.product_inequality_ok = false;
    }

    report.r_delta = 0;
    for (Index k = 0; k < m; ++k)
        if (report.hadamard_eigenvalues[k] > delta) ++report.r_delta;
    const long double tail = trailing_product(report.product_eigenvalues, report.r_delta);
    const long double bound =
        std::pow(static_cast<long double>(delta), static_cast<long double>(m - 1 - report.r_delta));
    report.worst_tail_margin = static_cast<double>(bound - tail);
    report.tail_bound_ok = tail <= bound * (1.0L + 1e-9L) + 1e-300L;
    return report;
}

int power_numerical_rank(const SpectralModel& model, int t, double threshold) {
    require(t >= 1, "power_numerical_rank: t must be >= 1");
    int count = 0;
    for (int k = 0; k < model.pair_count(); ++k)
        if (std::pow(std::abs(model.eigenvalues[k]), t) > threshold) ++count;
    return count;
}

} // namespace mvdm
