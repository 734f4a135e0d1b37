#include "mvdm/embedding.hpp"

#include "mvdm/kernels.hpp"
#include "mvdm/operators.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace mvdm {

Embedding multiview_embed(const SpectralModel& model, int t, double delta) {
    require(t >= 1, "embed: diffusion time t must be >= 1");
    require(delta > 0.0 && delta < 1.0, "embed: delta must lie in (0, 1)");

    const std::vector<int> usable = model.nontrivial_indices();
    double leading = 0.0;
    for (int k : usable) leading = std::max(leading, std::abs(model.eigenvalues[k]));
    if (leading <= 0.0)
        throw numeric_error("embed: spectrum has no usable non-trivial mode (all zero); "
                            "no delta in (0, 1) can retain a coordinate");

    const double cutoff = delta * std::pow(leading, t);
    std::vector<int> kept;
    for (int k : usable)
        if (std::pow(std::abs(model.eigenvalues[k]), t) > cutoff) kept.push_back(k);
    if (kept.empty()) {
        std::ostringstream msg;
        msg << "embed: delta = " << delta << " truncates every coordinate; largest usable delta is "
            << std::pow(std::abs(model.eigenvalues[usable.front()]) / leading, t);
        throw numeric_error(msg.str());
    }

    Embedding emb;
    emb.t = t;
    emb.delta = delta;
    emb.r = static_cast<int>(kept.size());
    emb.pairs = kept;
    emb.model = model;
    emb.per_view_coords.resize(static_cast<std::size_t>(model.n_views));
    const Index m = model.points_per_view;
    for (int l = 0; l < model.n_views; ++l) {
        Matrix coords(m, emb.r);
        const Index offset = static_cast<Index>(l) * m;
        for (int c = 0; c < emb.r; ++c) {
            const int k = kept[static_cast<std::size_t>(c)];
            const double weight = std::pow(model.eigenvalues[k], t);
            coords.col(c) = weight * model.psi.col(k).segment(offset, m);
        }
        emb.per_view_coords[static_cast<std::size_t>(l)] = std::move(coords);
    }
    return emb;
}

Embedding single_view_embed(const ViewMatrix& view, double sigma, int t, double delta,
                            KernelKind kind) {
    const KernelMatrix kernel = make_kernel(view, kind, sigma);
    const SpectralModel model = decompose(single_view_operator(kernel));
    return multiview_embed(model, t, delta);
}

double inner_view_distance(const SpectralModel& model, int view, Index i, Index j, int t) {
    require(view >= 1 && view <= model.n_views, "inner_view_distance: view out of range");
    require(i >= 0 && i < model.points_per_view && j >= 0 && j < model.points_per_view,
            "inner_view_distance: sample index out of range");
    require(t >= 1, "inner_view_distance: t must be >= 1");
    const Index offset = static_cast<Index>(view - 1) * model.points_per_view;
    double sum = 0.0;
    for (int k = 0; k < model.pair_count(); ++k) {
        if (model.trivial_flags[static_cast<std::size_t>(k)]) continue;
        const double diff = model.psi(offset + i, k) - model.psi(offset + j, k);
        sum += std::pow(model.eigenvalues[k], 2 * t) * diff * diff;
    }
    return sum;
}

double inner_view_distance_direct(const MultiViewOperator& op, int view, Index i, Index j, int t) {
    require(view >= 1 && view <= op.n_views, "inner_view_distance_direct: view out of range");
    require(i >= 0 && i < op.points_per_view && j >= 0 && j < op.points_per_view,
            "inner_view_distance_direct: sample index out of range");
    require(t >= 1, "inner_view_distance_direct: t must be >= 1");
    Matrix power = op.phat;
    for (int s = 1; s < t; ++s) power = (power * op.phat).eval();
    const Index row_i = op.flat_index(view, i);
    const Index row_j = op.flat_index(view, j);
    double sum = 0.0;
    for (Index k = 0; k < power.cols(); ++k) {
        const double diff = power(row_i, k) - power(row_j, k);
        sum += diff * diff / op.degrees[k];
    }
    return sum;
}

double multiview_distance(const Embedding& emb, Index i, Index j) {
    require(i >= 0 && i < emb.samples() && j >= 0 && j < emb.samples(),
            "multiview_distance: sample index out of range");
    double sum = 0.0;
    for (const Matrix& coords : emb.per_view_coords)
        sum += (coords.row(i) - coords.row(j)).squaredNorm();
    return sum;
}

double cross_view_distance(const SpectralModel& model, int t) {
    require(model.n_views == 2,
            "cross_view_distance: defined for two views, operator has " +
                std::to_string(model.n_views));
    require(t >= 1, "cross_view_distance: t must be >= 1");
    const Index m = model.points_per_view;
    double sum = 0.0;
    for (int k = 0; k < model.pair_count(); ++k) {
        if (model.trivial_flags[static_cast<std::size_t>(k)]) continue;
        // Positive branch only: the mirrored -sigma twins flip the sign of
        // the second view's block and would report distance between
        // identical maps.
        if (model.eigenvalues[k] <= 0.0) continue;
        const double w = std::pow(model.eigenvalues[k], 2 * t);
        sum += w * (model.psi.col(k).head(m) - model.psi.col(k).tail(m)).squaredNorm();
    }
    return sum;
}

Matrix alternating_embed(const StochasticOperator& op, int t, double delta) {
    require(op.matrix.rows() == op.matrix.cols(), "alternating_embed: operator must be square");
    require(t >= 1, "alternating_embed: t must be >= 1");
    require(delta > 0.0 && delta < 1.0, "alternating_embed: delta must lie in (0, 1)");
    const Index n = op.matrix.rows();

    Eigen::EigenSolver<Matrix> es(op.matrix);
    require_numeric(es.info() == Eigen::Success, "alternating_embed: eigensolver failed");
    const Eigen::VectorXcd values = es.eigenvalues();
    const Eigen::MatrixXcd vectors = es.eigenvectors();

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        const double ma = std::abs(values[a]);
        const double mb = std::abs(values[b]);
        if (ma != mb) return ma > mb;
        return values[a].imag() > values[b].imag();
    });

    auto is_trivial = [&](Index k) {
        if (std::abs(values[k] - std::complex<double>(1.0, 0.0)) > 1e-9) return false;
        const Vector re = vectors.col(k).real();
        const double scale = re.cwiseAbs().maxCoeff();
        return scale > 0.0 && (re.array() - re.mean()).abs().maxCoeff() <= 1e-6 * scale;
    };

    double leading = 0.0;
    for (Index k = 0; k < n; ++k)
        if (!is_trivial(k)) leading = std::max(leading, std::abs(values[k]));
    require_numeric(leading > 0.0, "alternating_embed: no usable non-trivial mode");
    const double cutoff = delta * std::pow(leading, t);

    std::vector<Vector> columns;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (Index pos = 0; pos < n; ++pos) {
        const Index k = order[static_cast<std::size_t>(pos)];
        if (used[static_cast<std::size_t>(k)] || is_trivial(k)) continue;
        if (std::pow(std::abs(values[k]), t) <= cutoff) break;
        used[static_cast<std::size_t>(k)] = true;
        const std::complex<double> w = std::pow(values[k], t);
        const Eigen::VectorXcd coord = w * vectors.col(k);
        if (std::abs(values[k].imag()) <= 1e-12 * std::max(1.0, std::abs(values[k]))) {
            columns.push_back(coord.real());
            continue;
        }
        // Complex pair: keep (Re, Im) once and retire the conjugate twin.
        columns.push_back(coord.real());
        columns.push_back(coord.imag());
        for (Index other = 0; other < n; ++other) {
            if (used[static_cast<std::size_t>(other)]) continue;
            if (std::abs(values[other] - std::conj(values[k])) <=
                1e-10 * std::max(1.0, std::abs(values[k]))) {
                used[static_cast<std::size_t>(other)] = true;
                break;
            }
        }
    }
    require_numeric(!columns.empty(), "alternating_embed: delta truncated every coordinate");

    Matrix coords(n, static_cast<Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        Vector col = columns[c];
        // Deterministic sign: largest-magnitude entry positive.
        Index arg = 0;
        col.cwiseAbs().maxCoeff(&arg);
        if (col[arg] < 0.0) col = -col;
        coords.col(static_cast<Index>(c)) = col;
    }
    return coords;
}

double single_view_cross_distance(const Embedding& a, const Embedding& b, bool align_signs) {
    require(a.n_views() == 1 && b.n_views() == 1,
            "single_view_cross_distance: both embeddings must be single-view");
    require(a.samples() == b.samples(),
            "single_view_cross_distance: embeddings have different sample counts");
    const int rc = std::min(a.r, b.r);
    const Matrix& ca = a.per_view_coords.front();
    const Matrix& cb = b.per_view_coords.front();
    double sum = 0.0;
    for (int c = 0; c < rc; ++c) {
        const double direct = (ca.col(c) - cb.col(c)).squaredNorm();
        if (!align_signs) {
            sum += direct;
            continue;
        }
        const double flipped = (ca.col(c) + cb.col(c)).squaredNorm();
        sum += std::min(direct, flipped);
    }
    return sum;
}

} // namespace mvdm
