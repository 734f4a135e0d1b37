#include "mvdm/extension.hpp"

#include "mvdm/kernels.hpp"
#include "mvdm/operators.hpp"

#include <cmath>

namespace mvdm {

ExtensionModel build_extension_model(const ViewMatrix& x, const ViewMatrix& y, double sigma_x,
                                     double sigma_y, int t) {
    require(t >= 1, "extension: t must be >= 1");
    require(x.samples() == y.samples(), "extension: views must be row-aligned");
    ExtensionModel em;
    em.train_x = x;
    em.train_y = y;
    em.sigma_x = sigma_x;
    em.sigma_y = sigma_y;
    em.t = t;
    const KernelMatrix kx = gaussian_kernel(x, sigma_x);
    const KernelMatrix ky = gaussian_kernel(y, sigma_y);
    em.kernel_x = kx.values;
    em.kernel_y = ky.values;
    em.model = decompose(assemble_multiview({kx, ky}));
    return em;
}

namespace {

ExtendedPoint extend_impl(const ExtensionModel& em, const Vector& point, bool from_x) {
    const ViewMatrix& own_view = from_x ? em.train_x : em.train_y;
    const Matrix& other_kernel = from_x ? em.kernel_y : em.kernel_x;
    const double sigma = from_x ? em.sigma_x : em.sigma_y;
    require(point.size() == own_view.features(),
            std::string(from_x ? "extend_x" : "extend_y") + ": new point has " +
                std::to_string(point.size()) + " features, training view has " +
                std::to_string(own_view.features()));

    const Index m = own_view.samples();
    Vector affinities(m);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (Index s = 0; s < m; ++s) {
        const double d2 = (own_view.data.row(s).transpose() - point).squaredNorm();
        affinities[s] = std::exp(-d2 * inv);
    }

    // New multi-view row: weights[j] = sum_s k(x~, x_s) K^other_{s,j},
    // normalized by the row's own degree (the out-of-sample analogue of
    // D-hat_{i,i}).
    const Vector weights = other_kernel * affinities;
    const double degree = weights.sum();
    require_numeric(degree > 0.0, std::string(from_x ? "extend_x" : "extend_y") +
                                      ": new point has zero affinity to every training sample");
    const Vector row = weights / degree;

    const Index other_offset = from_x ? m : 0;

    ExtendedPoint out;
    out.max_kernel_weight = affinities.maxCoeff();
    out.low_confidence = out.max_kernel_weight < 1e-6;
    std::vector<double> coords;
    for (int k = 0; k < em.model.pair_count(); ++k) {
        if (em.model.trivial_flags[static_cast<std::size_t>(k)]) continue;
        const double lambda = em.model.eigenvalues[k];
        if (std::abs(lambda) < em.lambda_floor) {
            out.omitted.push_back(k);
            continue;
        }
        const double psi_hat =
            row.dot(em.model.psi.col(k).segment(other_offset, m)) / lambda;
        coords.push_back(std::pow(lambda, em.t) * psi_hat);
        out.pairs.push_back(k);
    }
    out.coords = Eigen::Map<Vector>(coords.data(), static_cast<Index>(coords.size()));
    return out;
}

} // namespace

ExtendedPoint extend_x(const ExtensionModel& model, const Vector& x_new) {
    return extend_impl(model, x_new, true);
}

ExtendedPoint extend_y(const ExtensionModel& model, const Vector& y_new) {
    return extend_impl(model, y_new, false);
}

} // namespace mvdm
