#include "mvdm/types.hpp"

namespace mvdm {

const char* to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::gaussian: return "gaussian";
        case KernelKind::laplacian: return "laplacian";
        case KernelKind::correlation: return "correlation";
        case KernelKind::custom: return "custom";
    }
    return "unknown";
}

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::multiview: return "multiview";
        case Provenance::kernel_product: return "kernel_product";
        case Provenance::kernel_sum: return "kernel_sum";
        case Provenance::alternating: return "alternating";
        case Provenance::generalized_alpha: return "generalized_alpha";
        case Provenance::single_view: return "single_view";
        case Provenance::desa: return "desa";
    }
    return "unknown";
}

void require(bool condition, const std::string& message) {
    if (!condition) throw invalid_input(message);
}

void require_numeric(bool condition, const std::string& message) {
    if (!condition) throw numeric_error(message);
}

void validate_view(const ViewMatrix& view, Index min_samples) {
    require(view.data.rows() >= min_samples,
            "view " + std::to_string(view.view_id) + ": needs at least " +
                std::to_string(min_samples) + " samples, got " + std::to_string(view.data.rows()));
    require(view.data.cols() >= 1,
            "view " + std::to_string(view.view_id) + ": needs at least one feature column");
    if (!view.data.allFinite()) {
        for (Index i = 0; i < view.data.rows(); ++i)
            for (Index j = 0; j < view.data.cols(); ++j)
                if (!std::isfinite(view.data(i, j)))
                    throw invalid_input("view " + std::to_string(view.view_id) +
                                        ": non-finite value at row " + std::to_string(i) +
                                        ", column " + std::to_string(j));
    }
}

void validate_view_set(const ViewSet& views) {
    require(!views.views.empty(), "view set is empty");
    const Index m = views.views.front().samples();
    for (const auto& v : views.views) {
        validate_view(v);
        require(v.samples() == m,
                "view " + std::to_string(v.view_id) + ": has " + std::to_string(v.samples()) +
                    " rows but view " + std::to_string(views.views.front().view_id) + " has " +
                    std::to_string(m) + " (views must be row-aligned)");
    }
}

} // namespace mvdm
