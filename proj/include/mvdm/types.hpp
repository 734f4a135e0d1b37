#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvdm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Thrown when inputs violate an operation's preconditions (bad shapes,
// out-of-range parameters, malformed files). The CLI maps this to exit 2.
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a numerically valid input leads to a failed computation
// (zero degree, singular solve, non-convergence). CLI exit 1.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class KernelKind { gaussian, laplacian, correlation, custom };

const char* to_string(KernelKind kind);

// One view of the dataset: rows are samples, columns are features.
struct ViewMatrix {
    Matrix data;
    int view_id = 1;

    Index samples() const { return data.rows(); }
    Index features() const { return data.cols(); }
};

// All views of a dataset, row-aligned: row k of every view is sample k.
struct ViewSet {
    std::vector<ViewMatrix> views;

    Index samples() const { return views.empty() ? 0 : views.front().samples(); }
    int count() const { return static_cast<int>(views.size()); }
};

// Symmetric nonnegative affinity matrix for one view.
// For the three named kinds the diagonal is exactly 1 and entries lie in
// [0, 1]; `custom` admits any symmetric nonnegative matrix (used by the
// operator-level tests and by callers composing their own affinities).
struct KernelMatrix {
    Matrix values;
    double sigma = 0.0;
    KernelKind kind = KernelKind::custom;

    Index size() const { return values.rows(); }
};

enum class Provenance {
    multiview,
    kernel_product,
    kernel_sum,
    alternating,
    generalized_alpha,
    single_view,
    desa
};

const char* to_string(Provenance p);

// Row-stochastic operator P = D^{-1} K together with the symmetric kernel
// and degree vector it was normalized from. `kernel` is empty for
// constructions that have no symmetric backing matrix (alternating).
struct StochasticOperator {
    Matrix matrix;
    Matrix kernel;
    Vector degrees;
    Provenance provenance = Provenance::single_view;

    Index size() const { return matrix.rows(); }
};

// The block multi-view operator: K-hat (LM x LM, zero diagonal blocks,
// K^l K^m off-diagonal), its degree vector and the row-stochastic P-hat.
// View l occupies rows [(l-1)*M, l*M), l counted from 1.
struct MultiViewOperator {
    Matrix khat;
    Vector degrees;
    Matrix phat;
    int n_views = 0;
    Index points_per_view = 0;

    Index rows() const { return khat.rows(); }
    Index block_start(int view) const { return static_cast<Index>(view - 1) * points_per_view; }
    // Flat row index of sample i (0-based) in view `view` (1-based).
    Index flat_index(int view, Index i) const { return block_start(view) + i; }
};

void require(bool condition, const std::string& message);
void require_numeric(bool condition, const std::string& message);

// Validates finiteness and minimum sample count; names the view on failure.
void validate_view(const ViewMatrix& view, Index min_samples = 2);

// Row-aligned views: equal sample counts, all finite.
void validate_view_set(const ViewSet& views);

} // namespace mvdm
