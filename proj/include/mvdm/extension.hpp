#pragma once

#include "mvdm/spectral.hpp"
#include "mvdm/types.hpp"

namespace mvdm {

// Everything needed to extend the two-view diffusion coordinates to points
// that were not part of the training decomposition.
struct ExtensionModel {
    ViewMatrix train_x;
    ViewMatrix train_y;
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    int t = 1;
    SpectralModel model;  // two-view decomposition of the training data
    Matrix kernel_x;      // training Gaussian kernels
    Matrix kernel_y;
    double lambda_floor = 1e-6; // coordinates divide by lambda_k; smaller pairs are omitted
};

ExtensionModel build_extension_model(const ViewMatrix& x, const ViewMatrix& y, double sigma_x,
                                     double sigma_y, int t);

// Extended coordinates for one new point. `pairs` lists the model pairs the
// coordinates correspond to (non-trivial, in model order); `omitted` the
// pairs skipped because |lambda| fell below the floor.
struct ExtendedPoint {
    Vector coords;             // lambda_k^t * psi-hat_k(new point)
    std::vector<int> pairs;
    std::vector<int> omitted;
    double max_kernel_weight = 0.0;
    bool low_confidence = false; // new point is far from all training data
};

// Nystrom extension of a view-X point: the new row's transition
// probabilities p(x~, y_j) = sum_s k_x(x~, x_s) K^y_{s,j} / D(x~) weight the
// second-block eigenvector entries, divided by lambda_k. Feeding a training
// point x_i reproduces psi_k[i] exactly (up to round-off) through the
// blockwise eigen-identity lambda_k psi_k^x[i] = sum_j p(x_i, y_j) psi_k^y[j].
ExtendedPoint extend_x(const ExtensionModel& model, const Vector& x_new);

// Mirror image for a view-Y point (first-block eigenvector entries).
ExtendedPoint extend_y(const ExtensionModel& model, const Vector& y_new);

} // namespace mvdm
