#pragma once

#include "mvdm/types.hpp"

#include <cstdint>

namespace mvdm {

struct ClusteringResult {
    std::vector<int> labels;
    double inertia = 0.0;
    int n_restarts = 0;
    std::uint64_t seed = 0;
};

// Lloyd's iteration with k-means++ seeding; best of `restarts` by inertia
// (ties broken by restart index). An emptied cluster is re-seeded at the
// point farthest from its assigned centroid.
ClusteringResult kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts = 10,
                        int max_iters = 300);

// Mutual information normalized by the arithmetic mean of the entropies;
// 0 log 0 = 0. Two constant labelings are identical up to naming, so the
// 0/0 case returns 1.
double nmi(const std::vector<int>& a, const std::vector<int>& b);

// Fraction of samples matched under the best label permutation (Hungarian
// assignment on the confusion matrix).
double clustering_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

// Leave-one-out k-NN accuracy in the embedding space. Vote ties break by
// smaller within-label distance sum, then by lower label.
double knn_loo_classify(const Matrix& embedding, const std::vector<int>& labels, int k = 1);

// Circular-circular rank correlation (Fisher-Lee statistic over rank
// angles): both sequences are reduced to ranks mapped onto [0, 2 pi), so the
// value is invariant to rotations of either circle and flips sign under
// reflection. Returns a value in [-1, 1].
double circular_rank_correlation(const Vector& a, const Vector& b);

} // namespace mvdm
