#include "mvdm/evaluation.hpp"

#include "mvdm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace mvdm {

namespace {

struct LloydOutcome {
    std::vector<int> labels;
    double inertia = 0.0;
};

LloydOutcome lloyd_once(const Matrix& points, int k, rng::Xoshiro256pp& gen, int max_iters) {
    const Index m = points.rows();

    // k-means++ seeding.
    Matrix centroids(k, points.cols());
    Vector min_d2 = Vector::Constant(m, std::numeric_limits<double>::infinity());
    {
        const Index first = static_cast<Index>(gen.uniform() * static_cast<double>(m)) % m;
        centroids.row(0) = points.row(first);
        for (int c = 1; c < k; ++c) {
            for (Index i = 0; i < m; ++i)
                min_d2[i] = std::min(min_d2[i],
                                     (points.row(i) - centroids.row(c - 1)).squaredNorm());
            const double total = min_d2.sum();
            Index pick = 0;
            if (total > 0.0) {
                double target = gen.uniform() * total;
                for (Index i = 0; i < m; ++i) {
                    target -= min_d2[i];
                    if (target <= 0.0) {
                        pick = i;
                        break;
                    }
                }
            } else {
                pick = static_cast<Index>(gen.uniform() * static_cast<double>(m)) % m;
            }
            centroids.row(c) = points.row(pick);
        }
    }

    std::vector<int> labels(static_cast<std::size_t>(m), 0);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = iter == 0;
        for (Index i = 0; i < m; ++i) {
            int best = 0;
            double best_d2 = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d2 = (points.row(i) - centroids.row(c)).squaredNorm();
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = c;
                }
            }
            if (labels[static_cast<std::size_t>(i)] != best) changed = true;
            labels[static_cast<std::size_t>(i)] = best;
        }
        if (!changed) break;

        centroids.setZero();
        std::fill(counts.begin(), counts.end(), 0);
        for (Index i = 0; i < m; ++i) {
            centroids.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
            ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centroids.row(c) /= counts[static_cast<std::size_t>(c)];
                continue;
            }
            // Empty cluster: re-seed at the point farthest from its centroid.
            Index farthest = 0;
            double far_d2 = -1.0;
            for (Index i = 0; i < m; ++i) {
                const double d2 =
                    (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)]))
                        .squaredNorm();
                if (d2 > far_d2) {
                    far_d2 = d2;
                    farthest = i;
                }
            }
            centroids.row(c) = points.row(farthest);
        }
    }

    LloydOutcome out;
    out.labels = std::move(labels);
    for (Index i = 0; i < m; ++i)
        out.inertia +=
            (points.row(i) - centroids.row(out.labels[static_cast<std::size_t>(i)])).squaredNorm();
    return out;
}

} // namespace

ClusteringResult kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts,
                        int max_iters) {
    require(points.rows() >= 1 && points.cols() >= 1, "kmeans: empty input");
    require(k >= 1 && k <= points.rows(),
            "kmeans: k must lie in [1, M], got " + std::to_string(k));
    require(restarts >= 1, "kmeans: needs at least one restart");

    ClusteringResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    best.seed = seed;
    best.n_restarts = restarts;
    for (int r = 0; r < restarts; ++r) {
        auto gen = rng::stream(seed, "kmeans-restart", static_cast<std::uint64_t>(r));
        LloydOutcome outcome = lloyd_once(points, k, gen, max_iters);
        if (outcome.inertia < best.inertia) {
            best.inertia = outcome.inertia;
            best.labels = std::move(outcome.labels);
        }
    }
    return best;
}

namespace {

std::map<int, double> label_distribution(const std::vector<int>& labels) {
    std::map<int, double> p;
    for (int v : labels) p[v] += 1.0;
    for (auto& [key, val] : p) val /= static_cast<double>(labels.size());
    return p;
}

double entropy(const std::map<int, double>& p) {
    double h = 0.0;
    for (const auto& [key, val] : p)
        if (val > 0.0) h -= val * std::log(val);
    return h;
}

} // namespace

double nmi(const std::vector<int>& a, const std::vector<int>& b) {
    require(a.size() == b.size() && !a.empty(), "nmi: label vectors must match and be non-empty");
    const double n = static_cast<double>(a.size());
    const auto pa = label_distribution(a);
    const auto pb = label_distribution(b);

    std::map<std::pair<int, int>, double> joint;
    for (std::size_t i = 0; i < a.size(); ++i) joint[{a[i], b[i]}] += 1.0 / n;

    double mi = 0.0;
    for (const auto& [key, pab] : joint) {
        if (pab <= 0.0) continue;
        mi += pab * std::log(pab / (pa.at(key.first) * pb.at(key.second)));
    }
    const double denom = 0.5 * (entropy(pa) + entropy(pb));
    if (denom <= 0.0) return 1.0;
    return std::clamp(mi / denom, 0.0, 1.0);
}

namespace {

// Hungarian algorithm (O(n^3) potentials form) on a square cost matrix;
// returns the column assigned to each row.
std::vector<int> hungarian_min_cost(const Matrix& cost) {
    const int n = static_cast<int>(cost.rows());
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1,
                                 std::numeric_limits<double>::infinity());
        std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = match[static_cast<std::size_t>(j0)];
            double delta = std::numeric_limits<double>::infinity();
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (match[static_cast<std::size_t>(j)] > 0)
            row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
    return row_to_col;
}

} // namespace

double clustering_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    require(predicted.size() == truth.size() && !predicted.empty(),
            "clustering_accuracy: label vectors must match and be non-empty");

    std::map<int, int> pred_ids, truth_ids;
    for (int v : predicted) pred_ids.emplace(v, static_cast<int>(pred_ids.size()));
    for (int v : truth) truth_ids.emplace(v, static_cast<int>(truth_ids.size()));
    const int n = std::max(static_cast<int>(pred_ids.size()), static_cast<int>(truth_ids.size()));

    Matrix confusion = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < predicted.size(); ++i)
        confusion(pred_ids.at(predicted[i]), truth_ids.at(truth[i])) += 1.0;

    // Maximize matches = minimize negated confusion.
    const std::vector<int> assignment = hungarian_min_cost(-confusion);
    double matched = 0.0;
    for (int r = 0; r < n; ++r)
        if (assignment[static_cast<std::size_t>(r)] >= 0)
            matched += confusion(r, assignment[static_cast<std::size_t>(r)]);
    return matched / static_cast<double>(predicted.size());
}

double circular_rank_correlation(const Vector& a, const Vector& b) {
    require(a.size() == b.size() && a.size() >= 3,
            "circular_rank_correlation: sequences must match and have >= 3 entries");
    const Index m = a.size();
    auto rank_angles = [m](const Vector& v) {
        std::vector<Index> order(static_cast<std::size_t>(m));
        std::iota(order.begin(), order.end(), Index{0});
        std::sort(order.begin(), order.end(), [&](Index x, Index y) {
            if (v[x] != v[y]) return v[x] < v[y];
            return x < y;
        });
        Vector angles(m);
        for (Index r = 0; r < m; ++r)
            angles[order[static_cast<std::size_t>(r)]] =
                2.0 * 3.14159265358979323846 * static_cast<double>(r) / static_cast<double>(m);
        return angles;
    };
    const Vector u = rank_angles(a);
    const Vector v = rank_angles(b);
    double num = 0.0, du = 0.0, dv = 0.0;
    for (Index i = 0; i < m; ++i) {
        for (Index j = i + 1; j < m; ++j) {
            const double su = std::sin(u[i] - u[j]);
            const double sv = std::sin(v[i] - v[j]);
            num += su * sv;
            du += su * su;
            dv += sv * sv;
        }
    }
    const double denom = std::sqrt(du * dv);
    return denom > 0.0 ? num / denom : 0.0;
}

double knn_loo_classify(const Matrix& embedding, const std::vector<int>& labels, int k) {
    const Index m = embedding.rows();
    require(static_cast<Index>(labels.size()) == m,
            "knn: label count does not match sample count");
    require(k >= 1 && k < m, "knn: k must lie in [1, M-1]");

    int correct = 0;
    std::vector<Index> order(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
        Vector d2(m);
        for (Index j = 0; j < m; ++j) d2[j] = (embedding.row(i) - embedding.row(j)).squaredNorm();
        std::iota(order.begin(), order.end(), Index{0});
        std::sort(order.begin(), order.end(), [&](Index a, Index b) {
            if (d2[a] != d2[b]) return d2[a] < d2[b];
            return a < b;
        });

        std::map<int, std::pair<int, double>> votes; // label -> (count, distance sum)
        int taken = 0;
        for (Index rank = 0; rank < m && taken < k; ++rank) {
            const Index j = order[static_cast<std::size_t>(rank)];
            if (j == i) continue;
            auto& [count, dist_sum] = votes[labels[static_cast<std::size_t>(j)]];
            ++count;
            dist_sum += std::sqrt(d2[j]);
            ++taken;
        }

        int best_label = -1;
        int best_count = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (const auto& [label, vote] : votes) {
            const auto& [count, dist_sum] = vote;
            const bool better = count > best_count ||
                                (count == best_count && dist_sum < best_dist) ||
                                (count == best_count && dist_sum == best_dist &&
                                 label < best_label);
            if (better) {
                best_label = label;
                best_count = count;
                best_dist = dist_sum;
            }
        }
        if (best_label == labels[static_cast<std::size_t>(i)]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(m);
}

} // namespace mvdm
