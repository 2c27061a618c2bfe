#include "lsikit/kmeans.hpp"

#include <limits>
#include <string>

#include "lsikit/error.hpp"
#include "lsikit/random.hpp"

namespace lsikit {

ClusterLabels::ClusterLabels(std::vector<std::size_t> labels, std::size_t k) : labels_(std::move(labels)), k_(k) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] >= k_) {
            throw InvalidArgument("label " + std::to_string(labels_[i]) + " of item " + std::to_string(i) +
                                  " outside [0, " + std::to_string(k_) + ")");
        }
    }
}

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

DenseMatrix seed_plusplus(const DenseMatrix& pts, std::size_t k, Rng& rng) {
    const std::size_t n = pts.rows();
    DenseMatrix centers(k, pts.cols());
    std::vector<bool> chosen(n, false);
    std::vector<double> mind(n, std::numeric_limits<double>::infinity());

    std::size_t pick = static_cast<std::size_t>(rng.below(n));
    for (std::size_t c = 0; c < k; ++c) {
        if (c > 0) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) total += mind[i];
            if (total > 0.0) {
                const double target = rng.uniform() * total;
                double acc = 0.0;
                pick = n;
                for (std::size_t i = 0; i < n; ++i) {
                    if (mind[i] == 0.0) continue;
                    acc += mind[i];
                    pick = i;
                    if (acc > target) break;
                }
            } else {
                // Every remaining point coincides with a center; take an unused one.
                std::vector<std::size_t> free;
                for (std::size_t i = 0; i < n; ++i)
                    if (!chosen[i]) free.push_back(i);
                pick = free[static_cast<std::size_t>(rng.below(free.size()))];
            }
        }
        chosen[pick] = true;
        auto src = pts.row(pick);
        std::copy(src.begin(), src.end(), centers.row(c).begin());
        for (std::size_t i = 0; i < n; ++i) mind[i] = std::min(mind[i], sq_dist(pts.row(i), centers.row(c)));
    }
    return centers;
}

double assign(const DenseMatrix& pts, const DenseMatrix& centers, std::vector<std::size_t>& labels) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < pts.rows(); ++i) {
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centers.rows(); ++c) {
            const double d = sq_dist(pts.row(i), centers.row(c));
            if (d < bd) {
                bd = d;
                best = c;
            }
        }
        labels[i] = best;
        inertia += bd;
    }
    return inertia;
}

DenseMatrix means(const DenseMatrix& pts, const std::vector<std::size_t>& labels, std::size_t k,
                  std::vector<std::size_t>& counts) {
    DenseMatrix centers(k, pts.cols());
    counts.assign(k, 0);
    for (std::size_t i = 0; i < pts.rows(); ++i) {
        auto row = centers.row(labels[i]);
        auto p = pts.row(i);
        for (std::size_t d = 0; d < p.size(); ++d) row[d] += p[d];
        ++counts[labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) continue;
        for (double& x : centers.row(c)) x /= static_cast<double>(counts[c]);
    }
    return centers;
}

double cost(const DenseMatrix& pts, const DenseMatrix& centers, const std::vector<std::size_t>& labels) {
    double s = 0.0;
    for (std::size_t i = 0; i < pts.rows(); ++i) s += sq_dist(pts.row(i), centers.row(labels[i]));
    return s;
}

// Moves the point farthest from its centroid (in a cluster with >1 member)
// into each empty cluster.
void repair_empty(const DenseMatrix& pts, DenseMatrix& centers, std::vector<std::size_t>& labels,
                  std::vector<std::size_t>& counts) {
    const std::size_t k = centers.rows();
    for (std::size_t e = 0; e < k; ++e) {
        if (counts[e] != 0) continue;
        std::size_t far = pts.rows();
        double fd = -1.0;
        for (std::size_t i = 0; i < pts.rows(); ++i) {
            if (counts[labels[i]] < 2) continue;
            const double d = sq_dist(pts.row(i), centers.row(labels[i]));
            if (d > fd) {
                fd = d;
                far = i;
            }
        }
        if (far == pts.rows()) return;  // cannot happen while k <= n
        const std::size_t from = labels[far];
        labels[far] = e;
        --counts[from];
        counts[e] = 1;
        auto p = pts.row(far);
        std::copy(p.begin(), p.end(), centers.row(e).begin());
        // Recompute the donor centroid from its remaining members.
        auto row = centers.row(from);
        std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t i = 0; i < pts.rows(); ++i) {
            if (labels[i] != from) continue;
            auto q = pts.row(i);
            for (std::size_t d = 0; d < q.size(); ++d) row[d] += q[d];
        }
        for (double& x : row) x /= static_cast<double>(counts[from]);
    }
}

}  // namespace

KMeansResult kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
    const std::size_t n = points.rows();
    if (k == 0) throw InvalidArgument("kmeans: k must be at least 1");
    if (k > n) {
        throw InvalidArgument("kmeans: k = " + std::to_string(k) + " exceeds the number of points (" +
                              std::to_string(n) + ")");
    }
    if (options.restarts == 0) throw InvalidArgument("kmeans: restarts must be at least 1");

    Rng rng(seed);
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> labels(n), next(n), counts;

    for (std::size_t r = 0; r < options.restarts; ++r) {
        DenseMatrix centers = seed_plusplus(points, k, rng);
        std::vector<double> history{assign(points, centers, labels)};
        for (std::size_t it = 0; it < options.max_iterations; ++it) {
            centers = means(points, labels, k, counts);
            repair_empty(points, centers, labels, counts);
            history.push_back(assign(points, centers, next));
            if (next == labels) break;
            labels.swap(next);
        }
        centers = means(points, labels, k, counts);
        const double inertia = cost(points, centers, labels);
        if (inertia < best.inertia) {
            best.labels = ClusterLabels(labels, k);
            best.centroids = std::move(centers);
            best.inertia = inertia;
            best.inertia_history = std::move(history);
            best.restart = r;
        }
    }
    return best;
}

}  // namespace lsikit
