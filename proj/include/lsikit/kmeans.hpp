#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lsikit/dense.hpp"
#include "lsikit/labels.hpp"

namespace lsikit {

struct KMeansOptions {
    std::size_t restarts = 10;
    std::size_t max_iterations = 300;
};

struct KMeansResult {
    ClusterLabels labels;
    DenseMatrix centroids;  // k × dim
    double inertia = 0.0;   // within-cluster sum of squared distances
    // Inertia after every assignment step of the winning restart.
    std::vector<double> inertia_history;
    std::size_t restart = 0;
};

// Lloyd's k-means over the rows of `points`, k-means++ seeding.
//
// The restart with the lowest inertia wins (earliest on ties). Empty clusters
// are repaired by moving the point farthest from its centroid into them.
// Throws InvalidArgument when k == 0, k > rows or restarts == 0.
KMeansResult kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});

}  // namespace lsikit
