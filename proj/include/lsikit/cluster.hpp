#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "lsikit/dense.hpp"
#include "lsikit/graphs.hpp"
#include "lsikit/labels.hpp"
#include "lsikit/sparse.hpp"

namespace lsikit {

enum class ClusterMethod { Spectral, BipartiteSvd, Nmf };

std::string_view to_string(ClusterMethod m);
ClusterMethod parse_cluster_method(std::string_view name);

struct ClusteringRun {
    ClusterLabels labels;
    std::size_t k = 0;
    ClusterMethod method = ClusterMethod::Spectral;
    std::uint64_t seed = 0;
    std::size_t trials = 1;
};

// External quality of a clustering against reference classes.
struct QualityScores {
    double mutual_information = 0.0;  // nats
    double entropy = 0.0;             // log base = number of reference classes
    double purity = 0.0;
    double fmeasure = 0.0;            // pairwise F1
};

// Ng–Jordan–Weiss spectral clustering of the columns of `points`:
// kernel affinity, D^{−1/2}·K·D^{−1/2}, top-k eigenvectors, unit rows, k-means.
// Throws InvalidArgument for k outside [1, N] or an isolated point.
ClusteringRun spectral_cluster(const DenseMatrix& points, std::size_t k, const KernelSpec& spec, std::uint64_t seed);

// Document clustering from the first k right singular vectors of A·D^{−1/2},
// D = diag(AᵀA·e), rows normalized, then k-means.
ClusteringRun bipartite_svd_cluster(const SparseMatrix& a, std::size_t k, std::uint64_t seed);

// Document n goes to argmax_k C(k, n) of A·D^{−1/2} ≈ B·C (lowest index on ties).
// Multi-trial runs use seeds seed, seed+1, ...; the returned labels are trial 0's.
ClusteringRun nmf_cluster(const SparseMatrix& a, std::size_t k, std::uint64_t seed, std::size_t trials = 1,
                          std::size_t iterations = 500);

// Argmax assignment on the columns of a coefficient matrix.
ClusterLabels argmax_columns(const DenseMatrix& coefficients);

struct NmfTrials {
    std::vector<ClusteringRun> runs;
    std::vector<QualityScores> scores;
    QualityScores mean;
};

// Runs `trials` NMF clusterings and averages their scores against `reference`.
NmfTrials nmf_cluster_trials(const SparseMatrix& a, std::size_t k, std::uint64_t seed, std::size_t trials,
                             const ClusterLabels& reference, std::size_t iterations = 500);

// MI, entropy, purity and pairwise F-measure from the K × C contingency table.
// Throws ShapeError when the label vectors differ in length.
QualityScores eval_clustering(const ClusterLabels& labels, const ClusterLabels& reference);

// Fraction of items correctly placed under the best one-to-one matching of
// clusters to classes (exhaustive over permutations; k, C <= 8).
double matched_accuracy(const ClusterLabels& labels, const ClusterLabels& reference);

}  // namespace lsikit
