#include "lsikit/cluster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "lsikit/error.hpp"
#include "lsikit/kmeans.hpp"
#include "lsikit/linalg.hpp"
#include "lsikit/nmf.hpp"

namespace lsikit {
namespace {

void normalize_rows(DenseMatrix& x) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
        auto row = x.row(i);
        const double n = norm2(row);
        if (n == 0.0) continue;
        for (double& v : row) v /= n;
    }
}

void check_k(std::size_t k, std::size_t n, const char* who) {
    if (k < 1 || k > n) {
        throw InvalidArgument(std::string(who) + ": k = " + std::to_string(k) + " outside [1, " + std::to_string(n) +
                              "]");
    }
}

}  // namespace

std::string_view to_string(ClusterMethod m) {
    switch (m) {
        case ClusterMethod::Spectral: return "spectral";
        case ClusterMethod::BipartiteSvd: return "bipartite-svd";
        case ClusterMethod::Nmf: return "nmf";
    }
    return "?";
}

ClusterMethod parse_cluster_method(std::string_view name) {
    for (ClusterMethod m : {ClusterMethod::Spectral, ClusterMethod::BipartiteSvd, ClusterMethod::Nmf})
        if (to_string(m) == name) return m;
    throw InvalidArgument("unknown clustering method '" + std::string(name) + "'");
}

ClusteringRun spectral_cluster(const DenseMatrix& points, std::size_t k, const KernelSpec& spec, std::uint64_t seed) {
    check_k(k, points.cols(), "spectral_cluster");
    const AffinityGraph g = kernel_affinity(points, spec, Objective::NAssoc);
    DenseMatrix normalized = normalize_affinity(g);
    EigenPairs eig = symmetric_eigen_topk(normalized, k);
    DenseMatrix x = std::move(eig.vectors);
    normalize_rows(x);
    KMeansResult km = kmeans(x, k, seed);
    return {std::move(km.labels), k, ClusterMethod::Spectral, seed, 1};
}

ClusteringRun bipartite_svd_cluster(const SparseMatrix& a, std::size_t k, std::uint64_t seed) {
    check_k(k, a.cols(), "bipartite_svd_cluster");
    if (k > std::min(a.rows(), a.cols())) throw InvalidArgument("bipartite_svd_cluster: k exceeds min(M, N)");
    const SparseMatrix normalized = gram_degree_normalize(a);
    SvdFactors f = truncated_svd(normalized, k);
    DenseMatrix v = std::move(f.right);
    normalize_rows(v);
    KMeansResult km = kmeans(v, k, seed);
    return {std::move(km.labels), k, ClusterMethod::BipartiteSvd, seed, 1};
}

ClusterLabels argmax_columns(const DenseMatrix& c) {
    std::vector<std::size_t> labels(c.cols(), 0);
    for (std::size_t n = 0; n < c.cols(); ++n) {
        std::size_t best = 0;
        for (std::size_t r = 1; r < c.rows(); ++r)
            if (c(r, n) > c(best, n)) best = r;
        labels[n] = best;
    }
    return ClusterLabels(std::move(labels), c.rows());
}

ClusteringRun nmf_cluster(const SparseMatrix& a, std::size_t k, std::uint64_t seed, std::size_t trials,
                          std::size_t iterations) {
    check_k(k, a.cols(), "nmf_cluster");
    if (trials == 0) throw InvalidArgument("nmf_cluster: trials must be at least 1");
    const SparseMatrix normalized = gram_degree_normalize(a);
    NmfResult r = nmf_factorize(normalized, k, iterations, seed);
    return {argmax_columns(r.coefficients), k, ClusterMethod::Nmf, seed, trials};
}

NmfTrials nmf_cluster_trials(const SparseMatrix& a, std::size_t k, std::uint64_t seed, std::size_t trials,
                             const ClusterLabels& reference, std::size_t iterations) {
    if (trials == 0) throw InvalidArgument("nmf_cluster_trials: trials must be at least 1");
    NmfTrials out;
    for (std::size_t t = 0; t < trials; ++t) {
        ClusteringRun run = nmf_cluster(a, k, seed + t, 1, iterations);
        run.trials = trials;
        out.scores.push_back(eval_clustering(run.labels, reference));
        out.runs.push_back(std::move(run));
    }
    for (const auto& s : out.scores) {
        out.mean.mutual_information += s.mutual_information;
        out.mean.entropy += s.entropy;
        out.mean.purity += s.purity;
        out.mean.fmeasure += s.fmeasure;
    }
    const double n = static_cast<double>(trials);
    out.mean.mutual_information /= n;
    out.mean.entropy /= n;
    out.mean.purity /= n;
    out.mean.fmeasure /= n;
    return out;
}

QualityScores eval_clustering(const ClusterLabels& labels, const ClusterLabels& reference) {
    if (labels.size() != reference.size()) {
        throw ShapeError("eval_clustering: " + std::to_string(labels.size()) + " labels vs " +
                         std::to_string(reference.size()) + " reference labels");
    }
    const std::size_t n = labels.size();
    QualityScores q;
    if (n == 0) return q;
    const std::size_t kc = labels.k();
    const std::size_t cc = reference.k();
    std::vector<double> table(kc * cc, 0.0), nk(kc, 0.0), nc(cc, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        table[labels[i] * cc + reference[i]] += 1.0;
        nk[labels[i]] += 1.0;
        nc[reference[i]] += 1.0;
    }
    const double total = static_cast<double>(n);
    std::size_t used_classes = 0;
    for (double c : nc) used_classes += c > 0.0 ? 1 : 0;
    const double log_base = used_classes > 1 ? std::log(static_cast<double>(used_classes)) : 1.0;

    double purity = 0.0, entropy = 0.0, mi = 0.0;
    for (std::size_t k = 0; k < kc; ++k) {
        if (nk[k] == 0.0) continue;
        double best = 0.0, h = 0.0;
        for (std::size_t c = 0; c < cc; ++c) {
            const double v = table[k * cc + c];
            best = std::max(best, v);
            if (v == 0.0) continue;
            const double p = v / nk[k];
            h -= p * std::log(p);
            mi += (v / total) * std::log((v * total) / (nk[k] * nc[c]));
        }
        purity += best;
        entropy += (nk[k] / total) * (used_classes > 1 ? h / log_base : 0.0);
    }
    q.purity = purity / total;
    q.entropy = std::max(0.0, entropy);
    q.mutual_information = std::max(0.0, mi);

    auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
    double tp = 0.0, same_cluster = 0.0, same_class = 0.0;
    for (double v : table) tp += pairs(v);
    for (double v : nk) same_cluster += pairs(v);
    for (double v : nc) same_class += pairs(v);
    if (same_cluster == 0.0 && same_class == 0.0) {
        q.fmeasure = 1.0;
    } else if (tp == 0.0) {
        q.fmeasure = 0.0;
    } else {
        const double precision = tp / same_cluster;
        const double recall = tp / same_class;
        q.fmeasure = 2.0 * precision * recall / (precision + recall);
    }
    return q;
}

double matched_accuracy(const ClusterLabels& labels, const ClusterLabels& reference) {
    if (labels.size() != reference.size()) throw ShapeError("matched_accuracy: length mismatch");
    const std::size_t k = std::max(labels.k(), reference.k());
    if (k > 8) throw InvalidArgument("matched_accuracy: more than 8 clusters");
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t hit = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) hit += perm[labels[i]] == reference[i] ? 1 : 0;
        best = std::max(best, hit);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return labels.size() == 0 ? 1.0 : static_cast<double>(best) / static_cast<double>(labels.size());
}

}  // namespace lsikit
