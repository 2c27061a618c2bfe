#include "lsikit/graphs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>

#include "lsikit/error.hpp"

namespace lsikit {
namespace {

std::string index_list(const std::vector<std::size_t>& idx) {
    std::ostringstream os;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i == 8) {
            os << ", ... (" << idx.size() << " total)";
            break;
        }
        os << (i ? ", " : "") << idx[i];
    }
    return os.str();
}

bool is_gw(Objective o) { return o == Objective::GWAssoc || o == Objective::GWCuts; }
bool is_normalized(Objective o) { return o == Objective::NAssoc || o == Objective::NCuts; }
bool is_cut(Objective o) { return o == Objective::GWCuts || o == Objective::NCuts || o == Objective::RCuts; }

std::vector<double> inverse_sqrt(const std::vector<double>& w, const char* what) {
    std::vector<std::size_t> bad;
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0)) bad.push_back(i);
        else out[i] = 1.0 / std::sqrt(w[i]);
    }
    if (!bad.empty()) throw InvalidArgument(std::string(what) + " not positive at index " + index_list(bad));
    return out;
}

}  // namespace

std::string_view to_string(Objective o) {
    switch (o) {
        case Objective::GWAssoc: return "gwassoc";
        case Objective::GWCuts: return "gwcuts";
        case Objective::NAssoc: return "nassoc";
        case Objective::NCuts: return "ncuts";
        case Objective::RAssoc: return "rassoc";
        case Objective::RCuts: return "rcuts";
    }
    return "?";
}

Objective parse_objective(std::string_view name) {
    std::string n(name);
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (Objective o : {Objective::GWAssoc, Objective::GWCuts, Objective::NAssoc, Objective::NCuts, Objective::RAssoc,
                        Objective::RCuts}) {
        if (to_string(o) == n) return o;
    }
    throw InvalidArgument("unknown objective '" + std::string(name) + "'");
}

AffinityGraph::AffinityGraph(SparseMatrix weights, Objective objective, std::vector<double> explicit_weights)
    : weights_(std::move(weights)), objective_(objective), phi_(std::move(explicit_weights)) {
    if (weights_.rows() != weights_.cols()) throw InvalidArgument("affinity matrix must be square");
    for (const auto& t : weights_.triplets()) {
        if (t.value < 0.0) throw InvalidArgument("affinity matrix has a negative entry");
        if (std::abs(t.value - weights_.at(t.col, t.row)) > 1e-12) {
            throw InvalidArgument("affinity matrix is not symmetric at (" + std::to_string(t.row) + ", " +
                                  std::to_string(t.col) + ")");
        }
    }
    if (is_gw(objective_)) {
        if (phi_.size() != weights_.rows()) {
            throw InvalidArgument("general weighted objectives need an explicit weight per vertex");
        }
        inverse_sqrt(phi_, "explicit vertex weight");
    } else if (!phi_.empty()) {
        throw InvalidArgument("explicit weights are only meaningful for GWAssoc/GWCuts");
    }
}

void KernelSpec::validate() const {
    switch (kind) {
        case KernelKind::Gaussian:
            if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("gaussian kernel needs alpha > 0");
            break;
        case KernelKind::Polynomial:
            if (degree < 1) throw InvalidArgument("polynomial kernel needs degree >= 1");
            if (!std::isfinite(c)) throw InvalidArgument("polynomial kernel needs finite c");
            break;
        case KernelKind::Sigmoid:
            if (!std::isfinite(c) || !std::isfinite(theta)) throw InvalidArgument("sigmoid kernel needs finite c, theta");
            break;
    }
}

double KernelSpec::operator()(std::span<const double> a, std::span<const double> b) const {
    switch (kind) {
        case KernelKind::Gaussian: {
            double d2 = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
            return std::exp(-d2 / (2.0 * alpha * alpha));
        }
        case KernelKind::Polynomial: return std::pow(dot(a, b) + c, degree);
        case KernelKind::Sigmoid: return std::tanh(c * dot(a, b) + theta);
    }
    return 0.0;
}

AffinityGraph kernel_affinity(const DenseMatrix& points, const KernelSpec& spec, Objective objective) {
    spec.validate();
    const std::size_t n = points.cols();
    const DenseMatrix cols = points.transposed();  // rows are points
    std::vector<Triplet> ts;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = spec(cols.row(i), cols.row(j));
            if (v < 0.0) {
                throw InvalidArgument("kernel produced a negative affinity between points " + std::to_string(i) +
                                      " and " + std::to_string(j));
            }
            if (v == 0.0) continue;
            ts.push_back({i, j, v});
            if (i != j) ts.push_back({j, i, v});
        }
    }
    return AffinityGraph(SparseMatrix(n, n, std::move(ts)), objective);
}

std::vector<double> degree_vector(const AffinityGraph& g) { return g.weights().row_sums(); }

DenseMatrix normalize_affinity(const AffinityGraph& g) {
    const std::size_t n = g.size();
    const std::vector<double> degree = degree_vector(g);
    std::vector<double> phi;
    switch (g.objective()) {
        case Objective::GWAssoc:
        case Objective::GWCuts: phi = g.explicit_weights(); break;
        case Objective::NAssoc:
        case Objective::NCuts: phi = degree; break;
        case Objective::RAssoc:
        case Objective::RCuts: phi.assign(n, 1.0); break;
    }
    const std::vector<double> scale =
        inverse_sqrt(phi, is_normalized(g.objective()) ? "vertex degree (isolated vertex)" : "vertex weight");

    DenseMatrix affinity = g.weights().to_dense();
    // Cut objectives: affinity Φ − L = Φ − D + W (equal to W when Φ = D).
    if (is_cut(g.objective()) && !is_normalized(g.objective())) {
        for (std::size_t i = 0; i < n; ++i) affinity(i, i) += phi[i] - degree[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) affinity(i, j) *= scale[i] * scale[j];
    return affinity;
}

AffinityGraph bipartite_embed(const SparseMatrix& a, Objective objective) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    std::vector<Triplet> ts;
    ts.reserve(2 * a.nnz());
    for (const auto& t : a.triplets()) {
        if (t.value < 0.0) throw InvalidArgument("bipartite_embed: negative entry");
        ts.push_back({t.row, m + t.col, t.value});
        ts.push_back({m + t.col, t.row, t.value});
    }
    if (is_gw(objective)) throw InvalidArgument("bipartite_embed: GW objectives need explicit weights; embed first");
    return AffinityGraph(SparseMatrix(m + n, m + n, std::move(ts)), objective);
}

DenseMatrix bipartite_normalize(const SparseMatrix& a) {
    for (const auto& t : a.triplets())
        if (t.value < 0.0) throw InvalidArgument("bipartite_normalize: negative entry");
    const std::vector<double> rs = inverse_sqrt(a.row_sums(), "row sum");
    const std::vector<double> cs = inverse_sqrt(a.col_sums(), "column sum");
    DenseMatrix out(a.rows(), a.cols());
    for (const auto& t : a.triplets()) out(t.row, t.col) = t.value * rs[t.row] * cs[t.col];
    return out;
}

DirectedWeights directed_weights(const SparseMatrix& b, Objective objective, std::span<const double> explicit_combined) {
    if (b.rows() != b.cols()) throw InvalidArgument("directed affinity matrix must be square");
    const std::size_t n = b.rows();
    DirectedWeights w;
    if (is_normalized(objective)) {
        w.in = b.col_sums();
        w.out = b.row_sums();
        std::vector<std::size_t> bad;
        for (std::size_t i = 0; i < n; ++i)
            if (!(w.in[i] > 0.0) || !(w.out[i] > 0.0)) bad.push_back(i);
        if (!bad.empty()) throw InvalidArgument("vertex with zero in- or out-degree: " + index_list(bad));
        w.combined.resize(n);
        for (std::size_t i = 0; i < n; ++i) w.combined[i] = std::sqrt(w.in[i] * w.out[i]);
    } else if (is_gw(objective)) {
        if (explicit_combined.size() != n) throw InvalidArgument("GW objectives need an explicit combined weight");
        w.combined.assign(explicit_combined.begin(), explicit_combined.end());
        inverse_sqrt(w.combined, "explicit combined weight");
    } else {
        w.in.assign(n, 1.0);
        w.out.assign(n, 1.0);
        w.combined.assign(n, 1.0);
    }
    return w;
}

DenseMatrix directed_symmetrize(const SparseMatrix& b, Objective objective, std::span<const double> explicit_combined) {
    for (const auto& t : b.triplets())
        if (t.value < 0.0) throw InvalidArgument("directed_symmetrize: negative entry");
    const DirectedWeights w = directed_weights(b, objective, explicit_combined);
    const std::vector<double> scale = inverse_sqrt(w.combined, "combined weight");
    const std::size_t n = b.rows();
    DenseMatrix out(n, n);
    for (const auto& t : b.triplets()) out(t.row, t.col) += t.value;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = (out(i, j) + (i == j ? out(i, j) : out(j, i))) * scale[i] * scale[j];
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

DenseMatrix diagonal_shift(const DenseMatrix& h, double sigma) {
    if (h.rows() != h.cols()) throw ShapeError("diagonal_shift: matrix is not square");
    DenseMatrix out = h;
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) += sigma;
    return out;
}

SparseMatrix gram_degree_normalize(const SparseMatrix& a) {
    // (AᵀA e)_j = a_j · (A e): column j dotted with the row-sum vector.
    const std::vector<double> rs = a.row_sums();
    std::vector<double> d(a.cols(), 0.0);
    for (const auto& t : a.triplets()) d[t.col] += t.value * rs[t.row];
    std::vector<std::size_t> bad;
    for (std::size_t j = 0; j < d.size(); ++j)
        if (!(d[j] > 0.0)) bad.push_back(j);
    if (!bad.empty()) throw InvalidArgument("column normalization undefined for column " + index_list(bad));
    std::vector<double> f(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) f[j] = 1.0 / std::sqrt(d[j]);
    return a.scale_columns(f);
}

}  // namespace lsikit
