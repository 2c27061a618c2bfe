#include "lsikit/completion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsikit/error.hpp"
#include "parallel.hpp"

namespace lsikit {
namespace {

constexpr double kPerfect = 1.0 - 1e-12;

void require_nonnegative(const SparseMatrix& a, const char* who) {
    for (const auto& t : a.triplets()) {
        if (t.value < 0.0) {
            throw InvalidArgument(std::string(who) + ": negative entry at (" + std::to_string(t.row) + ", " +
                                  std::to_string(t.col) + ")");
        }
    }
}

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t dimension, std::vector<Triplet> entries)
    : matrix_(dimension, dimension, std::move(entries)) {
    for (const auto& t : matrix_.triplets()) {
        if (t.row == t.col) throw InvalidArgument("similarity matrix stores no diagonal");
        if (!(t.value > 0.0) || t.value > 1.0) throw InvalidArgument("similarity outside (0, 1]");
        if (matrix_.at(t.col, t.row) != t.value) throw InvalidArgument("similarity matrix is not symmetric");
    }
}

SimilarityMatrix word_similarity(const SparseMatrix& a, unsigned threads) {
    require_nonnegative(a, "word_similarity");
    const std::size_t m = a.rows();
    const std::vector<double> norms = a.row_norms();
    const SparseMatrix at = a.transposed();  // rows are documents

    // upper[p] holds (q, s_pq) for q > p.
    std::vector<std::vector<std::pair<std::size_t, double>>> upper(m);
    detail::parallel_for(m, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> acc(m, 0.0);
        std::vector<std::size_t> touched;
        for (std::size_t p = begin; p < end; ++p) {
            if (norms[p] == 0.0) continue;
            const auto docs = a.row_indices(p);
            const auto vals = a.row_values(p);
            for (std::size_t d = 0; d < docs.size(); ++d) {
                const auto terms = at.row_indices(docs[d]);
                const auto tvals = at.row_values(docs[d]);
                for (std::size_t t = 0; t < terms.size(); ++t) {
                    const std::size_t q = terms[t];
                    if (q <= p) continue;
                    if (acc[q] == 0.0) touched.push_back(q);
                    acc[q] += vals[d] * tvals[t];
                }
            }
            std::sort(touched.begin(), touched.end());
            for (std::size_t q : touched) {
                double s = acc[q] / (norms[p] * norms[q]);
                s = std::clamp(s, 0.0, 1.0);
                if (s >= kPerfect) s = 1.0;
                if (s > 0.0) upper[p].emplace_back(q, s);
                acc[q] = 0.0;
            }
            touched.clear();
        }
    });

    std::vector<Triplet> entries;
    std::vector<std::size_t> zero_rows;
    for (std::size_t p = 0; p < m; ++p) {
        if (norms[p] == 0.0) zero_rows.push_back(p);
        for (const auto& [q, s] : upper[p]) {
            entries.push_back({p, q, s});
            entries.push_back({q, p, s});
        }
    }
    SimilarityMatrix out(m, std::move(entries));
    out.set_zero_rows(std::move(zero_rows));
    return out;
}

DenseMatrix completion_step(const DenseMatrix& current, const SimilarityMatrix& s, unsigned threads) {
    if (current.rows() != s.dimension()) {
        throw ShapeError("completion_step: matrix has " + std::to_string(current.rows()) +
                         " rows, similarity has dimension " + std::to_string(s.dimension()));
    }
    DenseMatrix next = current;
    const std::size_t n = current.cols();
    detail::parallel_for(current.rows(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto out = next.row(i);
            const auto ks = s.neighbors(i);
            const auto ws = s.weights(i);
            for (std::size_t t = 0; t < ks.size(); ++t) {
                const auto src = current.row(ks[t]);
                const double w = ws[t];
                for (std::size_t j = 0; j < n; ++j) {
                    const double v = w * src[j];
                    if (v > out[j]) out[j] = v;
                }
            }
        }
    });
    return next;
}

CompletionResult complete(const SparseMatrix& initial, const CompletionOptions& options) {
    return complete(initial, word_similarity(initial, options.threads), options);
}

CompletionResult complete(const SparseMatrix& initial, const SimilarityMatrix& s, const CompletionOptions& options) {
    if (options.maxiter < 1) throw InvalidArgument("complete: maxiter must be at least 1");
    if (options.stable_window < 1) throw InvalidArgument("complete: stable window must be at least 1");
    require_nonnegative(initial, "complete");

    CompletionResult result;
    result.similarity = s;
    DenseMatrix a = initial.to_dense();
    auto& trace = result.trace;
    trace.ps_percent = perfect_pair_percentage(s);
    trace.norms.push_back(frobenius_norm(a));

    std::size_t stable = 0;
    for (std::size_t n = 1; n <= options.maxiter; ++n) {
        DenseMatrix next = completion_step(a, s, options.threads);
        trace.norms.push_back(frobenius_norm(next));
        if (next == a) {
            if (stable++ == 0) trace.conviter = n;
            if (stable >= options.stable_window) {
                trace.converged = true;
                break;
            }
        } else {
            stable = 0;
            trace.conviter = 0;
        }
        a = std::move(next);
    }
    if (!trace.converged) trace.conviter = 0;
    result.matrix = std::move(a);
    return result;
}

double perfect_pair_percentage(const SimilarityMatrix& s) {
    const std::size_t m = s.dimension();
    if (m < 2) return 0.0;
    std::size_t perfect = 0;
    for (std::size_t p = 0; p < m; ++p) {
        const auto ks = s.neighbors(p);
        const auto ws = s.weights(p);
        for (std::size_t t = 0; t < ks.size(); ++t)
            if (ks[t] > p && ws[t] >= kPerfect) ++perfect;
    }
    const double pairs = static_cast<double>(m) * static_cast<double>(m - 1) / 2.0;
    return 100.0 * static_cast<double>(perfect) / pairs;
}

}  // namespace lsikit
