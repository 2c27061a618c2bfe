#include "lsikit/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lsikit/error.hpp"
#include "parallel.hpp"

namespace lsikit {
namespace {

std::vector<int> default_ids(std::vector<int> ids, std::size_t n) {
    if (ids.empty()) {
        ids.resize(n);
        std::iota(ids.begin(), ids.end(), 1);
    }
    if (ids.size() != n) {
        throw InvalidArgument("document index: " + std::to_string(ids.size()) + " ids for " + std::to_string(n) +
                              " documents");
    }
    return ids;
}

// p̂ at recall level num/den, compared as r_n·den ≥ num·r_N.
double pseudo_precision_exact(std::span<const int> ranking, const std::set<int>& relevant, std::size_t num,
                              std::size_t den) {
    const std::size_t total = relevant.size();
    std::size_t hits = 0;
    double best = 0.0;
    for (std::size_t n = 0; n < ranking.size(); ++n) {
        if (relevant.count(ranking[n])) ++hits;
        if (hits * den >= num * total) best = std::max(best, static_cast<double>(hits) / static_cast<double>(n + 1));
    }
    return best;
}

}  // namespace

DocumentIndex::DocumentIndex(const SparseMatrix& a, std::vector<int> doc_ids)
    : terms_(a.rows()), doc_ids_(default_ids(std::move(doc_ids), a.cols())), norms_(a.col_norms()),
      docs_(a.transposed()) {}

DocumentIndex::DocumentIndex(const DenseMatrix& a, std::vector<int> doc_ids)
    : terms_(a.rows()), doc_ids_(default_ids(std::move(doc_ids), a.cols())), docs_(a.transposed()) {
    const auto& d = std::get<DenseMatrix>(docs_);
    norms_.resize(d.rows());
    for (std::size_t j = 0; j < d.rows(); ++j) norms_[j] = norm2(d.row(j));
}

std::vector<double> DocumentIndex::dot_products(std::span<const double> q) const {
    if (q.size() != terms_) {
        throw ShapeError("query has " + std::to_string(q.size()) + " terms, index has " + std::to_string(terms_));
    }
    std::vector<double> out(documents(), 0.0);
    if (const auto* s = std::get_if<SparseMatrix>(&docs_)) {
        for (std::size_t j = 0; j < out.size(); ++j) {
            const auto idx = s->row_indices(j);
            const auto val = s->row_values(j);
            double acc = 0.0;
            for (std::size_t t = 0; t < idx.size(); ++t) acc += val[t] * q[idx[t]];
            out[j] = acc;
        }
    } else {
        const auto& d = std::get<DenseMatrix>(docs_);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = dot(d.row(j), q);
    }
    return out;
}

std::vector<ScoredDocument> score_query(std::span<const double> q, const DocumentIndex& index) {
    const double qn = norm2(q);
    if (q.size() == index.terms() && qn == 0.0) throw InvalidArgument("query vector is zero");
    const std::vector<double> dots = index.dot_products(q);
    const auto& norms = index.column_norms();
    std::vector<ScoredDocument> ranked(dots.size());
    for (std::size_t j = 0; j < dots.size(); ++j) {
        ranked[j].doc_id = index.doc_ids()[j];
        ranked[j].score = norms[j] == 0.0 ? 0.0 : dots[j] / (qn * norms[j]);
    }
    std::sort(ranked.begin(), ranked.end(), [](const ScoredDocument& x, const ScoredDocument& y) {
        if (x.score != y.score) return x.score > y.score;
        return x.doc_id < y.doc_id;
    });
    return ranked;
}

double pseudo_precision(std::span<const int> ranking, const std::set<int>& relevant, double x) {
    if (relevant.empty()) throw InvalidArgument("pseudo_precision: empty relevant set");
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("pseudo_precision: recall level outside [0, 1]");
    const double total = static_cast<double>(relevant.size());
    std::size_t hits = 0;
    double best = 0.0;
    for (std::size_t n = 0; n < ranking.size(); ++n) {
        if (relevant.count(ranking[n])) ++hits;
        if (x <= static_cast<double>(hits) / total)
            best = std::max(best, static_cast<double>(hits) / static_cast<double>(n + 1));
    }
    return best;
}

double interpolated_avg_precision(std::span<const int> ranking, const std::set<int>& relevant, std::size_t points) {
    if (points < 2) throw InvalidArgument("interpolated_avg_precision: need at least 2 points");
    if (relevant.empty()) throw InvalidArgument("interpolated_avg_precision: empty relevant set");
    double sum = 0.0;
    for (std::size_t n = 0; n < points; ++n) sum += pseudo_precision_exact(ranking, relevant, n, points - 1);
    return sum / static_cast<double>(points);
}

EvalReport evaluate(const QueryMatrix& queries, const DocumentIndex& index, const RelevanceJudgments& judgments,
                    std::size_t points, unsigned threads) {
    if (points < 2) throw InvalidArgument("evaluate: need at least 2 points");
    const std::size_t nq = queries.weights.rows();
    if (queries.ids.size() != nq) throw ShapeError("evaluate: query ids and query rows differ in count");
    if (queries.weights.cols() != index.terms()) {
        throw ShapeError("evaluate: queries have " + std::to_string(queries.weights.cols()) +
                         " term columns, index has " + std::to_string(index.terms()) + " term rows");
    }
    const std::set<int> known(index.doc_ids().begin(), index.doc_ids().end());

    EvalReport report;
    report.points = points;
    std::vector<double> values(nq, 0.0);
    std::vector<char> used(nq, 0);
    std::vector<std::string> notes(nq);
    detail::parallel_for(nq, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const int qid = queries.ids[i];
            const auto it = judgments.find(qid);
            if (it == judgments.end() || it->second.empty()) {
                notes[i] = "query " + std::to_string(qid) + " has no relevance judgments; skipped";
                continue;
            }
            const auto row = queries.weights.row(i);
            if (norm2(row) == 0.0) {
                notes[i] = "query " + std::to_string(qid) + " matches no vocabulary term; skipped";
                continue;
            }
            std::size_t missing = 0;
            for (int d : it->second) missing += known.count(d) ? 0 : 1;
            if (missing) {
                notes[i] = "query " + std::to_string(qid) + " judges " + std::to_string(missing) +
                           " document(s) absent from the index";
            }
            const auto ranked = score_query(row, index);
            std::vector<int> order(ranked.size());
            for (std::size_t j = 0; j < ranked.size(); ++j) order[j] = ranked[j].doc_id;
            values[i] = interpolated_avg_precision(order, it->second, points);
            used[i] = 1;
        }
    });
    double sum = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        if (!notes[i].empty()) report.warnings.push_back(notes[i]);
        if (!used[i]) continue;
        report.per_query.push_back({queries.ids[i], values[i]});
        sum += values[i];
    }
    if (!report.per_query.empty()) report.mean_avgp = sum / static_cast<double>(report.per_query.size());
    return report;
}

}  // namespace lsikit
