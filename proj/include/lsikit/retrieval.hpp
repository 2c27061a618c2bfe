#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lsikit/dense.hpp"
#include "lsikit/sparse.hpp"

namespace lsikit {

// Q query rows over the M vocabulary terms.
struct QueryMatrix {
    std::vector<int> ids;
    DenseMatrix weights;  // Q × M, nonnegative
};

// query id → relevant document ids.
using RelevanceJudgments = std::map<int, std::set<int>>;

struct ScoredDocument {
    int doc_id = 0;
    double score = 0.0;
};

// Term-by-document matrix prepared for cosine scoring (documents are columns).
class DocumentIndex {
public:
    // doc_ids defaults to 1..N. Throws InvalidArgument on a length mismatch.
    DocumentIndex(const SparseMatrix& a, std::vector<int> doc_ids = {});
    DocumentIndex(const DenseMatrix& a, std::vector<int> doc_ids = {});

    std::size_t terms() const noexcept { return terms_; }
    std::size_t documents() const noexcept { return doc_ids_.size(); }
    const std::vector<int>& doc_ids() const noexcept { return doc_ids_; }

    // q · a_j for every document j.
    std::vector<double> dot_products(std::span<const double> q) const;
    const std::vector<double>& column_norms() const noexcept { return norms_; }

private:
    std::size_t terms_ = 0;
    std::vector<int> doc_ids_;
    std::vector<double> norms_;
    std::variant<SparseMatrix, DenseMatrix> docs_;  // one row per document
};

// Cosine of q against every document, descending; ties by ascending doc id.
// Zero-norm documents score 0. Throws InvalidArgument for a zero query and
// ShapeError when q's length differs from the term count.
std::vector<ScoredDocument> score_query(std::span<const double> q, const DocumentIndex& index);

// p̂(x) = max{ r_n / n : x ≤ r_n / r_N } over the cutoffs of `ranking`, 0 when no cutoff qualifies.
// Throws InvalidArgument for an empty relevant set or x outside [0, 1].
double pseudo_precision(std::span<const int> ranking, const std::set<int>& relevant, double x);

// (1/I) Σ_{n<I} p̂(n/(I−1)); recall levels are compared as exact fractions.
double interpolated_avg_precision(std::span<const int> ranking, const std::set<int>& relevant,
                                  std::size_t points = 11);

struct QueryResult {
    int qid = 0;
    double avgp = 0.0;
};

struct EvalReport {
    std::vector<QueryResult> per_query;
    double mean_avgp = 0.0;
    std::size_t points = 11;
    std::vector<std::string> warnings;
};

// Interpolated average precision per query and their mean. Queries without
// judgments or with a zero vector are skipped with a warning.
EvalReport evaluate(const QueryMatrix& queries, const DocumentIndex& index, const RelevanceJudgments& judgments,
                    std::size_t points = 11, unsigned threads = 0);

}  // namespace lsikit
