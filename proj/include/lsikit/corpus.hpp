#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lsikit/retrieval.hpp"
#include "lsikit/sparse.hpp"

namespace lsikit {

struct Document {
    int id = 0;
    std::string text;
    bool operator==(const Document&) const = default;
};

// Splits SMART markup into documents. A record starts with ".I <id>"; its text
// is the bodies of the `fields` sections (e.g. 'W', 'T') joined in file order.
// Unknown field tags are skipped with a warning. Throws ParseError for a
// missing, malformed or duplicate id and for text before the first record.
std::vector<Document> parse_smart(std::string_view content, const std::set<char>& fields = {'W'},
                                  std::vector<std::string>* warnings = nullptr);

// Replaces document ids with 1, 2, ... in file order (Cranfield numbers its
// queries non-contiguously while its qrels count them sequentially).
void renumber_sequential(std::vector<Document>& docs);

// Whitespace-separated relevance rows: query id, then document id in column 2,
// or in column 3 when column 2 is 0 on every row. Throws ParseError with the line.
RelevanceJudgments parse_qrels(std::string_view content);

// The Snowball English stop list.
const std::set<std::string>& english_stoplist();
// One term per line; blank lines and lines starting with '|' or '#' are ignored.
std::set<std::string> load_stoplist(const std::filesystem::path& path);

struct TokenizerConfig {
    std::set<std::string> stoplist = english_stoplist();
    std::size_t min_length = 2;
};

// Lowercases, splits on every non-letter, drops stop words and short tokens.
std::vector<std::string> tokenize(std::string_view text, const std::set<std::string>& stoplist,
                                  std::size_t min_length = 2);

class Vocabulary {
public:
    Vocabulary() = default;
    // Sorts and deduplicates.
    explicit Vocabulary(std::vector<std::string> terms);

    std::size_t size() const noexcept { return terms_.size(); }
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::string& term(std::size_t i) const { return terms_.at(i); }
    // Index of `term`, or size() when absent.
    std::size_t find(const std::string& term) const;

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct TermDocMatrix {
    SparseMatrix matrix;  // M terms × N documents
    Vocabulary vocabulary;
    std::vector<int> doc_ids;

    double nnz_percent() const;
};

// Raw term counts, vocabulary in lexicographic order, documents sorted by id.
// Throws InvalidArgument for no documents or an empty vocabulary.
TermDocMatrix build_matrix(std::vector<Document> docs, const TokenizerConfig& config = {});

// A_ij ← ln(A_ij + 1).
TermDocMatrix log_scale(TermDocMatrix a);

// A · D^{−1/2} with D = diag(AᵀA·e).
TermDocMatrix column_normalize(TermDocMatrix a);

// Query-term counts restricted to the vocabulary, optionally ln(x + 1) scaled.
// Queries that match no term become zero rows and are reported in `warnings`.
QueryMatrix build_query_matrix(const std::vector<Document>& queries, const Vocabulary& vocab,
                               const TokenizerConfig& config = {}, bool log_scaled = true,
                               std::vector<std::string>* warnings = nullptr);

}  // namespace lsikit
