#include "lsikit/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lsikit/error.hpp"
#include "lsikit/graphs.hpp"

namespace lsikit {
namespace {

// Snowball English stop list, as distributed with the stemmer.
constexpr std::string_view kSnowball[] = {
    "i",        "me",       "my",         "myself",  "we",       "our",      "ours",     "ourselves", "you",
    "your",     "yours",    "yourself",   "yourselves", "he",    "him",      "his",      "himself",   "she",
    "her",      "hers",     "herself",    "it",      "its",      "itself",   "they",     "them",      "their",
    "theirs",   "themselves", "what",     "which",   "who",      "whom",     "this",     "that",      "these",
    "those",    "am",       "is",         "are",     "was",      "were",     "be",       "been",      "being",
    "have",     "has",      "had",        "having",  "do",       "does",     "did",      "doing",     "would",
    "should",   "could",    "ought",      "i'm",     "you're",   "he's",     "she's",    "it's",      "we're",
    "they're",  "i've",     "you've",     "we've",   "they've",  "i'd",      "you'd",    "he'd",      "she'd",
    "we'd",     "they'd",   "i'll",       "you'll",  "he'll",    "she'll",   "we'll",    "they'll",   "isn't",
    "aren't",   "wasn't",   "weren't",    "hasn't",  "haven't",  "hadn't",   "doesn't",  "don't",     "didn't",
    "won't",    "wouldn't", "shan't",     "shouldn't", "can't",  "cannot",   "couldn't", "mustn't",   "let's",
    "that's",   "who's",    "what's",     "here's",  "there's",  "when's",   "where's",  "why's",     "how's",
    "a",        "an",       "the",        "and",     "but",      "if",       "or",       "because",   "as",
    "until",    "while",    "of",         "at",      "by",       "for",      "with",     "about",     "against",
    "between",  "into",     "through",    "during",  "before",   "after",    "above",    "below",     "to",
    "from",     "up",       "down",       "in",      "out",      "on",       "off",      "over",      "under",
    "again",    "further",  "then",       "once",    "here",     "there",    "when",     "where",     "why",
    "how",      "all",      "any",        "both",    "each",     "few",      "more",     "most",      "other",
    "some",     "such",     "no",         "nor",     "not",      "only",     "own",      "same",      "so",
    "than",     "too",      "very",
};

bool is_letter(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

std::vector<std::string_view> split_lines(std::string_view s) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find('\n', start);
        if (end == std::string_view::npos) end = s.size();
        std::string_view line = s.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (end == s.size()) break;
        start = end + 1;
    }
    return lines;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_int(std::string_view tok, long long& out) {
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && p == tok.data() + tok.size();
}

// A field tag line is "." + one letter, optionally followed by whitespace and text.
bool field_tag(std::string_view line, char& tag, std::string_view& rest) {
    if (line.size() < 2 || line[0] != '.' || !is_letter(static_cast<unsigned char>(line[1]))) return false;
    if (line.size() > 2 && !std::isspace(static_cast<unsigned char>(line[2]))) return false;
    tag = static_cast<char>(std::toupper(static_cast<unsigned char>(line[1])));
    rest = line.size() > 2 ? trim(line.substr(2)) : std::string_view{};
    return true;
}

}  // namespace

std::vector<Document> parse_smart(std::string_view content, const std::set<char>& fields,
                                  std::vector<std::string>* warnings) {
    static const std::set<char> known = {'I', 'T', 'A', 'B', 'W', 'X', 'K', 'C', 'N'};
    std::vector<Document> docs;
    std::set<int> seen;
    std::set<char> warned;
    bool collecting = false;
    const auto lines = split_lines(content);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const std::string_view line = lines[i];
        char tag = 0;
        std::string_view rest;
        if (field_tag(line, tag, rest)) {
            if (tag == 'I') {
                long long id = 0;
                if (rest.empty() || !parse_int(rest, id)) throw ParseError("record without a numeric .I id", lineno);
                if (id <= 0 || id > INT32_MAX) throw ParseError("document id must be positive", lineno);
                if (!seen.insert(static_cast<int>(id)).second) {
                    throw ParseError("duplicate document id " + std::to_string(id), lineno);
                }
                docs.push_back({static_cast<int>(id), {}});
                collecting = false;
                continue;
            }
            if (docs.empty()) throw ParseError("field tag before the first .I record", lineno);
            if (!known.count(tag) && warned.insert(tag).second && warnings) {
                warnings->push_back("line " + std::to_string(lineno) + ": unknown field tag ." + std::string(1, tag) +
                                    " ignored");
            }
            collecting = fields.count(tag) > 0;
            if (collecting && !rest.empty()) {
                auto& text = docs.back().text;
                if (!text.empty()) text += ' ';
                text += rest;
            }
            continue;
        }
        if (docs.empty()) {
            if (trim(line).empty()) continue;
            throw ParseError("text before the first .I record", lineno);
        }
        if (!collecting) continue;
        const std::string_view body = trim(line);
        if (body.empty()) continue;
        auto& text = docs.back().text;
        if (!text.empty()) text += ' ';
        text += body;
    }
    return docs;
}

void renumber_sequential(std::vector<Document>& docs) {
    for (std::size_t i = 0; i < docs.size(); ++i) docs[i].id = static_cast<int>(i + 1);
}

RelevanceJudgments parse_qrels(std::string_view content) {
    struct Row {
        long long q, second, third;
        bool has_third;
        std::size_t line;
    };
    std::vector<Row> rows;
    const auto lines = split_lines(content);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::istringstream is{std::string(lines[i])};
        std::vector<std::string> toks;
        for (std::string t; is >> t;) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks.size() < 2) throw ParseError("relevance row needs a query id and a document id", i + 1);
        Row r{0, 0, 0, false, i + 1};
        if (!parse_int(toks[0], r.q) || !parse_int(toks[1], r.second)) {
            throw ParseError("non-numeric relevance row", i + 1);
        }
        if (toks.size() >= 3) {
            long long v = 0;
            // The third column may be a relevance grade like "1" or "0.000000".
            r.has_third = parse_int(toks[2], v);
            r.third = v;
        }
        rows.push_back(r);
    }
    const bool column3 = !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const Row& r) {
        return r.second == 0 && r.has_third;
    });
    RelevanceJudgments out;
    for (const auto& r : rows) {
        const long long doc = column3 ? r.third : r.second;
        if (r.q <= 0 || doc <= 0) throw ParseError("query and document ids must be positive", r.line);
        out[static_cast<int>(r.q)].insert(static_cast<int>(doc));
    }
    return out;
}

const std::set<std::string>& english_stoplist() {
    static const std::set<std::string> list(std::begin(kSnowball), std::end(kSnowball));
    return list;
}

std::set<std::string> load_stoplist(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open stop list " + path.string());
    std::set<std::string> out;
    for (std::string line; std::getline(in, line);) {
        std::string_view t = trim(line);
        if (t.empty() || t[0] == '|' || t[0] == '#') continue;
        std::string word(t.substr(0, t.find_first_of(" \t|")));
        std::transform(word.begin(), word.end(), word.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        out.insert(std::move(word));
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text, const std::set<std::string>& stoplist,
                                  std::size_t min_length) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.size() >= min_length && !stoplist.count(cur)) out.push_back(cur);
        cur.clear();
    };
    for (unsigned char c : text) {
        if (is_letter(c)) cur.push_back(static_cast<char>(std::tolower(c)));
        else if (!cur.empty()) flush();
    }
    if (!cur.empty()) flush();
    return out;
}

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end());
    terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
}

std::size_t Vocabulary::find(const std::string& term) const {
    const auto it = index_.find(term);
    return it == index_.end() ? terms_.size() : it->second;
}

double TermDocMatrix::nnz_percent() const {
    const double cells = static_cast<double>(matrix.rows()) * static_cast<double>(matrix.cols());
    return cells == 0.0 ? 0.0 : 100.0 * static_cast<double>(matrix.nnz()) / cells;
}

TermDocMatrix build_matrix(std::vector<Document> docs, const TokenizerConfig& config) {
    if (docs.empty()) throw InvalidArgument("build_matrix: no documents");
    std::stable_sort(docs.begin(), docs.end(), [](const Document& a, const Document& b) { return a.id < b.id; });
    std::vector<std::vector<std::string>> tokens(docs.size());
    std::vector<std::string> all;
    for (std::size_t j = 0; j < docs.size(); ++j) {
        tokens[j] = tokenize(docs[j].text, config.stoplist, config.min_length);
        all.insert(all.end(), tokens[j].begin(), tokens[j].end());
    }
    TermDocMatrix out;
    out.vocabulary = Vocabulary(std::move(all));
    if (out.vocabulary.size() == 0) throw InvalidArgument("build_matrix: empty vocabulary");
    std::vector<Triplet> ts;
    for (std::size_t j = 0; j < docs.size(); ++j) {
        std::map<std::size_t, double> counts;
        for (const auto& t : tokens[j]) counts[out.vocabulary.find(t)] += 1.0;
        for (const auto& [i, c] : counts) ts.push_back({i, j, c});
        out.doc_ids.push_back(docs[j].id);
    }
    out.matrix = SparseMatrix(out.vocabulary.size(), docs.size(), std::move(ts));
    return out;
}

TermDocMatrix log_scale(TermDocMatrix a) {
    for (const auto& t : a.matrix.triplets())
        if (t.value < 0.0) throw InvalidArgument("log_scale: negative entry");
    a.matrix = a.matrix.map_values([](double v) { return std::log1p(v); });
    return a;
}

TermDocMatrix column_normalize(TermDocMatrix a) {
    a.matrix = gram_degree_normalize(a.matrix);
    return a;
}

QueryMatrix build_query_matrix(const std::vector<Document>& queries, const Vocabulary& vocab,
                               const TokenizerConfig& config, bool log_scaled, std::vector<std::string>* warnings) {
    if (vocab.size() == 0) throw InvalidArgument("build_query_matrix: empty vocabulary");
    QueryMatrix q;
    q.weights = DenseMatrix(queries.size(), vocab.size());
    for (std::size_t r = 0; r < queries.size(); ++r) {
        q.ids.push_back(queries[r].id);
        bool any = false;
        for (const auto& t : tokenize(queries[r].text, config.stoplist, config.min_length)) {
            const std::size_t i = vocab.find(t);
            if (i == vocab.size()) continue;
            q.weights(r, i) += 1.0;
            any = true;
        }
        if (!any && warnings) warnings->push_back("query " + std::to_string(queries[r].id) + " matches no term");
        if (log_scaled)
            for (double& v : q.weights.row(r)) v = std::log1p(v);
    }
    return q;
}

}  // namespace lsikit
