#include "lsikit/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lsikit/error.hpp"

namespace lsikit::mm {
namespace {

enum class Layout { Coordinate, Array };
enum class Field { Real, Integer, Pattern };
enum class Symmetry { General, Symmetric };

struct Parsed {
    Layout layout;
    Field field;
    Symmetry symmetry;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Triplet> entries;  // coordinate
    std::vector<double> dense;     // array, row-major
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_number(const std::string& tok, std::size_t line) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) throw ParseError("bad number '" + tok + "'", line);
    return v;
}

std::size_t parse_index(const std::string& tok, std::size_t line) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) throw ParseError("bad integer '" + tok + "'", line);
    return v;
}

Parsed parse(std::istream& in, Header* header) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty Matrix Market input", 0);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream banner(line);
    std::string tag, object, layout, field, symmetry;
    banner >> tag >> object >> layout >> field >> symmetry;
    if (tag != "%%MatrixMarket" || lower(object) != "matrix") throw ParseError("missing %%MatrixMarket banner", 1);

    Parsed p;
    layout = lower(layout);
    field = lower(field);
    symmetry = lower(symmetry);
    if (layout == "coordinate") p.layout = Layout::Coordinate;
    else if (layout == "array") p.layout = Layout::Array;
    else throw ParseError("unsupported layout '" + layout + "'", 1);
    if (field == "real" || field == "double") p.field = Field::Real;
    else if (field == "integer") p.field = Field::Integer;
    else if (field == "pattern" && p.layout == Layout::Coordinate) p.field = Field::Pattern;
    else throw ParseError("unsupported field '" + field + "'", 1);
    if (symmetry == "general") p.symmetry = Symmetry::General;
    else if (symmetry == "symmetric") p.symmetry = Symmetry::Symmetric;
    else throw ParseError("unsupported symmetry '" + symmetry + "'", 1);

    if (header) {
        header->banner = line;
        header->comments.clear();
    }
    // Comments, then the size line.
    std::vector<std::string> toks;
    auto tokenize = [&](const std::string& s) {
        toks.clear();
        std::istringstream is(s);
        std::string t;
        while (is >> t) toks.push_back(t);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '%') {
            if (header) header->comments.push_back(line.substr(1));
            continue;
        }
        tokenize(line);
        if (toks.empty()) continue;
        break;
    }
    const std::size_t want = p.layout == Layout::Coordinate ? 3 : 2;
    if (toks.size() != want) throw ParseError("bad size line", lineno);
    p.rows = parse_index(toks[0], lineno);
    p.cols = parse_index(toks[1], lineno);
    const std::size_t count = p.layout == Layout::Coordinate ? parse_index(toks[2], lineno) : p.rows * p.cols;
    if (p.layout == Layout::Array && p.symmetry == Symmetry::Symmetric) {
        throw ParseError("symmetric array layout is not supported", lineno);
    }

    std::size_t seen = 0;
    if (p.layout == Layout::Array) p.dense.assign(p.rows * p.cols, 0.0);
    while (seen < count && std::getline(in, line)) {
        ++lineno;
        tokenize(line);
        if (toks.empty() || toks[0][0] == '%') continue;
        if (p.layout == Layout::Array) {
            if (toks.size() != 1) throw ParseError("expected one value per line", lineno);
            const std::size_t r = seen % p.rows;
            const std::size_t c = seen / p.rows;
            p.dense[r * p.cols + c] = parse_number(toks[0], lineno);
        } else {
            const std::size_t need = p.field == Field::Pattern ? 2 : 3;
            if (toks.size() != need) throw ParseError("expected " + std::to_string(need) + " fields", lineno);
            const std::size_t r = parse_index(toks[0], lineno);
            const std::size_t c = parse_index(toks[1], lineno);
            if (r == 0 || c == 0 || r > p.rows || c > p.cols) throw ParseError("index out of range", lineno);
            const double v = p.field == Field::Pattern ? 1.0 : parse_number(toks[2], lineno);
            p.entries.push_back({r - 1, c - 1, v});
            if (p.symmetry == Symmetry::Symmetric && r != c) p.entries.push_back({c - 1, r - 1, v});
        }
        ++seen;
    }
    if (seen != count) {
        throw ParseError("expected " + std::to_string(count) + " entries, found " + std::to_string(seen), lineno);
    }
    return p;
}

}  // namespace

std::string format_real(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

SparseMatrix read_sparse(std::istream& in, Header* header) {
    Parsed p = parse(in, header);
    if (p.layout == Layout::Array) return SparseMatrix::from_dense(DenseMatrix(p.rows, p.cols, std::move(p.dense)));
    return SparseMatrix(p.rows, p.cols, std::move(p.entries));
}

DenseMatrix read_dense(std::istream& in, Header* header) {
    Parsed p = parse(in, header);
    if (p.layout == Layout::Array) return DenseMatrix(p.rows, p.cols, std::move(p.dense));
    return SparseMatrix(p.rows, p.cols, std::move(p.entries)).to_dense();
}

void write_sparse(std::ostream& out, const SparseMatrix& m, const std::vector<std::string>& comments) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    for (const auto& c : comments) out << '%' << c << '\n';
    out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
    for (const auto& t : m.triplets()) out << t.row + 1 << ' ' << t.col + 1 << ' ' << format_real(t.value) << '\n';
}

void write_dense(std::ostream& out, const DenseMatrix& m, const std::vector<std::string>& comments) {
    out << "%%MatrixMarket matrix array real general\n";
    for (const auto& c : comments) out << '%' << c << '\n';
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (std::size_t r = 0; r < m.rows(); ++r) out << format_real(m(r, c)) << '\n';
}

SparseMatrix read_sparse_file(const std::filesystem::path& path, Header* header) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return read_sparse(in, header);
}

DenseMatrix read_dense_file(const std::filesystem::path& path, Header* header) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return read_dense(in, header);
}

}  // namespace lsikit::mm
