#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lsikit/dense.hpp"
#include "lsikit/sparse.hpp"

namespace lsikit::mm {

// Banner and comment lines of a Matrix Market file, kept verbatim.
struct Header {
    std::string banner;
    std::vector<std::string> comments;  // without the leading '%'
};

// Reads `coordinate` (real, integer or pattern; general or symmetric) or `array` files.
SparseMatrix read_sparse(std::istream& in, Header* header = nullptr);
DenseMatrix read_dense(std::istream& in, Header* header = nullptr);

// Writes `coordinate real general`, entries in row-major order, shortest round-trip decimals.
void write_sparse(std::ostream& out, const SparseMatrix& m, const std::vector<std::string>& comments = {});
// Writes `array real general` (column-major, as the format requires).
void write_dense(std::ostream& out, const DenseMatrix& m, const std::vector<std::string>& comments = {});

SparseMatrix read_sparse_file(const std::filesystem::path& path, Header* header = nullptr);
DenseMatrix read_dense_file(const std::filesystem::path& path, Header* header = nullptr);

// Shortest decimal text that parses back to exactly `v`.
std::string format_real(double v);

}  // namespace lsikit::mm
