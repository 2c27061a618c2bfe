#include "lsikit/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsikit/error.hpp"

namespace lsikit {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols) {
    for (const auto& t : triplets) {
        if (t.row >= rows || t.col >= cols) {
            throw InvalidArgument("SparseMatrix: entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                  ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
        }
        if (!std::isfinite(t.value)) throw InvalidArgument("SparseMatrix: non-finite value");
    }
    std::sort(triplets.begin(), triplets.end(),
              [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    for (std::size_t i = 1; i < triplets.size(); ++i) {
        if (triplets[i].row == triplets[i - 1].row && triplets[i].col == triplets[i - 1].col) {
            throw InvalidArgument("SparseMatrix: duplicate entry (" + std::to_string(triplets[i].row) + ", " +
                                  std::to_string(triplets[i].col) + ")");
        }
    }
    row_start_.assign(rows + 1, 0);
    col_index_.reserve(triplets.size());
    values_.reserve(triplets.size());
    for (const auto& t : triplets) {
        if (t.value == 0.0) continue;
        ++row_start_[t.row + 1];
        col_index_.push_back(t.col);
        values_.push_back(t.value);
    }
    for (std::size_t r = 0; r < rows; ++r) row_start_[r + 1] += row_start_[r];
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense) {
    std::vector<Triplet> ts;
    for (std::size_t r = 0; r < dense.rows(); ++r)
        for (std::size_t c = 0; c < dense.cols(); ++c)
            if (dense(r, c) != 0.0) ts.push_back({r, c, dense(r, c)});
    return SparseMatrix(dense.rows(), dense.cols(), std::move(ts));
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
    auto idx = row_indices(r);
    auto it = std::lower_bound(idx.begin(), idx.end(), c);
    if (it == idx.end() || *it != c) return 0.0;
    return row_values(r)[static_cast<std::size_t>(it - idx.begin())];
}

std::vector<Triplet> SparseMatrix::triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t r = 0; r < rows_; ++r) {
        auto idx = row_indices(r);
        auto val = row_values(r);
        for (std::size_t k = 0; k < idx.size(); ++k) out.push_back({r, idx[k], val[k]});
    }
    return out;
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        auto idx = row_indices(r);
        auto val = row_values(r);
        for (std::size_t k = 0; k < idx.size(); ++k) d(r, idx[k]) = val[k];
    }
    return d;
}

SparseMatrix SparseMatrix::transposed() const {
    std::vector<Triplet> ts;
    ts.reserve(nnz());
    for (std::size_t r = 0; r < rows_; ++r) {
        auto idx = row_indices(r);
        auto val = row_values(r);
        for (std::size_t k = 0; k < idx.size(); ++k) ts.push_back({idx[k], r, val[k]});
    }
    return SparseMatrix(cols_, rows_, std::move(ts));
}

std::vector<double> SparseMatrix::row_sums() const {
    std::vector<double> out(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (double v : row_values(r)) out[r] += v;
    return out;
}

std::vector<double> SparseMatrix::col_sums() const {
    std::vector<double> out(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        auto idx = row_indices(r);
        auto val = row_values(r);
        for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] += val[k];
    }
    return out;
}

std::vector<double> SparseMatrix::row_norms() const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = norm2(row_values(r));
    return out;
}

std::vector<double> SparseMatrix::col_norms() const {
    std::vector<double> sq(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        auto idx = row_indices(r);
        auto val = row_values(r);
        for (std::size_t k = 0; k < idx.size(); ++k) sq[idx[k]] += val[k] * val[k];
    }
    for (double& s : sq) s = std::sqrt(s);
    return sq;
}

SparseMatrix SparseMatrix::map_values(const std::function<double(double)>& f) const {
    auto ts = triplets();
    for (auto& t : ts) t.value = f(t.value);
    return SparseMatrix(rows_, cols_, std::move(ts));
}

SparseMatrix SparseMatrix::scale_columns(std::span<const double> factors) const {
    if (factors.size() != cols_) throw ShapeError("scale_columns: factor count differs from column count");
    auto ts = triplets();
    for (auto& t : ts) t.value *= factors[t.col];
    return SparseMatrix(rows_, cols_, std::move(ts));
}

SparseMatrix SparseMatrix::scale_rows(std::span<const double> factors) const {
    if (factors.size() != rows_) throw ShapeError("scale_rows: factor count differs from row count");
    auto ts = triplets();
    for (auto& t : ts) t.value *= factors[t.row];
    return SparseMatrix(rows_, cols_, std::move(ts));
}

double frobenius_norm(const SparseMatrix& m) {
    std::vector<double> vals;
    vals.reserve(m.nnz());
    for (const auto& t : m.triplets()) vals.push_back(t.value);
    return norm2(vals);
}

DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("multiply: inner dimensions differ");
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto orow = out.row(r);
        auto idx = a.row_indices(r);
        auto val = a.row_values(r);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            auto brow = b.row(idx[k]);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += val[k] * brow[j];
        }
    }
    return out;
}

DenseMatrix multiply_at_b(const SparseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw ShapeError("multiply_at_b: row counts differ");
    DenseMatrix out(a.cols(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto brow = b.row(r);
        auto idx = a.row_indices(r);
        auto val = a.row_values(r);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            auto orow = out.row(idx[k]);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += val[k] * brow[j];
        }
    }
    return out;
}

DenseMatrix gram_of_columns(const SparseMatrix& a) {
    DenseMatrix g(a.cols(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto idx = a.row_indices(r);
        auto val = a.row_values(r);
        for (std::size_t p = 0; p < idx.size(); ++p)
            for (std::size_t q = p; q < idx.size(); ++q) g(idx[p], idx[q]) += val[p] * val[q];
    }
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = i + 1; j < g.cols(); ++j) g(j, i) = g(i, j);
    return g;
}

}  // namespace lsikit
