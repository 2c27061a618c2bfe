#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "lsikit/dense.hpp"

namespace lsikit {

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;

    bool operator==(const Triplet&) const = default;
};

// Compressed-row sparse matrix with no stored zeros.
//
// Construction validates the triplet list: indices in range, every value
// finite, no repeated (row, col) pair. Explicit zero values are dropped.
// Column indices inside each row are kept ascending, so iteration order is
// deterministic and two matrices with the same entries compare equal.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

    static SparseMatrix from_dense(const DenseMatrix& dense);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_indices(std::size_t r) const noexcept {
        return {col_index_.data() + row_start_[r], row_start_[r + 1] - row_start_[r]};
    }
    std::span<const double> row_values(std::size_t r) const noexcept {
        return {values_.data() + row_start_[r], row_start_[r + 1] - row_start_[r]};
    }
    double at(std::size_t r, std::size_t c) const;

    // Entries in row-major order.
    std::vector<Triplet> triplets() const;
    DenseMatrix to_dense() const;
    SparseMatrix transposed() const;

    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;
    std::vector<double> row_norms() const;
    std::vector<double> col_norms() const;

    // Applies `f` to every stored value; results equal to zero are dropped.
    SparseMatrix map_values(const std::function<double(double)>& f) const;
    SparseMatrix scale_columns(std::span<const double> factors) const;
    SparseMatrix scale_rows(std::span<const double> factors) const;

    bool operator==(const SparseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_start_{0};
    std::vector<std::size_t> col_index_;
    std::vector<double> values_;
};

double frobenius_norm(const SparseMatrix& m);

// a·b for sparse a and dense b.
DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& b);
// aᵀ·b for sparse a and dense b.
DenseMatrix multiply_at_b(const SparseMatrix& a, const DenseMatrix& b);
// aᵀ·a (cols × cols), accumulated row by row.
DenseMatrix gram_of_columns(const SparseMatrix& a);

}  // namespace lsikit
