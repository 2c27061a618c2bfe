#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lsikit/dense.hpp"
#include "lsikit/sparse.hpp"

namespace lsikit {

// Symmetric row-cosine matrix with the diagonal and all zeros left out.
// Both triangles are stored, so row i lists every k with s_ik > 0.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    // Throws InvalidArgument unless `entries` is exactly symmetric, off-diagonal and in (0, 1].
    SimilarityMatrix(std::size_t dimension, std::vector<Triplet> entries);

    std::size_t dimension() const noexcept { return matrix_.rows(); }
    std::size_t nnz() const noexcept { return matrix_.nnz(); }
    std::span<const std::size_t> neighbors(std::size_t i) const { return matrix_.row_indices(i); }
    std::span<const double> weights(std::size_t i) const { return matrix_.row_values(i); }
    double at(std::size_t p, std::size_t q) const { return matrix_.at(p, q); }
    const SparseMatrix& matrix() const noexcept { return matrix_; }

    // Rows of the source matrix that were entirely zero.
    const std::vector<std::size_t>& zero_rows() const noexcept { return zero_rows_; }
    void set_zero_rows(std::vector<std::size_t> rows) { zero_rows_ = std::move(rows); }

private:
    SparseMatrix matrix_;
    std::vector<std::size_t> zero_rows_;
};

// Cosine similarity between every pair of rows of a nonnegative matrix.
// Values within 1e-12 of 1 are stored as exactly 1. Zero rows get no entries
// and are listed in zero_rows().
SimilarityMatrix word_similarity(const SparseMatrix& a, unsigned threads = 0);

// One snapshot update: out_ij = max(a_ij, max_{k≠i} s_ik · a_kj), reading only `current`.
DenseMatrix completion_step(const DenseMatrix& current, const SimilarityMatrix& s, unsigned threads = 0);

struct CompletionOptions {
    std::size_t maxiter = 100;
    std::size_t stable_window = 3;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct CompletionTrace {
    std::vector<double> norms;  // ‖A^(n)‖_F for n = 0, 1, ...
    std::size_t conviter = 0;   // 0 when not converged
    bool converged = false;
    double ps_percent = 0.0;
};

struct CompletionResult {
    DenseMatrix matrix;
    CompletionTrace trace;
    SimilarityMatrix similarity;
};

// Iterates completion_step from `initial` until the matrix is bitwise unchanged
// for `stable_window` consecutive iterations or `maxiter` steps have run.
// conviter is the first iteration n with A^(n) == A^(n−1) of the final stable run.
CompletionResult complete(const SparseMatrix& initial, const CompletionOptions& options = {});
CompletionResult complete(const SparseMatrix& initial, const SimilarityMatrix& s, const CompletionOptions& options = {});

// 100 · #{p < q : s_pq ≥ 1 − 1e-12} / (M(M−1)/2); 0 when M < 2.
double perfect_pair_percentage(const SimilarityMatrix& s);

}  // namespace lsikit
