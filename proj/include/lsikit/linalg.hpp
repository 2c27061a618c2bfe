#pragma once

#include <cstddef>
#include <vector>

#include "lsikit/dense.hpp"
#include "lsikit/sparse.hpp"

namespace lsikit {

// Eigenpairs of a real symmetric matrix, eigenvalues non-increasing.
//
// Column k of `vectors` is the unit eigenvector for `values[k]`. Each vector
// is signed so that its largest-magnitude component is positive (the first
// such component when several share the maximum). Equal eigenvalues keep the
// order in which the Jacobi diagonal produced them (ascending position).
struct EigenPairs {
    std::vector<double> values;
    DenseMatrix vectors;
};

// Truncated SVD factors: A ≈ left · diag(values) · rightᵀ.
struct SvdFactors {
    DenseMatrix left;            // M × K, orthonormal columns
    std::vector<double> values;  // K singular values, non-increasing, >= 0
    DenseMatrix right;           // N × K, orthonormal columns

    std::size_t rank() const noexcept { return values.size(); }
};

// Full eigendecomposition by cyclic Jacobi rotations.
// Throws InvalidArgument (with the largest asymmetry found) for non-symmetric input.
EigenPairs symmetric_eigen(const DenseMatrix& h);

// The k algebraically largest eigenpairs; 1 <= k <= dim(h).
EigenPairs symmetric_eigen_topk(const DenseMatrix& h, std::size_t k);

// All min(M, N) singular triplets, computed from the eigendecomposition of the
// smaller Gram matrix. Left (or right) vectors for zero singular values are
// completed to an orthonormal set.
SvdFactors full_svd(const SparseMatrix& a);
SvdFactors full_svd(const DenseMatrix& a);

// Leading k triplets of an existing factorization (cheap; used for rank sweeps).
SvdFactors truncate(const SvdFactors& full, std::size_t k);

// Leading k singular triplets; 1 <= k <= min(M, N).
SvdFactors truncated_svd(const SparseMatrix& a, std::size_t k);
SvdFactors truncated_svd(const DenseMatrix& a, std::size_t k);

// left · diag(values) · rightᵀ.
DenseMatrix rank_k_reconstruct(const SvdFactors& f);

// max |QᵀQ - I| over all entries.
double orthonormality_error(const DenseMatrix& q);

}  // namespace lsikit
