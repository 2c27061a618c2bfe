#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lsikit/dense.hpp"
#include "lsikit/sparse.hpp"

namespace lsikit {

struct NmfResult {
    DenseMatrix basis;         // M × K
    DenseMatrix coefficients;  // K × N
    // ‖A − BC‖_F before the first update and after each iteration.
    std::vector<double> residual_norms;
};

// Lee–Seung multiplicative updates for the Frobenius objective.
//
// Factors start from seeded uniform values in (0, 1]; every denominator is
// offset by 1e-9. Throws InvalidArgument for negative input, k == 0 or
// iterations == 0.
NmfResult nmf_factorize(const SparseMatrix& a, std::size_t k, std::size_t iterations, std::uint64_t seed);

}  // namespace lsikit
