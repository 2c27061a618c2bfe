#include "lsikit/nmf.hpp"

#include <cmath>
#include <string>

#include "lsikit/error.hpp"
#include "lsikit/random.hpp"

namespace lsikit {
namespace {

constexpr double kGuard = 1e-9;

double residual_norm(const SparseMatrix& a, const DenseMatrix& b, const DenseMatrix& c) {
    DenseMatrix r = multiply(b, c);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto idx = a.row_indices(i);
        auto val = a.row_values(i);
        for (std::size_t k = 0; k < idx.size(); ++k) r(i, idx[k]) -= val[k];
    }
    return frobenius_norm(r);
}

}  // namespace

NmfResult nmf_factorize(const SparseMatrix& a, std::size_t k, std::size_t iterations, std::uint64_t seed) {
    if (k == 0) throw InvalidArgument("nmf_factorize: k must be at least 1");
    if (iterations == 0) throw InvalidArgument("nmf_factorize: iterations must be at least 1");
    for (const auto& t : a.triplets()) {
        if (t.value < 0.0) {
            throw InvalidArgument("nmf_factorize: negative entry at (" + std::to_string(t.row) + ", " +
                                  std::to_string(t.col) + ")");
        }
    }
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    Rng rng(seed);
    DenseMatrix b(m, k);
    DenseMatrix c(k, n);
    for (double& x : b.values()) x = rng.uniform_open_closed();
    for (double& x : c.values()) x = rng.uniform_open_closed();

    NmfResult out;
    out.residual_norms.reserve(iterations + 1);
    out.residual_norms.push_back(residual_norm(a, b, c));

    for (std::size_t it = 0; it < iterations; ++it) {
        // C ← C ∘ (BᵀA) / (BᵀB·C + ε)
        const DenseMatrix bta = multiply_at_b(a, b).transposed();  // K × N
        const DenseMatrix btb = multiply_at_b(b, b);
        const DenseMatrix btbc = multiply(btb, c);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < n; ++j) c(i, j) *= bta(i, j) / (btbc(i, j) + kGuard);

        // B ← B ∘ (ACᵀ) / (B·CCᵀ + ε)
        const DenseMatrix ct = c.transposed();
        const DenseMatrix act = multiply(a, ct);  // M × K
        const DenseMatrix cct = multiply(c, ct);
        const DenseMatrix bcct = multiply(b, cct);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < k; ++j) b(i, j) *= act(i, j) / (bcct(i, j) + kGuard);

        out.residual_norms.push_back(residual_norm(a, b, c));
    }
    out.basis = std::move(b);
    out.coefficients = std::move(c);
    return out;
}

}  // namespace lsikit
