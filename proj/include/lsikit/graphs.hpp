#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "lsikit/dense.hpp"
#include "lsikit/sparse.hpp"

namespace lsikit {

// Graph clustering objectives and their (affinity, weight) pairs:
//
//   GWAssoc  W       Φ        NAssoc  W       D        RAssoc  W       I
//   GWCuts   Φ − L   Φ        NCuts   D − L   D        RCuts   I − L   I
//
// with D = diag(row sums of W) and L = D − W.
enum class Objective { GWAssoc, GWCuts, NAssoc, NCuts, RAssoc, RCuts };

std::string_view to_string(Objective o);
// Case-insensitive; throws InvalidArgument for unknown names.
Objective parse_objective(std::string_view name);

// Symmetric nonnegative affinity matrix together with its objective.
class AffinityGraph {
public:
    // Throws InvalidArgument when `weights` is not square, not symmetric within
    // 1e-12, has a negative entry, or when a GW objective lacks a positive
    // explicit weight diagonal of matching length.
    AffinityGraph(SparseMatrix weights, Objective objective, std::vector<double> explicit_weights = {});

    const SparseMatrix& weights() const noexcept { return weights_; }
    Objective objective() const noexcept { return objective_; }
    // Caller-supplied Φ for GWAssoc/GWCuts; empty otherwise.
    const std::vector<double>& explicit_weights() const noexcept { return phi_; }
    std::size_t size() const noexcept { return weights_.rows(); }

private:
    SparseMatrix weights_;
    Objective objective_;
    std::vector<double> phi_;
};

enum class KernelKind { Polynomial, Gaussian, Sigmoid };

// κ(a, b): polynomial (a·b + c)^d, gaussian exp(−‖a − b‖² / 2α²), sigmoid tanh(c·(a·b) + θ).
struct KernelSpec {
    KernelKind kind = KernelKind::Gaussian;
    double c = 0.0;
    int degree = 1;
    double alpha = 1.0;
    double theta = 0.0;

    static KernelSpec polynomial(double c, int degree) { return {KernelKind::Polynomial, c, degree, 1.0, 0.0}; }
    static KernelSpec gaussian(double alpha) { return {KernelKind::Gaussian, 0.0, 1, alpha, 0.0}; }
    static KernelSpec sigmoid(double c, double theta) { return {KernelKind::Sigmoid, c, 1, 1.0, theta}; }

    // Throws InvalidArgument: gaussian needs α > 0, polynomial needs degree >= 1.
    void validate() const;
    double operator()(std::span<const double> a, std::span<const double> b) const;
};

// In-degree Φ_i, out-degree Φ_o and combined Φ_io = sqrt(Φ_i Φ_o) diagonals.
struct DirectedWeights {
    std::vector<double> in;
    std::vector<double> out;
    std::vector<double> combined;
};

// Pairwise kernel values between the columns of `points`.
// Rejects kernels that produce a negative affinity.
AffinityGraph kernel_affinity(const DenseMatrix& points, const KernelSpec& spec,
                              Objective objective = Objective::NAssoc);

// D_ii = Σ_j W_ij.
std::vector<double> degree_vector(const AffinityGraph& g);

// Φ^{−1/2} · affinity · Φ^{−1/2} for the graph's objective (see Objective).
// Throws InvalidArgument listing the vertices whose weight is not positive.
DenseMatrix normalize_affinity(const AffinityGraph& g);

// [0 A; Aᵀ 0] for a nonnegative feature-by-item matrix.
AffinityGraph bipartite_embed(const SparseMatrix& a, Objective objective = Objective::NAssoc);

// Φ1^{−1/2} · A · Φ2^{−1/2} with Φ1 = row sums, Φ2 = column sums.
// Throws InvalidArgument listing zero rows/columns.
DenseMatrix bipartite_normalize(const SparseMatrix& a);

// Φ_i, Φ_o and Φ_io of a directed affinity matrix. NAssoc/NCuts use degrees,
// RAssoc/RCuts the identity, GWAssoc/GWCuts the caller's `explicit_combined`.
DirectedWeights directed_weights(const SparseMatrix& b, Objective objective,
                                 std::span<const double> explicit_combined = {});

// Φ_io^{−1/2} (B + Bᵀ) Φ_io^{−1/2}; the result is exactly symmetric.
DenseMatrix directed_symmetrize(const SparseMatrix& b, Objective objective,
                                std::span<const double> explicit_combined = {});

// h + σI.
DenseMatrix diagonal_shift(const DenseMatrix& h, double sigma);

// A · D^{−1/2} with D = diag(AᵀA·e), i.e. column j scaled by (a_j · Σ_n a_n)^{−1/2}.
// Throws InvalidArgument listing columns with a non-positive scale.
SparseMatrix gram_degree_normalize(const SparseMatrix& a);

}  // namespace lsikit
