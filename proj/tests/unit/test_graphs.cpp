#include <doctest.h>

#include <cmath>

#include "lsikit/error.hpp"
#include "lsikit/graphs.hpp"
#include "lsikit/linalg.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace lsikit;
using namespace lsikit::testing;

namespace {

SparseMatrix sp(std::initializer_list<std::initializer_list<double>> rows) {
    return SparseMatrix::from_dense(DenseMatrix::from_rows(rows));
}

DenseMatrix random_symmetric_nonneg(Rng& rng, std::size_t n) {
    DenseMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) w(i, j) = w(j, i) = 0.1 + rng.uniform();
    return w;
}

bool zero_pattern_kept(const DenseMatrix& before, const DenseMatrix& after) {
    for (std::size_t i = 0; i < before.values().size(); ++i)
        if (before.values()[i] == 0.0 && after.values()[i] != 0.0) return false;
    return true;
}

}  // namespace

TEST_SUITE("graphs") {

TEST_CASE("objective names") {
    for (Objective o : {Objective::GWAssoc, Objective::GWCuts, Objective::NAssoc, Objective::NCuts, Objective::RAssoc,
                        Objective::RCuts})
        CHECK(parse_objective(to_string(o)) == o);
    CHECK(parse_objective("NCuts") == Objective::NCuts);
    CHECK_THROWS_AS(parse_objective("mincut"), InvalidArgument);
}

TEST_CASE("affinity graph validation") {
    CHECK_THROWS_AS(AffinityGraph(SparseMatrix(2, 3, {}), Objective::NAssoc), InvalidArgument);
    CHECK_THROWS_AS(AffinityGraph(sp({{0, 1}, {2, 0}}), Objective::NAssoc), InvalidArgument);
    CHECK_THROWS_AS(AffinityGraph(sp({{0, -1}, {-1, 0}}), Objective::NAssoc), InvalidArgument);
    CHECK_THROWS_AS(AffinityGraph(sp({{0, 1}, {1, 0}}), Objective::GWAssoc), InvalidArgument);
    CHECK_THROWS_AS(AffinityGraph(sp({{0, 1}, {1, 0}}), Objective::NAssoc, {1.0, 1.0}), InvalidArgument);
    CHECK_NOTHROW(AffinityGraph(sp({{0, 1}, {1, 0}}), Objective::GWAssoc, {1.0, 2.0}));
}

TEST_CASE("kernels") {
    const DenseMatrix same = DenseMatrix::from_rows({{0.3, 0.3}, {-2, -2}});
    CHECK(kernel_affinity(same, KernelSpec::gaussian(0.7)).weights().at(0, 1) == 1.0);

    const DenseMatrix unit = DenseMatrix::from_rows({{0, 1}, {0, 0}});
    CHECK(kernel_affinity(unit, KernelSpec::gaussian(0.5)).weights().at(0, 1) == doctest::Approx(std::exp(-2.0)));
    CHECK(std::exp(-2.0) == doctest::Approx(0.13534).epsilon(1e-4));

    Rng rng(2);
    const DenseMatrix pts = random_dense(rng, 3, 6, 0.0, 1.0);
    const SparseMatrix lin = kernel_affinity(pts, KernelSpec::polynomial(0.0, 1)).weights();
    CHECK(max_abs_diff(lin.to_dense(), naive_product(naive_transpose(pts), pts)) < 1e-14);
    const SparseMatrix cube = kernel_affinity(pts, KernelSpec::polynomial(1.0, 3)).weights();
    CHECK(cube.at(1, 4) == doctest::Approx(std::pow(lin.at(1, 4) + 1.0, 3)));
    const SparseMatrix sig = kernel_affinity(pts, KernelSpec::sigmoid(0.5, 0.1)).weights();
    CHECK(sig.at(2, 3) == doctest::Approx(std::tanh(0.5 * lin.at(2, 3) + 0.1)));

    CHECK_THROWS_AS(kernel_affinity(pts, KernelSpec::gaussian(0.0)), InvalidArgument);
    CHECK_THROWS_AS(kernel_affinity(pts, KernelSpec::polynomial(0.0, 0)), InvalidArgument);
    CHECK_THROWS_AS(kernel_affinity(DenseMatrix::from_rows({{1, -1}}), KernelSpec::polynomial(0.0, 1)),
                    InvalidArgument);
}

TEST_CASE("degree_vector") {
    const auto id = degree_vector(AffinityGraph(SparseMatrix::from_dense(DenseMatrix::identity(3)), Objective::NAssoc));
    CHECK(id == std::vector<double>{1, 1, 1});
    CHECK(degree_vector(AffinityGraph(sp({{0, 2}, {2, 0}}), Objective::NAssoc)) == std::vector<double>{2, 2});
    // 'bank' is the fourth word vertex of the embedded polysemy matrix; it touches all six documents.
    const AffinityGraph g = bipartite_embed(SparseMatrix::from_dense(polysemy_counts()));
    const auto d = degree_vector(g);
    double oracle = 0.0;
    for (std::size_t j = 0; j < 6; ++j) oracle += polysemy_counts()(3, j);
    CHECK(d[3] == oracle);
    CHECK(d[3] == 6.0);
}

TEST_CASE("normalize_affinity") {
    const SparseMatrix w = sp({{0, 2}, {2, 0}});
    CHECK(normalize_affinity(AffinityGraph(w, Objective::RAssoc)) == w.to_dense());
    const DenseMatrix swap = DenseMatrix::from_rows({{0, 1}, {1, 0}});
    CHECK(max_abs_diff(normalize_affinity(AffinityGraph(w, Objective::NAssoc)), swap) <= 1e-15);
    CHECK(max_abs_diff(normalize_affinity(AffinityGraph(w, Objective::NCuts)), swap) <= 1e-15);
    // RCuts: I − L = I − D + W.
    CHECK(normalize_affinity(AffinityGraph(w, Objective::RCuts)) == DenseMatrix::from_rows({{-1, 2}, {2, -1}}));
    // GW with Φ = D reproduces NAssoc.
    const DenseMatrix gw = normalize_affinity(AffinityGraph(w, Objective::GWAssoc, {2.0, 2.0}));
    CHECK(max_abs_diff(gw, swap) <= 1e-15);

    try {
        normalize_affinity(AffinityGraph(sp({{0, 0, 0}, {0, 0, 1}, {0, 1, 0}}), Objective::NAssoc));
        FAIL("isolated vertex accepted");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find('0') != std::string::npos);
    }

    Rng rng(13);
    for (int t = 0; t < 30; ++t) {
        DenseMatrix wd = random_symmetric_nonneg(rng, 4);
        wd(0, 2) = wd(2, 0) = 0.0;
        const DenseMatrix h = normalize_affinity(AffinityGraph(SparseMatrix::from_dense(wd), Objective::NAssoc));
        CHECK(symmetric_eigen_topk(h, 1).values[0] <= 1.0 + 1e-12);
        CHECK(zero_pattern_kept(wd, h));
    }
}

TEST_CASE("bipartite_embed") {
    const AffinityGraph one = bipartite_embed(SparseMatrix(1, 1, {{0, 0, 3.5}}));
    CHECK(one.weights().to_dense() == DenseMatrix::from_rows({{0, 3.5}, {3.5, 0}}));

    const SparseMatrix a = SparseMatrix::from_dense(synonymy_counts());
    const DenseMatrix e = bipartite_embed(a).weights().to_dense();
    REQUIRE(e.rows() == 11);
    CHECK(max_asymmetry(e) == 0.0);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) CHECK(e(i, j) == 0.0);
    for (std::size_t i = 6; i < 11; ++i)
        for (std::size_t j = 6; j < 11; ++j) CHECK(e(i, j) == 0.0);
    CHECK(e(1, 6 + 2) == 20.0);
    CHECK_THROWS_AS(bipartite_embed(SparseMatrix(1, 1, {{0, 0, -1.0}})), InvalidArgument);
}

TEST_CASE("bipartite_normalize") {
    CHECK(bipartite_normalize(sp({{4}})) == DenseMatrix::from_rows({{1}}));
    CHECK(max_abs_diff(bipartite_normalize(sp({{1, 1}, {1, 1}})), DenseMatrix(2, 2, 0.5)) <= 1e-15);
    const DenseMatrix n6 = bipartite_normalize(SparseMatrix::from_dense(synonymy_counts()));
    CHECK(full_svd(n6).values[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(zero_pattern_kept(synonymy_counts(), n6));
    CHECK_THROWS_WITH_AS(bipartite_normalize(sp({{1, 0}, {0, 0}})), doctest::Contains("1"), InvalidArgument);
}

TEST_CASE("bipartite eigenvectors match singular vectors") {
    Rng rng(29);
    for (int t = 0; t < 20; ++t) {
        const std::size_t m = 3 + rng.below(4), n = 3 + rng.below(4);
        const DenseMatrix a = random_dense(rng, m, n, 0.1, 1.0);
        const SparseMatrix sa = SparseMatrix::from_dense(a);
        const DenseMatrix abar = bipartite_normalize(sa);
        const SvdFactors f = full_svd(abar);
        const DenseMatrix h = normalize_affinity(bipartite_embed(sa));

        // The embedded spectrum is {±σ_k} padded with zeros.
        const EigenPairs all = symmetric_eigen(h);
        for (std::size_t k = 0; k < f.rank(); ++k) {
            CHECK(all.values[k] == doctest::Approx(f.values[k]).epsilon(1e-9));
            CHECK(all.values[m + n - 1 - k] == doctest::Approx(-f.values[k]).epsilon(1e-9));
        }

        const std::size_t kk = 1 + rng.below(std::min(m, n) - 1);
        const DenseMatrix e = symmetric_eigen_topk(h, kk).vectors;
        DenseMatrix w(m + n, kk);
        for (std::size_t c = 0; c < kk; ++c) {
            for (std::size_t i = 0; i < m; ++i) w(i, c) = f.left(i, c) / std::sqrt(2.0);
            for (std::size_t j = 0; j < n; ++j) w(m + j, c) = f.right(j, c) / std::sqrt(2.0);
        }
        // Principal-angle residual: ‖E − W WᵀE‖_F.
        const DenseMatrix proj = naive_product(w, naive_product(naive_transpose(w), e));
        CHECK(std::sqrt(frob2_diff(e, proj)) < 1e-6);
    }
}

TEST_CASE("directed graphs") {
    const SparseMatrix symm = sp({{0, 1, 2}, {1, 0, 0}, {2, 0, 0}});
    const DenseMatrix twice = directed_symmetrize(symm, Objective::RAssoc);
    CHECK(twice == DenseMatrix::from_rows({{0, 2, 4}, {2, 0, 0}, {4, 0, 0}}));
    CHECK(directed_symmetrize(sp({{0, 1}, {0, 0}}), Objective::RAssoc) == DenseMatrix::from_rows({{0, 1}, {1, 0}}));

    const SparseMatrix b = sp({{0, 2}, {1, 0}});
    const DirectedWeights w = directed_weights(b, Objective::NAssoc);
    CHECK(w.in == std::vector<double>{1, 2});
    CHECK(w.out == std::vector<double>{2, 1});
    CHECK(w.combined[0] == doctest::Approx(std::sqrt(2.0)));
    const DenseMatrix d = directed_symmetrize(b, Objective::NAssoc);
    CHECK(d(0, 1) == doctest::Approx(3.0 / std::sqrt(2.0)));
    CHECK(d(0, 1) == doctest::Approx(2.1213).epsilon(1e-4));

    CHECK_THROWS_AS(directed_symmetrize(sp({{0, 1}, {0, 0}}), Objective::NAssoc), InvalidArgument);
    CHECK_THROWS_AS(directed_symmetrize(b, Objective::GWAssoc), InvalidArgument);
    const std::vector<double> phi{2.0, 2.0};
    CHECK(directed_symmetrize(b, Objective::GWAssoc, phi)(0, 1) == doctest::Approx(1.5));

    Rng rng(31);
    for (int t = 0; t < 25; ++t) {
        DenseMatrix bd = random_dense(rng, 5, 5, 0.0, 1.0);
        for (std::size_t i = 0; i < 5; ++i) bd(i, i) = 0.0;
        const DenseMatrix s = directed_symmetrize(SparseMatrix::from_dense(bd), Objective::NAssoc);
        CHECK(max_asymmetry(s) == 0.0);
    }
}

TEST_CASE("diagonal_shift") {
    Rng rng(17);
    const DenseMatrix h0 = random_symmetric_nonneg(rng, 4);
    CHECK(diagonal_shift(h0, 0.0) == h0);
    const EigenPairs e = symmetric_eigen(diagonal_shift(DenseMatrix::from_rows({{0, 1}, {1, 0}}), 1.0));
    CHECK(e.values[0] == doctest::Approx(2));
    CHECK(std::abs(e.values[1]) < 1e-15);
    for (int t = 0; t < 30; ++t) {
        DenseMatrix h = random_dense(rng, 5, 5, -2, 2);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < i; ++j) h(i, j) = h(j, i);
        const double lmin = symmetric_eigen(h).values.back();
        CHECK(symmetric_eigen(diagonal_shift(h, std::abs(lmin))).values.back() >= -1e-10);
    }
    CHECK_THROWS_AS(diagonal_shift(DenseMatrix(2, 3), 1.0), ShapeError);
}

TEST_CASE("gram_degree_normalize") {
    CHECK(max_abs_diff(gram_degree_normalize(sp({{3}, {4}})).to_dense(), DenseMatrix::from_rows({{0.6}, {0.8}})) <=
          1e-15);
    const SparseMatrix twin = gram_degree_normalize(sp({{1, 1}, {2, 2}}));
    CHECK(twin.at(0, 0) == twin.at(0, 1));
    CHECK_THROWS_WITH_AS(gram_degree_normalize(sp({{1, 0}, {1, 0}})), doctest::Contains("1"), InvalidArgument);
}

TEST_CASE("rectangular Ky Fan suite") {
    const SuiteResult r = ky_fan_rectangular_suite();
    INFO(r.first_failure);
    CHECK(r.ok());
}

}  // TEST_SUITE
