#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "golden.hpp"
#include "lsikit/error.hpp"
#include "lsikit/linalg.hpp"
#include "lsikit/retrieval.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace lsikit;
using namespace lsikit::testing;

namespace {

std::vector<double> scores_by_doc(const std::vector<ScoredDocument>& ranked, std::size_t n) {
    std::vector<double> out(n, -1.0);
    for (const auto& d : ranked) out[static_cast<std::size_t>(d.doc_id - 1)] = d.score;
    return out;
}

std::vector<int> ranking_of(const std::vector<ScoredDocument>& ranked) {
    std::vector<int> ids;
    for (const auto& d : ranked) ids.push_back(d.doc_id);
    return ids;
}

double within(const std::vector<double>& got, const std::vector<double>& want) {
    double worst = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    return worst;
}

}  // namespace

TEST_SUITE("retrieval") {

TEST_CASE("golden query scores") {
    const DocumentIndex raw(SparseMatrix::from_dense(synonymy_counts()));
    const std::vector<double> mark_twain{1, 1, 0, 0, 0, 0};
    const auto r = score_query(mark_twain, raw);
    CHECK(within(scores_by_doc(r, 5), kMarkTwainScores) <= 0.005);
    CHECK(ranking_of(r) == std::vector<int>{1, 3, 2, 4, 5});  // zero scores tie → ascending id

    const DocumentIndex lsi(rank_k_reconstruct(truncated_svd(SparseMatrix::from_dense(polysemy_counts()), 2)));
    const std::vector<double> bank_money{1, 0, 0, 1, 0}, river_bank{0, 0, 1, 1, 0};
    CHECK(within(scores_by_doc(score_query(bank_money, lsi), 6), kBankMoneyScores) <= 0.005);
    CHECK(within(scores_by_doc(score_query(river_bank, lsi), 6), kRiverBankScores) <= 0.005);
}

TEST_CASE("scoring contracts") {
    Rng rng(kMasterSeed + 20);
    for (int t = 0; t < 30; ++t) {
        const DenseMatrix a = random_counts(rng, 7, 6, 0.5, false);
        const DocumentIndex sparse_index(SparseMatrix::from_dense(a)), dense_index(a);
        std::vector<double> q(7);
        for (double& v : q) v = static_cast<double>(rng.below(3));
        if (std::all_of(q.begin(), q.end(), [](double v) { return v == 0.0; })) q[0] = 1.0;

        const auto rs = score_query(q, sparse_index), rd = score_query(q, dense_index);
        CHECK(ranking_of(rs) == ranking_of(rd));
        for (std::size_t i = 0; i < rs.size(); ++i) {
            CHECK(rs[i].score == doctest::Approx(rd[i].score).epsilon(1e-14));
            if (i > 0) {
                CHECK(rs[i].score <= rs[i - 1].score);
                if (rs[i].score == rs[i - 1].score) CHECK(rs[i].doc_id > rs[i - 1].doc_id);
            }
            CHECK(rs[i].score >= 0.0);
            CHECK(rs[i].score <= 1.0 + 1e-15);
        }

        // Scaling a document column by c > 0 leaves its score alone.
        DenseMatrix scaled = a;
        const std::size_t col = rng.below(6);
        for (std::size_t i = 0; i < 7; ++i) scaled(i, col) *= 3.5;
        const auto before = scores_by_doc(rd, 6);
        const auto after = scores_by_doc(score_query(q, DocumentIndex(scaled)), 6);
        CHECK(after[col] == doctest::Approx(before[col]).epsilon(1e-12));

        // A query equal to a nonzero document column scores that document 1.
        const std::vector<double> self = a.column(col);
        if (norm2(self) > 0.0) CHECK(scores_by_doc(score_query(self, dense_index), 6)[col] == doctest::Approx(1.0));

        // Permuting documents (ids travel with their columns) keeps the scores per id.
        std::vector<std::size_t> perm(6);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::reverse(perm.begin(), perm.end());
        DenseMatrix b(7, 6);
        std::vector<int> ids(6);
        for (std::size_t j = 0; j < 6; ++j) {
            for (std::size_t i = 0; i < 7; ++i) b(i, j) = a(i, perm[j]);
            ids[j] = static_cast<int>(perm[j]) + 1;
        }
        const auto rp = score_query(q, DocumentIndex(b, ids));
        CHECK(scores_by_doc(rp, 6) == scores_by_doc(rd, 6));
    }
}

TEST_CASE("scoring errors and zero documents") {
    const DocumentIndex idx(DenseMatrix::from_rows({{1, 0}, {0, 0}}), {10, 20});
    const std::vector<double> q{1, 1};
    const auto r = score_query(q, idx);
    CHECK(r[1].doc_id == 20);
    CHECK(r[1].score == 0.0);
    CHECK_THROWS_AS(score_query(std::vector<double>{0, 0}, idx), InvalidArgument);
    CHECK_THROWS_AS(score_query(std::vector<double>{1, 0, 0}, idx), ShapeError);
    CHECK_THROWS_AS(DocumentIndex(DenseMatrix(2, 2), {1}), InvalidArgument);
}

TEST_CASE("pseudo precision") {
    const std::vector<int> ranking{4, 9, 7, 1, 2};
    const std::set<int> rel{4, 7};
    CHECK(pseudo_precision(ranking, rel, 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(pseudo_precision(ranking, rel, 0.0) == 1.0);
    CHECK(pseudo_precision(ranking, {4, 9}, 0.7) == 1.0);
    CHECK(pseudo_precision(std::vector<int>{1, 2}, {5}, 0.5) == 0.0);  // no cutoff reaches the level
    CHECK_THROWS_AS(pseudo_precision(ranking, {}, 0.5), InvalidArgument);
    CHECK_THROWS_AS(pseudo_precision(ranking, rel, 1.5), InvalidArgument);
}

TEST_CASE("pseudo precision matches brute force") {
    Rng rng(kMasterSeed + 21);
    for (std::size_t t = 0; t < kTrials; ++t) {
        const std::size_t n = 1 + rng.below(15);
        std::vector<int> ranking(n);
        std::iota(ranking.begin(), ranking.end(), 1);
        for (std::size_t i = n; i > 1; --i) std::swap(ranking[i - 1], ranking[rng.below(i)]);
        std::set<int> rel;
        const std::size_t rn = 1 + rng.below(n);
        while (rel.size() < rn) rel.insert(1 + static_cast<int>(rng.below(n)));
        const std::vector<int> relv(rel.begin(), rel.end());
        double prev = 2.0;
        for (int step = 0; step <= 20; ++step) {
            const double x = step / 20.0;
            const double p = pseudo_precision(ranking, rel, x);
            // Level x/20 sits exactly on a recall fraction only when representable; compare away from ties.
            bool on_boundary = false;
            for (std::size_t h = 0; h <= rn; ++h)
                if (std::abs(static_cast<double>(h) / static_cast<double>(rn) - x) < 1e-12) on_boundary = true;
            if (!on_boundary) CHECK(p == brute_pseudo_precision(ranking, relv, x));
            CHECK(p <= prev);
            prev = p;
        }
        const double avg = interpolated_avg_precision(ranking, rel);
        CHECK(avg >= 0.0);
        CHECK(avg <= 1.0);
    }
}

TEST_CASE("interpolated average precision") {
    CHECK(interpolated_avg_precision(std::vector<int>{3, 1, 2}, {1, 3}) == 1.0);
    const double v = interpolated_avg_precision(std::vector<int>{4, 9, 7, 1, 2}, {4, 7});
    CHECK(v == doctest::Approx((6 * 1.0 + 5 * (2.0 / 3.0)) / 11.0));
    CHECK(v == doctest::Approx(0.8485).epsilon(1e-4));
    // Exact recall levels: r_N = 3, I = 4 puts a level at exactly 1/3 and 2/3.
    CHECK(interpolated_avg_precision(std::vector<int>{1, 9, 2, 8, 3}, {1, 2, 3}, 4) ==
          doctest::Approx((1.0 + 1.0 + 2.0 / 3.0 + 3.0 / 5.0) / 4.0));
    CHECK_THROWS_AS(interpolated_avg_precision(std::vector<int>{1}, {1}, 1), InvalidArgument);
}

TEST_CASE("evaluate") {
    const DocumentIndex idx(SparseMatrix::from_dense(synonymy_counts()));
    QueryMatrix q;
    q.ids = {1, 2, 3};
    q.weights = DenseMatrix::from_rows({{1, 1, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 1}, {0, 0, 0, 0, 0, 0}});
    RelevanceJudgments j{{1, {1, 3}}, {3, {2}}, {7, {1, 99}}};
    const EvalReport r = evaluate(q, idx, j);
    REQUIRE(r.per_query.size() == 1);
    CHECK(r.per_query[0].qid == 1);
    CHECK(r.per_query[0].avgp == 1.0);
    CHECK(r.mean_avgp == 1.0);
    CHECK(r.warnings.size() == 2);  // query 2 unjudged, query 3 empty

    QueryMatrix only_first{{1}, DenseMatrix::from_rows({{1, 1, 0, 0, 0, 0}})};
    const EvalReport missing = evaluate(only_first, idx, {{1, {1, 99}}});
    REQUIRE(missing.warnings.size() == 1);
    CHECK(missing.warnings[0].find("absent") != std::string::npos);
    CHECK(missing.per_query.size() == 1);

    const EvalReport again = evaluate(q, idx, j, 11, 3);
    CHECK(again.mean_avgp == r.mean_avgp);
    CHECK(again.warnings == r.warnings);

    QueryMatrix bad = q;
    bad.weights = DenseMatrix(3, 4);
    CHECK_THROWS_AS(evaluate(bad, idx, j), ShapeError);
    bad = q;
    bad.ids.pop_back();
    CHECK_THROWS_AS(evaluate(bad, idx, j), ShapeError);
}

TEST_CASE("evaluate mean is the arithmetic mean and is deterministic") {
    Rng rng(kMasterSeed + 22);
    for (int t = 0; t < 20; ++t) {
        const DenseMatrix a = random_counts(rng, 9, 8, 0.5, false);
        const DocumentIndex idx(a);
        QueryMatrix q;
        q.weights = DenseMatrix(4, 9);
        RelevanceJudgments j;
        for (std::size_t r = 0; r < 4; ++r) {
            q.ids.push_back(static_cast<int>(r) + 1);
            q.weights(r, rng.below(9)) = 1.0;
            j[static_cast<int>(r) + 1] = {1 + static_cast<int>(rng.below(8)), 1 + static_cast<int>(rng.below(8))};
        }
        const EvalReport x = evaluate(q, idx, j, 11, 1), y = evaluate(q, idx, j, 11, 4);
        double sum = 0.0;
        for (const auto& pq : x.per_query) sum += pq.avgp;
        if (!x.per_query.empty()) CHECK(x.mean_avgp == doctest::Approx(sum / static_cast<double>(x.per_query.size())));
        REQUIRE(x.per_query.size() == y.per_query.size());
        for (std::size_t i = 0; i < x.per_query.size(); ++i) CHECK(x.per_query[i].avgp == y.per_query[i].avgp);
        CHECK(x.mean_avgp == y.mean_avgp);
    }
}

}  // TEST_SUITE
