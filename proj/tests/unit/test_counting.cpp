#include <doctest.h>

#include "rcmf/arith.hpp"
#include "rcmf/counting.hpp"
#include "rcmf/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

using namespace rcmf;

namespace {

const SpfTable& table() {
    static SpfTable t = build_spf(20'000);
    return t;
}

using Pair = std::pair<long long, long long>;

// Brute-force oracle: ordered quadruples (n1,n2,n3,n4) in [1,N]^4 with
// n1(n1+1) n2(n2+1) = n3(n3+1) n4(n4+1).  Quartic cost, so N stays small.
long long brute_fourth_moment(long long N) {
    std::vector<unsigned long long> t((size_t)N + 1);
    for (long long n = 1; n <= N; ++n)
        t[(size_t)n] = (unsigned long long)n * (unsigned long long)(n + 1);
    long long count = 0;
    for (long long a = 1; a <= N; ++a)
        for (long long b = 1; b <= N; ++b) {
            unsigned __int128 lhs = (unsigned __int128)t[(size_t)a] * t[(size_t)b];
            for (long long c = 1; c <= N; ++c)
                for (long long d = 1; d <= N; ++d)
                    if (lhs == (unsigned __int128)t[(size_t)c] * t[(size_t)d]) ++count;
        }
    return count;
}

bool contains_solution(const std::vector<QuadrupleSolution>& sols,
                       long long a, long long b, long long c, long long d) {
    return std::any_of(sols.begin(), sols.end(), [&](const QuadrupleSolution& s) {
        return s.a == a && s.b == b && s.c == c && s.d == d;
    });
}

} // namespace

TEST_SUITE("counting") {

TEST_CASE("second moment, uniform law: frozen values") {
    auto r1 = second_moment_exact_uniform({1}, 0, 10, table());
    CHECK(r1.diagonal_count == 10);
    CHECK(r1.nontrivial_count == 0);
    CHECK(r1.total == 10);
    CHECK(r1.witness_pairs.empty());

    auto r2 = second_moment_exact_uniform({2, 1, -4}, 0, 10, table());
    CHECK(r2.total == 12);
    CHECK(r2.nontrivial_count == 2);
    REQUIRE(r2.witness_pairs.size() == 2);
    CHECK(r2.witness_pairs[0] == Pair{2, 7});
    CHECK(r2.witness_pairs[1] == Pair{7, 2});

    // saturation: the only non-diagonal pair ever found for (2,1,-4)
    CHECK(second_moment_exact_uniform({2, 1, -4}, 0, 100, table()).total == 102);
    CHECK(second_moment_exact_uniform({2, 1, -4}, 0, 1000, table()).total == 1002);
    CHECK(second_moment_exact_uniform({2, 1, -4}, 100, 1100, table()).total == 1000);

    CHECK(second_moment_exact_uniform({1, -1}, 0, 100, table()).total == 100);
    CHECK(second_moment_exact_uniform({1, 1}, 0, 100, table()).total == 100);
    CHECK(second_moment_exact_uniform({3, -2}, 0, 2000, table()).total == 2000);
}

TEST_CASE("second moment bounds: N - N' <= total <= k (N - N')") {
    struct Cell { std::vector<long long> m; long long np, N; };
    const std::vector<Cell> matrix = {
        {{1}, 0, 200}, {{2}, 0, 200}, {{1, -1}, 0, 500}, {{1, 1}, 0, 500},
        {{3, -2}, 100, 600}, {{2, 1, -4}, 0, 500}, {{1, 2, 3}, 0, 300},
        {{5, -1, -1}, 0, 300}, {{1, -2, 1}, 50, 450},
    };
    for (const auto& cell : matrix) {
        auto rep = second_moment_exact_uniform(cell.m, cell.np, cell.N, table());
        long long span = cell.N - cell.np;
        long long k = (long long)cell.m.size();
        INFO("m size ", cell.m.size(), " N'=", cell.np, " N=", cell.N);
        CHECK(rep.diagonal_count == span);
        CHECK(rep.total >= span);
        CHECK(rep.total <= k * span);
        CHECK(rep.total == rep.diagonal_count + rep.nontrivial_count);
        // witness pairs are lex-sorted and come in mirrored couples
        for (size_t i = 1; i < rep.witness_pairs.size(); ++i)
            CHECK(rep.witness_pairs[i - 1] < rep.witness_pairs[i]);
    }
    // every k <= 2 exponent vector is injective: total == N - N'
    for (const auto& m : std::vector<std::vector<long long>>{
             {1}, {2}, {7}, {1, 1}, {1, -1}, {3, -2}, {2, 5}})
        CHECK(second_moment_exact_uniform(m, 0, 400, table()).total == 400);
}

TEST_CASE("second moment, uniform law: preconditions and caps") {
    CHECK_THROWS_AS(second_moment_exact_uniform({0, 0}, 0, 10, table()),
                    std::invalid_argument);
    CHECK_THROWS_AS(second_moment_exact_uniform({1}, 10, 10, table()),
                    std::invalid_argument);
    CHECK_THROWS_AS(second_moment_exact_uniform({1}, -1, 10, table()),
                    std::invalid_argument);
    CHECK_THROWS_AS(second_moment_exact_uniform({1}, 0, 30'000, table()),
                    std::invalid_argument);  // sieve too small
    auto capped = second_moment_exact_uniform({2, 1, -4}, 0, 10, table(), 1);
    CHECK(capped.nontrivial_count == 2);
    CHECK(capped.witness_pairs.size() == 1);
}

TEST_CASE("second moment, roots law: frozen values") {
    auto r3 = second_moment_exact_roots({1}, 2, 0, 3, table());
    CHECK(r3.total == 3);
    CHECK(r3.nontrivial_count == 0);

    auto r8 = second_moment_exact_roots({1}, 2, 0, 8, table());
    CHECK(r8.total == 12);
    CHECK(r8.nontrivial_count == 4);
    // collisions among the values n+1: {2,8} (n=1,7) and {4,9} (n=3,8)
    REQUIRE(r8.witness_pairs.size() == 4);
    CHECK(r8.witness_pairs[0] == Pair{1, 7});
    CHECK(r8.witness_pairs[1] == Pair{3, 8});
    CHECK(r8.witness_pairs[2] == Pair{7, 1});
    CHECK(r8.witness_pairs[3] == Pair{8, 3});

    CHECK(second_moment_exact_roots({1}, 2, 0, 100, table()).total == 292);
    CHECK(second_moment_exact_roots({1, 1}, 2, 0, 30, table()).total == 32);
    CHECK(second_moment_exact_roots({1, 1}, 2, 0, 100, table()).total == 108);
    CHECK(second_moment_exact_roots({1, 1, 1}, 3, 0, 50, table()).total == 50);
    CHECK(second_moment_exact_roots({2, 1, 1}, 3, 0, 50, table()).total == 50);
}

TEST_CASE("roots law reduces m mod q on entry") {
    auto plus = second_moment_exact_roots({1, 1}, 2, 0, 100, table());
    auto minus = second_moment_exact_roots({1, -1}, 2, 0, 100, table());
    CHECK(plus.total == minus.total);
    CHECK(plus.nontrivial_count == minus.nontrivial_count);
    CHECK(plus.witness_pairs == minus.witness_pairs);

    // all exponents divisible by q collapse to the excluded zero vector
    CHECK_THROWS_AS(second_moment_exact_roots({2, 0}, 2, 0, 10, table()),
                    std::invalid_argument);
    CHECK_THROWS_AS(second_moment_exact_roots({4, -2}, 2, 0, 10, table()),
                    std::invalid_argument);
    CHECK_THROWS_AS(second_moment_exact_roots({1}, 0, 0, 10, table()),
                    std::invalid_argument);
}

TEST_CASE("roots totals dominate the uniform totals cell by cell") {
    // mod-q collisions can only merge more n into a group
    for (const auto& m : std::vector<std::vector<long long>>{{1}, {1, 1}, {2, 1, 1}}) {
        auto uni = second_moment_exact_uniform(m, 0, 300, table());
        for (long long q : {2, 3, 4}) {
            auto roots = second_moment_exact_roots(m, q, 0, 300, table());
            INFO("k=", m.size(), " q=", q);
            CHECK(roots.total >= uni.total);
        }
    }
}

TEST_CASE("fourth moment: frozen counts and solutions") {
    auto r3 = fourth_moment_counts(3);
    CHECK(r3.strict_count == 0);
    CHECK(r3.equal_middle_count == 0);
    CHECK(r3.moment == 15);
    CHECK(r3.solutions.empty());

    auto r8 = fourth_moment_counts(8);
    CHECK(r8.strict_count == 0);
    CHECK(r8.equal_middle_count == 1);
    CHECK(r8.moment == 124);
    REQUIRE(r8.solutions.size() == 1);
    CHECK(r8.solutions[0] == QuadrupleSolution(1, 3, 3, 8));
    CHECK(r8.solutions[0].cls == QuadrupleSolution::Class::EqualMiddle);

    auto r9 = fourth_moment_counts(9);
    CHECK(r9.strict_count == 1);
    CHECK(r9.equal_middle_count == 1);
    CHECK(r9.moment == 165);
    REQUIRE(r9.solutions.size() == 2);
    CHECK(r9.solutions[0] == QuadrupleSolution(1, 2, 5, 9));  // lex order
    CHECK(r9.solutions[1] == QuadrupleSolution(1, 3, 3, 8));
    CHECK(r9.solutions[0].cls == QuadrupleSolution::Class::Strict);

    auto r50 = fourth_moment_counts(50, kDefaultFourthMomentCap,
                                    kDefaultShardBudgetBytes, 1000);
    CHECK(r50.strict_count == 30);
    CHECK(r50.equal_middle_count == 2);
    CHECK((long long)r50.solutions.size() == 32);
    CHECK(contains_solution(r50.solutions, 3, 7, 9, 20));
    CHECK(contains_solution(r50.solutions, 8, 20, 20, 49));

    auto r60 = fourth_moment_counts(60);
    CHECK(r60.strict_count == 39);
    CHECK(r60.equal_middle_count == 2);
    CHECK(r60.moment == 7460);
}

TEST_CASE("fourth moment equals the brute-force count for every N <= 40") {
    for (long long N = 1; N <= 40; ++N) {
        auto rep = fourth_moment_counts(N);
        INFO("N=", N);
        CHECK(rep.moment == brute_fourth_moment(N));
        CHECK(rep.moment == 2 * N * N - N + 8 * rep.strict_count +
                                4 * rep.equal_middle_count);
    }
}

TEST_CASE("fourth moment is shard-count independent") {
    auto one_shard = fourth_moment_counts(500, 20'000, kDefaultShardBudgetBytes, 500);
    auto many_shards = fourth_moment_counts(500, 20'000, 1 << 16, 500);
    CHECK(one_shard.strict_count == many_shards.strict_count);
    CHECK(one_shard.equal_middle_count == many_shards.equal_middle_count);
    CHECK(one_shard.moment == many_shards.moment);
    CHECK(one_shard.solutions == many_shards.solutions);
}

TEST_CASE("fourth moment caps and solution truncation") {
    CHECK_THROWS_AS(fourth_moment_counts(100, 50), resource_error);
    auto truncated = fourth_moment_counts(50, 20'000, kDefaultShardBudgetBytes, 3);
    CHECK(truncated.strict_count == 30);          // counts are not truncated
    CHECK(truncated.solutions.size() == 3);       // the listing is
    auto full = fourth_moment_counts(50, 20'000, kDefaultShardBudgetBytes, 1000);
    for (size_t i = 0; i < 3; ++i) CHECK(truncated.solutions[i] == full.solutions[i]);
}

TEST_CASE("quadruple constructor re-validates the identity") {
    CHECK_NOTHROW(QuadrupleSolution(3, 7, 9, 20));
    CHECK_THROWS_AS(QuadrupleSolution(3, 7, 9, 21), std::logic_error);
    CHECK_THROWS_AS(QuadrupleSolution(7, 3, 9, 20), std::logic_error);  // ordering
    QuadrupleSolution em(1, 3, 3, 8);
    CHECK(em.cls == QuadrupleSolution::Class::EqualMiddle);
    QuadrupleSolution st(1, 2, 5, 9);
    CHECK(st.cls == QuadrupleSolution::Class::Strict);
}

TEST_CASE("family quadruples: frozen prefixes and membership in solutions") {
    auto f8 = family_quadruples(8);
    REQUIRE(f8.size() == 1);
    CHECK(f8[0] == QuadrupleSolution(1, 3, 3, 8));

    auto f9 = family_quadruples(9);
    REQUIRE(f9.size() == 2);
    CHECK(f9[0] == QuadrupleSolution(1, 3, 3, 8));
    CHECK(f9[1] == QuadrupleSolution(1, 2, 5, 9));

    auto f20 = family_quadruples(20);
    CHECK(contains_solution(f20, 3, 7, 9, 20));

    CHECK_THROWS_AS(family_quadruples(7), std::invalid_argument);

    // every family member appears in the exhaustive solution list
    auto sols = fourth_moment_counts(2000, 20'000, kDefaultShardBudgetBytes,
                                     1'000'000).solutions;
    for (const auto& fam : family_quadruples(2000)) {
        INFO("family a=", fam.a);
        CHECK(std::binary_search(sols.begin(), sols.end(), fam,
                                 [](const QuadrupleSolution& x, const QuadrupleSolution& y) {
                                     return std::tuple(x.a, x.b, x.c, x.d) <
                                            std::tuple(y.a, y.b, y.c, y.d);
                                 }));
    }
}

TEST_CASE("ratio check: frozen minima") {
    auto r8 = ratio_property_check(8);
    CHECK(r8.solution_count == 1);
    CHECK(r8.min_ratio_d == 8);
    CHECK(r8.min_ratio_a == 1);
    CHECK(r8.all_above_threshold);

    auto r50 = ratio_property_check(50);
    CHECK(r50.solution_count == 32);
    CHECK(r50.min_ratio_d == 49);
    CHECK(r50.min_ratio_a == 8);
    CHECK(r50.all_above_threshold);

    CHECK_THROWS_AS(ratio_property_check(7), std::invalid_argument);
}

TEST_CASE("u-family recurrence: frozen values and identities") {
    auto rep = u_family(20);
    const std::vector<long long> expected = {
        0, 0, 1, 3, 8, 20, 49, 119, 288, 696, 1681, 4059, 9800, 23660, 57121,
        137903, 332928, 803760, 1940449, 4684659, 11309768};
    CHECK(rep.u == expected);
    REQUIRE(rep.quadruples.size() == 9);
    CHECK(rep.quadruples[0] == QuadrupleSolution(1, 3, 3, 8));
    CHECK(rep.quadruples[1] == QuadrupleSolution(8, 20, 20, 49));
    for (const auto& qd : rep.quadruples) {
        CHECK(qd.cls == QuadrupleSolution::Class::EqualMiddle);
        // a(a+1) d(d+1) = (b(b+1))^2 re-checked in wide arithmetic
        unsigned __int128 lhs = (unsigned __int128)qd.a * (qd.a + 1);
        lhs *= (unsigned __int128)qd.d * (qd.d + 1);
        unsigned __int128 mid = (unsigned __int128)qd.b * (qd.b + 1);
        CHECK((lhs == mid * mid));
    }
    CHECK_THROWS_AS(u_family(1), std::invalid_argument);
    CHECK(u_family(2).quadruples.empty());
}

TEST_CASE("moment_2q: frozen values and the q = 2 identity") {
    CHECK(moment_2q_nontrivial(1, 30) == 0);
    CHECK(moment_2q_nontrivial(2, 8) == 4);
    CHECK(moment_2q_nontrivial(2, 9) == 12);
    CHECK(moment_2q_nontrivial(3, 8) == 336);
    CHECK(moment_2q_nontrivial(3, 12) == 1776);

    for (long long N : {8, 9, 20, 50, 100}) {
        auto rep = fourth_moment_counts(N);
        INFO("N=", N);
        CHECK(moment_2q_nontrivial(2, N) ==
              8 * rep.strict_count + 4 * rep.equal_middle_count);
    }
}

TEST_CASE("moment_2q: caps, overflow guards, domain") {
    CHECK_THROWS_AS(moment_2q_nontrivial(4, 10), std::invalid_argument);
    CHECK_THROWS_AS(moment_2q_nontrivial(0, 10), std::invalid_argument);
    CHECK_THROWS_AS(moment_2q_nontrivial(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(moment_2q_nontrivial(2, 5001), resource_error);
    CHECK_THROWS_AS(moment_2q_nontrivial(3, 301), resource_error);
    // raising the cap past the exact-arithmetic guard still refuses
    CHECK_THROWS_AS(moment_2q_nontrivial(2, 60'000, 70'000), resource_error);
    CHECK_THROWS_AS(moment_2q_nontrivial(3, 1500, 5000, 2000), resource_error);
}

} // TEST_SUITE
