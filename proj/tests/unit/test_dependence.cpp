#include <doctest.h>

#include "rcmf/arith.hpp"
#include "rcmf/dependence.hpp"
#include "rcmf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

using namespace rcmf;

namespace {

const SpfTable& table() {
    static SpfTable t = build_spf(200'000);
    return t;
}

// Brute-force oracle for the uniform case: search all |m_j| <= 20, m != 0, for
// sum_j m_j v_p(n+j) == 0 at every prime row of the full valuation matrix.
// Independent of the library's pre-elimination / kernel machinery on purpose.
bool brute_dependent(long long n, long long k, long long bound = 20) {
    ValuationMatrix vm = valuation_matrix(n, k, table());
    std::vector<long long> m((size_t)k, -bound);
    while (true) {
        bool nonzero = false;
        for (long long v : m) nonzero = nonzero || (v != 0);
        if (nonzero) {
            bool ok = true;
            for (const auto& row : vm.rows) {
                long long s = 0;
                for (size_t j = 0; j < (size_t)k; ++j) s += m[j] * row[j];
                if (s != 0) { ok = false; break; }
            }
            if (ok) return true;
        }
        size_t i = 0;
        while (i < (size_t)k && m[i] == bound) m[i++] = -bound;
        if (i == (size_t)k) return false;
        ++m[i];
    }
}

std::set<long long> dependent_set_uniform(long long k, long long n_max) {
    std::set<long long> out;
    for (const auto& [n, basis] : scan_dependences_uniform(k, n_max, table()))
        out.insert(n);
    return out;
}

std::set<long long> dependent_set_roots(long long k, long long q, long long n_max) {
    std::set<long long> out;
    for (const auto& [n, w] : scan_dependences_roots(k, q, n_max, table()))
        out.insert(n);
    return out;
}

} // namespace

TEST_SUITE("dependence") {

TEST_CASE("valuation matrix of the first window") {
    ValuationMatrix vm = valuation_matrix(1, 3, table());
    REQUIRE(vm.primes == std::vector<long long>{2, 3});
    CHECK(vm.rows[0] == std::vector<long long>{1, 0, 2});
    CHECK(vm.rows[1] == std::vector<long long>{0, 1, 0});

    ValuationMatrix vm2 = valuation_matrix(7, 4, table());  // 8, 9, 10, 11
    REQUIRE(vm2.primes == std::vector<long long>{2, 3, 5, 11});
    CHECK(vm2.rows[0] == std::vector<long long>{3, 0, 1, 0});
    CHECK(vm2.rows[1] == std::vector<long long>{0, 2, 0, 0});
    CHECK(vm2.rows[2] == std::vector<long long>{0, 0, 1, 0});
    CHECK(vm2.rows[3] == std::vector<long long>{0, 0, 0, 1});
}

TEST_CASE("integer_kernel on the textbook instance") {
    KernelBasis kb = integer_kernel({{1, 0, 2}, {0, 1, 0}}, 3);
    CHECK(kb.rank == 2);
    REQUIRE(kb.vectors.size() == 1);
    CHECK(kb.vectors[0] == std::vector<long long>{2, 0, -1});
}

TEST_CASE("integer_kernel basics: identity, zero matrix, consistency") {
    KernelBasis id = integer_kernel({{1, 0}, {0, 1}}, 2);
    CHECK(id.rank == 2);
    CHECK(id.vectors.empty());

    KernelBasis zero = integer_kernel({}, 3);
    CHECK(zero.rank == 0);
    REQUIRE(zero.vectors.size() == 3);
    CHECK(zero.vectors[0] == std::vector<long long>{1, 0, 0});
    CHECK(zero.vectors[1] == std::vector<long long>{0, 1, 0});
    CHECK(zero.vectors[2] == std::vector<long long>{0, 0, 1});

    // every basis vector annihilates the matrix; rank + nullity = k
    std::vector<std::vector<long long>> A = {{2, 4, 6, 8}, {1, 2, 3, 4}, {0, 0, 1, 1}};
    KernelBasis kb = integer_kernel(A, 4);
    CHECK(kb.rank + (long long)kb.vectors.size() == 4);
    CHECK(kb.rank == 2);
    for (const auto& v : kb.vectors) {
        for (const auto& row : A) {
            long long s = 0;
            for (size_t j = 0; j < 4; ++j) s += row[j] * v[j];
            CHECK(s == 0);
        }
        // canonical form: content 1, first nonzero positive
        long long g = 0;
        for (long long x : v) g = std::gcd(g, x < 0 ? -x : x);
        CHECK(g == 1);
        for (long long x : v) { if (x != 0) { CHECK(x > 0); break; } }
    }
}

TEST_CASE("find_dependence_uniform matches the brute-force search, k <= 4, n <= 50") {
    for (long long k = 2; k <= 4; ++k) {
        for (long long n = 1; n <= 50; ++n) {
            bool lib = find_dependence_uniform(n, k, table()).has_value();
            bool brute = brute_dependent(n, k);
            INFO("n=", n, " k=", k);
            CHECK(lib == brute);
        }
    }
}

TEST_CASE("uniform dependent sets: frozen small cases") {
    CHECK(dependent_set_uniform(4, 50) == std::set<long long>{1, 2, 5});
    CHECK(dependent_set_uniform(5, 1000) == std::set<long long>{1, 2, 3, 4, 5, 7});
}

TEST_CASE("uniform scan reproduces the k = 3..13 table over n <= 1000") {
    const std::vector<long long> largest = {1, 5, 7, 14, 23, 24, 47, 71, 71, 71, 239};
    const std::vector<long long> counts = {1, 3, 6, 8, 13, 20, 28, 34, 42, 52, 63};
    for (long long k = 3; k <= 13; ++k) {
        std::set<long long> dep = dependent_set_uniform(k, 1000);
        INFO("k=", k);
        CHECK((long long)dep.size() == counts[(size_t)(k - 3)]);
        CHECK(*dep.rbegin() == largest[(size_t)(k - 3)]);
    }
}

TEST_CASE("scan monotonicity: dependence at width k implies dependence at k+1") {
    for (long long k = 3; k <= 8; ++k) {
        std::set<long long> dk = dependent_set_uniform(k, 300);
        std::set<long long> dk1 = dependent_set_uniform(k + 1, 300);
        CHECK(std::includes(dk1.begin(), dk1.end(), dk.begin(), dk.end()));
    }
}

TEST_CASE("pre-elimination agrees with the kernel of the full valuation matrix") {
    for (long long k = 3; k <= 6; ++k) {
        for (long long n = 1; n <= 200; ++n) {
            ValuationMatrix vm = valuation_matrix(n, k, table());
            KernelBasis full = integer_kernel(vm.rows, k);
            auto fast = find_dependence_uniform(n, k, table());
            INFO("n=", n, " k=", k);
            CHECK(fast.has_value() == !full.vectors.empty());
            if (fast) {
                CHECK(fast->vectors.size() == full.vectors.size());
                CHECK(fast->rank == full.rank);
                for (const auto& v : fast->vectors)
                    for (const auto& row : vm.rows) {
                        long long s = 0;
                        for (size_t j = 0; j < (size_t)k; ++j) s += row[j] * v[j];
                        CHECK(s == 0);
                    }
            }
        }
    }
}

TEST_CASE("the k = 13 witness at n = 239") {
    // 240^65 * 243^31 * 245^55 * 250^-40 * 252^-110 = 1
    std::vector<long long> m = {65, 0, 0, 31, 0, 55, 0, 0, 0, 0, -40, 0, -110};
    CHECK(verify_witness(239, 13, m, table()));
    auto basis = find_dependence_uniform(239, 13, table());
    REQUIRE(basis.has_value());
    REQUIRE(basis->vectors.size() == 1);
    CHECK(basis->vectors[0] == m);

    std::vector<long long> wrong = m;
    wrong[0] = 64;
    CHECK(!verify_witness(239, 13, wrong, table()));
}

TEST_CASE("the Dubickas identity verifies for every n in 3..50") {
    // (n^3 - 3n - 2)(n^3 - 3n + 2) n^3 = (n^3 - 4n)(n^3 - n)^2, read as a
    // window witness starting at n^3 - 4n - 1 of width 4n + 1
    for (long long n = 3; n <= 50; ++n) {
        long long c = n * n * n;
        long long lo = c - 4 * n - 1;
        long long k = 4 * n + 1;
        std::vector<long long> m((size_t)k, 0);
        auto at = [&](long long value, long long e) { m[(size_t)(value - lo - 1)] = e; };
        at(c - 3 * n - 2, 1);
        at(c - 3 * n + 2, 1);
        at(c, 1);
        at(c - 4 * n, -1);
        at(c - n, -2);
        INFO("n=", n);
        CHECK(verify_witness(lo, k, m, table()));
    }
}

TEST_CASE("roots witnesses: frozen examples") {
    auto w1 = find_dependence_roots(1, 5, 2, table());
    REQUIRE(w1.has_value());
    CHECK(w1->m == std::vector<long long>{1, 1, 0, 0, 1});  // 2*3*6 = 36 = 6^2
    CHECK(verify_witness(1, 5, w1->m, 2, table()));

    CHECK(!find_dependence_roots(2, 5, 2, table()).has_value());

    auto w239 = find_dependence_roots(239, 6, 2, table());
    REQUIRE(w239.has_value());
    CHECK(w239->m == std::vector<long long>{1, 0, 0, 1, 0, 1});  // 240*243*245 = 3780^2
    CHECK(verify_witness(239, 6, w239->m, 2, table()));

    auto w10081 = find_dependence_roots(10081, 11, 2, table());
    REQUIRE(w10081.has_value());
    CHECK(w10081->m == std::vector<long long>{1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1});
    CHECK(verify_witness(10081, 11, w10081->m, 2, table()));
}

TEST_CASE("roots scans: frozen dependent sets") {
    CHECK(dependent_set_roots(5, 2, 100) == std::set<long long>{1});
    CHECK(dependent_set_roots(6, 2, 1000) == std::set<long long>{1, 2, 4, 239});

    std::set<long long> k11 = dependent_set_roots(11, 2, 200);
    std::set<long long> expected;
    for (long long n = 1; n <= 14; ++n) expected.insert(n);
    for (long long n = 16; n <= 26; ++n) expected.insert(n);
    for (long long n : {39, 43, 44, 45, 46, 47}) expected.insert(n);
    CHECK(k11 == expected);
}

TEST_CASE("box witnesses respect the per-column bounds") {
    for (const auto& [n, w] : scan_dependences_roots(6, 4, 100, table())) {
        REQUIRE(w.m.size() == 6);
        bool nonzero = false;
        for (size_t j = 0; j < 6; ++j) {
            long long bound = 4 / mu_power_divisor(n + (long long)j + 1, 4);
            CHECK(w.m[j] >= 0);
            CHECK(w.m[j] < bound);
            nonzero = nonzero || (w.m[j] != 0);
        }
        CHECK(nonzero);
        CHECK(verify_witness(n, 6, w.m, 4, table()));
    }
}

TEST_CASE("enumeration and the structured solver return the same witness") {
    auto same = [&](long long n, long long k, long long q) {
        auto a = find_dependence_roots(n, k, q, table(), ModQSolver::Enumerate);
        auto b = find_dependence_roots(n, k, q, table(), ModQSolver::Structured);
        INFO("n=", n, " k=", k, " q=", q);
        CHECK(a.has_value() == b.has_value());
        if (a && b) CHECK(a->m == b->m);
    };
    for (long long n = 1; n <= 120; ++n) same(n, 6, 2);
    for (long long n = 1; n <= 60; ++n) same(n, 4, 3);
    for (long long n = 1; n <= 40; ++n) same(n, 5, 4);
    for (long long n = 1; n <= 25; ++n) same(n, 5, 6);
}

TEST_CASE("solver caps: enumeration refuses, auto degrades, structured caps too") {
    // k = 11, q = 2 at n = 1: the box has 2^11 = 2048 points
    CHECK_THROWS_AS(
        find_dependence_roots(1, 11, 2, table(), ModQSolver::Enumerate, 100),
        resource_error);
    auto via_auto = find_dependence_roots(1, 11, 2, table(), ModQSolver::Auto, 100);
    auto via_enum = find_dependence_roots(1, 11, 2, table(), ModQSolver::Enumerate);
    REQUIRE(via_auto.has_value());
    REQUIRE(via_enum.has_value());
    CHECK(via_auto->m == via_enum->m);
    CHECK_THROWS_AS(
        find_dependence_roots(1, 11, 2, table(), ModQSolver::Structured, 1),
        resource_error);
}

TEST_CASE("mod-q verify enforces the box normal form") {
    CHECK_THROWS_AS(verify_witness(1, 5, {3, 1, 0, 0, 1}, 2, table()),
                    std::invalid_argument);
    CHECK_THROWS_AS(verify_witness(1, 5, {-1, 1, 0, 0, 1}, 2, table()),
                    std::invalid_argument);
    CHECK(!verify_witness(1, 5, {1, 1, 0, 1, 1}, 2, table()));
}

TEST_CASE("value_order examples") {
    CHECK(value_order(4, 2) == 1);
    CHECK(value_order(8, 6) == 2);
    CHECK(value_order(6, 4) == 4);
    CHECK(value_order(2, 5) == 5);
    CHECK(value_order(64, 12) == 2);
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(valuation_matrix(0, 3, table()), std::invalid_argument);
    CHECK_THROWS_AS(valuation_matrix(1, 0, table()), std::invalid_argument);
    CHECK_THROWS_AS(find_dependence_roots(1, 5, 0, table()), std::invalid_argument);
    // q = 1: the constant function; the box normal form [0, q/mu) only contains
    // the trivial assignment, so no nonzero witness exists
    CHECK(!find_dependence_roots(1, 5, 1, table()).has_value());
    // window must fit inside the sieve
    CHECK_THROWS_AS(valuation_matrix(199'999, 5, table()), std::invalid_argument);
}

TEST_CASE("independence bound hint") {
    CHECK(independence_bound_hint(5) == doctest::Approx(std::pow(500.0, 6.0)));
    CHECK(independence_bound_hint(13) > 1e27);
}

} // TEST_SUITE
