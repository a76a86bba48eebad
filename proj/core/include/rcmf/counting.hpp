#pragma once

#include "rcmf/arith.hpp"

#include <utility>
#include <vector>

namespace rcmf {

// Exact pair-count report: total == E|sum_{n=N'+1..N} prod_j X_{n+j}^{m_j}|^2
// for the law in question (q == 0 means the uniform-circle law).
struct MomentCountReport {
    std::vector<long long> m;
    long long q = 0;
    long long N_prime = 0;
    long long N = 0;
    long long diagonal_count = 0;     // N - N'
    long long nontrivial_count = 0;   // ordered pairs n1 != n2
    long long total = 0;              // diagonal + nontrivial
    std::vector<std::pair<long long, long long>> witness_pairs;  // ordered, capped
};

inline constexpr long long kDefaultWitnessCap = 64;

MomentCountReport second_moment_exact_uniform(const std::vector<long long>& m,
                                              long long N_prime, long long N,
                                              const SpfTable& table,
                                              long long witness_cap = kDefaultWitnessCap);

MomentCountReport second_moment_exact_roots(const std::vector<long long>& m, long long q,
                                            long long N_prime, long long N,
                                            const SpfTable& table,
                                            long long witness_cap = kDefaultWitnessCap);

// A solution of a(a+1)d(d+1) = b(b+1)c(c+1) with a < b <= c < d; the product
// identity is re-verified in exact arithmetic at construction.
struct QuadrupleSolution {
    enum class Class { Strict, EqualMiddle };
    long long a = 0, b = 0, c = 0, d = 0;
    Class cls = Class::Strict;

    QuadrupleSolution() = default;
    QuadrupleSolution(long long a, long long b, long long c, long long d);

    bool operator==(const QuadrupleSolution&) const = default;
};

struct FourthMomentReport {
    long long N = 0;
    long long strict_count = 0;        // script-N(N)
    long long equal_middle_count = 0;  // script-N_=(N)
    long long moment = 0;              // 2N^2 - N + 8 strict + 4 equal-middle
    std::vector<QuadrupleSolution> solutions;  // lex-sorted, capped
};

inline constexpr long long kDefaultFourthMomentCap = 20'000;
inline constexpr long long kDefaultShardBudgetBytes = 256ll << 20;
inline constexpr long long kDefaultSolutionCap = 64;

// E|sum_{n<=N} X_n X_{n+1}|^4 for the uniform-circle law, via exact pair
// enumeration keyed by a(a+1)d(d+1).  Data-parallel over key shards; counts are
// independent of the shard split.
FourthMomentReport fourth_moment_counts(long long N,
                                        long long pair_cap = kDefaultFourthMomentCap,
                                        long long shard_budget_bytes = kDefaultShardBudgetBytes,
                                        long long solution_cap = kDefaultSolutionCap);

// The parametric family (n, 2n+1, 3n, 6n+2) up to N, plus the sporadic
// (1,2,5,9); every member passes the exact identity (checked at construction).
std::vector<QuadrupleSolution> family_quadruples(long long N);

struct RatioCheckReport {
    long long N = 0;
    long long solution_count = 0;       // strict + equal-middle
    long long min_ratio_d = 0;          // min d/a as a reduced fraction;
    long long min_ratio_a = 0;          //   (0,0) when no solutions exist
    bool all_above_threshold = true;    // d^2 - 6ad + a^2 > 0 for every solution
};

// Minimal d/a over all solutions with d <= N, plus the exact integer check
// d^2 - 6ad + a^2 > 0 (equivalent to d/a > 3 + 2 sqrt 2) on every solution.
RatioCheckReport ratio_property_check(long long N,
                                      long long pair_cap = kDefaultFourthMomentCap,
                                      long long shard_budget_bytes = kDefaultShardBudgetBytes);

struct UFamilyReport {
    std::vector<long long> u;                   // u_0 .. u_{r_max}
    std::vector<QuadrupleSolution> quadruples;  // (u_{2k}, u_{2k+1}, u_{2k+1}, u_{2k+2}), k >= 1
};

// u_{r+1} = 2 u_r + u_{r-1} + 1 with u_0 = u_1 = 0, plus the equal-middle
// quadruples the family generates.
UFamilyReport u_family(long long r_max);

inline constexpr long long kDefaultMoment2qCapQ2 = 5'000;
inline constexpr long long kDefaultMoment2qCapQ3 = 300;

// Count of non-trivial ordered 2q-tuples solving
// prod_{r<=q} n_r(n_r+1) = prod_{r<=q} n_{q+r}(n_{q+r}+1); trivial means the
// two index multisets coincide.  q in {1,2,3} only.
long long moment_2q_nontrivial(long long q, long long N,
                               long long cap_q2 = kDefaultMoment2qCapQ2,
                               long long cap_q3 = kDefaultMoment2qCapQ3);

} // namespace rcmf
