#include "rcmf/counting.hpp"
#include "rcmf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace rcmf {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

long long tri(long long n) { return n * (n + 1); }  // the recurring n(n+1)

u128 isqrt_u128(u128 x) {
    if (x == 0) return 0;
    u128 r = (u128)std::sqrt((double)x);
    while (r > 0 && r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

// n with n(n+1) == t, or -1
long long invert_tri(u128 t) {
    u128 s = isqrt_u128(t);
    // n(n+1) lies between n^2 and (n+1)^2, so s == n
    if (s * (s + 1) == t) return (long long)s;
    if (s >= 1 && (s - 1) * s == t) return (long long)(s - 1);
    return -1;
}

struct GroupAccumulator {
    // map from canonical product key to the sorted list of n in the group
    std::map<ExponentVector, std::vector<long long>> groups;
};

MomentCountReport finalize_report(std::vector<long long> m, long long q,
                                  long long N_prime, long long N,
                                  const GroupAccumulator& acc, long long witness_cap) {
    MomentCountReport rep;
    rep.m = std::move(m);
    rep.q = q;
    rep.N_prime = N_prime;
    rep.N = N;
    rep.diagonal_count = N - N_prime;
    long long total = 0;
    std::vector<std::pair<long long, long long>> pairs;
    for (const auto& [key, members] : acc.groups) {
        long long g = (long long)members.size();
        total += g * g;
        if (g > 1) {
            for (long long x : members)
                for (long long y : members)
                    if (x != y) pairs.emplace_back(x, y);
        }
    }
    rep.total = total;
    rep.nontrivial_count = total - rep.diagonal_count;
    std::sort(pairs.begin(), pairs.end());
    if ((long long)pairs.size() > witness_cap) pairs.resize((size_t)witness_cap);
    rep.witness_pairs = std::move(pairs);
    return rep;
}

} // namespace

MomentCountReport second_moment_exact_uniform(const std::vector<long long>& m,
                                              long long N_prime, long long N,
                                              const SpfTable& table,
                                              long long witness_cap) {
    if (m.empty() || std::all_of(m.begin(), m.end(), [](long long x) { return x == 0; }))
        throw std::invalid_argument("second_moment_exact_uniform: m must not be all zero");
    if (N_prime < 0 || N_prime >= N)
        throw std::invalid_argument("second_moment_exact_uniform: need 0 <= N' < N");
    const long long k = (long long)m.size();
    if (N + k > table.limit)
        throw std::invalid_argument("second_moment_exact_uniform: sieve limit too small");

    GroupAccumulator acc;
    for (long long n = N_prime + 1; n <= N; ++n) {
        ExponentVector key;
        for (long long j = 1; j <= k; ++j)
            if (m[(size_t)(j - 1)] != 0)
                key.add_scaled(factorize(n + j, table), m[(size_t)(j - 1)]);
        acc.groups[std::move(key)].push_back(n);
    }
    return finalize_report(m, 0, N_prime, N, acc, witness_cap);
}

MomentCountReport second_moment_exact_roots(const std::vector<long long>& m, long long q,
                                            long long N_prime, long long N,
                                            const SpfTable& table, long long witness_cap) {
    if (q < 1) throw std::invalid_argument("second_moment_exact_roots: q must be >= 1");
    if (m.empty())
        throw std::invalid_argument("second_moment_exact_roots: m must be nonempty");
    // the law only sees exponents mod q, so reduce first; all-zero mod q would
    // make every term identically 1 and the count degenerate to N - N', hence
    // the precondition
    std::vector<long long> mm(m.size());
    for (size_t j = 0; j < m.size(); ++j) mm[j] = ((m[j] % q) + q) % q;
    if (std::all_of(mm.begin(), mm.end(), [](long long x) { return x == 0; }))
        throw std::invalid_argument("second_moment_exact_roots: m is 0 mod q");
    if (N_prime < 0 || N_prime >= N)
        throw std::invalid_argument("second_moment_exact_roots: need 0 <= N' < N");
    const long long k = (long long)m.size();
    if (N + k > table.limit)
        throw std::invalid_argument("second_moment_exact_roots: sieve limit too small");

    GroupAccumulator acc;
    for (long long n = N_prime + 1; n <= N; ++n) {
        ExponentVector prod;
        for (long long j = 1; j <= k; ++j)
            if (mm[(size_t)(j - 1)] != 0)
                prod.add_scaled(factorize(n + j, table), mm[(size_t)(j - 1)]);
        acc.groups[power_free_part(prod, q)].push_back(n);
    }
    return finalize_report(m, q, N_prime, N, acc, witness_cap);
}

QuadrupleSolution::QuadrupleSolution(long long a_, long long b_, long long c_, long long d_)
    : a(a_), b(b_), c(c_), d(d_) {
    if (!(a >= 1 && a < b && b <= c && c < d))
        throw std::logic_error("QuadrupleSolution: ordering violated");
    if ((u128)tri(a) * (u128)tri(d) != (u128)tri(b) * (u128)tri(c))
        throw std::logic_error("QuadrupleSolution: product identity violated");
    cls = (b == c) ? Class::EqualMiddle : Class::Strict;
}

namespace {

struct PairScan {
    long long strict_count = 0;
    long long equal_middle_count = 0;
    std::vector<QuadrupleSolution> solutions;  // all of them, lex order after sort
};

std::uint64_t shard_hash(u128 key) {
    std::uint64_t z = (std::uint64_t)key ^ (std::uint64_t)(key >> 64);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct PairEntry {
    u128 key;
    long long a, d;
    bool operator<(const PairEntry& o) const {
        return key != o.key ? key < o.key : a < o.a;
    }
};

// Enumerate all (a,d), a < d <= N, grouped by the exact product key
// a(a+1)d(d+1).  Distinct pairs sharing a key are automatically nested
// (a < b < c < d), giving the strict count; perfect-square keys t^2 with
// t = b(b+1) give the equal-middle count.  Sharding by key hash keeps the
// working set bounded; all counts are exact and shard-split-independent.
PairScan scan_pairs(long long N, long long pair_cap, long long shard_budget_bytes) {
    if (N < 1) throw std::invalid_argument("fourth moment scan: N must be >= 1");
    if (N > pair_cap)
        throw resource_error("fourth moment scan: N=" + std::to_string(N) +
                             " exceeds the quadratic-cost cap " + std::to_string(pair_cap));
    PairScan out;
    const long long total_pairs = N * (N - 1) / 2;
    const long long bytes_per_entry = (long long)sizeof(PairEntry);
    long long shards = std::max<long long>(
        1, (total_pairs * bytes_per_entry + shard_budget_bytes - 1) / shard_budget_bytes);

    std::vector<PairEntry> entries;
    for (long long s = 0; s < shards; ++s) {
        entries.clear();
        for (long long a = 1; a < N; ++a) {
            const u128 fa = (u128)tri(a);
            for (long long d = a + 1; d <= N; ++d) {
                u128 key = fa * (u128)tri(d);
                if (shards > 1 && (long long)(shard_hash(key) % (std::uint64_t)shards) != s)
                    continue;
                entries.push_back({key, a, d});
            }
        }
        std::sort(entries.begin(), entries.end());
        size_t i = 0;
        while (i < entries.size()) {
            size_t j = i;
            while (j < entries.size() && entries[j].key == entries[i].key) ++j;
            const long long g = (long long)(j - i);
            out.strict_count += g * (g - 1) / 2;
            // nested pairing: members ascending in a are descending in d
            for (size_t x = i; x < j; ++x)
                for (size_t y = x + 1; y < j; ++y)
                    out.solutions.emplace_back(entries[x].a, entries[y].a,
                                               entries[y].d, entries[x].d);
            u128 root = isqrt_u128(entries[i].key);
            if (root * root == entries[i].key) {
                long long b = invert_tri(root);
                if (b > 0) {
                    for (size_t x = i; x < j; ++x) {
                        out.equal_middle_count += 1;
                        out.solutions.emplace_back(entries[x].a, b, b, entries[x].d);
                    }
                }
            }
            i = j;
        }
    }
    std::sort(out.solutions.begin(), out.solutions.end(),
              [](const QuadrupleSolution& x, const QuadrupleSolution& y) {
                  return std::tie(x.a, x.b, x.c, x.d) < std::tie(y.a, y.b, y.c, y.d);
              });
    return out;
}

} // namespace

FourthMomentReport fourth_moment_counts(long long N, long long pair_cap,
                                        long long shard_budget_bytes,
                                        long long solution_cap) {
    PairScan scan = scan_pairs(N, pair_cap, shard_budget_bytes);
    FourthMomentReport rep;
    rep.N = N;
    rep.strict_count = scan.strict_count;
    rep.equal_middle_count = scan.equal_middle_count;
    rep.moment = 2 * N * N - N + 8 * scan.strict_count + 4 * scan.equal_middle_count;
    rep.solutions = std::move(scan.solutions);
    if ((long long)rep.solutions.size() > solution_cap)
        rep.solutions.resize((size_t)solution_cap);
    return rep;
}

std::vector<QuadrupleSolution> family_quadruples(long long N) {
    if (N < 8) throw std::invalid_argument("family_quadruples: N must be >= 8");
    std::vector<QuadrupleSolution> out;
    for (long long n = 1; 6 * n + 2 <= N; ++n)
        out.emplace_back(n, 2 * n + 1, 3 * n, 6 * n + 2);
    if (N >= 9) out.emplace_back(1, 2, 5, 9);
    return out;
}

RatioCheckReport ratio_property_check(long long N, long long pair_cap,
                                      long long shard_budget_bytes) {
    if (N < 8) throw std::invalid_argument("ratio_property_check: N must be >= 8");
    PairScan scan = scan_pairs(N, pair_cap, shard_budget_bytes);
    RatioCheckReport rep;
    rep.N = N;
    rep.solution_count = (long long)scan.solutions.size();
    for (const QuadrupleSolution& s : scan.solutions) {
        // d/a > 3 + 2 sqrt 2  <=>  d^2 - 6ad + a^2 > 0, exactly (the other root
        // of the quadratic, 3 - 2 sqrt 2 < 1, is below every possible d/a)
        i128 disc = (i128)s.d * s.d - (i128)6 * s.a * s.d + (i128)s.a * s.a;
        if (disc <= 0) rep.all_above_threshold = false;
        if (rep.min_ratio_a == 0 ||
            (i128)s.d * rep.min_ratio_a < (i128)rep.min_ratio_d * s.a) {
            rep.min_ratio_d = s.d;
            rep.min_ratio_a = s.a;
        }
    }
    if (rep.min_ratio_a != 0) {
        long long g = std::gcd(rep.min_ratio_d, rep.min_ratio_a);
        rep.min_ratio_d /= g;
        rep.min_ratio_a /= g;
    }
    return rep;
}

UFamilyReport u_family(long long r_max) {
    if (r_max < 2) throw std::invalid_argument("u_family: r_max must be >= 2");
    UFamilyReport rep;
    rep.u = {0, 0};
    for (long long r = 2; r <= r_max; ++r) {
        long long next;
        if (__builtin_mul_overflow(rep.u.back(), 2ll, &next) ||
            __builtin_add_overflow(next, rep.u[(size_t)r - 2] + 1, &next))
            throw std::overflow_error("u_family: u_r exceeds 64 bits");
        rep.u.push_back(next);
    }
    for (long long k2 = 2; k2 + 2 <= r_max; k2 += 2)
        rep.quadruples.emplace_back(rep.u[(size_t)k2], rep.u[(size_t)k2 + 1],
                                    rep.u[(size_t)k2 + 1], rep.u[(size_t)k2 + 2]);
    return rep;
}

long long moment_2q_nontrivial(long long q, long long N, long long cap_q2,
                               long long cap_q3) {
    if (q < 1 || q > 3)
        throw std::invalid_argument("moment_2q_nontrivial: q must be in {1,2,3}");
    if (N < 1) throw std::invalid_argument("moment_2q_nontrivial: N must be >= 1");
    if (q == 1) return 0;  // n(n+1) is injective
    if (q == 2 && N > cap_q2)
        throw resource_error("moment_2q_nontrivial: N exceeds the q=2 cap");
    if (q == 3 && N > cap_q3)
        throw resource_error("moment_2q_nontrivial: N exceeds the q=3 cap");
    // exact 64-bit product keys bound the reachable N even with raised caps
    if (q == 2 && N > 55'000)
        throw resource_error("moment_2q_nontrivial: q=2 keys would overflow 64 bits");
    if (q == 3 && N > 1'400)
        throw resource_error("moment_2q_nontrivial: q=3 keys would overflow 64 bits");

    // Multisets of size q with their arrangement counts, keyed by the exact
    // product (fits in 64 bits for the supported caps).  Non-trivial ordered
    // count = sum over keys (sum arr)^2 - sum over multisets arr^2.
    std::vector<std::pair<long long, long long>> keyed;  // (product, arrangements)
    if (q == 2) {
        keyed.reserve((size_t)(N * (N + 1) / 2));
        for (long long a = 1; a <= N; ++a)
            for (long long b = a; b <= N; ++b)
                keyed.emplace_back(tri(a) * tri(b), a == b ? 1 : 2);
    } else {
        for (long long a = 1; a <= N; ++a)
            for (long long b = a; b <= N; ++b) {
                long long fab = tri(a) * tri(b);
                for (long long c = b; c <= N; ++c) {
                    long long arr = (a == c) ? 1 : (a == b || b == c) ? 3 : 6;
                    keyed.emplace_back(fab * tri(c), arr);
                }
            }
    }
    std::sort(keyed.begin(), keyed.end());
    long long total = 0, trivial = 0;
    size_t i = 0;
    while (i < keyed.size()) {
        size_t j = i;
        long long csum = 0;
        while (j < keyed.size() && keyed[j].first == keyed[i].first) {
            csum += keyed[j].second;
            trivial += keyed[j].second * keyed[j].second;
            ++j;
        }
        total += csum * csum;
        i = j;
    }
    return total - trivial;
}

} // namespace rcmf
