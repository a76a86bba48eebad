#pragma once

#include <cstdint>
#include <vector>
#include <string>
#include <utility>

namespace rcmf {

// Exact factored representation of a positive rational: product of p^e over the
// stored (prime, exponent) terms.  Primes strictly increasing, exponents nonzero,
// empty vector == 1.  This is the universal equality key of the project: whenever
// two rationals must be compared (moment counting, witness checking) the
// comparison happens on this canonical form, never on machine products.
struct ExponentVector {
    struct Term {
        long long p;
        long long e;
        bool operator==(const Term&) const = default;
        auto operator<=>(const Term&) const = default;
    };
    std::vector<Term> terms;

    bool operator==(const ExponentVector&) const = default;
    auto operator<=>(const ExponentVector&) const = default;

    bool is_one() const { return terms.empty(); }

    // exponent of p (0 if absent)
    long long exponent_of(long long p) const;

    // in-place: *this *= other^c  (c may be negative or zero)
    void add_scaled(const ExponentVector& other, long long c);

    ExponentVector operator+(const ExponentVector& other) const;  // product of values
    ExponentVector operator-(const ExponentVector& other) const;  // quotient of values

    // Represented value as a 128-bit integer; requires all exponents >= 0 and no
    // overflow (throws std::overflow_error otherwise).  Test/diagnostic use.
    unsigned __int128 value_u128() const;

    std::string to_string() const;  // e.g. "2^3 * 5^-1", "1" for empty

    // Discard nothing, but drop zero-exponent terms and enforce ordering; callers
    // that build `terms` by hand should normalize before comparisons.
    void normalize();
};

struct ExponentVectorHash {
    std::size_t operator()(const ExponentVector& v) const;
};

// Smallest-prime-factor sieve, built once and shared (immutable after build).
struct SpfTable {
    long long limit = 0;
    std::vector<uint32_t> spf;  // spf[n] for 2 <= n <= limit

    bool contains(long long n) const { return n >= 1 && n <= limit; }
};

// Default memory budget for build_spf (bytes of sieve storage).
inline constexpr long long kDefaultSpfBudgetBytes = 512ll << 20;

SpfTable build_spf(long long limit, long long budget_bytes = kDefaultSpfBudgetBytes);

// Factorization via the sieve; n == 1 gives the empty vector.  n > table.limit is
// a precondition violation (no trial-division fallback: counts must stay exact
// and fast, so out-of-range requests fail loudly).
ExponentVector factorize(long long n, const SpfTable& table);

// The "sharp_k" operator: largest divisor of n all of whose prime factors are
// >= k.  Trial division below k; independent of any sieve.
long long rough_part(long long n, long long k);

// Reduce all exponents mod q into [1, q-1], dropping multiples of q; this is the
// "g" of the q-th-power grouping argument.  Exponents must be nonnegative.
ExponentVector power_free_part(const ExponentVector& v, long long q);

// mu_{s,q}: largest divisor d of q such that s is a d-th power; equals
// gcd(q, gcd_p v_p(s)).
long long mu_power_divisor(long long s, long long q);
long long mu_power_divisor(const ExponentVector& v, long long q);

struct MultiplicativeStats {
    long long radical;
    long long tau;
    long long omega;
    bool operator==(const MultiplicativeStats&) const = default;
};

MultiplicativeStats multiplicative_stats(long long n);

} // namespace rcmf
