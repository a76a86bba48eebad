#pragma once

#include "rcmf/arith.hpp"

#include <optional>
#include <vector>

namespace rcmf {

// Certificate of a multiplicative dependence over Q: prod_j (n+j)^{m_j} = 1.
// Canonical form: m not all zero, gcd of |m_j| = 1, first nonzero entry positive.
struct DependenceWitness {
    long long n = 0;
    long long k = 0;
    std::vector<long long> m;
    bool operator==(const DependenceWitness&) const = default;
};

// Mod-q certificate: 0 <= m_j < q/mu_{n+j,q}, m not all zero, and for every
// prime p: sum_j m_j v_p(n+j) == 0 (mod q).
struct WitnessModQ {
    long long n = 0;
    long long k = 0;
    long long q = 1;
    std::vector<long long> m;
    bool operator==(const WitnessModQ&) const = default;
};

// Canonical basis of the rational kernel of the valuation matrix, as integer
// vectors with content 1.  Derived from the (unique) RREF, so two runs over the
// same window produce identical bases — scan output is diff-stable.
struct KernelBasis {
    std::vector<std::vector<long long>> vectors;
    long long rank = 0;  // rank of the valuation matrix (= k - vectors.size())
    bool operator==(const KernelBasis&) const = default;
};

// Valuation matrix of the window (n+1, ..., n+k): one row per prime dividing
// some window element, columns j = 1..k, entry v_p(n+j).
struct ValuationMatrix {
    long long n = 0;
    long long k = 0;
    std::vector<long long> primes;                 // ascending
    std::vector<std::vector<long long>> rows;      // rows[i][j-1] = v_{primes[i]}(n+j)
};

ValuationMatrix valuation_matrix(long long n, long long k, const SpfTable& table);

// Exact kernel over Q of an integer matrix (rows x k), returned as integer
// vectors with content 1, first nonzero entry positive, ordered by free column.
KernelBasis integer_kernel(const std::vector<std::vector<long long>>& rows, long long k);

// Uniform-circle case (Lemma of the Q-linear-independence criterion): empty
// optional iff the window is multiplicatively independent.  Rows of primes > k
// (necessarily single-support in a window of width k) are pre-eliminated,
// forcing those coordinates to zero, before the kernel computation.
std::optional<KernelBasis> find_dependence_uniform(long long n, long long k,
                                                   const SpfTable& table);

std::vector<std::pair<long long, KernelBasis>>
scan_dependences_uniform(long long k, long long n_lo, long long n_hi,
                         const SpfTable& table);
std::vector<std::pair<long long, KernelBasis>>
scan_dependences_uniform(long long k, long long n_max, const SpfTable& table);

enum class ModQSolver {
    Auto,        // enumerate within the cap, otherwise structured
    Enumerate,   // plain box enumeration only; resource_error above the cap
    Structured,  // Smith-form solution subgroup, intersected with the box
};

inline constexpr long long kDefaultBoxCap = 100'000'000;

// Root-of-unity case: search the box prod_j [0, q/mu_{n+j,q}) minus the origin
// for the lexicographically smallest witness.  Both solvers return the same
// witness (the lex-least box representative), so results are mode-independent.
std::optional<WitnessModQ> find_dependence_roots(long long n, long long k, long long q,
                                                 const SpfTable& table,
                                                 ModQSolver solver = ModQSolver::Auto,
                                                 long long box_cap = kDefaultBoxCap);

std::vector<std::pair<long long, WitnessModQ>>
scan_dependences_roots(long long k, long long q, long long n_lo, long long n_hi,
                       const SpfTable& table,
                       ModQSolver solver = ModQSolver::Auto,
                       long long box_cap = kDefaultBoxCap);
std::vector<std::pair<long long, WitnessModQ>>
scan_dependences_roots(long long k, long long q, long long n_max,
                       const SpfTable& table,
                       ModQSolver solver = ModQSolver::Auto,
                       long long box_cap = kDefaultBoxCap);

// Certificate checkers (exact; the q == 0 overloads check over Z).
bool verify_witness(long long n, long long k, const std::vector<long long>& m,
                    const SpfTable& table);
bool verify_witness(long long n, long long k, const std::vector<long long>& m,
                    long long q, const SpfTable& table);

// Order of the value group of X_s under the uniform-U_q law: q / mu_{s,q}.
long long value_order(long long s, long long q);

// Advisory-only bound from the independence proposition: (100 k)^{k+1}, beyond
// which independence is guaranteed for the uniform law.  Returned as a double
// because it overflows any integer type long before k = 13.
double independence_bound_hint(long long k);

} // namespace rcmf
