#include "rcmf/dependence.hpp"
#include "rcmf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rcmf {

namespace {

using i128 = __int128;

i128 abs128(i128 a) { return a < 0 ? -a : a; }

i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i128 mul_checked(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("dependence: 128-bit overflow in exact elimination");
    return r;
}

i128 add_checked(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("dependence: 128-bit overflow in exact elimination");
    return r;
}

// Exact rational scalar on 128-bit integers, reduced after every operation.
// Valuation matrices are tiny and sparse; reduced RREF entries stay far below
// the 128-bit range (overflow would throw rather than corrupt a result).
struct Rat {
    i128 n = 0;
    i128 d = 1;

    void reduce() {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) {
            d = 1;
            return;
        }
        i128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
    }
};

Rat rat_of(i128 v) { return Rat{v, 1}; }

Rat rat_mul(const Rat& a, const Rat& b) {
    Rat r{mul_checked(a.n, b.n), mul_checked(a.d, b.d)};
    r.reduce();
    return r;
}

Rat rat_div(const Rat& a, const Rat& b) {
    Rat r{mul_checked(a.n, b.d), mul_checked(a.d, b.n)};
    r.reduce();
    return r;
}

Rat rat_sub(const Rat& a, const Rat& b) {
    Rat r{add_checked(mul_checked(a.n, b.d), -mul_checked(b.n, a.d)),
          mul_checked(a.d, b.d)};
    r.reduce();
    return r;
}

long long narrow_ll(i128 v, const char* who) {
    if (v > (i128)INT64_MAX || v < (i128)INT64_MIN)
        throw std::overflow_error(std::string(who) + ": kernel entry exceeds 64 bits");
    return (long long)v;
}

// content-1, first nonzero positive
void canonicalize_vector(std::vector<long long>& v) {
    i128 g = 0;
    for (long long x : v) g = gcd128(g, x);
    if (g > 1)
        for (long long& x : v) x = (long long)(x / (long long)g);
    for (long long x : v) {
        if (x != 0) {
            if (x < 0)
                for (long long& y : v) y = -y;
            break;
        }
    }
}

} // namespace

ValuationMatrix valuation_matrix(long long n, long long k, const SpfTable& table) {
    if (n < 1 || k < 1) throw std::invalid_argument("valuation_matrix: need n, k >= 1");
    if (n + k > table.limit)
        throw std::invalid_argument("valuation_matrix: window exceeds sieve limit");
    ValuationMatrix M;
    M.n = n;
    M.k = k;
    std::map<long long, std::vector<long long>> by_prime;
    for (long long j = 1; j <= k; ++j) {
        ExponentVector f = factorize(n + j, table);
        for (const auto& t : f.terms) {
            auto& row = by_prime[t.p];
            if (row.empty()) row.assign((size_t)k, 0);
            row[(size_t)(j - 1)] = t.e;
        }
    }
    for (auto& [p, row] : by_prime) {
        M.primes.push_back(p);
        M.rows.push_back(std::move(row));
    }
    return M;
}

KernelBasis integer_kernel(const std::vector<std::vector<long long>>& rows, long long k) {
    if (k < 1) throw std::invalid_argument("integer_kernel: need at least one column");
    const size_t r = rows.size();
    std::vector<std::vector<Rat>> a(r, std::vector<Rat>((size_t)k));
    for (size_t i = 0; i < r; ++i) {
        if ((long long)rows[i].size() != k)
            throw std::invalid_argument("integer_kernel: ragged matrix");
        for (size_t j = 0; j < (size_t)k; ++j) a[i][j] = rat_of(rows[i][j]);
    }

    std::vector<size_t> pivot_col;
    std::vector<char> is_pivot((size_t)k, 0);
    size_t rank = 0;
    for (size_t col = 0; col < (size_t)k && rank < r; ++col) {
        size_t sel = rank;
        while (sel < r && a[sel][col].n == 0) ++sel;
        if (sel == r) continue;
        std::swap(a[rank], a[sel]);
        Rat p = a[rank][col];
        for (size_t j = col; j < (size_t)k; ++j) a[rank][j] = rat_div(a[rank][j], p);
        for (size_t i = 0; i < r; ++i) {
            if (i == rank || a[i][col].n == 0) continue;
            Rat f = a[i][col];
            for (size_t j = col; j < (size_t)k; ++j)
                a[i][j] = rat_sub(a[i][j], rat_mul(f, a[rank][j]));
        }
        pivot_col.push_back(col);
        is_pivot[col] = 1;
        ++rank;
    }

    KernelBasis basis;
    basis.rank = (long long)rank;
    for (size_t f = 0; f < (size_t)k; ++f) {
        if (is_pivot[f]) continue;
        // x_f = 1, x_{pivot_col[i]} = -a[i][f]; scale by the denominator lcm
        i128 D = 1;
        for (size_t i = 0; i < rank; ++i) {
            i128 d = a[i][f].d;
            D = mul_checked(D / gcd128(D, d), d);
        }
        std::vector<long long> v((size_t)k, 0);
        v[f] = narrow_ll(D, "integer_kernel");
        for (size_t i = 0; i < rank; ++i)
            v[pivot_col[i]] = narrow_ll(-mul_checked(a[i][f].n, D / a[i][f].d),
                                        "integer_kernel");
        canonicalize_vector(v);
        basis.vectors.push_back(std::move(v));
    }
    return basis;
}

std::optional<KernelBasis> find_dependence_uniform(long long n, long long k,
                                                   const SpfTable& table) {
    ValuationMatrix M = valuation_matrix(n, k, table);

    // A prime > k divides at most one element of a width-k window, so its row
    // forces that coordinate to zero.  Drop those columns up front; the kernel
    // computation then runs on a matrix of at most pi(k) rows.
    std::vector<char> forced((size_t)k, 0);
    for (size_t i = 0; i < M.primes.size(); ++i) {
        if (M.primes[i] <= k) continue;
        for (size_t j = 0; j < (size_t)k; ++j)
            if (M.rows[i][j] != 0) forced[j] = 1;
    }
    std::vector<size_t> keep;
    for (size_t j = 0; j < (size_t)k; ++j)
        if (!forced[j]) keep.push_back(j);
    if (keep.empty()) return std::nullopt;

    std::vector<std::vector<long long>> reduced;
    for (size_t i = 0; i < M.primes.size(); ++i) {
        if (M.primes[i] > k) continue;
        std::vector<long long> row;
        row.reserve(keep.size());
        bool nonzero = false;
        for (size_t j : keep) {
            row.push_back(M.rows[i][j]);
            nonzero = nonzero || M.rows[i][j] != 0;
        }
        if (nonzero) reduced.push_back(std::move(row));
    }

    KernelBasis small = integer_kernel(reduced, (long long)keep.size());
    if (small.vectors.empty()) return std::nullopt;

    KernelBasis full;
    full.rank = small.rank + (long long)((size_t)k - keep.size());
    for (const auto& sv : small.vectors) {
        std::vector<long long> v((size_t)k, 0);
        for (size_t t = 0; t < keep.size(); ++t) v[keep[t]] = sv[t];
        full.vectors.push_back(std::move(v));
    }
    return full;
}

std::vector<std::pair<long long, KernelBasis>>
scan_dependences_uniform(long long k, long long n_lo, long long n_hi,
                         const SpfTable& table) {
    if (k < 1 || n_lo < 1 || n_hi < n_lo)
        throw std::invalid_argument("scan_dependences_uniform: bad range");
    std::vector<std::pair<long long, KernelBasis>> out;
    for (long long n = n_lo; n <= n_hi; ++n)
        if (auto dep = find_dependence_uniform(n, k, table))
            out.emplace_back(n, std::move(*dep));
    return out;
}

std::vector<std::pair<long long, KernelBasis>>
scan_dependences_uniform(long long k, long long n_max, const SpfTable& table) {
    return scan_dependences_uniform(k, 1, n_max, table);
}

namespace {

struct RootsInstance {
    long long n, k, q;
    std::vector<long long> box;                    // B_j = q / mu_{n+j,q}
    std::vector<long long> primes;
    std::vector<std::vector<long long>> rows;      // aligned with primes
    std::vector<long long> last_col;               // last window index touching the prime
};

RootsInstance build_roots_instance(long long n, long long k, long long q,
                                   const SpfTable& table) {
    RootsInstance inst;
    inst.n = n;
    inst.k = k;
    inst.q = q;
    ValuationMatrix M = valuation_matrix(n, k, table);
    inst.primes = M.primes;
    inst.rows = M.rows;
    inst.box.assign((size_t)k, 0);
    for (long long j = 1; j <= k; ++j) {
        ExponentVector f = factorize(n + j, table);
        inst.box[(size_t)(j - 1)] = q / mu_power_divisor(f, q);
    }
    inst.last_col.assign(inst.primes.size(), 0);
    for (size_t i = 0; i < inst.rows.size(); ++i)
        for (size_t j = 0; j < (size_t)k; ++j)
            if (inst.rows[i][j] != 0) inst.last_col[i] = (long long)j;
    return inst;
}

i128 box_volume(const RootsInstance& inst) {
    i128 v = 1;
    for (long long b : inst.box) {
        v *= b;
        if (v > (i128)1 << 100) return v;  // saturate; only compared against caps
    }
    return v;
}

// Ascending-lexicographic DFS over the box with prime-by-prime pruning: a
// prime's congruence is decided as soon as its last supporting column is
// assigned.  First full assignment found is the lex-least witness.
bool dfs_box(const RootsInstance& inst, size_t col, std::vector<long long>& m,
             std::vector<long long>& sums, bool& any_nonzero_state,
             std::vector<long long>& out) {
    const size_t k = (size_t)inst.k;
    if (col == k) {
        if (!any_nonzero_state) return false;
        out = m;
        return true;
    }
    for (long long val = 0; val < inst.box[col]; ++val) {
        m[col] = val;
        bool saved_nonzero = any_nonzero_state;
        any_nonzero_state = any_nonzero_state || val != 0;
        // apply the whole column before testing congruences: the undo loop below
        // subtracts for every prime, so every prime must have been added first
        for (size_t i = 0; i < inst.primes.size(); ++i) {
            long long v = inst.rows[i][col];
            if (v != 0) sums[i] += val * v;
        }
        bool ok = true;
        for (size_t i = 0; i < inst.primes.size() && ok; ++i)
            if ((size_t)inst.last_col[i] == col && sums[i] % inst.q != 0) ok = false;
        if (ok && dfs_box(inst, col + 1, m, sums, any_nonzero_state, out)) return true;
        for (size_t i = 0; i < inst.primes.size(); ++i) {
            long long v = inst.rows[i][col];
            if (v != 0) sums[i] -= val * v;
        }
        any_nonzero_state = saved_nonzero;
    }
    m[col] = 0;
    return false;
}

std::optional<std::vector<long long>> solve_roots_enumerate(const RootsInstance& inst) {
    std::vector<long long> m((size_t)inst.k, 0), out;
    std::vector<long long> sums(inst.primes.size(), 0);
    bool nz = false;
    if (dfs_box(inst, 0, m, sums, nz, out)) return out;
    return std::nullopt;
}

// Structured fallback: diagonalize A as U A V = D over Z (V tracked), solve
// D y == 0 (mod q) coordinate-wise, map back m = V y, reduce into the box
// (m_j mod B_j preserves all congruences because B_j v_p(n+j) == 0 mod q),
// and take the lex-least nonzero representative.
std::optional<std::vector<long long>> solve_roots_structured(const RootsInstance& inst,
                                                             long long cap) {
    const size_t k = (size_t)inst.k;
    const size_t r = inst.rows.size();
    std::vector<std::vector<i128>> A(r, std::vector<i128>(k, 0));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < k; ++j) A[i][j] = inst.rows[i][j];
    std::vector<std::vector<i128>> V(k, std::vector<i128>(k, 0));
    for (size_t j = 0; j < k; ++j) V[j][j] = 1;

    size_t t = 0;
    const size_t tmax = std::min(r, k);
    while (t < tmax) {
        // pivot: smallest nonzero magnitude in the trailing block
        size_t pi = r, pj = k;
        i128 best = 0;
        for (size_t i = t; i < r; ++i)
            for (size_t j = t; j < k; ++j)
                if (A[i][j] != 0 && (best == 0 || abs128(A[i][j]) < best)) {
                    best = abs128(A[i][j]);
                    pi = i;
                    pj = j;
                }
        if (best == 0) break;
        std::swap(A[t], A[pi]);
        for (size_t i = 0; i < r; ++i) std::swap(A[i][t], A[i][pj]);
        for (size_t i = 0; i < k; ++i) std::swap(V[i][t], V[i][pj]);

        bool clean = true;
        for (size_t i = t + 1; i < r; ++i) {
            if (A[i][t] == 0) continue;
            i128 f = A[i][t] / A[t][t];
            for (size_t j = t; j < k; ++j)
                A[i][j] = add_checked(A[i][j], -mul_checked(f, A[t][j]));
            if (A[i][t] != 0) clean = false;
        }
        for (size_t j = t + 1; j < k; ++j) {
            if (A[t][j] == 0) continue;
            i128 f = A[t][j] / A[t][t];
            for (size_t i = 0; i < r; ++i)
                A[i][j] = add_checked(A[i][j], -mul_checked(f, A[i][t]));
            for (size_t i = 0; i < k; ++i)
                V[i][j] = add_checked(V[i][j], -mul_checked(f, V[i][t]));
            if (A[t][j] != 0) clean = false;
        }
        if (clean) ++t;  // else re-pivot on the smaller remainders
    }

    // coordinate ranges for y: diagonal entries need d_i y_i == 0 (mod q)
    std::vector<long long> step(k), count(k);
    i128 total = 1;
    for (size_t i = 0; i < k; ++i) {
        long long d = (i < t) ? (long long)abs128(A[i][i]) : 0;
        long long g = (d == 0) ? 1 : std::gcd(inst.q, d);
        if (i < t) {
            step[i] = inst.q / g;
            count[i] = g;
        } else {
            step[i] = 1;
            count[i] = inst.q;
        }
        total *= count[i];
        if (total > (i128)cap)
            throw resource_error("find_dependence_roots: structured solution group "
                                 "too large for the configured cap");
    }

    std::optional<std::vector<long long>> best;
    std::vector<long long> y(k, 0), idx(k, 0);
    for (;;) {
        // m = V y mod q, then reduced into the box
        std::vector<long long> m(k, 0);
        bool nonzero = false;
        for (size_t j = 0; j < k; ++j) {
            i128 s = 0;
            for (size_t i = 0; i < k; ++i)
                if (y[i] != 0) s = add_checked(s, mul_checked(V[j][i], y[i]));
            long long mj = (long long)(((s % inst.q) + inst.q) % inst.q);
            mj %= inst.box[j];
            m[j] = mj;
            nonzero = nonzero || mj != 0;
        }
        if (nonzero && (!best || m < *best)) best = m;

        size_t c = k;
        while (c > 0) {
            --c;
            if (++idx[c] < count[c]) {
                y[c] = idx[c] * step[c];
                break;
            }
            idx[c] = 0;
            y[c] = 0;
            if (c == 0) return best;
        }
    }
}

} // namespace

std::optional<WitnessModQ> find_dependence_roots(long long n, long long k, long long q,
                                                 const SpfTable& table,
                                                 ModQSolver solver, long long box_cap) {
    if (n < 1 || k < 1 || q < 1)
        throw std::invalid_argument("find_dependence_roots: need n, k, q >= 1");
    RootsInstance inst = build_roots_instance(n, k, q, table);
    i128 volume = box_volume(inst);

    std::optional<std::vector<long long>> m;
    if (solver == ModQSolver::Enumerate && volume > (i128)box_cap)
        throw resource_error(
            "find_dependence_roots: box volume exceeds the enumeration cap; "
            "use the structured solver");
    if (solver == ModQSolver::Structured)
        m = solve_roots_structured(inst, box_cap);
    else if (solver == ModQSolver::Auto && volume > (i128)box_cap)
        m = solve_roots_structured(inst, box_cap);
    else
        m = solve_roots_enumerate(inst);

    if (!m) return std::nullopt;
    WitnessModQ w;
    w.n = n;
    w.k = k;
    w.q = q;
    w.m = std::move(*m);
    return w;
}

std::vector<std::pair<long long, WitnessModQ>>
scan_dependences_roots(long long k, long long q, long long n_lo, long long n_hi,
                       const SpfTable& table, ModQSolver solver, long long box_cap) {
    if (k < 1 || q < 1 || n_lo < 1 || n_hi < n_lo)
        throw std::invalid_argument("scan_dependences_roots: bad range");
    std::vector<std::pair<long long, WitnessModQ>> out;
    for (long long n = n_lo; n <= n_hi; ++n)
        if (auto w = find_dependence_roots(n, k, q, table, solver, box_cap))
            out.emplace_back(n, std::move(*w));
    return out;
}

std::vector<std::pair<long long, WitnessModQ>>
scan_dependences_roots(long long k, long long q, long long n_max,
                       const SpfTable& table, ModQSolver solver, long long box_cap) {
    return scan_dependences_roots(k, q, 1, n_max, table, solver, box_cap);
}

bool verify_witness(long long n, long long k, const std::vector<long long>& m,
                    const SpfTable& table) {
    if (n < 1 || k < 1 || (long long)m.size() != k)
        throw std::invalid_argument("verify_witness: m must have length k");
    ValuationMatrix M = valuation_matrix(n, k, table);
    for (const auto& row : M.rows) {
        i128 s = 0;
        for (size_t j = 0; j < (size_t)k; ++j)
            if (row[j] != 0) s = add_checked(s, mul_checked((i128)m[j], row[j]));
        if (s != 0) return false;
    }
    return true;
}

bool verify_witness(long long n, long long k, const std::vector<long long>& m,
                    long long q, const SpfTable& table) {
    if (n < 1 || k < 1 || q < 1 || (long long)m.size() != k)
        throw std::invalid_argument("verify_witness: m must have length k");
    for (long long mj : m)
        if (mj < 0 || mj >= q)
            throw std::invalid_argument("verify_witness: mod-q exponents must lie in [0, q)");
    ValuationMatrix M = valuation_matrix(n, k, table);
    for (const auto& row : M.rows) {
        i128 s = 0;
        for (size_t j = 0; j < (size_t)k; ++j)
            if (row[j] != 0) s += (i128)m[j] * row[j];
        if (s % q != 0) return false;
    }
    return true;
}

long long value_order(long long s, long long q) {
    return q / mu_power_divisor(s, q);
}

double independence_bound_hint(long long k) {
    return std::pow(100.0 * (double)k, (double)(k + 1));
}

} // namespace rcmf
