#include "rcmf/simulate.hpp"
#include "rcmf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace rcmf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Upper bound on the common denominator for the exact-phase bucket path;
// beyond this, fall back to per-term trig (still deterministic, just slower).
constexpr long long kMaxBucketDenominator = 1 << 20;

std::uint64_t splitmix_round(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double unit_double(std::uint64_t z) {
    return (double)(z >> 11) * 0x1.0p-53;
}

} // namespace

std::uint64_t prime_stream_word(std::uint64_t seed, long long p) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (std::uint64_t)p;
    return splitmix_round(splitmix_round(z));
}

AngleValue AngleValue::rational(long long num, long long den) {
    if (den < 1) throw std::invalid_argument("AngleValue: denominator must be positive");
    num %= den;
    if (num < 0) num += den;
    long long g = std::gcd(num, den);
    if (num == 0) return AngleValue{0, 1, 0.0};
    return AngleValue{num / g, den / g, 0.0};
}

AngleValue AngleValue::real_turn(double x) {
    x -= std::floor(x);
    if (x >= 1.0) x = 0.0;
    AngleValue a;
    a.num = 0;
    a.den = 0;
    a.real = x;
    return a;
}

double AngleValue::turns() const {
    return is_rational() ? (double)num / (double)den : real;
}

std::complex<double> AngleValue::unit() const {
    double t = kTwoPi * turns();
    return {std::cos(t), std::sin(t)};
}

AngleValue AngleValue::add(const AngleValue& other) const {
    if (is_rational() && other.is_rational()) {
        // both reduced with denominators dividing the ambient lcm, so the raw
        // products stay well inside 64 bits for every supported distribution
        long long d = den / std::gcd(den, other.den) * other.den;
        long long n = num * (d / den) + other.num * (d / other.den);
        return rational(n, d);
    }
    return real_turn(turns() + other.turns());
}

AngleValue AngleValue::scaled(long long c) const {
    if (is_rational()) {
        long long r = c % den;
        if (r < 0) r += den;
        return rational(num * r, den);
    }
    double t = turns() * (double)c;
    return real_turn(t - std::floor(t));
}

CircleDistribution CircleDistribution::uniform_continuous() {
    CircleDistribution d;
    d.kind = Kind::UniformContinuous;
    return d;
}

CircleDistribution CircleDistribution::uniform_roots(long long q) {
    if (q < 1) throw std::invalid_argument("uniform_roots: q must be >= 1");
    CircleDistribution d;
    d.kind = Kind::UniformRoots;
    d.q = q;
    return d;
}

CircleDistribution CircleDistribution::finite_atoms(
    std::vector<std::pair<AngleValue, double>> atoms) {
    if (atoms.empty()) throw std::invalid_argument("finite_atoms: no atoms");
    // merge repeated atoms and normalize, so a duplicated/rescaled atom list
    // describes the same distribution (classification must be scale-consistent)
    std::map<AngleValue, double> merged;
    double total = 0.0;
    for (const auto& [angle, weight] : atoms) {
        if (weight <= 0.0)
            throw std::invalid_argument("finite_atoms: weights must be positive");
        merged[angle] += weight;
        total += weight;
    }
    CircleDistribution d;
    d.kind = Kind::FiniteAtoms;
    for (const auto& [angle, weight] : merged) d.atoms.emplace_back(angle, weight / total);
    return d;
}

bool CircleDistribution::is_discrete_rational() const {
    switch (kind) {
        case Kind::UniformContinuous: return false;
        case Kind::UniformRoots: return true;
        case Kind::FiniteAtoms:
            return std::all_of(atoms.begin(), atoms.end(),
                               [](const auto& a) { return a.first.is_rational(); });
    }
    return false;
}

namespace {

AngleValue draw_prime_angle(const CircleDistribution& dist, std::uint64_t seed,
                            long long p) {
    std::uint64_t z = prime_stream_word(seed, p);
    switch (dist.kind) {
        case CircleDistribution::Kind::UniformRoots: {
            // multiply-high maps the 64-bit word to [0, q) with bias < q * 2^-64
            long long r = (long long)(((unsigned __int128)z * (unsigned __int128)dist.q) >> 64);
            return AngleValue::rational(r, dist.q);
        }
        case CircleDistribution::Kind::UniformContinuous:
            return AngleValue::real_turn(unit_double(z));
        case CircleDistribution::Kind::FiniteAtoms: {
            double u = unit_double(z);
            double acc = 0.0;
            for (const auto& [angle, w] : dist.atoms) {
                acc += w;
                if (u < acc) return angle;
            }
            return dist.atoms.back().first;
        }
    }
    throw std::logic_error("draw_prime_angle: unreachable");
}

} // namespace

MultSample sample_function(long long N, const CircleDistribution& dist,
                           std::uint64_t seed, const SpfTable& table) {
    if (N < 1) throw std::invalid_argument("sample_function: N must be >= 1");
    if (N > table.limit)
        throw std::invalid_argument("sample_function: N exceeds sieve limit");
    MultSample s;
    s.N = N;
    s.dist = dist;
    s.seed = seed;
    s.theta.assign((size_t)N + 1, AngleValue{0, 1, 0.0});
    for (long long n = 2; n <= N; ++n) {
        long long p = table.spf[n];
        if (p == n)
            s.theta[(size_t)n] = draw_prime_angle(dist, seed, p);
        else
            s.theta[(size_t)n] = s.theta[(size_t)p].add(s.theta[(size_t)(n / p)]);
    }
    return s;
}

std::map<PatternKey, long long> pattern_counts(const MultSample& sample,
                                               long long k, long long N) {
    if (k < 1 || N < 1) throw std::invalid_argument("pattern_counts: need k, N >= 1");
    if (sample.N < N + k)
        throw std::invalid_argument("pattern_counts: sample must cover N + k");
    for (long long i = 2; i <= N + k; ++i)
        if (!sample.angle(i).is_rational())
            throw std::invalid_argument(
                "pattern_counts: real-valued angles are unsupported (patterns "
                "need a root-of-unity law)");
    std::map<PatternKey, long long> counts;
    PatternKey key((size_t)k);
    for (long long n = 1; n <= N; ++n) {
        for (long long j = 1; j <= k; ++j) key[(size_t)(j - 1)] = sample.angle(n + j);
        counts[key] += 1;
    }
    return counts;
}

namespace {

// Exact combined phase of prod_j X_{n+j}^{m_j} when every involved angle is
// rational; nullopt when a RealTurn shows up.
std::optional<AngleValue> exact_phase(const MultSample& sample, long long n,
                                      const std::vector<long long>& m) {
    AngleValue acc{0, 1, 0.0};
    for (size_t j = 0; j < m.size(); ++j) {
        if (m[j] == 0) continue;
        const AngleValue& a = sample.angle(n + (long long)j + 1);
        if (!a.is_rational()) return std::nullopt;
        acc = acc.add(a.scaled(m[j]));
    }
    return acc;
}

double real_phase_turns(const MultSample& sample, long long n,
                        const std::vector<long long>& m) {
    double t = 0.0;
    for (size_t j = 0; j < m.size(); ++j)
        if (m[j] != 0) t += (double)m[j] * sample.angle(n + (long long)j + 1).turns();
    return t;
}

// Sum of e^{2 pi i phase(n)} over n in (N', N], bucketing rational phases on a
// common denominator so only one trig evaluation per residue class happens.
std::complex<double> phase_sum(const MultSample& sample,
                               const std::vector<long long>& m,
                               long long N_prime, long long N) {
    const long long k = (long long)m.size();
    if (sample.N < N + k)
        throw std::invalid_argument("phase_sum: sample must cover N + k");

    bool rational = true;
    long long L = 1;
    for (long long i = 2; i <= N + k && rational; ++i) {
        const AngleValue& a = sample.angle(i);
        if (!a.is_rational()) {
            rational = false;
        } else {
            L = L / std::gcd(L, a.den) * a.den;
            if (L > kMaxBucketDenominator) rational = false;  // fall back to per-term trig
        }
    }

    if (rational) {
        std::vector<long long> residue_count((size_t)L, 0);
        for (long long n = N_prime + 1; n <= N; ++n) {
            AngleValue phi = *exact_phase(sample, n, m);
            residue_count[(size_t)(phi.num * (L / phi.den))] += 1;
        }
        std::complex<double> s{0.0, 0.0};
        for (long long r = 0; r < L; ++r) {
            if (residue_count[(size_t)r] == 0) continue;
            double t = kTwoPi * (double)r / (double)L;
            s += (double)residue_count[(size_t)r] *
                 std::complex<double>{std::cos(t), std::sin(t)};
        }
        return s;
    }

    std::complex<double> s{0.0, 0.0};
    for (long long n = N_prime + 1; n <= N; ++n) {
        double t = kTwoPi * real_phase_turns(sample, n, m);
        s += std::complex<double>{std::cos(t), std::sin(t)};
    }
    return s;
}

} // namespace

std::complex<double> empirical_fourier(const MultSample& sample, long long k,
                                       const std::vector<long long>& m, long long N) {
    if (k < 1 || N < 1) throw std::invalid_argument("empirical_fourier: need k, N >= 1");
    if ((long long)m.size() != k)
        throw std::invalid_argument("empirical_fourier: m must have length k");
    if (std::all_of(m.begin(), m.end(), [](long long x) { return x == 0; }))
        return {1.0, 0.0};
    return phase_sum(sample, m, 0, N) / (double)N;
}

std::complex<double> partial_sum_products(const MultSample& sample,
                                          const std::vector<long long>& m,
                                          long long N_prime, long long N) {
    if (m.empty()) throw std::invalid_argument("partial_sum_products: empty m");
    if (std::all_of(m.begin(), m.end(), [](long long x) { return x == 0; }))
        throw std::invalid_argument("partial_sum_products: m must not be all zero");
    if (N_prime < 0 || N_prime >= N)
        throw std::invalid_argument("partial_sum_products: need 0 <= N' < N");
    return phase_sum(sample, m, N_prime, N);
}

std::pair<double, double> mean_abs_partial_sum(const CircleDistribution& dist,
                                               long long N, long long reps,
                                               std::uint64_t seed,
                                               const SpfTable& table) {
    if (reps < 2) throw std::invalid_argument("mean_abs_partial_sum: reps must be >= 2");
    if (N < 1) throw std::invalid_argument("mean_abs_partial_sum: N must be >= 1");
    std::vector<double> values;
    values.reserve((size_t)reps);
    for (long long r = 0; r < reps; ++r) {
        std::uint64_t sub_seed = splitmix_round(seed + 0x632BE59BD9B4E019ull * (std::uint64_t)(r + 1));
        MultSample s = sample_function(N, dist, sub_seed, table);
        std::complex<double> sum{0.0, 0.0};
        for (long long n = 1; n <= N; ++n) sum += s.angle(n).unit();
        values.push_back(std::abs(sum) / std::sqrt((double)N));
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= (double)reps;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (double)(reps - 1);
    return {mean, std::sqrt(var / (double)reps)};
}

} // namespace rcmf
