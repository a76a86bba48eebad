#pragma once

#include "rcmf/arith.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace rcmf {

// A point of the unit circle as a fraction of a full turn.  Rational turns
// (den >= 1, 0 <= num < den, reduced) support exact group arithmetic; real
// turns (den == 0, value in `real`) are for continuous laws and lose exactness.
struct AngleValue {
    long long num = 0;
    long long den = 1;
    double real = 0.0;

    static AngleValue rational(long long num, long long den);
    static AngleValue real_turn(double x);

    bool is_rational() const { return den != 0; }
    double turns() const;                       // value in [0, 1)
    std::complex<double> unit() const;          // e^{2 pi i * turns}

    AngleValue add(const AngleValue& other) const;           // group law, mod 1
    AngleValue scaled(long long c) const;                    // c * angle, mod 1

    bool operator==(const AngleValue&) const = default;
    auto operator<=>(const AngleValue&) const = default;
};

struct CircleDistribution {
    enum class Kind { UniformContinuous, UniformRoots, FiniteAtoms };
    Kind kind = Kind::UniformContinuous;
    long long q = 0;                                          // UniformRoots only
    std::vector<std::pair<AngleValue, double>> atoms;         // FiniteAtoms only

    static CircleDistribution uniform_continuous();
    static CircleDistribution uniform_roots(long long q);
    static CircleDistribution finite_atoms(std::vector<std::pair<AngleValue, double>> atoms);

    // true when every sampled value is a root of unity with exact angle
    bool is_discrete_rational() const;
};

struct MultSample {
    long long N = 0;
    CircleDistribution dist;
    std::uint64_t seed = 0;
    std::vector<AngleValue> theta;  // index 1..N; theta[0] unused

    const AngleValue& angle(long long n) const { return theta[(size_t)n]; }
};

// Draw i.i.d. prime angles from a counter-based stream keyed by (seed, p) —
// not by draw order — so samples are prefix-stable: extending N (or splitting
// a scan) never changes earlier values.  Composites filled by multiplicativity.
MultSample sample_function(long long N, const CircleDistribution& dist,
                           std::uint64_t seed, const SpfTable& table);

// The deterministic per-prime draw (exposed for the statistical tests).
std::uint64_t prime_stream_word(std::uint64_t seed, long long p);

// Counts of the k-tuples (X_{n+1},...,X_{n+k}) over n = 1..N; counts sum to N.
// Only defined for root-of-unity-valued samples: a RealTurn angle anywhere in
// the needed range is a precondition violation.
using PatternKey = std::vector<AngleValue>;
std::map<PatternKey, long long> pattern_counts(const MultSample& sample,
                                               long long k, long long N);

// (1/N) sum_{n=1..N} e^{2 pi i sum_j m_j theta[n+j]}, angles summed exactly for
// rational samples (one trig conversion per distinct phase, not per n).
std::complex<double> empirical_fourier(const MultSample& sample, long long k,
                                       const std::vector<long long>& m, long long N);

// sum_{n=N'+1..N} prod_j X_{n+j}^{m_j}
std::complex<double> partial_sum_products(const MultSample& sample,
                                          const std::vector<long long>& m,
                                          long long N_prime, long long N);

// Mean and standard error of N^{-1/2} |sum_{n<=N} X_n| over `reps` independent
// samples (report-only experiment; no assertion attached).
std::pair<double, double> mean_abs_partial_sum(const CircleDistribution& dist,
                                               long long N, long long reps,
                                               std::uint64_t seed,
                                               const SpfTable& table);

} // namespace rcmf
