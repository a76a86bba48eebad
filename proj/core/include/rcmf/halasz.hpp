#pragma once

#include "rcmf/simulate.hpp"

#include <vector>

namespace rcmf {

struct HalaszReport {
    long long N = 0;
    double T = 0.0;
    double grid_step = 0.0;
    double lambda_star = 0.0;
    double M = 0.0;           // min_{|lambda| <= 2T} sum_{p <= N} (1 - Re(Y_p p^{-i lambda})) / p
    double lhs = 0.0;         // |N^{-1} sum_{n <= N} Y_n|
    double rhs_kernel = 0.0;  // (1 + M) e^{-M} + T^{-1/2}
};

// Minimize the prime sum over a symmetric lambda-grid on [-2T, 2T] (the grid
// always contains 0), then golden-section refine around the best grid point.
// grid_step must be <= 1/log N; 0 picks that default.  The inequality with the
// unknown absolute constant is reported via lhs and rhs_kernel, never asserted.
HalaszReport halasz_M(const MultSample& sample, double T, double grid_step = 0.0);

struct LimitClassification {
    enum class Kind { UniformCircle, UniformRoots };
    Kind kind = Kind::UniformCircle;
    long long q = 0;        // minimal q when kind == UniformRoots
    double c_bound = 0.0;   // min_{1 <= m <= q-1} (1 - E[Re X_2^m]) in the discrete
                            // case; 1 - E[Re X_2] for the circle case
};

// Verdict on the weak limit of the empirical measures: uniform on U_q (with
// minimal q = lcm of the atom denominators) for rational-atom laws, uniform on
// the whole circle otherwise.
LimitClassification classify_limit(const CircleDistribution& dist);

// Least-squares slope of log|mu_hat| against log log N, negated.  Points need
// N >= 100 (so log log N is comfortably positive), strictly increasing N,
// positive values, and at least 4 entries.
double rate_fit(const std::vector<std::pair<long long, double>>& points);

} // namespace rcmf
