#include "rcmf/halasz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rcmf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct PrimeAngles {
    std::vector<double> phase;   // 2 pi theta_p
    std::vector<double> logp;
    std::vector<double> weight;  // 1/p
};

PrimeAngles collect_primes(const MultSample& sample) {
    // small standalone sieve so the report needs nothing besides the sample
    std::vector<char> composite((size_t)sample.N + 1, 0);
    PrimeAngles pa;
    for (long long n = 2; n <= sample.N; ++n) {
        if (composite[(size_t)n]) continue;
        if (n <= sample.N / n)
            for (long long m = n * n; m <= sample.N; m += n) composite[(size_t)m] = 1;
        pa.phase.push_back(kTwoPi * sample.angle(n).turns());
        pa.logp.push_back(std::log((double)n));
        pa.weight.push_back(1.0 / (double)n);
    }
    return pa;
}

double halasz_sum(const PrimeAngles& pa, double lambda) {
    double s = 0.0;
    for (size_t i = 0; i < pa.phase.size(); ++i)
        s += (1.0 - std::cos(pa.phase[i] - lambda * pa.logp[i])) * pa.weight[i];
    return s;
}

} // namespace

HalaszReport halasz_M(const MultSample& sample, double T, double grid_step) {
    if (sample.N < 3) throw std::invalid_argument("halasz_M: need N >= 3");
    if (!(T > 0.0)) throw std::invalid_argument("halasz_M: need T > 0");
    const double step_limit = 1.0 / std::log((double)sample.N);
    if (grid_step == 0.0) grid_step = step_limit;
    if (!(grid_step > 0.0) || grid_step > step_limit * (1.0 + 1e-12))
        throw std::invalid_argument("halasz_M: grid_step must lie in (0, 1/log N]");

    PrimeAngles pa = collect_primes(sample);

    // symmetric grid i * step, i in [-G, G]; contains 0 exactly
    const long long G = (long long)std::floor(2.0 * T / grid_step);
    double best_lambda = 0.0;
    double best_value = halasz_sum(pa, 0.0);
    for (long long i = -G; i <= G; ++i) {
        if (i == 0) continue;
        double lam = (double)i * grid_step;
        double v = halasz_sum(pa, lam);
        if (v < best_value) {
            best_value = v;
            best_lambda = lam;
        }
    }

    // local golden-section refinement around the best grid point; global
    // accuracy stays grid-resolution-limited by design
    {
        const double gr = 0.6180339887498948482;
        double a = std::max(best_lambda - grid_step, -2.0 * T);
        double b = std::min(best_lambda + grid_step, 2.0 * T);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = halasz_sum(pa, x1), f2 = halasz_sum(pa, x2);
        const double tol = 1e-6 * std::max(1.0, std::abs(best_lambda));
        while (b - a > tol) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = halasz_sum(pa, x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = halasz_sum(pa, x2);
            }
        }
        double mid = 0.5 * (a + b);
        double fm = halasz_sum(pa, mid);
        if (fm < best_value) {
            best_value = fm;
            best_lambda = mid;
        }
    }

    HalaszReport rep;
    rep.N = sample.N;
    rep.T = T;
    rep.grid_step = grid_step;
    rep.lambda_star = best_lambda;
    rep.M = best_value;
    std::complex<double> sum{0.0, 0.0};
    for (long long n = 1; n <= sample.N; ++n) sum += sample.angle(n).unit();
    rep.lhs = std::abs(sum) / (double)sample.N;
    rep.rhs_kernel = (1.0 + rep.M) * std::exp(-rep.M) + 1.0 / std::sqrt(T);
    return rep;
}

LimitClassification classify_limit(const CircleDistribution& dist) {
    LimitClassification out;
    switch (dist.kind) {
        case CircleDistribution::Kind::UniformContinuous:
            out.kind = LimitClassification::Kind::UniformCircle;
            out.c_bound = 1.0;  // E[X_2] = 0
            return out;
        case CircleDistribution::Kind::UniformRoots:
            if (dist.q == 1) {
                // X_2 == 1: support is U_1
                out.kind = LimitClassification::Kind::UniformRoots;
                out.q = 1;
                out.c_bound = 0.0;
                return out;
            }
            out.kind = LimitClassification::Kind::UniformRoots;
            out.q = dist.q;
            out.c_bound = 1.0;  // E[X_2^m] = 0 for 1 <= m <= q-1
            return out;
        case CircleDistribution::Kind::FiniteAtoms: {
            long long q = 1;
            bool rational = true;
            for (const auto& [angle, w] : dist.atoms) {
                if (!angle.is_rational()) {
                    rational = false;
                    break;
                }
                q = q / std::gcd(q, angle.den) * angle.den;
            }
            if (!rational) {
                out.kind = LimitClassification::Kind::UniformCircle;
                double re = 0.0;
                for (const auto& [angle, w] : dist.atoms)
                    re += w * std::cos(kTwoPi * angle.turns());
                out.c_bound = 1.0 - re;
                return out;
            }
            out.kind = LimitClassification::Kind::UniformRoots;
            out.q = q;
            if (q == 1) {
                out.c_bound = 0.0;
                return out;
            }
            // the lcm is automatically minimal: no strict divisor r of q can
            // contain the support, else every atom denominator would divide r
            double cb = 2.0;
            for (long long m = 1; m < q; ++m) {
                double re = 0.0;
                for (const auto& [angle, w] : dist.atoms) {
                    long long r = (angle.num * (m % angle.den)) % angle.den;
                    re += w * std::cos(kTwoPi * (double)r / (double)angle.den);
                }
                cb = std::min(cb, 1.0 - re);
            }
            out.c_bound = cb;
            return out;
        }
    }
    throw std::logic_error("classify_limit: unreachable");
}

double rate_fit(const std::vector<std::pair<long long, double>>& points) {
    if (points.size() < 4) throw std::invalid_argument("rate_fit: need >= 4 points");
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i].first < 100)
            throw std::invalid_argument("rate_fit: need N >= 100");
        if (i > 0 && points[i].first <= points[i - 1].first)
            throw std::invalid_argument("rate_fit: N must be strictly increasing");
        if (!(points[i].second > 0.0))
            throw std::invalid_argument("rate_fit: values must be positive");
    }
    double xbar = 0.0, ybar = 0.0;
    std::vector<double> xs, ys;
    for (const auto& [N, v] : points) {
        xs.push_back(std::log(std::log((double)N)));
        ys.push_back(std::log(v));
        xbar += xs.back();
        ybar += ys.back();
    }
    xbar /= (double)xs.size();
    ybar /= (double)ys.size();
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - xbar) * (ys[i] - ybar);
        den += (xs[i] - xbar) * (xs[i] - xbar);
    }
    return -num / den;
}

} // namespace rcmf
