#include "rcmf/arith.hpp"
#include "rcmf/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rcmf {

long long ExponentVector::exponent_of(long long p) const {
    auto it = std::lower_bound(terms.begin(), terms.end(), p,
                               [](const Term& t, long long q) { return t.p < q; });
    return (it != terms.end() && it->p == p) ? it->e : 0;
}

void ExponentVector::normalize() {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.p < b.p; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const Term& t : terms) {
        if (!out.empty() && out.back().p == t.p) {
            out.back().e += t.e;
            if (out.back().e == 0) out.pop_back();
        } else if (t.e != 0) {
            out.push_back(t);
        }
    }
    terms = std::move(out);
}

void ExponentVector::add_scaled(const ExponentVector& other, long long c) {
    if (c == 0 || other.terms.empty()) return;
    std::vector<Term> out;
    out.reserve(terms.size() + other.terms.size());
    auto a = terms.begin();
    auto b = other.terms.begin();
    while (a != terms.end() || b != other.terms.end()) {
        if (b == other.terms.end() || (a != terms.end() && a->p < b->p)) {
            out.push_back(*a++);
        } else if (a == terms.end() || b->p < a->p) {
            out.push_back({b->p, c * b->e});
            ++b;
        } else {
            long long e = a->e + c * b->e;
            if (e != 0) out.push_back({a->p, e});
            ++a;
            ++b;
        }
    }
    terms = std::move(out);
}

ExponentVector ExponentVector::operator+(const ExponentVector& other) const {
    ExponentVector r = *this;
    r.add_scaled(other, 1);
    return r;
}

ExponentVector ExponentVector::operator-(const ExponentVector& other) const {
    ExponentVector r = *this;
    r.add_scaled(other, -1);
    return r;
}

unsigned __int128 ExponentVector::value_u128() const {
    unsigned __int128 v = 1;
    const unsigned __int128 kMax = ~(unsigned __int128)0;
    for (const Term& t : terms) {
        if (t.e < 0) throw std::overflow_error("value_u128: negative exponent");
        for (long long i = 0; i < t.e; ++i) {
            if (v > kMax / (unsigned __int128)t.p)
                throw std::overflow_error("value_u128: overflow");
            v *= (unsigned __int128)t.p;
        }
    }
    return v;
}

std::string ExponentVector::to_string() const {
    if (terms.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const Term& t : terms) {
        if (!first) os << " * ";
        first = false;
        os << t.p;
        if (t.e != 1) os << "^" << t.e;
    }
    return os.str();
}

std::size_t ExponentVectorHash::operator()(const ExponentVector& v) const {
    // FNV-1a over the term stream; stable across runs (no pointer salt).
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
        h ^= x;
        h *= 1099511628211ull;
    };
    for (const auto& t : v.terms) {
        mix((std::uint64_t)t.p);
        mix((std::uint64_t)t.e);
    }
    return (std::size_t)h;
}

SpfTable build_spf(long long limit, long long budget_bytes) {
    if (limit < 2) throw std::invalid_argument("build_spf: limit must be >= 2");
    long long bytes = (limit + 1) * (long long)sizeof(uint32_t);
    if (bytes > budget_bytes)
        throw resource_error("build_spf: limit " + std::to_string(limit) +
                             " needs " + std::to_string(bytes) +
                             " bytes, budget is " + std::to_string(budget_bytes));
    SpfTable t;
    t.limit = limit;
    t.spf.assign((size_t)limit + 1, 0);
    for (long long i = 2; i <= limit; ++i) {
        if (t.spf[i] == 0) {
            for (long long j = i; j <= limit; j += i)
                if (t.spf[j] == 0) t.spf[j] = (uint32_t)i;
        }
    }
    return t;
}

ExponentVector factorize(long long n, const SpfTable& table) {
    if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
    ExponentVector v;
    if (n == 1) return v;
    if (n > table.limit)
        throw std::invalid_argument("factorize: n=" + std::to_string(n) +
                                    " exceeds sieve limit " + std::to_string(table.limit));
    while (n > 1) {
        long long p = table.spf[n];
        long long e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        v.terms.push_back({p, e});
    }
    // spf chain visits primes in increasing order already
    return v;
}

long long rough_part(long long n, long long k) {
    if (n < 1) throw std::invalid_argument("rough_part: n must be >= 1");
    if (k < 2) throw std::invalid_argument("rough_part: k must be >= 2");
    for (long long p = 2; p < k && p * p <= n; ++p)
        while (n % p == 0) n /= p;
    // a single remaining factor < k can only be n itself
    if (n > 1 && n < k) n = 1;
    return n;
}

ExponentVector power_free_part(const ExponentVector& v, long long q) {
    if (q < 1) throw std::invalid_argument("power_free_part: q must be >= 1");
    ExponentVector r;
    for (const auto& t : v.terms) {
        if (t.e < 0)
            throw std::invalid_argument("power_free_part: negative exponent");
        long long e = t.e % q;
        if (e != 0) r.terms.push_back({t.p, e});
    }
    return r;
}

long long mu_power_divisor(long long s, long long q) {
    if (s < 2) throw std::invalid_argument("mu_power_divisor: s must be >= 2");
    if (q < 1) throw std::invalid_argument("mu_power_divisor: q must be >= 1");
    long long g = 0;
    for (long long p = 2; p * p <= s; ++p) {
        if (s % p == 0) {
            long long e = 0;
            while (s % p == 0) {
                s /= p;
                ++e;
            }
            g = std::gcd(g, e);
        }
    }
    if (s > 1) g = std::gcd(g, 1ll);
    return std::gcd(q, g);
}

long long mu_power_divisor(const ExponentVector& v, long long q) {
    if (q < 1) throw std::invalid_argument("mu_power_divisor: q must be >= 1");
    long long g = 0;
    for (const auto& t : v.terms) g = std::gcd(g, t.e < 0 ? -t.e : t.e);
    // g == 0 means the value is 1; every divisor of q works, so mu = q
    return g == 0 ? q : std::gcd(q, g);
}

MultiplicativeStats multiplicative_stats(long long n) {
    if (n < 1) throw std::invalid_argument("multiplicative_stats: n must be >= 1");
    MultiplicativeStats s{1, 1, 0};
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            long long e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            s.radical *= p;
            s.tau *= (e + 1);
            s.omega += 1;
        }
    }
    if (n > 1) {
        s.radical *= n;
        s.tau *= 2;
        s.omega += 1;
    }
    return s;
}

} // namespace rcmf
