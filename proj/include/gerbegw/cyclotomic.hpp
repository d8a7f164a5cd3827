#pragma once

/**
 * @file cyclotomic.hpp
 * @brief Exact arithmetic in cyclotomic fields Q(zeta_N).
 *
 * A CycNumber is an element of Q[x]/(Phi_N(x)) stored in the power basis
 * {zeta^0, ..., zeta^(phi(N)-1)} with rational coefficients. Working modulo
 * the N-th cyclotomic polynomial (rather than x^N - 1) makes the
 * representation canonical, so exact equality is coefficient-wise equality
 * at a common level. Mixed-level arithmetic lifts both operands to the lcm
 * of their levels via zeta_N -> zeta_M^(M/N).
 */

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <vector>

#include "gerbegw/errors.hpp"
#include "gerbegw/rational.hpp"

namespace gerbegw {

/// Coefficients of the N-th cyclotomic polynomial Phi_N, ascending order,
/// monic, degree phi(N). Computed by exact division of x^N - 1 by the
/// product of Phi_d over proper divisors d of N; results are memoized.
inline const std::vector<mpz_class>& cyclotomic_polynomial(unsigned n) {
    if (n == 0) throw DomainError("cyclotomic_polynomial: N must be positive");
    static std::map<unsigned, std::vector<mpz_class>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    // Exact division of integer polynomials, quotient known to be exact.
    auto divide = [](std::vector<mpz_class> num, const std::vector<mpz_class>& den) {
        std::vector<mpz_class> q(num.size() - den.size() + 1, mpz_class(0));
        for (size_t i = q.size(); i-- > 0;) {
            mpz_class c = num[i + den.size() - 1] / den.back();
            q[i] = c;
            if (c != 0)
                for (size_t j = 0; j < den.size(); ++j)
                    num[i + j] -= c * den[j];
        }
        return q;
    };

    std::function<const std::vector<mpz_class>&(unsigned)> phi =
        [&](unsigned m) -> const std::vector<mpz_class>& {
        auto hit = cache.find(m);
        if (hit != cache.end()) return hit->second;
        std::vector<mpz_class> poly;
        if (m == 1) {
            poly = {mpz_class(-1), mpz_class(1)};  // x - 1
        } else {
            std::vector<mpz_class> num(m + 1, mpz_class(0));
            num[0] = -1;
            num[m] = 1;  // x^m - 1
            for (unsigned d = 1; d < m; ++d)
                if (m % d == 0) num = divide(std::move(num), phi(d));
            poly = std::move(num);
        }
        return cache.emplace(m, std::move(poly)).first->second;
    };
    return phi(n);
}

/// Euler totient via deg Phi_N.
inline unsigned cyclotomic_degree(unsigned n) {
    return static_cast<unsigned>(cyclotomic_polynomial(n).size() - 1);
}

class CycNumber {
public:
    /// Zero at level 1.
    CycNumber() : level_(1), coeffs_(1, Rational(0)) {}

    /// Rational constant at level 1.
    explicit CycNumber(const Rational& r) : level_(1), coeffs_(1, r) {}
    explicit CycNumber(long n) : level_(1), coeffs_(1, Rational(n)) {}

    /// Element of Q(zeta_N) from an arbitrary-length coefficient vector in
    /// powers of zeta_N; reduced mod Phi_N on construction.
    CycNumber(unsigned level, std::vector<Rational> raw_coeffs)
        : level_(level), coeffs_(reduce(level, std::move(raw_coeffs))) {}

    unsigned level() const { return level_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const Rational& c) { return c.is_zero(); });
    }

    /// Image under zeta_N -> zeta_M^(M/N); value-preserving.
    /// Throws IncompatibleLevel unless level() divides m.
    CycNumber lifted(unsigned m) const {
        if (m == 0 || m % level_ != 0)
            throw IncompatibleLevel("lift_level: " + std::to_string(level_) +
                                    " does not divide " + std::to_string(m));
        if (m == level_) return *this;
        unsigned stride = m / level_;
        std::vector<Rational> raw(static_cast<size_t>(coeffs_.size() - 1) * stride + 1,
                                  Rational(0));
        for (size_t i = 0; i < coeffs_.size(); ++i) raw[i * stride] = coeffs_[i];
        return CycNumber(m, std::move(raw));
    }

    /// The rational value, when all non-constant coefficients vanish.
    std::optional<Rational> as_rational() const {
        for (size_t i = 1; i < coeffs_.size(); ++i)
            if (!coeffs_[i].is_zero()) return std::nullopt;
        return coeffs_[0];
    }

    /// Numeric evaluation at zeta_N = exp(2*pi*i/N). Accurate to double
    /// precision; `digits` beyond what a double can hold are clamped.
    std::complex<double> embed(unsigned digits = 12) const {
        (void)digits;
        const long double tau = 6.283185307179586476925286766559005768L;
        std::complex<long double> acc(0.0L, 0.0L);
        for (size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k].is_zero()) continue;
            long double angle = tau * static_cast<long double>(k) / level_;
            long double c = static_cast<long double>(coeffs_[k].to_double());
            acc += c * std::complex<long double>(std::cos(angle), std::sin(angle));
        }
        return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    }

    CycNumber operator-() const {
        CycNumber r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    friend CycNumber operator+(const CycNumber& a, const CycNumber& b) {
        auto [x, y] = unify(a, b);
        for (size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] += y.coeffs_[i];
        return x;
    }

    friend CycNumber operator-(const CycNumber& a, const CycNumber& b) { return a + (-b); }

    friend CycNumber operator*(const CycNumber& a, const CycNumber& b) {
        auto [x, y] = unify(a, b);
        std::vector<Rational> prod(x.coeffs_.size() + y.coeffs_.size() - 1, Rational(0));
        for (size_t i = 0; i < x.coeffs_.size(); ++i) {
            if (x.coeffs_[i].is_zero()) continue;
            for (size_t j = 0; j < y.coeffs_.size(); ++j) {
                if (y.coeffs_[j].is_zero()) continue;
                prod[i + j] += x.coeffs_[i] * y.coeffs_[j];
            }
        }
        return CycNumber(x.level_, std::move(prod));
    }

    friend CycNumber operator*(const CycNumber& a, const Rational& s) {
        CycNumber r = a;
        for (auto& c : r.coeffs_) c *= s;
        return r;
    }
    friend CycNumber operator*(const Rational& s, const CycNumber& a) { return a * s; }

    friend CycNumber operator/(const CycNumber& a, const CycNumber& b) {
        return a * b.inverse();
    }

    CycNumber& operator+=(const CycNumber& o) { return *this = *this + o; }
    CycNumber& operator-=(const CycNumber& o) { return *this = *this - o; }
    CycNumber& operator*=(const CycNumber& o) { return *this = *this * o; }
    CycNumber& operator*=(const Rational& s) { return *this = *this * s; }

    /// Value equality; operands at different levels are lifted to the lcm.
    friend bool operator==(const CycNumber& a, const CycNumber& b) {
        if (a.level_ == b.level_) return a.coeffs_ == b.coeffs_;
        auto [x, y] = unify(a, b);
        return x.coeffs_ == y.coeffs_;
    }

    /// Field inverse via extended Euclid in Q[x] mod Phi_N.
    CycNumber inverse() const {
        if (is_zero()) throw DomainError("cyclotomic division by zero");
        // Extended Euclid on (a, Phi_N): Phi_N irreducible, so gcd is a unit.
        std::vector<Rational> r0 = coeffs_;
        std::vector<Rational> r1;
        for (const auto& c : cyclotomic_polynomial(level_)) r1.emplace_back(Rational(mpz_class(c)));
        std::vector<Rational> s0{Rational(1)}, s1{Rational(0)};
        auto deg = [](const std::vector<Rational>& p) -> long {
            for (size_t i = p.size(); i-- > 0;)
                if (!p[i].is_zero()) return static_cast<long>(i);
            return -1;
        };
        while (deg(r1) >= 0) {
            // r0 = q*r1 + rem; update (r0, s0) <- (r1, s1), (r1, s1) <- (rem, s0 - q*s1)
            std::vector<Rational> rem = r0, q(std::max<size_t>(r0.size(), 1), Rational(0));
            long d1 = deg(r1);
            while (deg(rem) >= d1) {
                long d = deg(rem);
                Rational c = rem[static_cast<size_t>(d)] / r1[static_cast<size_t>(d1)];
                q[static_cast<size_t>(d - d1)] += c;
                for (long j = 0; j <= d1; ++j)
                    rem[static_cast<size_t>(d - d1 + j)] -= c * r1[static_cast<size_t>(j)];
            }
            std::vector<Rational> s2(std::max(s0.size(), q.size() + s1.size()), Rational(0));
            for (size_t i = 0; i < s0.size(); ++i) s2[i] = s0[i];
            for (size_t i = 0; i < q.size(); ++i) {
                if (q[i].is_zero()) continue;
                for (size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
            }
            r0 = std::move(r1);
            s0 = std::move(s1);
            r1 = std::move(rem);
            s1 = std::move(s2);
        }
        long d0 = deg(r0);
        if (d0 != 0) throw InternalInconsistency("cyclotomic inverse: gcd not a unit");
        Rational lead = r0[0];
        for (auto& c : s0) c /= lead;
        return CycNumber(level_, std::move(s0));
    }

private:
    // Remainder of a raw coefficient vector modulo the monic Phi_N,
    // padded/truncated to exactly deg Phi_N entries.
    static std::vector<Rational> reduce(unsigned level, std::vector<Rational> raw) {
        if (level == 0) throw DomainError("CycNumber: level must be positive");
        const auto& phi = cyclotomic_polynomial(level);
        const size_t d = phi.size() - 1;
        for (size_t i = raw.size(); i-- > d;) {
            Rational c = raw[i];
            if (!c.is_zero()) {
                // x^i = x^(i-d) * (x^d - Phi_N(x) + leading term removed)
                for (size_t j = 0; j < d; ++j)
                    raw[i - d + j] -= c * Rational(mpz_class(phi[j]));
            }
            raw.pop_back();
        }
        raw.resize(d, Rational(0));
        return raw;
    }

    static std::pair<CycNumber, CycNumber> unify(const CycNumber& a, const CycNumber& b) {
        unsigned m = std::lcm(a.level_, b.level_);
        return {a.lifted(m), b.lifted(m)};
    }

    unsigned level_;
    std::vector<Rational> coeffs_;
};

/// zeta_N^(k mod N), canonically reduced mod Phi_N. Negative k allowed.
inline CycNumber root_of_unity(long k, unsigned n) {
    if (n == 0) throw DomainError("root_of_unity: N must be positive");
    long e = k % static_cast<long>(n);
    if (e < 0) e += n;
    std::vector<Rational> raw(static_cast<size_t>(e) + 1, Rational(0));
    raw[static_cast<size_t>(e)] = Rational(1);
    return CycNumber(n, std::move(raw));
}

inline CycNumber cyc_add(const CycNumber& a, const CycNumber& b) { return a + b; }
inline CycNumber cyc_mul(const CycNumber& a, const CycNumber& b) { return a * b; }
inline CycNumber cyc_neg(const CycNumber& a) { return -a; }
inline CycNumber cyc_scale(const Rational& s, const CycNumber& a) { return a * s; }
inline CycNumber lift_level(const CycNumber& a, unsigned m) { return a.lifted(m); }
inline std::optional<Rational> as_rational(const CycNumber& a) { return a.as_rational(); }
inline std::complex<double> complex_embedding(const CycNumber& a, unsigned digits = 12) {
    return a.embed(digits);
}

} // namespace gerbegw
