#pragma once

/**
 * @file rational.hpp
 * @brief Exact arbitrary-precision rationals.
 *
 * Thin value wrapper around GMP's mpq_class. Always canonical: gcd of
 * numerator and denominator is 1 and the denominator is positive, so
 * equality is plain memberwise comparison. Serialized as "p/q" (or "p"
 * when the denominator is 1) to keep file formats exact.
 */

#include <gmpxx.h>

#include <compare>
#include <ostream>
#include <string>

#include "gerbegw/errors.hpp"

namespace gerbegw {

class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}                          // NOLINT(google-explicit-constructor)
    Rational(long n, long d) : v_(n, d) { canon(); }
    explicit Rational(const mpz_class& n) : v_(n) {}
    Rational(const mpz_class& n, const mpz_class& d) : v_(n, d) { canon(); }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    /// Parses "p/q" or "p" with optional sign; throws ParseError on junk.
    static Rational parse(const std::string& s) {
        if (s.empty()) throw ParseError("empty rational literal");
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw ParseError("bad rational literal: '" + s + "'");
        if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
        q.canonicalize();
        return Rational(q);
    }

    const mpz_class& numerator() const { return v_.get_num(); }
    const mpz_class& denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    /// Floor of the rational as an integer.
    mpz_class floor() const {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
        return q;
    }

    /// Fractional part in [0,1).
    Rational frac() const { return *this - Rational(floor()); }

    double to_double() const { return v_.get_d(); }

    std::string str() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw DomainError("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    void canon() {
        if (v_.get_den() == 0) throw DomainError("zero denominator");
        v_.canonicalize();
    }

    mpq_class v_;
};

inline Rational rational_gcd_reduce(long n, long d) { return Rational(n, d); }

} // namespace gerbegw
