#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ffskit {

using Integer = mpz_class;
using Rational = mpq_class;

/// Thrown when an input document does not have the expected shape.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when well-formed input violates a mathematical invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// num/den in lowest terms (the raw mpq_class constructor does not reduce).
inline Rational frac(const Integer& num, const Integer& den)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);
Rational abs(const Rational& q);
long double to_long_double(const Rational& q);

/// Closed rational interval [lo, hi].
struct Interval {
    Rational lo;
    Rational hi;

    Interval() = default;
    Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {}
    explicit Interval(const Rational& point) : lo(point), hi(point) {}

    Rational width() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / 2; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
    bool excludes_zero() const { return sgn(lo) > 0 || sgn(hi) < 0; }

    friend Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
    friend Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator*(const Rational& s, const Interval& a);
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Univariate polynomial with rational coefficients, lowest degree first.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs);

    static Polynomial monomial(const Rational& c, int degree);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    const Rational& coeff(int i) const;
    const Rational& leading() const { return coeffs_.back(); }

    Rational operator()(const Rational& x) const;
    Interval operator()(const Interval& x) const;
    int sign_at(const Rational& x) const { return sgn((*this)(x)); }

    Polynomial derivative() const;
    Polynomial monic() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Rational& s, const Polynomial& a);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

    /// Euclidean division; `divisor` must be nonzero.
    static void divmod(const Polynomial& dividend, const Polynomial& divisor, Polynomial& quotient,
                       Polynomial& remainder);
    friend Polynomial operator%(const Polynomial& a, const Polynomial& b);

private:
    void trim();
    std::vector<Rational> coeffs_;
};

/// Monic gcd; gcd(0, 0) is the zero polynomial.
Polynomial gcd(Polynomial a, Polynomial b);

/// Sturm chain of a squarefree polynomial.
class SturmSequence {
public:
    explicit SturmSequence(const Polynomial& p);
    int variations(const Rational& x) const;
    int variations_at_minus_infinity() const;
    int variations_at_plus_infinity() const;
    /// Number of distinct real roots in the half-open interval (a, b].
    int count_roots(const Rational& a, const Rational& b) const;
    /// Number of distinct real roots in the closed interval [a, b].
    int count_roots_closed(const Rational& a, const Rational& b) const;

private:
    std::vector<Polynomial> chain_;
};

/// Bound B with every complex root of p in (-B, B).
Rational cauchy_root_bound(const Polynomial& p);

/// Disjoint closed isolating intervals for the real roots of a squarefree p,
/// in increasing order; endpoints are never roots unless the interval is a point.
std::vector<Interval> isolate_real_roots(const Polynomial& p);

/// Halves an isolating interval of a simple root; a point interval is returned unchanged.
Interval bisect_isolator(const Polynomial& p, const Interval& isolator);

}  // namespace ffskit
