#include "ffskit/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace ffskit {

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s.empty())
        throw SchemaError("empty rational literal");
    if (s.front() == '+')
        s.erase(s.begin());

    // Accept terminating decimals such as "-0.25" as well as "p/q".
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        if (digits == "-" || digits.empty())
            throw SchemaError("bad rational literal '" + std::string(text) + "'");
        Rational q;
        if (q.set_str(digits, 10) != 0)
            throw SchemaError("bad rational literal '" + std::string(text) + "'");
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, s.size() - dot - 1);
        q /= scale;
        q.canonicalize();
        return q;
    }
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw SchemaError("bad rational literal '" + std::string(text) + "'");
    if (q.get_den() == 0)
        throw SchemaError("zero denominator in '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }
std::string to_string(const Integer& z) { return z.get_str(10); }

Integer floor(const Rational& q)
{
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer ceil(const Rational& q)
{
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

long double to_long_double(const Rational& q)
{
    if (sgn(q) == 0)
        return 0.0L;
    Integer num = q.get_num();
    const bool negative = sgn(num) < 0;
    if (negative)
        num = -num;
    const Integer& den = q.get_den();
    long shift = 66 - (static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                       static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)));
    Integer quotient = shift >= 0 ? Integer((num << static_cast<mp_bitcnt_t>(shift)) / den)
                                  : Integer(num / (den << static_cast<mp_bitcnt_t>(-shift)));
    const long bits = static_cast<long>(mpz_sizeinbase(quotient.get_mpz_t(), 2));
    if (bits > 64) {
        quotient >>= static_cast<mp_bitcnt_t>(bits - 64);
        shift -= bits - 64;
    }
    const long double value = std::ldexp(static_cast<long double>(mpz_get_ui(quotient.get_mpz_t())),
                                         static_cast<int>(-shift));
    return negative ? -value : value;
}

Interval operator*(const Interval& a, const Interval& b)
{
    Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval operator*(const Rational& s, const Interval& a)
{
    if (sgn(s) >= 0)
        return {s * a.lo, s * a.hi};
    return {s * a.hi, s * a.lo};
}

// ---------------------------------------------------------------------------

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(const Rational& c, int degree)
{
    std::vector<Rational> v(static_cast<std::size_t>(degree) + 1);
    v.back() = c;
    return Polynomial(std::move(v));
}

void Polynomial::trim()
{
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0)
        coeffs_.pop_back();
}

const Rational& Polynomial::coeff(int i) const
{
    static const Rational zero(0);
    if (i < 0 || i >= static_cast<int>(coeffs_.size()))
        return zero;
    return coeffs_[static_cast<std::size_t>(i)];
}

Rational Polynomial::operator()(const Rational& x) const
{
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

Interval Polynomial::operator()(const Interval& x) const
{
    if (x.lo == x.hi)
        return Interval((*this)(x.lo));
    // Centered form p(c) + (x - c) * p'(X) tightens quickly as the isolator shrinks.
    const Rational c = x.midpoint();
    const Interval dx{x.lo - c, x.hi - c};
    const Polynomial dp = derivative();
    Interval slope(Rational(0));
    for (auto it = dp.coeffs_.rbegin(); it != dp.coeffs_.rend(); ++it)
        slope = slope * x + Interval(*it);
    return Interval((*this)(c)) + slope * dx;
}

Polynomial Polynomial::derivative() const
{
    if (coeffs_.size() <= 1)
        return {};
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        d[i - 1] = coeffs_[i] * static_cast<long>(i);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const
{
    if (is_zero())
        return {};
    return Rational(1) / leading() * *this;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b)
{
    std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + Rational(-1) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
}

Polynomial operator*(const Rational& s, const Polynomial& a)
{
    std::vector<Rational> c(a.coeffs_);
    for (auto& x : c)
        x *= s;
    return Polynomial(std::move(c));
}

void Polynomial::divmod(const Polynomial& dividend, const Polynomial& divisor, Polynomial& quotient,
                        Polynomial& remainder)
{
    if (divisor.is_zero())
        throw std::domain_error("polynomial division by zero");
    std::vector<Rational> r = dividend.coeffs_;
    const int dd = divisor.degree();
    std::vector<Rational> q(r.size() >= divisor.coeffs_.size() ? r.size() - divisor.coeffs_.size() + 1 : 0);
    for (int k = static_cast<int>(r.size()) - 1; k >= dd; --k) {
        const Rational f = r[static_cast<std::size_t>(k)] / divisor.leading();
        if (sgn(f) == 0)
            continue;
        q[static_cast<std::size_t>(k - dd)] = f;
        for (int i = 0; i <= dd; ++i)
            r[static_cast<std::size_t>(k - dd + i)] -= f * divisor.coeffs_[static_cast<std::size_t>(i)];
    }
    quotient = Polynomial(std::move(q));
    remainder = Polynomial(std::move(r));
}

Polynomial operator%(const Polynomial& a, const Polynomial& b)
{
    Polynomial q, r;
    Polynomial::divmod(a, b, q, r);
    return r;
}

Polynomial gcd(Polynomial a, Polynomial b)
{
    while (!b.is_zero()) {
        Polynomial r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// ---------------------------------------------------------------------------

SturmSequence::SturmSequence(const Polynomial& p)
{
    chain_.push_back(p);
    chain_.push_back(p.derivative());
    while (!chain_.back().is_zero()) {
        Polynomial r = chain_[chain_.size() - 2] % chain_.back();
        chain_.push_back(Rational(-1) * r);
    }
    chain_.pop_back();
}

namespace {

int count_sign_changes(const std::vector<int>& signs)
{
    int changes = 0;
    int last = 0;
    for (int s : signs) {
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

}  // namespace

int SturmSequence::variations(const Rational& x) const
{
    std::vector<int> signs;
    signs.reserve(chain_.size());
    for (const auto& p : chain_)
        signs.push_back(p.sign_at(x));
    return count_sign_changes(signs);
}

int SturmSequence::variations_at_plus_infinity() const
{
    std::vector<int> signs;
    for (const auto& p : chain_)
        signs.push_back(sgn(p.leading()));
    return count_sign_changes(signs);
}

int SturmSequence::variations_at_minus_infinity() const
{
    std::vector<int> signs;
    for (const auto& p : chain_)
        signs.push_back(p.degree() % 2 == 0 ? sgn(p.leading()) : -sgn(p.leading()));
    return count_sign_changes(signs);
}

int SturmSequence::count_roots(const Rational& a, const Rational& b) const
{
    if (b <= a)
        return 0;
    return variations(a) - variations(b);
}

int SturmSequence::count_roots_closed(const Rational& a, const Rational& b) const
{
    const int at_a = chain_.front().sign_at(a) == 0 ? 1 : 0;
    if (a == b)
        return at_a;
    return count_roots(a, b) + at_a;
}

Rational cauchy_root_bound(const Polynomial& p)
{
    Rational m(0);
    for (int i = 0; i < p.degree(); ++i)
    {
        const Rational t = ffskit::abs(Rational(p.coeff(i) / p.leading()));
        if (t > m)
            m = t;
    }
    return m + 1;
}

std::vector<Interval> isolate_real_roots(const Polynomial& p)
{
    std::vector<Interval> out;
    if (p.degree() < 1)
        return out;
    const SturmSequence sturm(p);
    const Rational bound = cauchy_root_bound(p);

    // Work with half-open (a, b] pieces, splitting until each holds one root.
    std::vector<std::pair<Rational, Rational>> stack{{-bound, bound}};
    std::vector<std::pair<Rational, Rational>> singles;
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        const int k = sturm.count_roots(a, b);
        if (k == 0)
            continue;
        if (k == 1) {
            singles.emplace_back(a, b);
            continue;
        }
        const Rational mid = (a + b) / 2;
        stack.emplace_back(a, mid);
        stack.emplace_back(mid, b);
    }
    std::sort(singles.begin(), singles.end());
    for (auto [a, b] : singles) {
        if (p.sign_at(b) == 0) {
            out.emplace_back(b, b);
            continue;
        }
        // Shrink until the open left endpoint is not itself a root.
        while (p.sign_at(a) == 0) {
            const Rational mid = (a + b) / 2;
            if (p.sign_at(mid) == 0) {
                a = mid;
                b = mid;
                break;
            }
            if (sturm.count_roots(mid, b) == 1)
                a = mid;
            else
                b = mid;
        }
        out.emplace_back(a, b);
    }
    // Half-open pieces may share endpoints; shrink until the closed intervals are disjoint.
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
        while (!(out[i].hi < out[i + 1].lo)) {
            out[i] = bisect_isolator(p, out[i]);
            out[i + 1] = bisect_isolator(p, out[i + 1]);
        }
    return out;
}

Interval bisect_isolator(const Polynomial& p, const Interval& isolator)
{
    if (isolator.lo == isolator.hi)
        return isolator;
    const Rational mid = isolator.midpoint();
    const int sm = p.sign_at(mid);
    if (sm == 0)
        return Interval(mid);
    const int slo = p.sign_at(isolator.lo);
    if (slo != 0 && slo != sm)
        return {isolator.lo, mid};
    return {mid, isolator.hi};
}

}  // namespace ffskit
