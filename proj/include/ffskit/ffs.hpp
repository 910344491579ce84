#pragma once

#include "ffskit/symcone.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ffskit {

/// Coefficient ring for series with rational coefficients.
struct RationalRing {
    using value_type = Rational;
    value_type zero() const { return Rational(0); }
    value_type one() const { return Rational(1); }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type neg(const value_type& a) const { return -a; }
    bool is_zero(const value_type& a) const { return sgn(a) == 0; }
    static std::string tag() { return "rational"; }
};

struct GaussianRational {
    Rational re;
    Rational im;
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }
};

struct GaussianRing {
    using value_type = GaussianRational;
    value_type zero() const { return {Rational(0), Rational(0)}; }
    value_type one() const { return {Rational(1), Rational(0)}; }
    value_type add(const value_type& a, const value_type& b) const { return {a.re + b.re, a.im + b.im}; }
    value_type mul(const value_type& a, const value_type& b) const
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    value_type neg(const value_type& a) const { return {-a.re, -a.im}; }
    bool is_zero(const value_type& a) const { return sgn(a.re) == 0 && sgn(a.im) == 0; }
    static std::string tag() { return "gaussian"; }
};

/// Growth model for the coefficients beyond the truncation: the sum of |a(T)| over
/// height(T) <= h is at most C (1 + h)^p for every h. Used only for numeric tail bounds.
struct GrowthModel {
    Rational c;
    Rational p;
};

/// Truncated formal Fourier series supported on the cone points of height <= bound.
/// Zero coefficients are never stored, so equality is structural.
template <class Ring>
class FormalSeries {
public:
    using value_type = typename Ring::value_type;

    FormalSeries(ConeLattice cone, Rational bound, Ring ring = Ring{})
        : cone_(std::move(cone)), bound_(std::move(bound)), ring_(std::move(ring))
    {
        if (sgn(bound_) < 0)
            throw ValidationError("height bound must be nonnegative");
        hmax_ = floor(bound_ * cone_.nu()).get_si();
    }

    static FormalSeries constant(ConeLattice cone, Rational bound, const value_type& v, Ring ring = Ring{})
    {
        FormalSeries s(std::move(cone), std::move(bound), std::move(ring));
        s.set(s.cone_.zero_key(), v);
        return s;
    }

    const ConeLattice& cone() const { return cone_; }
    const Rational& bound() const { return bound_; }
    const Ring& ring() const { return ring_; }
    const std::map<ConeKey, value_type>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    bool in_range(const ConeKey& k) const { return k.h <= hmax_; }

    const std::optional<GrowthModel>& growth() const { return growth_; }
    void set_growth(std::optional<GrowthModel> g) { growth_ = std::move(g); }

    value_type coeff(const ConeKey& k) const
    {
        const auto it = coeffs_.find(k);
        return it == coeffs_.end() ? ring_.zero() : it->second;
    }
    value_type coeff(const SymMatF& t) const { return coeff(cone_.key(t)); }

    /// Keys must come from this series' cone lattice.
    void set(const ConeKey& k, value_type v)
    {
        check_key(k);
        if (ring_.is_zero(v))
            coeffs_.erase(k);
        else
            coeffs_[k] = std::move(v);
    }

    /// Validates lattice membership and positivity before storing.
    void set(const SymMatF& t, value_type v)
    {
        if (!is_totally_psd(t))
            throw ValidationError("series support must be totally positive semidefinite");
        set(cone_.key(t), std::move(v));
    }

    void add_to(const ConeKey& k, const value_type& v)
    {
        check_key(k);
        const auto it = coeffs_.find(k);
        if (it == coeffs_.end()) {
            if (!ring_.is_zero(v))
                coeffs_.emplace(k, v);
            return;
        }
        it->second = ring_.add(it->second, v);
        if (ring_.is_zero(it->second))
            coeffs_.erase(it);
    }

    FormalSeries truncated(const Rational& b) const
    {
        const Rational nb = b < bound_ ? b : bound_;
        FormalSeries out(cone_, nb, ring_);
        for (const auto& [k, v] : coeffs_)
            if (out.in_range(k))
                out.coeffs_.emplace(k, v);
        out.growth_ = growth_;
        return out;
    }

    friend bool operator==(const FormalSeries& a, const FormalSeries& b)
    {
        return a.cone_.same_as(b.cone_) && a.bound_ == b.bound_ && a.coeffs_ == b.coeffs_;
    }

    friend FormalSeries operator+(const FormalSeries& a, const FormalSeries& b)
    {
        auto [x, y] = common(a, b);
        for (const auto& [k, v] : y.coeffs_)
            x.add_to(k, v);
        x.growth_ = combine_sum(a.growth_, b.growth_);
        return x;
    }

    FormalSeries operator-() const
    {
        FormalSeries out = *this;
        for (auto& [k, v] : out.coeffs_)
            v = ring_.neg(v);
        return out;
    }

    friend FormalSeries operator-(const FormalSeries& a, const FormalSeries& b) { return a + (-b); }

    FormalSeries scaled(const value_type& s) const
    {
        FormalSeries out(cone_, bound_, ring_);
        for (const auto& [k, v] : coeffs_)
            out.set(k, ring_.mul(s, v));
        out.growth_ = growth_;
        return out;
    }

    /// Cone convolution truncated at the smaller bound. Exact below that bound since
    /// every summand has nonnegative height.
    friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b)
    {
        auto [x, y] = common(a, b);
        FormalSeries out(x.cone_, x.bound_, x.ring_);
        for (const auto& [ka, va] : x.coeffs_) {
            if (ka.h > out.hmax_)
                break;
            for (const auto& [kb, vb] : y.coeffs_) {
                if (ka.h + kb.h > out.hmax_)
                    break;
                out.add_to(ka + kb, x.ring_.mul(va, vb));
            }
        }
        if (a.growth_ && b.growth_)
            out.growth_ = GrowthModel{a.growth_->c * b.growth_->c, a.growth_->p + b.growth_->p};
        else if (a.growth_ || b.growth_) {
            // An exact factor with coefficient mass S scales the other factor's model by S.
            const auto& g = a.growth_ ? *a.growth_ : *b.growth_;
            const auto& exact = a.growth_ ? b : a;
            out.growth_ = GrowthModel{g.c * exact.abs_mass(), g.p};
        }
        return out;
    }

    /// Sum of coefficient absolute values (an upper bound for Gaussian coefficients).
    Rational abs_mass() const
    {
        Rational total(0);
        for (const auto& [k, v] : coeffs_) {
            if constexpr (std::is_same_v<value_type, Rational>)
                total += ffskit::abs(Rational(v));
            else if constexpr (std::is_same_v<value_type, GaussianRational>)
                total += ffskit::abs(Rational(v.re)) + ffskit::abs(Rational(v.im));
            else
                throw ValidationError("coefficient ring has no absolute value");
        }
        return total;
    }

private:
    void check_key(const ConeKey& k) const
    {
        if (k.c.size() != cone_.key_width())
            throw ValidationError("cone key has the wrong width");
        if (k.h > hmax_ || k.h < 0)
            throw ValidationError("cone point lies above the series height bound");
    }

    static std::pair<FormalSeries, FormalSeries> common(const FormalSeries& a, const FormalSeries& b)
    {
        if (!a.cone_.same_as(b.cone_))
            throw ValidationError("series live on different cone lattices");
        const Rational& m = a.bound_ < b.bound_ ? a.bound_ : b.bound_;
        return {a.truncated(m), b.truncated(m)};
    }

    static std::optional<GrowthModel> combine_sum(const std::optional<GrowthModel>& a, const std::optional<GrowthModel>& b)
    {
        if (!a || !b)
            return a ? a : b;
        return GrowthModel{a->c + b->c, a->p > b->p ? a->p : b->p};
    }

    ConeLattice cone_;
    Rational bound_;
    Ring ring_;
    std::int64_t hmax_ = 0;
    std::map<ConeKey, value_type> coeffs_;
    std::optional<GrowthModel> growth_;
};

/// The unit series: delta at T = 0.
template <class Ring>
FormalSeries<Ring> unit_series(const ConeLattice& cl, const Rational& bound, Ring ring = Ring{})
{
    const auto one = ring.one();
    return FormalSeries<Ring>::constant(cl, bound, one, std::move(ring));
}

/// lambda(x) = max{k : x = x_1 + ... + x_k with x_i in S._F} for every nonzero cone
/// point up to a height bound.
class LambdaTable {
public:
    LambdaTable(const ConeLattice& cl, const Rational& bound, int jobs = 1);

    const ConeLattice& cone() const { return cone_; }
    const Rational& bound() const { return bound_; }
    const std::vector<ConeKey>& points() const { return points_; }
    /// Throws ValidationError for T = 0 or a point outside the table.
    int operator()(const ConeKey& t) const;
    int at(const SymMatF& t) const { return (*this)(cone_.key(t)); }

private:
    ConeLattice cone_;
    Rational bound_;
    std::vector<ConeKey> points_;
    std::unordered_map<ConeKey, int, ConeKeyHash> value_;
};

/// lambda(T) computed from scratch.
int lambda(const ConeLattice& cl, const SymMatF& t);

class InconclusiveTruncation : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// f in I_k: a_f(0) = 0 (for k >= 1) and a_f(x) = 0 whenever lambda(x) < k.
template <class Ring>
bool ideal_membership(const FormalSeries<Ring>& f, int k, const LambdaTable* table = nullptr)
{
    if (k < 0)
        throw ValidationError("ideal index must be nonnegative");
    if (k == 0)
        return true;
    const auto& cl = f.cone();
    if (cl.minimal_height() * k > f.bound())
        throw InconclusiveTruncation("k times the minimal cone height exceeds the series bound");
    std::optional<LambdaTable> own;
    if (!table || !table->cone().same_as(cl) || table->bound() < f.bound()) {
        own.emplace(cl, f.bound());
        table = &*own;
    }
    for (const auto& [key, v] : f.coeffs()) {
        if (key.is_zero() || (*table)(key) < k)
            return false;
    }
    return true;
}

template <class Ring>
struct Symmetrized {
    FormalSeries<Ring> series;
    bool complete = true;  // every orbit met is contained in the height ball
};

/// Orbit sums: the coefficient at T becomes the sum of a over the Lambda-orbit of T
/// within the height ball.
template <class Ring>
Symmetrized<Ring> symmetrize(const FormalSeries<Ring>& f, const std::vector<MatF>& gens)
{
    const auto& cl = f.cone();
    for (const auto& g : gens)
        validate_lambda_generator(cl, g);
    Symmetrized<Ring> out{FormalSeries<Ring>(cl, f.bound(), f.ring()), true};
    std::set<ConeKey> done;
    for (const auto& [key, v] : f.coeffs()) {
        if (done.count(key))
            continue;
        const auto orb = symmetrize_orbit(cl, key, gens, f.bound());
        out.complete = out.complete && orb.complete;
        auto total = f.ring().zero();
        for (const auto& k : orb.orbit) {
            done.insert(k);
            total = f.ring().add(total, f.coeff(k));
        }
        for (const auto& k : orb.orbit)
            out.series.set(k, total);
    }
    out.series.set_growth(f.growth());
    return out;
}

/// a_f(eps . T) = a_f(T) for every orbit pair inside the height ball.
template <class Ring>
bool is_symmetric(const FormalSeries<Ring>& f, const std::vector<MatF>& gens)
{
    const auto& cl = f.cone();
    for (const auto& g : gens)
        validate_lambda_generator(cl, g);
    for (const auto& [key, v] : f.coeffs()) {
        const auto orb = symmetrize_orbit(cl, key, gens, f.bound());
        for (const auto& k : orb.orbit)
            if (!(f.coeff(k) == v))
                return false;
    }
    return true;
}

/// A series in two matrix variables (T1, T2), as produced by an outer product of a
/// genus-n1 and a genus-n2 series or by restricting a genus-(n1+n2) series to the
/// block diagonal. Coefficients are known for height(T1) <= bound1,
/// height(T2) <= bound2 and height(T1) + height(T2) <= bound_sum.
template <class Ring>
struct BlockSeries {
    ConeLattice cone1;
    ConeLattice cone2;
    Rational bound1;
    Rational bound2;
    Rational bound_sum;
    std::map<std::pair<ConeKey, ConeKey>, typename Ring::value_type> coeffs;

    /// The same data on the smaller region given by the three bounds.
    BlockSeries restricted(const Rational& b1, const Rational& b2, const Rational& bs) const
    {
        BlockSeries out{cone1, cone2, std::min(b1, bound1), std::min(b2, bound2), std::min(bs, bound_sum), {}};
        const auto nu = cone1.nu();
        const auto h1 = floor(out.bound1 * nu).get_si();
        const auto h2 = floor(out.bound2 * nu).get_si();
        const auto hs = floor(out.bound_sum * nu).get_si();
        for (const auto& [k, v] : coeffs)
            if (k.first.h <= h1 && k.second.h <= h2 && k.first.h + k.second.h <= hs)
                out.coeffs.emplace(k, v);
        return out;
    }

    friend bool operator==(const BlockSeries& a, const BlockSeries& b)
    {
        return a.cone1.same_as(b.cone1) && a.cone2.same_as(b.cone2) && a.bound1 == b.bound1 && a.bound2 == b.bound2 &&
               a.bound_sum == b.bound_sum && a.coeffs == b.coeffs;
    }
};

/// (T1, T2) -> a(T1) b(T2).
template <class Ring>
BlockSeries<Ring> outer_product(const FormalSeries<Ring>& a, const FormalSeries<Ring>& b)
{
    if (a.cone().nu() != b.cone().nu() || !(a.cone().field() == b.cone().field()))
        throw ValidationError("outer product needs a common field and level");
    BlockSeries<Ring> out{a.cone(), b.cone(), a.bound(), b.bound(), a.bound() + b.bound(), {}};
    for (const auto& [ka, va] : a.coeffs())
        for (const auto& [kb, vb] : b.coeffs()) {
            auto v = a.ring().mul(va, vb);
            if (!a.ring().is_zero(v))
                out.coeffs.emplace(std::make_pair(ka, kb), std::move(v));
        }
    return out;
}

/// The upper-left n1 x n1 block and the lower-right block of a symmetric matrix.
std::pair<SymMatF, SymMatF> diagonal_blocks(const SymMatF& t, int n1);

/// (T1, T2) -> sum of c(T) over T with diagonal blocks T1 and T2.
template <class Ring>
BlockSeries<Ring> diagonal_restriction(const FormalSeries<Ring>& c, int n1)
{
    const auto& cl = c.cone();
    if (n1 < 1 || n1 >= cl.n())
        throw ValidationError("block size out of range");
    const ConeLattice c1(cl.field(), n1, cl.nu());
    const ConeLattice c2(cl.field(), cl.n() - n1, cl.nu());
    BlockSeries<Ring> out{c1, c2, c.bound(), c.bound(), c.bound(), {}};
    for (const auto& [k, v] : c.coeffs()) {
        const auto [t1, t2] = diagonal_blocks(cl.matrix(k), n1);
        const auto key = std::make_pair(c1.key(t1), c2.key(t2));
        auto it = out.coeffs.find(key);
        if (it == out.coeffs.end()) {
            out.coeffs.emplace(key, v);
            continue;
        }
        it->second = c.ring().add(it->second, v);
        if (c.ring().is_zero(it->second))
            out.coeffs.erase(it);
    }
    return out;
}

}  // namespace ffskit
