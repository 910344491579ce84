#pragma once

#include "ffskit/ffs.hpp"
#include "ffskit/symcone.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ffskit {

using FVec = std::vector<FieldElem>;
/// x = (x_1, ..., x_n), each x_a in V = F^N.
using Frame = std::vector<FVec>;

/// A totally positive definite quadratic space over F with a formal codimension multiplier.
class QuadSpace {
public:
    QuadSpace(NumberField f, MatF gram, int d_plus = 1);

    const NumberField& field() const { return field_; }
    int dim() const { return dim_; }
    const MatF& gram() const { return gram_; }
    int d_plus() const { return d_plus_; }

    FieldElem pair(const FVec& x, const FVec& y) const;
    /// The moment matrix Q(x) = ((x_a, x_b) / 2).
    SymMatF moment(const Frame& x) const;
    bool preserves(const MatF& g) const;
    FVec apply(const MatF& g, const FVec& v) const;
    FVec zero_vector() const;

private:
    NumberField field_;
    int dim_;
    MatF gram_;
    int d_plus_;
};

/// A subspace stored by its reduced row echelon basis; comparison is lexicographic.
struct Subspace {
    std::vector<FVec> basis;
    int dim() const { return static_cast<int>(basis.size()); }
    friend auto operator<=>(const Subspace&, const Subspace&) = default;
    friend bool operator==(const Subspace&, const Subspace&) = default;
};

Subspace span(const QuadSpace& v, const std::vector<FVec>& vecs);
Subspace apply(const QuadSpace& v, const MatF& g, const Subspace& w);

/// A finite group of isometries, stored as its full element list (identity first).
class FiniteGroup {
public:
    /// Closure of the generators; throws ValidationError if an element does not preserve
    /// the form, is singular, or the closure exceeds max_order.
    static FiniteGroup generate(const QuadSpace& v, const std::vector<MatF>& gens, std::size_t max_order = 4096);
    static FiniteGroup trivial(const QuadSpace& v);

    const std::vector<MatF>& elements() const { return elements_; }
    std::size_t order() const { return elements_.size(); }
    bool contains(const MatF& g) const;
    /// Elements fixing every vector in vecs.
    FiniteGroup pointwise_stabilizer(const QuadSpace& v, const std::vector<FVec>& vecs) const;
    FiniteGroup intersection(const FiniteGroup& o) const;
    /// g x g^{-1} for all x.
    FiniteGroup conjugated(const MatF& g, const MatF& g_inv) const;

private:
    void index();
    std::vector<MatF> elements_;
    std::map<std::vector<FieldElem>, std::size_t> lookup_;
};

std::vector<FieldElem> matrix_key(const MatF& m);

class NeatnessViolation : public ValidationError {
public:
    NeatnessViolation(const std::string& what, Subspace w) : ValidationError(what), subspace(std::move(w)) {}
    Subspace subspace;
};

enum class Neatness { enforce, relaxed };

struct Component {
    std::string label;
    FiniteGroup group;
};

/// Finite orbit datum: a space and one isometry group per connected component.
class OrbitDatum {
public:
    OrbitDatum(QuadSpace space, const std::vector<MatF>& generators, Neatness policy = Neatness::enforce);
    OrbitDatum(QuadSpace space, std::vector<Component> components, Neatness policy = Neatness::enforce);

    const QuadSpace& space() const { return space_; }
    const std::vector<Component>& components() const { return components_; }
    const FiniteGroup& group(int j) const { return components_.at(static_cast<std::size_t>(j)).group; }
    Neatness policy() const { return policy_; }

    /// Throws NeatnessViolation if an element stabilizing w setwise moves a vector of w.
    void check_neat(int j, const Subspace& w) const;
    /// Orbit minimum of w under the group of component j (after the neatness check).
    Subspace canonical(int j, const Subspace& w) const;

private:
    QuadSpace space_;
    std::vector<Component> components_;
    Neatness policy_;
};

/// <component, orbit of W, c exponent k>.
struct Symbol {
    int component = 0;
    Subspace w;
    int k = 0;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
    friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Homogeneous rational combination of symbols. The degree dim W + k is shared by all
/// terms; the grading is degree times d_plus.
class CycleClass {
public:
    CycleClass() = default;
    static CycleClass symbol(Symbol s, const Rational& coeff = Rational(1));

    const std::map<Symbol, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// dim W + k of every term; -1 for the zero class.
    int degree() const { return degree_; }
    int grading(const OrbitDatum& od) const { return degree_ < 0 ? -1 : degree_ * od.space().d_plus(); }
    Rational coeff(const Symbol& s) const;

    void add_term(const Symbol& s, const Rational& c);
    CycleClass& operator+=(const CycleClass& o);
    friend CycleClass operator+(CycleClass a, const CycleClass& b) { return a += b; }
    CycleClass operator-() const;
    friend CycleClass operator-(const CycleClass& a, const CycleClass& b) { return a + (-b); }
    friend CycleClass operator*(const Rational& s, const CycleClass& a);
    friend bool operator==(const CycleClass& a, const CycleClass& b) { return a.terms_ == b.terms_; }

private:
    std::map<Symbol, Rational> terms_;
    int degree_ = -1;
};

std::string to_string(const CycleClass& a);

/// <orbit W(x), n - r(x)> on component j.
CycleClass connected_cycle(const OrbitDatum& od, int j, const Frame& x);
/// Fundamental class: the sum over components of <0, 0>.
CycleClass unit_class(const OrbitDatum& od);

/// Intersection product of two classes.
CycleClass intersect(const OrbitDatum& od, const CycleClass& a, const CycleClass& b);

/// Finite weight function on frames of a fixed genus.
class WeightFunction {
public:
    explicit WeightFunction(int n) : n_(n) {}
    int n() const { return n_; }
    void set(const Frame& x, const Rational& w);
    Rational operator()(const Frame& x) const;
    const std::map<Frame, Rational>& support() const { return values_; }
    bool is_zero() const { return values_.empty(); }
    /// Restriction to {x : Q(x) = t}.
    WeightFunction restricted(const QuadSpace& v, const SymMatF& t) const;

private:
    int n_;
    std::map<Frame, Rational> values_;
};

/// phi1 (x) phi2 on concatenated frames.
WeightFunction tensor(const WeightFunction& a, const WeightFunction& b);

/// Throws ValidationError unless phi is constant on group orbits of component j and its
/// support is stable.
void validate_invariance(const OrbitDatum& od, int j, const WeightFunction& phi);

/// Z(T, phi). With restrict_to_t false, a support frame with Q(x) != T is an error;
/// otherwise such frames are ignored.
CycleClass weighted_cycle(const OrbitDatum& od, const SymMatF& t, const WeightFunction& phi, bool restrict_to_t = false);

struct CheckReport {
    CycleClass lhs;
    CycleClass rhs;
    bool equal() const { return lhs == rhs; }
};

/// Z(T1, phi1) Z(T2, phi2) against the sum over block matrices T of Z(T, phi1 (x) phi2).
/// A supplied joint weight replaces phi1 (x) phi2 on the right.
CheckReport check_product_formula(const OrbitDatum& od, const SymMatF& t1, const WeightFunction& phi1,
                                  const SymMatF& t2, const WeightFunction& phi2,
                                  const WeightFunction* joint = nullptr);

/// The datum on U0^perp with the pointwise stabilizers of U0, in coordinates of a fixed
/// basis of U0^perp.
class ComplementDatum {
public:
    ComplementDatum(const OrbitDatum& od, const std::vector<FVec>& u0);

    const OrbitDatum& datum() const { return *sub_; }
    const Subspace& u0() const { return u0_; }
    /// Basis of U0^perp, in ambient coordinates.
    const std::vector<FVec>& basis() const { return perp_; }
    /// Pointwise stabilizer of U0 in component j, as ambient matrices.
    const FiniteGroup& stabilizer(int j) const { return stabilizers_.at(static_cast<std::size_t>(j)); }

    /// Orthogonal projection to U0^perp, in ambient coordinates.
    FVec project(const FVec& v) const;
    /// Coordinates of v in U0^perp (v must lie there).
    FVec to_sub(const FVec& v) const;
    FVec from_sub(const FVec& v) const;
    /// Splits v = v0 + v1 with v0 in U0 and v1 in U0^perp.
    std::pair<FVec, FVec> split(const FVec& v) const;

private:
    const OrbitDatum* od_;
    Subspace u0_;
    std::vector<FVec> perp_;
    std::vector<FiniteGroup> stabilizers_;
    std::unique_ptr<OrbitDatum> sub_;
};

/// rho^* A as a class on the complement datum.
CycleClass pullback(const OrbitDatum& od, const ComplementDatum& cd, const CycleClass& a);

/// phi = sum_r phi0_r (x) phi1_r, with phi0_r on U0-frames and phi1_r on U0^perp-frames,
/// both in ambient coordinates.
struct SplitWeight {
    std::vector<std::pair<WeightFunction, WeightFunction>> parts;
    WeightFunction combined(const ComplementDatum& cd) const;
};

/// rho^* Z(T, phi) against sum_r sum_{x0} phi0_r(x0) Z(T - Q(x0), phi1_r). A supplied full
/// weight replaces the combined split weight on the left.
CheckReport check_pullback_factorization(const OrbitDatum& od, const ComplementDatum& cd, const SymMatF& t,
                                         const SplitWeight& phi, const WeightFunction* full = nullptr);

/// Ring of cycle classes, for series with cycle coefficients.
struct CycleRing {
    using value_type = CycleClass;
    std::shared_ptr<const OrbitDatum> datum;
    value_type zero() const { return {}; }
    value_type one() const { return unit_class(*datum); }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type mul(const value_type& a, const value_type& b) const { return intersect(*datum, a, b); }
    value_type neg(const value_type& a) const { return -a; }
    bool is_zero(const value_type& a) const { return a.is_zero(); }
    static std::string tag() { return "cycle"; }
};

/// Smallest level nu with every Q(x), x in the support, in nu^{-1} S_F^vee.
int required_level(const QuadSpace& v, const WeightFunction& phi);

/// sum_T Z(T, phi) q^T over T of height <= b.
FormalSeries<CycleRing> series_of_cycles(std::shared_ptr<const OrbitDatum> od, const WeightFunction& phi,
                                         const Rational& b, int nu);

struct SeriesProductReport {
    BlockSeries<CycleRing> lhs;  // diagonal restriction of the genus n1 + n2 series
    BlockSeries<CycleRing> rhs;  // outer product of the genus n1 and n2 series
    bool equal() const { return lhs == rhs; }
};
SeriesProductReport check_series_product(std::shared_ptr<const OrbitDatum> od, const WeightFunction& phi1,
                                         const WeightFunction& phi2, const Rational& b);

/// The datum conjugated by an isometry eta, and the induced map on classes.
OrbitDatum transport(const OrbitDatum& od, const MatF& eta);
CycleClass transport(const OrbitDatum& target, const MatF& eta, const CycleClass& a);

}  // namespace ffskit
