#include "ffskit/cyclealg.hpp"

#include <algorithm>
#include <set>

namespace ffskit {

namespace {

std::string format_vec(const FVec& v)
{
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0)
            out += ", ";
        out += to_string(v[i]);
    }
    return out + ")";
}

std::string format_subspace(const Subspace& w)
{
    std::string out = "<";
    for (std::size_t i = 0; i < w.basis.size(); ++i) {
        if (i > 0)
            out += ", ";
        out += format_vec(w.basis[i]);
    }
    return out + ">";
}

using Tuple = std::vector<FVec>;

Tuple apply_tuple(const QuadSpace& v, const MatF& g, const Tuple& t)
{
    Tuple out;
    out.reserve(t.size());
    for (const auto& x : t)
        out.push_back(v.apply(g, x));
    return out;
}

/// Orbit representatives of h acting on the given set of tuples, in increasing order.
std::vector<Tuple> orbit_representatives(const QuadSpace& v, const FiniteGroup& h, const std::set<Tuple>& tuples)
{
    std::set<Tuple> seen;
    std::vector<Tuple> reps;
    for (const auto& t : tuples) {
        if (seen.count(t))
            continue;
        reps.push_back(t);
        for (const auto& g : h.elements())
            seen.insert(apply_tuple(v, g, t));
    }
    return reps;
}

std::set<Tuple> orbit(const QuadSpace& v, const FiniteGroup& g, const Tuple& t)
{
    std::set<Tuple> out;
    for (const auto& x : g.elements())
        out.insert(apply_tuple(v, x, t));
    return out;
}

std::vector<FieldElem> sym_key(const SymMatF& t) { return matrix_key(t.mat()); }

void check_frame(const QuadSpace& v, const Frame& x)
{
    for (const auto& xa : x) {
        if (static_cast<int>(xa.size()) != v.dim())
            throw ValidationError("frame vector has the wrong dimension");
        for (const auto& c : xa)
            if (!(c.field() == v.field()))
                throw ValidationError("frame vector over the wrong field");
    }
}

}  // namespace

// QuadSpace ---------------------------------------------------------------------

QuadSpace::QuadSpace(NumberField f, MatF gram, int d_plus)
    : field_(std::move(f)), dim_(static_cast<int>(gram.rows())), gram_(std::move(gram)), d_plus_(d_plus)
{
    if (gram_.rows() != gram_.cols())
        throw ValidationError("gram matrix is not square");
    if (d_plus_ < 1)
        throw ValidationError("d_plus must be positive");
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            const auto& e = gram_(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            if (!(e.field() == field_))
                throw ValidationError("gram entry over the wrong field");
            if (!(e == gram_(static_cast<std::size_t>(j), static_cast<std::size_t>(i))))
                throw ValidationError("gram matrix is not symmetric");
        }
    if (dim_ > 0 && !is_totally_pd(SymMatF(gram_)))
        throw ValidationError("gram matrix is not totally positive definite");
}

FieldElem QuadSpace::pair(const FVec& x, const FVec& y) const
{
    FieldElem s = field_.zero();
    for (int i = 0; i < dim_; ++i) {
        if (x[static_cast<std::size_t>(i)].is_zero())
            continue;
        FieldElem row = field_.zero();
        for (int j = 0; j < dim_; ++j)
            if (!y[static_cast<std::size_t>(j)].is_zero())
                row += gram_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * y[static_cast<std::size_t>(j)];
        s += x[static_cast<std::size_t>(i)] * row;
    }
    return s;
}

SymMatF QuadSpace::moment(const Frame& x) const
{
    const std::size_t n = x.size();
    MatF m(n, n, field_.zero());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            m(a, b) = pair(x[a], x[b]) * frac(1, 2);
            m(b, a) = m(a, b);
        }
    return SymMatF(m);
}

bool QuadSpace::preserves(const MatF& g) const
{
    if (static_cast<int>(g.rows()) != dim_ || static_cast<int>(g.cols()) != dim_)
        return false;
    if (dim_ == 0)
        return true;
    return g.transpose() * gram_ * g == gram_;
}

FVec QuadSpace::apply(const MatF& g, const FVec& v) const
{
    FVec out(static_cast<std::size_t>(dim_), field_.zero());
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = 0; j < out.size(); ++j)
            if (!v[j].is_zero() && !g(i, j).is_zero())
                out[i] += g(i, j) * v[j];
    return out;
}

FVec QuadSpace::zero_vector() const { return FVec(static_cast<std::size_t>(dim_), field_.zero()); }

Subspace span(const QuadSpace& v, const std::vector<FVec>& vecs)
{
    Subspace w;
    if (vecs.empty() || v.dim() == 0)
        return w;
    MatF m(vecs.size(), static_cast<std::size_t>(v.dim()), v.field().zero());
    for (std::size_t i = 0; i < vecs.size(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(i, j) = vecs[i][j];
    const auto pivots = rref(m);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        FVec row(m.cols(), v.field().zero());
        for (std::size_t j = 0; j < m.cols(); ++j)
            row[j] = m(i, j);
        w.basis.push_back(std::move(row));
    }
    return w;
}

Subspace apply(const QuadSpace& v, const MatF& g, const Subspace& w)
{
    return span(v, apply_tuple(v, g, w.basis));
}

// FiniteGroup -------------------------------------------------------------------

std::vector<FieldElem> matrix_key(const MatF& m)
{
    std::vector<FieldElem> k;
    k.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            k.push_back(m(i, j));
    return k;
}

void FiniteGroup::index()
{
    lookup_.clear();
    for (std::size_t i = 0; i < elements_.size(); ++i)
        lookup_.emplace(matrix_key(elements_[i]), i);
}

FiniteGroup FiniteGroup::trivial(const QuadSpace& v)
{
    FiniteGroup g;
    g.elements_.push_back(MatF::identity(static_cast<std::size_t>(v.dim()), v.field().one()));
    g.index();
    return g;
}

FiniteGroup FiniteGroup::generate(const QuadSpace& v, const std::vector<MatF>& gens, std::size_t max_order)
{
    for (const auto& g : gens) {
        if (!v.preserves(g))
            throw ValidationError("group generator does not preserve the form");
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j)
                if (!(g(i, j).field() == v.field()))
                    throw ValidationError("group generator over the wrong field");
    }
    FiniteGroup out = trivial(v);
    for (std::size_t next = 0; next < out.elements_.size(); ++next)
        for (const auto& g : gens) {
            MatF e = out.elements_[next] * g;
            auto key = matrix_key(e);
            if (out.lookup_.count(key))
                continue;
            if (out.elements_.size() >= max_order)
                throw ValidationError("group closure exceeds the maximal order; the group is not finite or too large");
            out.lookup_.emplace(std::move(key), out.elements_.size());
            out.elements_.push_back(std::move(e));
        }
    return out;
}

bool FiniteGroup::contains(const MatF& g) const { return lookup_.count(matrix_key(g)) > 0; }

FiniteGroup FiniteGroup::pointwise_stabilizer(const QuadSpace& v, const std::vector<FVec>& vecs) const
{
    FiniteGroup out;
    for (const auto& g : elements_)
        if (std::all_of(vecs.begin(), vecs.end(), [&](const FVec& x) { return v.apply(g, x) == x; }))
            out.elements_.push_back(g);
    out.index();
    return out;
}

FiniteGroup FiniteGroup::intersection(const FiniteGroup& o) const
{
    FiniteGroup out;
    for (const auto& g : elements_)
        if (o.contains(g))
            out.elements_.push_back(g);
    out.index();
    return out;
}

FiniteGroup FiniteGroup::conjugated(const MatF& g, const MatF& g_inv) const
{
    FiniteGroup out;
    for (const auto& x : elements_)
        out.elements_.push_back(g * x * g_inv);
    out.index();
    return out;
}

// OrbitDatum --------------------------------------------------------------------

OrbitDatum::OrbitDatum(QuadSpace space, const std::vector<MatF>& generators, Neatness policy)
    : space_(std::move(space)), policy_(policy)
{
    components_.push_back(Component{"0", FiniteGroup::generate(space_, generators)});
}

OrbitDatum::OrbitDatum(QuadSpace space, std::vector<Component> components, Neatness policy)
    : space_(std::move(space)), components_(std::move(components)), policy_(policy)
{
    if (components_.empty())
        throw ValidationError("orbit datum needs at least one component");
    for (const auto& c : components_)
        for (const auto& g : c.group.elements())
            if (!space_.preserves(g))
                throw ValidationError("component group element does not preserve the form");
}

void OrbitDatum::check_neat(int j, const Subspace& w) const
{
    if (policy_ == Neatness::relaxed)
        return;
    for (const auto& g : group(j).elements()) {
        if (!(apply(space_, g, w) == w))
            continue;
        for (const auto& b : w.basis)
            if (!(space_.apply(g, b) == b))
                throw NeatnessViolation("neatness violated: the stabilizer of W = " + format_subspace(w) +
                                            " in component " + components_[static_cast<std::size_t>(j)].label +
                                            " acts nontrivially on W",
                                        w);
    }
}

Subspace OrbitDatum::canonical(int j, const Subspace& w) const
{
    check_neat(j, w);
    Subspace best = w;
    for (const auto& g : group(j).elements()) {
        auto x = apply(space_, g, w);
        if (x < best)
            best = std::move(x);
    }
    return best;
}

// CycleClass --------------------------------------------------------------------

CycleClass CycleClass::symbol(Symbol s, const Rational& coeff)
{
    CycleClass c;
    c.add_term(s, coeff);
    return c;
}

Rational CycleClass::coeff(const Symbol& s) const
{
    auto it = terms_.find(s);
    return it == terms_.end() ? Rational(0) : it->second;
}

void CycleClass::add_term(const Symbol& s, const Rational& c)
{
    if (sgn(c) == 0)
        return;
    const int deg = s.w.dim() + s.k;
    if (degree_ >= 0 && deg != degree_)
        throw ValidationError("cycle class would not be homogeneous");
    auto [it, inserted] = terms_.emplace(s, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0)
            terms_.erase(it);
    }
    degree_ = terms_.empty() ? -1 : deg;
}

CycleClass& CycleClass::operator+=(const CycleClass& o)
{
    for (const auto& [s, c] : o.terms_)
        add_term(s, c);
    return *this;
}

CycleClass CycleClass::operator-() const
{
    CycleClass out = *this;
    for (auto& [s, c] : out.terms_)
        c = -c;
    return out;
}

CycleClass operator*(const Rational& s, const CycleClass& a)
{
    CycleClass out;
    for (const auto& [sym, c] : a.terms_)
        out.add_term(sym, s * c);
    return out;
}

std::string to_string(const CycleClass& a)
{
    if (a.is_zero())
        return "0";
    std::string out;
    for (const auto& [s, c] : a.terms()) {
        if (!out.empty())
            out += " + ";
        out += to_string(c) + "*[" + std::to_string(s.component) + ":" + format_subspace(s.w) + "]c^" +
               std::to_string(s.k);
    }
    return out;
}

CycleClass connected_cycle(const OrbitDatum& od, int j, const Frame& x)
{
    check_frame(od.space(), x);
    const auto w = span(od.space(), x);
    if (w.dim() > 0 && !is_totally_pd(od.space().moment(w.basis)))
        return {};
    const int n = static_cast<int>(x.size());
    return CycleClass::symbol(Symbol{j, od.canonical(j, w), n - w.dim()});
}

CycleClass unit_class(const OrbitDatum& od)
{
    CycleClass out;
    for (std::size_t j = 0; j < od.components().size(); ++j)
        out.add_term(Symbol{static_cast<int>(j), Subspace{}, 0}, Rational(1));
    return out;
}

namespace {

CycleClass intersect_symbols(const OrbitDatum& od, const Symbol& a, const Symbol& b)
{
    const auto& v = od.space();
    const auto& g = od.group(a.component);
    const auto stab = g.pointwise_stabilizer(v, a.w.basis);
    CycleClass out;
    for (const auto& t : orbit_representatives(v, stab, orbit(v, g, b.w.basis))) {
        Tuple both = a.w.basis;
        both.insert(both.end(), t.begin(), t.end());
        const auto w = span(v, both);
        const int k = a.w.dim() + b.w.dim() - w.dim() + a.k + b.k;
        out.add_term(Symbol{a.component, od.canonical(a.component, w), k}, Rational(1));
    }
    return out;
}

}  // namespace

CycleClass intersect(const OrbitDatum& od, const CycleClass& a, const CycleClass& b)
{
    CycleClass out;
    for (const auto& [sa, ca] : a.terms())
        for (const auto& [sb, cb] : b.terms()) {
            if (sa.component != sb.component)
                continue;
            out += (ca * cb) * intersect_symbols(od, sa, sb);
        }
    return out;
}

// Weighted cycles ---------------------------------------------------------------

void WeightFunction::set(const Frame& x, const Rational& w)
{
    if (static_cast<int>(x.size()) != n_)
        throw ValidationError("weight frame has the wrong genus");
    if (sgn(w) == 0)
        values_.erase(x);
    else
        values_[x] = w;
}

Rational WeightFunction::operator()(const Frame& x) const
{
    auto it = values_.find(x);
    return it == values_.end() ? Rational(0) : it->second;
}

WeightFunction WeightFunction::restricted(const QuadSpace& v, const SymMatF& t) const
{
    WeightFunction out(n_);
    for (const auto& [x, w] : values_) {
        check_frame(v, x);
        if (v.moment(x) == t)
            out.values_.emplace(x, w);
    }
    return out;
}

WeightFunction tensor(const WeightFunction& a, const WeightFunction& b)
{
    WeightFunction out(a.n() + b.n());
    for (const auto& [x, wx] : a.support())
        for (const auto& [y, wy] : b.support()) {
            Frame z = x;
            z.insert(z.end(), y.begin(), y.end());
            out.set(z, wx * wy);
        }
    return out;
}

void validate_invariance(const OrbitDatum& od, int j, const WeightFunction& phi)
{
    for (const auto& [x, w] : phi.support())
        for (const auto& g : od.group(j).elements())
            if (phi(apply_tuple(od.space(), g, x)) != w)
                throw ValidationError("weight is not invariant under the group of component " +
                                      od.components()[static_cast<std::size_t>(j)].label);
}

CycleClass weighted_cycle(const OrbitDatum& od, const SymMatF& t, const WeightFunction& phi, bool restrict_to_t)
{
    if (phi.n() != t.n())
        throw ValidationError("weight genus does not match T");
    const auto& v = od.space();
    if (!restrict_to_t)
        for (const auto& [x, w] : phi.support()) {
            check_frame(v, x);
            if (!(v.moment(x) == t))
                throw ValidationError("weight is supported outside O_T: Q(x) != T for x = " + format_vec(x.front()) +
                                      ", ...");
        }
    const auto local = phi.restricted(v, t);
    CycleClass out;
    for (std::size_t j = 0; j < od.components().size(); ++j) {
        const int jj = static_cast<int>(j);
        validate_invariance(od, jj, local);
        std::set<Frame> seen;
        for (const auto& [x, w] : local.support()) {
            if (seen.count(x))
                continue;
            for (const auto& g : od.group(jj).elements())
                seen.insert(apply_tuple(v, g, x));
            out += w * connected_cycle(od, jj, x);
        }
    }
    return out;
}

CheckReport check_product_formula(const OrbitDatum& od, const SymMatF& t1, const WeightFunction& phi1,
                                  const SymMatF& t2, const WeightFunction& phi2, const WeightFunction* joint)
{
    CheckReport r;
    r.lhs = intersect(od, weighted_cycle(od, t1, phi1), weighted_cycle(od, t2, phi2));
    const auto w = joint ? *joint : tensor(phi1, phi2);
    if (w.n() != t1.n() + t2.n())
        throw ValidationError("joint weight has the wrong genus");
    std::map<std::vector<FieldElem>, SymMatF> blocks;
    for (const auto& [x, c] : w.support()) {
        check_frame(od.space(), x);
        const auto t = od.space().moment(x);
        const auto [b1, b2] = diagonal_blocks(t, t1.n());
        if (!(b1 == t1) || !(b2 == t2))
            continue;
        blocks.emplace(sym_key(t), t);
    }
    for (const auto& [k, t] : blocks)
        r.rhs += weighted_cycle(od, t, w, true);
    return r;
}

// Pullback ----------------------------------------------------------------------

ComplementDatum::ComplementDatum(const OrbitDatum& od, const std::vector<FVec>& u0) : od_(&od)
{
    const auto& v = od.space();
    check_frame(v, u0);
    u0_ = span(v, u0);
    const auto n = static_cast<std::size_t>(v.dim());
    if (u0_.dim() == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            FVec e = v.zero_vector();
            e[i] = v.field().one();
            perp_.push_back(std::move(e));
        }
    } else {
        MatF m(u0_.basis.size(), n, v.field().zero());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < n; ++l)
                    m(i, j) += u0_.basis[i][l] * v.gram()(l, j);
        perp_ = span(v, kernel(m, v.field().zero())).basis;
    }
    const std::size_t p = perp_.size();
    MatF sub_gram(p, p, v.field().zero());
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b)
            sub_gram(a, b) = v.pair(perp_[a], perp_[b]);
    QuadSpace sub_space(v.field(), sub_gram, v.d_plus());
    std::vector<Component> comps;
    for (std::size_t j = 0; j < od.components().size(); ++j) {
        stabilizers_.push_back(od.group(static_cast<int>(j)).pointwise_stabilizer(v, u0_.basis));
        std::vector<MatF> restricted;
        for (const auto& g : stabilizers_.back().elements()) {
            MatF r(p, p, v.field().zero());
            for (std::size_t b = 0; b < p; ++b) {
                const auto col = to_sub(v.apply(g, perp_[b]));
                for (std::size_t a = 0; a < p; ++a)
                    r(a, b) = col[a];
            }
            restricted.push_back(std::move(r));
        }
        comps.push_back(Component{od.components()[j].label, FiniteGroup::generate(sub_space, restricted)});
    }
    sub_ = std::make_unique<OrbitDatum>(sub_space, std::move(comps), od.policy());
}

std::pair<FVec, FVec> ComplementDatum::split(const FVec& v) const
{
    const auto& sp = od_->space();
    FVec v0 = sp.zero_vector();
    const std::size_t k = u0_.basis.size();
    if (k > 0) {
        MatF a(k, k, sp.field().zero());
        std::vector<FieldElem> rhs(k, sp.field().zero());
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j)
                a(i, j) = sp.pair(u0_.basis[i], u0_.basis[j]);
            rhs[i] = sp.pair(u0_.basis[i], v);
        }
        const auto c = solve(a, rhs);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t l = 0; l < v0.size(); ++l)
                v0[l] += (*c)[i] * u0_.basis[i][l];
    }
    FVec v1 = v;
    for (std::size_t l = 0; l < v1.size(); ++l)
        v1[l] -= v0[l];
    return {std::move(v0), std::move(v1)};
}

FVec ComplementDatum::project(const FVec& v) const { return split(v).second; }

FVec ComplementDatum::to_sub(const FVec& v) const
{
    const auto& sp = od_->space();
    const std::size_t p = perp_.size();
    if (p == 0) {
        if (!(v == sp.zero_vector()))
            throw ValidationError("vector does not lie in the orthogonal complement");
        return {};
    }
    MatF a(v.size(), p, sp.field().zero());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t b = 0; b < p; ++b)
            a(i, b) = perp_[b][i];
    auto c = solve(a, v);
    if (!c)
        throw ValidationError("vector does not lie in the orthogonal complement");
    return *c;
}

FVec ComplementDatum::from_sub(const FVec& v) const
{
    FVec out = od_->space().zero_vector();
    for (std::size_t b = 0; b < perp_.size(); ++b)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += v[b] * perp_[b][i];
    return out;
}

CycleClass pullback(const OrbitDatum& od, const ComplementDatum& cd, const CycleClass& a)
{
    const auto& v = od.space();
    const auto& sub = cd.datum();
    CycleClass out;
    for (const auto& [s, c] : a.terms()) {
        const auto& g = od.group(s.component);
        for (const auto& t : orbit_representatives(v, cd.stabilizer(s.component), orbit(v, g, s.w.basis))) {
            std::vector<FVec> projected;
            for (const auto& x : t)
                projected.push_back(cd.to_sub(cd.project(x)));
            const auto w = span(sub.space(), projected);
            const int k = s.k + s.w.dim() - w.dim();
            out.add_term(Symbol{s.component, sub.canonical(s.component, w), k}, c);
        }
    }
    return out;
}

WeightFunction SplitWeight::combined(const ComplementDatum& cd) const
{
    if (parts.empty())
        throw ValidationError("split weight has no parts");
    const int n = parts.front().first.n();
    WeightFunction out(n);
    std::map<Frame, Rational> acc;
    for (const auto& [phi0, phi1] : parts) {
        if (phi0.n() != n || phi1.n() != n)
            throw ValidationError("split weight parts have different genus");
        for (const auto& [x0, w0] : phi0.support())
            for (const auto& x : x0)
                if (!(cd.project(x) == FVec(x.size(), x.front().field().zero())))
                    throw ValidationError("split weight: first factor is not supported on U0-frames");
        for (const auto& [x1, w1] : phi1.support())
            for (const auto& x : x1)
                if (!(cd.project(x) == x))
                    throw ValidationError("split weight: second factor is not supported on U0^perp-frames");
        for (const auto& [x0, w0] : phi0.support())
            for (const auto& [x1, w1] : phi1.support()) {
                Frame x = x0;
                for (std::size_t a = 0; a < x.size(); ++a)
                    for (std::size_t i = 0; i < x[a].size(); ++i)
                        x[a][i] += x1[a][i];
                acc[x] += w0 * w1;
            }
    }
    for (const auto& [x, w] : acc)
        out.set(x, w);
    return out;
}

CheckReport check_pullback_factorization(const OrbitDatum& od, const ComplementDatum& cd, const SymMatF& t,
                                         const SplitWeight& phi, const WeightFunction* full)
{
    CheckReport r;
    const auto w = full ? *full : phi.combined(cd);
    r.lhs = pullback(od, cd, weighted_cycle(od, t, w, true));
    const auto& v = od.space();
    for (const auto& [phi0, phi1] : phi.parts) {
        WeightFunction sub_phi(phi1.n());
        for (const auto& [x1, w1] : phi1.support()) {
            Frame y;
            for (const auto& x : x1)
                y.push_back(cd.to_sub(x));
            sub_phi.set(y, w1);
        }
        for (const auto& [x0, w0] : phi0.support()) {
            const auto rest = t - v.moment(x0);
            r.rhs += w0 * weighted_cycle(cd.datum(), rest, sub_phi, true);
        }
    }
    return r;
}

// Series ------------------------------------------------------------------------

int required_level(const QuadSpace& v, const WeightFunction& phi)
{
    const auto& f = v.field();
    Integer nu = 1;
    for (const auto& [x, w] : phi.support()) {
        const auto t = v.moment(x);
        for (int i = 0; i < t.n(); ++i)
            for (int k = i; k < t.n(); ++k)
                for (int l = 0; l < f.degree(); ++l) {
                    const Rational q = (i == k ? 1 : 2) * trace(t(i, k) * f.basis_element(l));
                    nu = lcm(nu, Integer(q.get_den()));
                }
    }
    if (!nu.fits_sint_p())
        throw ValidationError("required level does not fit in an int");
    return static_cast<int>(nu.get_si());
}

FormalSeries<CycleRing> series_of_cycles(std::shared_ptr<const OrbitDatum> od, const WeightFunction& phi,
                                         const Rational& b, int nu)
{
    const auto& v = od->space();
    ConeLattice cl(v.field(), phi.n(), nu);
    FormalSeries<CycleRing> out(cl, b, CycleRing{od});
    std::map<std::vector<FieldElem>, SymMatF> ts;
    for (const auto& [x, w] : phi.support()) {
        check_frame(v, x);
        const auto t = v.moment(x);
        if (height(t) <= b)
            ts.emplace(sym_key(t), t);
    }
    for (const auto& [k, t] : ts)
        out.add_to(cl.key(t), weighted_cycle(*od, t, phi, true));
    return out;
}

SeriesProductReport check_series_product(std::shared_ptr<const OrbitDatum> od, const WeightFunction& phi1,
                                         const WeightFunction& phi2, const Rational& b)
{
    const auto& v = od->space();
    const auto joint = tensor(phi1, phi2);
    const Integer nu_z =
        lcm(lcm(Integer(required_level(v, phi1)), Integer(required_level(v, phi2))), Integer(required_level(v, joint)));
    const int nu = static_cast<int>(nu_z.get_si());
    const auto s1 = series_of_cycles(od, phi1, b, nu);
    const auto s2 = series_of_cycles(od, phi2, b, nu);
    const auto s12 = series_of_cycles(od, joint, b, nu);
    return SeriesProductReport{diagonal_restriction(s12, phi1.n()).restricted(b, b, b),
                               outer_product(s1, s2).restricted(b, b, b)};
}

// Transport ---------------------------------------------------------------------

OrbitDatum transport(const OrbitDatum& od, const MatF& eta)
{
    if (!od.space().preserves(eta))
        throw ValidationError("transport matrix is not an isometry");
    const auto inv = inverse(eta);
    if (!inv)
        throw ValidationError("transport matrix is singular");
    std::vector<Component> comps;
    for (const auto& c : od.components())
        comps.push_back(Component{c.label, c.group.conjugated(eta, *inv)});
    return OrbitDatum(od.space(), std::move(comps), od.policy());
}

CycleClass transport(const OrbitDatum& target, const MatF& eta, const CycleClass& a)
{
    CycleClass out;
    for (const auto& [s, c] : a.terms())
        out.add_term(Symbol{s.component, target.canonical(s.component, apply(target.space(), eta, s.w)), s.k}, c);
    return out;
}

}  // namespace ffskit
