#include "ffskit/surrogate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ffskit {

namespace {

Frame act(const QuadSpace& v, const MatF& g, const Frame& x)
{
    Frame out;
    for (const auto& xa : x)
        out.push_back(v.apply(g, xa));
    return out;
}

MatF invert(const MatF& g)
{
    auto inv = inverse(g);
    if (!inv)
        throw ValidationError("group element is singular");
    return *inv;
}

void require_subgroup(const FiniteGroup& sub, const FiniteGroup& ambient, const char* what)
{
    for (const auto& g : sub.elements())
        if (!ambient.contains(g))
            throw ValidationError(std::string(what) + " is not contained in the ambient group");
}

}  // namespace

SurrogateDatum::SurrogateDatum(QuadSpace space, const std::vector<MatF>& ambient, const std::vector<MatF>& plus,
                               const std::vector<MatF>& level, Frame base, WeightFunction weight,
                               const std::optional<std::vector<MatF>>& stabilizer, Neatness policy)
    : space_(std::move(space)),
      ambient_(FiniteGroup::generate(space_, ambient)),
      plus_(FiniteGroup::generate(space_, plus)),
      level_(FiniteGroup::generate(space_, level)),
      base_(std::move(base)),
      weight_(std::move(weight)),
      policy_(policy)
{
    require_subgroup(plus_, ambient_, "G+");
    require_subgroup(level_, ambient_, "K");
    for (const auto& a : ambient_.elements()) {
        const auto a_inv = invert(a);
        for (const auto& p : plus_.elements())
            if (!plus_.contains(a * p * a_inv))
                throw ValidationError("G+ is not normal in the ambient group");
    }
    if (base_.empty() || static_cast<int>(base_.size()) != weight_.n())
        throw ValidationError("base frame and weight have different genus");
    for (const auto& x : base_)
        if (static_cast<int>(x.size()) != space_.dim())
            throw ValidationError("base frame vector has the wrong dimension");
    stabilizer_ = ambient_.pointwise_stabilizer(space_, base_);
    if (stabilizer) {
        const auto h = FiniteGroup::generate(space_, *stabilizer);
        if (h.order() != stabilizer_.order() || h.intersection(stabilizer_).order() != h.order())
            throw ValidationError("H is not the pointwise stabilizer of the base frame");
    }
    std::set<Frame> orbit;
    for (const auto& a : ambient_.elements())
        orbit.insert(act(space_, a, base_));
    for (const auto& [x, w] : weight_.support()) {
        if (!orbit.count(x))
            throw ValidationError("weight is supported outside the orbit of the base frame");
        for (const auto& k : level_.elements())
            if (weight_(act(space_, k, x)) != w)
                throw ValidationError("weight is not K-invariant");
    }
}

bool NaturalWeightedReport::bijective() const
{
    return std::all_of(cells.begin(), cells.end(), [](const BijectionCell& c) { return c.bijective; });
}

NaturalWeightedReport check_natural_vs_weighted(const SurrogateDatum& s)
{
    const auto& v = s.space();
    const auto& a = s.ambient().elements();
    const auto& plus = s.plus();
    const auto& level = s.level();
    const auto& h = s.stabilizer();
    const auto& x0 = s.base();
    const int n = static_cast<int>(x0.size());

    std::map<std::vector<FieldElem>, std::size_t> index;
    for (std::size_t i = 0; i < a.size(); ++i)
        index.emplace(matrix_key(a[i]), i);
    auto id = [&](const MatF& g) { return index.at(matrix_key(g)); };

    // Double cosets G+ g_j K.
    std::vector<int> comp(a.size(), -1);
    NaturalWeightedReport rep;
    std::vector<Component> comps;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (comp[i] >= 0)
            continue;
        const int j = static_cast<int>(rep.component_reps.size());
        const auto& g = a[i];
        rep.component_reps.push_back(g);
        for (const auto& p : plus.elements())
            for (const auto& k : level.elements())
                comp[id(p * g * k)] = j;
        const auto g_inv = invert(g);
        std::vector<MatF> gamma;
        for (const auto& p : plus.elements())
            if (level.contains(g_inv * p * g))
                gamma.push_back(p);
        comps.push_back(Component{std::to_string(j), FiniteGroup::generate(v, gamma)});
    }
    auto od = std::make_shared<OrbitDatum>(v, std::move(comps), s.policy());
    rep.datum = od;
    const auto& gs = rep.component_reps;

    // Omega = A x0 with G+-orbit representatives gamma_eps.
    std::vector<MatF> gamma_eps;
    std::map<Frame, int> eps_of;
    for (const auto& g : a) {
        const auto x = act(v, g, x0);
        if (eps_of.count(x))
            continue;
        const int e = static_cast<int>(gamma_eps.size());
        gamma_eps.push_back(g);
        for (const auto& p : plus.elements())
            eps_of.emplace(act(v, p * g, x0), e);
    }

    // K-orbits of the support with xi_r^{-1} x0 their smallest frame.
    std::vector<MatF> xi;
    std::vector<Rational> xi_weight;
    std::map<Frame, int> r_of;
    for (const auto& [y, w] : s.weight().support()) {
        if (r_of.count(y))
            continue;
        const int r = static_cast<int>(xi.size());
        for (const auto& k : level.elements())
            r_of.emplace(act(v, k, y), r);
        const auto it = std::find_if(a.begin(), a.end(), [&](const MatF& g) { return act(v, g, x0) == y; });
        xi.push_back(invert(*it));
        xi_weight.push_back(w);
    }

    const int r0 = span(v, x0).dim();

    // Weighted side: sum over Gamma_j-orbits on Omega of phi(g_j^{-1} x) [Z(W(x))] c^{n - r(x)}.
    std::vector<std::map<Frame, int>> orbit_of(gs.size());
    std::vector<int> orbit_count(gs.size(), 0);
    for (std::size_t j = 0; j < gs.size(); ++j) {
        const int jj = static_cast<int>(j);
        const auto g_inv = invert(gs[j]);
        for (const auto& [x, e] : eps_of) {
            if (orbit_of[j].count(x))
                continue;
            const int o = orbit_count[j]++;
            for (const auto& g : od->group(jj).elements())
                orbit_of[j].emplace(act(v, g, x), o);
            const auto w = s.weight()(act(v, g_inv, x));
            if (sgn(w) != 0)
                rep.weighted += w * connected_cycle(*od, jj, x);
        }
    }

    // Natural side: for each (r, eps, j), double cosets H+ h K_{H, xi_r} with
    // gamma_eps h = gamma^{-1} g_j k xi_r^{-1}, contributing [Z(W(gamma gamma_eps x0))].
    const auto h_plus = h.intersection(plus);
    for (std::size_t r = 0; r < xi.size(); ++r) {
        const auto xi_inv = invert(xi[r]);
        std::vector<MatF> kh;
        for (const auto& x : h.elements())
            if (level.contains(xi_inv * x * xi[r]))
                kh.push_back(x);
        for (std::size_t e = 0; e < gamma_eps.size(); ++e)
            for (std::size_t j = 0; j < gs.size(); ++j) {
                const int jj = static_cast<int>(j);
                BijectionCell cell{static_cast<int>(r), static_cast<int>(e), jj, 0, 0, false};
                std::set<int> cell_orbits;
                for (const auto& [x, o] : orbit_of[j]) {
                    if (eps_of.at(x) != static_cast<int>(e))
                        continue;
                    const auto y = act(v, invert(gs[j]), x);
                    auto it = r_of.find(y);
                    if (it != r_of.end() && it->second == static_cast<int>(r))
                        cell_orbits.insert(o);
                }
                cell.orbits = cell_orbits.size();

                std::set<std::size_t> seen;
                std::set<int> hit;
                bool injective = true;
                const auto gj_inv = invert(gs[j]);
                for (const auto& hh : h.elements()) {
                    const auto g = gamma_eps[e] * hh;
                    if (comp[id(g * xi[r])] != jj || seen.count(id(hh)))
                        continue;
                    ++cell.double_cosets;
                    for (const auto& p : h_plus.elements())
                        for (const auto& m : kh)
                            seen.insert(id(p * hh * m));
                    std::optional<MatF> gamma;
                    for (const auto& k : level.elements()) {
                        const auto gamma_inv = g * xi[r] * invert(k) * gj_inv;
                        if (plus.contains(gamma_inv)) {
                            gamma = invert(gamma_inv);
                            break;
                        }
                    }
                    if (!gamma)
                        throw ValidationError("surrogate decomposition failed: no k in K puts the element in G+");
                    const auto x = act(v, *gamma * gamma_eps[e], x0);
                    const auto o = orbit_of[j].find(x);
                    if (o == orbit_of[j].end() || !cell_orbits.count(o->second) || !hit.insert(o->second).second)
                        injective = false;
                    rep.natural += xi_weight[r] * CycleClass::symbol(Symbol{jj, od->canonical(jj, span(v, x)), n - r0});
                }
                cell.bijective = injective && hit.size() == cell.orbits && cell.double_cosets == cell.orbits;
                rep.cells.push_back(cell);
            }
    }
    return rep;
}

}  // namespace ffskit
