#pragma once

#include "ffskit/cyclealg.hpp"
#include "ffskit/surrogate.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <vector>

namespace fixtures {

using namespace ffskit;

inline const NumberField& rationals()
{
    static const NumberField f = NumberField::rationals();
    return f;
}

inline FVec qvec(const std::vector<int>& c)
{
    FVec v;
    for (int x : c)
        v.push_back(rationals().from_rational(Rational(x)));
    return v;
}

inline MatF qmatrix(int n, const std::vector<int>& rows)
{
    MatF m(static_cast<std::size_t>(n), static_cast<std::size_t>(n), rationals().zero());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                rationals().from_rational(Rational(rows[static_cast<std::size_t>(i * n + j)]));
    return m;
}

inline QuadSpace diagonal_space(const std::vector<int>& d, int d_plus = 1)
{
    const int n = static_cast<int>(d.size());
    std::vector<int> rows(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < n; ++i)
        rows[static_cast<std::size_t>(i * n + i)] = d[static_cast<std::size_t>(i)];
    return QuadSpace(rationals(), qmatrix(n, rows), d_plus);
}

/// e_i -> signs[i] e_{perm[i]}.
inline MatF signed_permutation(const std::vector<int>& perm, const std::vector<int>& signs)
{
    const int n = static_cast<int>(perm.size());
    std::vector<int> rows(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < n; ++i)
        rows[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)] * n + i)] = signs[static_cast<std::size_t>(i)];
    return qmatrix(n, rows);
}

/// A random signed permutation of the coordinates in `coords`, identity elsewhere.
inline MatF random_signed_permutation(std::mt19937& rng, int n, const std::vector<int>& coords)
{
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::vector<int> signs(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < n; ++i)
        perm[static_cast<std::size_t>(i)] = i;
    auto moved = coords;
    std::shuffle(moved.begin(), moved.end(), rng);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        perm[static_cast<std::size_t>(coords[i])] = moved[i];
        signs[static_cast<std::size_t>(coords[i])] = (rng() % 2) ? 1 : -1;
    }
    return signed_permutation(perm, signs);
}

inline FVec random_vector(std::mt19937& rng, int n, const std::vector<int>& coords, int range)
{
    std::vector<int> c(static_cast<std::size_t>(n), 0);
    for (int i : coords)
        c[static_cast<std::size_t>(i)] = static_cast<int>(rng() % static_cast<unsigned>(2 * range + 1)) - range;
    return qvec(c);
}

inline Frame apply_frame(const QuadSpace& v, const MatF& g, const Frame& x)
{
    Frame out;
    for (const auto& xa : x)
        out.push_back(v.apply(g, xa));
    return out;
}

/// Nontrivial group generated by one or two random signed permutations of `coords`, of
/// order <= 16.
inline FiniteGroup random_group(std::mt19937& rng, const QuadSpace& v, const std::vector<int>& coords,
                                std::vector<MatF>& gens)
{
    for (;;) {
        gens.clear();
        const int k = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < k; ++i)
            gens.push_back(random_signed_permutation(rng, v.dim(), coords));
        auto g = FiniteGroup::generate(v, gens);
        if (g.order() >= 2 && g.order() <= 16)
            return g;
    }
}

/// Adds a random weight, constant on orbits, on the group orbits of a few frames with the
/// same moment matrix as x. Frames are produced by isometries of the whole space.
inline void add_orbit_weights(std::mt19937& rng, const QuadSpace& v, const FiniteGroup& g,
                              const std::vector<MatF>& isometries, const Frame& x, WeightFunction& phi)
{
    std::vector<Frame> seeds{x};
    for (int i = 0; i < 2; ++i)
        seeds.push_back(apply_frame(v, isometries[rng() % isometries.size()], x));
    for (const auto& s : seeds) {
        if (sgn(phi(s)) != 0)
            continue;
        int w = static_cast<int>(rng() % 7) - 3;
        if (w == 0)
            w = 1;
        for (const auto& e : g.elements())
            phi.set(apply_frame(v, e, s), Rational(w));
    }
}

inline std::vector<int> iota(int a, int b)
{
    std::vector<int> out;
    for (int i = a; i < b; ++i)
        out.push_back(i);
    return out;
}

inline std::vector<MatF> all_signed_permutations_sample(std::mt19937& rng, int n, int count)
{
    std::vector<MatF> out;
    for (int i = 0; i < count; ++i)
        out.push_back(random_signed_permutation(rng, n, iota(0, n)));
    return out;
}

struct ProductFixture {
    std::shared_ptr<OrbitDatum> datum;
    SymMatF t1;
    WeightFunction phi1;
    SymMatF t2;
    WeightFunction phi2;
};

/// Space Q^N (N in 3..5) with gram 2I, a random signed permutation group of order <= 16,
/// genera n1 + n2 <= 3, weights constant on orbits.
inline ProductFixture random_product_fixture(std::mt19937& rng)
{
    const int dim = 3 + static_cast<int>(rng() % 3);
    auto v = diagonal_space(std::vector<int>(static_cast<std::size_t>(dim), 2));
    std::vector<MatF> gens;
    auto g = random_group(rng, v, iota(0, dim), gens);
    auto od = std::make_shared<OrbitDatum>(v, gens);
    const auto isos = all_signed_permutations_sample(rng, dim, 6);
    const int n1 = 1 + static_cast<int>(rng() % 2);
    const int n2 = n1 == 2 ? 1 : 1 + static_cast<int>(rng() % 2);
    auto make = [&](int n, SymMatF& t, WeightFunction& phi) {
        Frame x;
        for (int a = 0; a < n; ++a)
            x.push_back(random_vector(rng, dim, iota(0, dim), 2));
        t = v.moment(x);
        phi = WeightFunction(n);
        add_orbit_weights(rng, v, g, isos, x, phi);
    };
    ProductFixture f{od, SymMatF::zero(rationals(), n1), WeightFunction(n1), SymMatF::zero(rationals(), n2),
                     WeightFunction(n2)};
    make(n1, f.t1, f.phi1);
    make(n2, f.t2, f.phi2);
    return f;
}

struct PullbackFixture {
    std::shared_ptr<OrbitDatum> datum;
    std::vector<FVec> u0;
    SymMatF t;
    SplitWeight phi;
};

/// V = U0^perp + U0 with U0 spanned by the last k coordinates. The group is generated by
/// signed permutations of the U0^perp coordinates and optionally -1 on U0; the U0 factor of
/// every split part is symmetric under that sign.
inline PullbackFixture random_pullback_fixture(std::mt19937& rng)
{
    const int dim = 3 + static_cast<int>(rng() % 3);
    const int k = 1 + static_cast<int>(rng() % 2);
    const int m = dim - k;
    auto v = diagonal_space(std::vector<int>(static_cast<std::size_t>(dim), 2));
    std::vector<MatF> gens;
    auto g0 = random_group(rng, v, iota(0, m), gens);
    const bool flip = rng() % 2;
    if (flip) {
        std::vector<int> perm = iota(0, dim);
        std::vector<int> signs(static_cast<std::size_t>(dim), 1);
        for (int i = m; i < dim; ++i)
            signs[static_cast<std::size_t>(i)] = -1;
        gens.push_back(signed_permutation(perm, signs));
    }
    auto od = std::make_shared<OrbitDatum>(v, gens);
    if (od->group(0).order() > 16)
        return random_pullback_fixture(rng);
    std::vector<FVec> u0;
    for (int i = m; i < dim; ++i) {
        std::vector<int> e(static_cast<std::size_t>(dim), 0);
        e[static_cast<std::size_t>(i)] = 1;
        u0.push_back(qvec(e));
    }
    const int n = 1 + static_cast<int>(rng() % 2);
    std::vector<MatF> perp_isos;
    for (int i = 0; i < 6; ++i)
        perp_isos.push_back(random_signed_permutation(rng, dim, iota(0, m)));
    SplitWeight phi;
    SymMatF t = SymMatF::zero(rationals(), n);
    const int parts = 1 + static_cast<int>(rng() % 3);
    for (int r = 0; r < parts; ++r) {
        Frame x0, x1;
        for (int a = 0; a < n; ++a) {
            x0.push_back(random_vector(rng, dim, iota(m, dim), 1));
            x1.push_back(random_vector(rng, dim, iota(0, m), 1));
        }
        if (r == 0)
            t = v.moment(x0) + v.moment(x1);
        WeightFunction phi0(n), phi1(n);
        const Rational w0(1 + static_cast<int>(rng() % 3));
        phi0.set(x0, w0);
        Frame neg;
        for (const auto& x : x0) {
            FVec y;
            for (const auto& c : x)
                y.push_back(-c);
            neg.push_back(y);
        }
        if (flip)
            phi0.set(neg, w0);
        add_orbit_weights(rng, v, g0, perp_isos, x1, phi1);
        phi.parts.emplace_back(std::move(phi0), std::move(phi1));
    }
    return PullbackFixture{od, u0, t, phi};
}

/// Ambient group: a random nontrivial signed permutation group of order <= 16 on Q^N
/// (N in 2..4, gram 2I). G+ is either the whole group or its determinant one part, K is
/// generated by up to two random elements, and the weight is random on some K-orbits of
/// A x0.
inline std::shared_ptr<SurrogateDatum> random_surrogate_fixture(std::mt19937& rng)
{
    const int dim = 2 + static_cast<int>(rng() % 3);
    auto v = diagonal_space(std::vector<int>(static_cast<std::size_t>(dim), 2));
    std::vector<MatF> gens;
    const auto a = random_group(rng, v, iota(0, dim), gens);
    std::vector<MatF> plus = gens;
    if (rng() % 2) {
        plus.clear();
        for (const auto& g : a.elements())
            if (determinant(g) == rationals().one())
                plus.push_back(g);
    }
    std::vector<MatF> level;
    const int k = static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i)
        level.push_back(a.elements()[rng() % a.order()]);
    const int n = 1 + static_cast<int>(rng() % 2);
    Frame x0;
    for (int i = 0; i < n; ++i)
        x0.push_back(random_vector(rng, dim, iota(0, dim), 2));
    const auto kg = FiniteGroup::generate(v, level);
    WeightFunction phi(n);
    for (const auto& g : a.elements()) {
        const auto y = apply_frame(v, g, x0);
        if (sgn(phi(y)) != 0 || rng() % 3 == 0)
            continue;
        const Rational w(1 + static_cast<int>(rng() % 4));
        for (const auto& kk : kg.elements())
            phi.set(apply_frame(v, kk, y), w);
    }
    return std::make_shared<SurrogateDatum>(v, gens, plus, level, x0, phi);
}

}  // namespace fixtures
