#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ffskit/ffs.hpp"

#include <map>
#include <random>

using namespace ffskit;

namespace {

using QSeries = FormalSeries<RationalRing>;
using GSeries = FormalSeries<GaussianRing>;

const NumberField& Q() { static const NumberField f = NumberField::rationals(); return f; }
const NumberField& K() { static const NumberField f = NumberField::golden(); return f; }

SymMatF qmat(int n, std::vector<Rational> rows) { return SymMatF::rational(Q(), n, rows); }

QSeries poly(const ConeLattice& cl, const Rational& b, const std::map<int, Rational>& terms)
{
    QSeries s(cl, b);
    for (const auto& [e, c] : terms)
        s.set(qmat(1, {e}), c);
    return s;
}

template <class S>
S random_series(const ConeLattice& cl, const Rational& b, const std::vector<ConeKey>& pts, std::mt19937& rng, int terms)
{
    S s(cl, b);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    // Skew toward low heights so that products are nontrivial below the bound.
    std::uniform_int_distribution<std::size_t> low(0, std::min<std::size_t>(pts.size() - 1, 12));
    std::uniform_int_distribution<int> c(-5, 5);
    for (int i = 0; i < terms; ++i) {
        const auto& k = pts[i % 2 ? pick(rng) : low(rng)];
        if (!s.in_range(k))
            continue;
        if constexpr (std::is_same_v<S, QSeries>)
            s.set(k, frac(c(rng), 1 + (c(rng) + 5) % 3));
        else
            s.set(k, GaussianRational{Rational(c(rng)), Rational(c(rng))});
    }
    return s;
}

// Product through matrix subtraction and positivity tests, independent of key arithmetic.
QSeries naive_product(const QSeries& a, const QSeries& b)
{
    const auto& cl = a.cone();
    const Rational bound = std::min(a.bound(), b.bound());
    QSeries out(cl, bound);
    for (const auto& t : cl.enumerate(bound)) {
        const SymMatF tm = cl.matrix(t);
        Rational acc(0);
        for (const auto& [r, v] : a.coeffs()) {
            const SymMatF rest = tm - cl.matrix(r);
            if (is_totally_psd(rest))
                acc += v * b.coeff(rest);
        }
        out.set(t, acc);
    }
    return out;
}

// lambda straight from the definition by memoized recursion over matrices.
int naive_lambda(const ConeLattice& cl, const SymMatF& t, const std::vector<SymMatF>& pts, std::map<ConeKey, int>& memo)
{
    const auto key = cl.key(t);
    if (auto it = memo.find(key); it != memo.end())
        return it->second;
    int best = 1;
    for (const auto& x : pts) {
        if (x.is_zero() || x == t)
            continue;
        const SymMatF rest = t - x;
        if (!rest.is_zero() && is_totally_psd(rest) && height(rest) < height(t))
            best = std::max(best, 1 + naive_lambda(cl, rest, pts, memo));
    }
    memo[key] = best;
    return best;
}

}  // namespace

TEST_CASE("product examples")
{
    const ConeLattice q1(Q(), 1, 1);
    const auto a = poly(q1, Rational(10), {{1, 1}, {2, 1}});
    const auto b = poly(q1, Rational(10), {{1, 1}});
    CHECK(a * b == poly(q1, Rational(10), {{2, 1}, {3, 1}}));
    CHECK(unit_series<RationalRing>(q1, Rational(10)) * a == a);

    const auto c = poly(q1, Rational(3), {{0, 1}, {1, -1}});
    const auto d = poly(q1, Rational(3), {{0, 1}, {1, 1}, {2, 1}, {3, 1}});
    CHECK(c * d == poly(q1, Rational(3), {{0, 1}}));
    CHECK((c * d).bound() == 3);

    const auto e = poly(q1, Rational(5), {{2, 1}});
    CHECK((e * a).bound() == 5);
    CHECK(e * a == poly(q1, Rational(5), {{3, 1}, {4, 1}}));
}

TEST_CASE("zero coefficients are not stored")
{
    const ConeLattice q1(Q(), 1, 1);
    auto a = poly(q1, Rational(4), {{1, 2}});
    a.add_to(q1.key(qmat(1, {1})), Rational(-2));
    CHECK(a.is_zero());
    a.set(q1.key(qmat(1, {2})), Rational(0));
    CHECK(a.coeffs().empty());
    CHECK_THROWS_AS(a.set(qmat(1, {5}), Rational(1)), ValidationError);
    CHECK_THROWS_AS(a.set(qmat(1, {-1}), Rational(1)), ValidationError);
    CHECK_THROWS_AS(a * QSeries(ConeLattice(Q(), 2, 1), Rational(4)), ValidationError);
}

TEST_CASE("product agrees with the naive convolution")
{
    std::mt19937 rng(5);
    for (const auto& cl : {ConeLattice(Q(), 1, 1), ConeLattice(Q(), 2, 1), ConeLattice(Q(), 2, 2), ConeLattice(K(), 1, 1)}) {
        const Rational b(4);
        const auto pts = cl.enumerate(b);
        for (int i = 0; i < 10; ++i) {
            const auto x = random_series<QSeries>(cl, b, pts, rng, 8);
            const auto y = random_series<QSeries>(cl, b, pts, rng, 8);
            CHECK(x * y == naive_product(x, y));
        }
    }
}

TEST_CASE("ring axioms on random series")
{
    std::mt19937 rng(17);
    for (const auto& cl : {ConeLattice(Q(), 1, 1), ConeLattice(Q(), 2, 1), ConeLattice(K(), 1, 1)}) {
        const Rational b(8);
        const auto pts = cl.enumerate(b);
        for (int i = 0; i < 20; ++i) {
            const auto x = random_series<QSeries>(cl, b, pts, rng, 10);
            const auto y = random_series<QSeries>(cl, b, pts, rng, 10);
            const auto z = random_series<QSeries>(cl, b - 1, pts, rng, 10);
            CHECK(x * y == y * x);
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * (y + z) == x * y + x * z);
            CHECK(unit_series<RationalRing>(cl, b) * x == x);
            CHECK((x - x).is_zero());
        }
        for (int i = 0; i < 10; ++i) {
            const auto x = random_series<GSeries>(cl, b, pts, rng, 10);
            const auto y = random_series<GSeries>(cl, b, pts, rng, 10);
            const auto z = random_series<GSeries>(cl, b, pts, rng, 10);
            CHECK(x * y == y * x);
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * (y + z) == x * y + x * z);
        }
    }
}

TEST_CASE("support of a product")
{
    std::mt19937 rng(3);
    const ConeLattice cl(Q(), 2, 1);
    const Rational b(5);
    const auto pts = cl.enumerate(b);
    for (int i = 0; i < 20; ++i) {
        const auto x = random_series<QSeries>(cl, b, pts, rng, 6);
        const auto y = random_series<QSeries>(cl, b, pts, rng, 6);
        const auto xy = x * y;
        for (const auto& [k, v] : xy.coeffs()) {
            bool found = false;
            for (const auto& [ka, va] : x.coeffs())
                for (const auto& [kb, vb] : y.coeffs())
                    found = found || ka + kb == k;
            CHECK(found);
        }
    }
}

TEST_CASE("lambda examples")
{
    const ConeLattice q1(Q(), 1, 1);
    CHECK(lambda(q1, qmat(1, {1})) == 1);
    CHECK(lambda(q1, qmat(1, {5})) == 5);
    const ConeLattice q2(Q(), 2, 1);
    CHECK(lambda(q2, qmat(2, {1, Rational(1, 2), Rational(1, 2), 1})) == 1);
    CHECK(lambda(q2, qmat(2, {2, 0, 0, 2})) == 4);
    CHECK_THROWS_AS(lambda(q1, qmat(1, {0})), ValidationError);
    CHECK_THROWS_AS(lambda(q1, qmat(1, {Rational(1, 2)})), ValidationError);
    const ConeLattice q1nu2(Q(), 1, 2);
    CHECK(lambda(q1nu2, qmat(1, {Rational(5, 2)})) == 5);
}

TEST_CASE("lambda table matches the recursive definition")
{
    for (const auto& cl : {ConeLattice(Q(), 2, 1), ConeLattice(K(), 1, 1), ConeLattice(Q(), 2, 2)}) {
        const Rational b(4);
        const LambdaTable table(cl, b);
        std::vector<SymMatF> pts;
        for (const auto& k : table.points())
            pts.push_back(cl.matrix(k));
        std::map<ConeKey, int> memo;
        for (const auto& k : table.points())
            if (!k.is_zero())
                CHECK(table(k) == naive_lambda(cl, cl.matrix(k), pts, memo));
    }
}

TEST_CASE("lambda superadditivity and Lambda invariance")
{
    const ConeLattice q2(Q(), 2, 1);
    const LambdaTable table(q2, Rational(8));
    const auto& pts = table.points();
    for (const auto& x : pts)
        for (const auto& y : pts) {
            if (x.is_zero() || y.is_zero() || x.h + y.h > 8)
                continue;
            CHECK(table(x + y) >= table(x) + table(y));
        }
    MatF swap(2, 2, Q().zero());
    swap(0, 1) = Q().one();
    swap(1, 0) = Q().one();
    MatF shear = MatF::identity(2, Q().one());
    shear(0, 1) = Q().one();
    for (const auto& x : pts) {
        if (x.is_zero())
            continue;
        const auto orb = symmetrize_orbit(q2, x, {swap, shear}, Rational(8));
        for (const auto& y : orb.orbit)
            CHECK(table(y) == table(x));
    }
}

TEST_CASE("ideal membership")
{
    const ConeLattice q1(Q(), 1, 1);
    CHECK_FALSE(ideal_membership(poly(q1, Rational(6), {{0, 1}}), 1));
    const auto f = poly(q1, Rational(6), {{3, 1}, {4, 1}});
    CHECK(ideal_membership(f, 3));
    CHECK_FALSE(ideal_membership(f, 4));
    CHECK(ideal_membership(f, 0));
    const QSeries zero(q1, Rational(6));
    for (int k = 0; k <= 6; ++k)
        CHECK(ideal_membership(zero, k));
    CHECK_THROWS_AS(ideal_membership(f, 7), InconclusiveTruncation);
}

TEST_CASE("ideal filtration on random members")
{
    std::mt19937 rng(23);
    const ConeLattice q2(Q(), 2, 1);
    const Rational b(8);
    const LambdaTable table(q2, b);
    std::uniform_int_distribution<int> kd(0, 3);
    for (int trial = 0; trial < 30; ++trial) {
        const int k1 = kd(rng), k2 = kd(rng);
        std::vector<ConeKey> ok1, ok2;
        for (const auto& p : table.points()) {
            if (p.is_zero())
                continue;
            if (table(p) >= k1)
                ok1.push_back(p);
            if (table(p) >= k2)
                ok2.push_back(p);
        }
        const auto x = random_series<QSeries>(q2, b, ok1, rng, 6);
        const auto y = random_series<QSeries>(q2, b, ok2, rng, 6);
        REQUIRE(ideal_membership(x, k1, &table));
        REQUIRE(ideal_membership(y, k2, &table));
        CHECK(ideal_membership(x * y, k1 + k2, &table));
        if (k1 > 0)
            CHECK(ideal_membership(x, k1 - 1, &table));
    }
}

TEST_CASE("symmetrization")
{
    const ConeLattice q2(Q(), 2, 1);
    MatF swap(2, 2, Q().zero());
    swap(0, 1) = Q().one();
    swap(1, 0) = Q().one();
    const Rational b(6);
    CHECK(is_symmetric(unit_series<RationalRing>(q2, b), {swap}));

    QSeries one(q2, b);
    one.set(qmat(2, {1, 0, 0, 2}), Rational(1));
    CHECK_FALSE(is_symmetric(one, {swap}));
    QSeries both = one;
    both.set(qmat(2, {2, 0, 0, 1}), Rational(1));
    CHECK(is_symmetric(both, {swap}));
    const auto sym = symmetrize(one, {swap});
    CHECK(sym.complete);
    CHECK(sym.series == both);

    std::mt19937 rng(8);
    const auto pts = q2.enumerate(b);
    for (int i = 0; i < 10; ++i) {
        const auto x = symmetrize(random_series<QSeries>(q2, b, pts, rng, 5), {swap}).series;
        const auto y = symmetrize(random_series<QSeries>(q2, b, pts, rng, 5), {swap}).series;
        CHECK(is_symmetric(x, {swap}));
        CHECK(is_symmetric(x * y, {swap}));
    }

    const ConeLattice q2nu3(Q(), 2, 3);
    CHECK_THROWS_AS(symmetrize(QSeries(q2nu3, b), {swap}), ValidationError);
}

TEST_CASE("outer product and diagonal restriction")
{
    const ConeLattice q1(Q(), 1, 1);
    const ConeLattice q2(Q(), 2, 1);
    const auto a = poly(q1, Rational(4), {{0, 1}, {1, 2}});
    const auto op = outer_product(a, a);
    CHECK(op.coeffs.size() == 4);
    CHECK(op.coeffs.at({q1.key(qmat(1, {1})), q1.key(qmat(1, {1}))}) == 4);

    QSeries c(q2, Rational(4));
    c.set(qmat(2, {1, Rational(1, 2), Rational(1, 2), 1}), Rational(3));
    c.set(qmat(2, {1, Rational(-1, 2), Rational(-1, 2), 1}), Rational(5));
    c.set(qmat(2, {1, 0, 0, 0}), Rational(7));
    const auto dr = diagonal_restriction(c, 1);
    CHECK(dr.restricted(Rational(1), Rational(1), Rational(1)).coeffs.size() == 1);
    CHECK(op.restricted(Rational(1), Rational(1), Rational(2)).coeffs.size() == 4);
    CHECK(op.restricted(Rational(1), Rational(0), Rational(2)).coeffs.size() == 2);
    CHECK(dr.coeffs.size() == 2);
    CHECK(dr.coeffs.at({q1.key(qmat(1, {1})), q1.key(qmat(1, {1}))}) == 8);
    CHECK(dr.coeffs.at({q1.key(qmat(1, {1})), q1.key(qmat(1, {0}))}) == 7);

    const auto [t1, t2] = diagonal_blocks(qmat(3, {1, 2, 3, 2, 4, 5, 3, 5, 6}), 1);
    CHECK(t1 == qmat(1, {1}));
    CHECK(t2 == qmat(2, {4, 5, 5, 6}));
}

TEST_CASE("growth models")
{
    const ConeLattice q1(Q(), 1, 1);
    auto a = poly(q1, Rational(4), {{0, 1}, {1, -2}});
    auto b = poly(q1, Rational(4), {{0, 1}});
    b.set_growth(GrowthModel{Rational(3), Rational(1, 2)});
    const auto p = a * b;
    REQUIRE(p.growth());
    CHECK(p.growth()->c == 9);
    CHECK(p.growth()->p == Rational(1, 2));
    const auto bb = b * b;
    CHECK(bb.growth()->c == 9);
    CHECK(bb.growth()->p == 1);
    CHECK_FALSE((a * a).growth());
}
