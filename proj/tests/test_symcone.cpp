#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ffskit/symcone.hpp"

#include <algorithm>
#include <random>

using namespace ffskit;

namespace {

const NumberField& Q() { static const NumberField f = NumberField::rationals(); return f; }
const NumberField& K() { static const NumberField f = NumberField::golden(); return f; }

SymMatF qmat(int n, std::vector<Rational> rows) { return SymMatF::rational(Q(), n, rows); }

// Naive nested loops over the half-integer box for F = Q, n <= 2.
std::vector<ConeKey> brute_force_q(const ConeLattice& cl, const Rational& b)
{
    std::vector<ConeKey> out;
    const int nu = cl.nu();
    const auto top = floor(b * nu).get_si();
    if (cl.n() == 1) {
        for (long a = 0; a <= top; ++a)
            out.push_back(cl.key(qmat(1, {frac(a, nu)})));
    } else {
        for (long a = 0; a <= top; ++a)
            for (long c = 0; a + c <= top; ++c)
                for (long m = -2 * top; m <= 2 * top; ++m) {
                    const Rational x = frac(a, nu), z = frac(c, nu), y = frac(m, 2 * nu);
                    if (x * z - y * y >= 0)
                        out.push_back(cl.key(qmat(2, {x, y, y, z})));
                }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("positivity of symmetric matrices")
{
    CHECK(is_totally_psd(SymMatF::zero(Q(), 2)));
    CHECK_FALSE(is_totally_pd(SymMatF::zero(Q(), 2)));
    CHECK(is_totally_pd(SymMatF::identity(Q(), 3)));
    CHECK_FALSE(is_totally_psd(SymMatF(MatF(1, 1, K().generator()))));
    // A PSD test through leading minors alone would accept diag(0, -1).
    CHECK_FALSE(is_totally_psd(qmat(2, {0, 0, 0, -1})));
    CHECK(is_totally_psd(qmat(2, {1, 1, 1, 1})));
    CHECK_FALSE(is_totally_pd(qmat(2, {1, 1, 1, 1})));
    CHECK_THROWS_AS(qmat(2, {1, 2, 3, 1}), ValidationError);
}

TEST_CASE("dual lattice membership")
{
    const ConeLattice q1(Q(), 1, 1);
    CHECK(q1.in_dual_lattice(qmat(1, {5})));
    CHECK_FALSE(q1.in_dual_lattice(qmat(1, {Rational(1, 2)})));
    const ConeLattice q2(Q(), 2, 1);
    CHECK(q2.in_dual_lattice(qmat(2, {1, Rational(1, 2), Rational(1, 2), 3})));
    CHECK_FALSE(q2.in_dual_lattice(qmat(2, {1, Rational(1, 3), Rational(1, 3), 3})));
    const ConeLattice k1(K(), 1, 1);
    CHECK(k1.in_dual_lattice(SymMatF(MatF(1, 1, K().from_coords({frac(-1, 5), frac(2, 5)})))));
    CHECK_FALSE(k1.in_dual_lattice(SymMatF(MatF(1, 1, K().from_coords({frac(1, 5), frac(0, 1)})))));
    const ConeLattice q1nu3(Q(), 1, 3);
    CHECK(q1nu3.in_dual_lattice(qmat(1, {Rational(1, 3)})));
}

TEST_CASE("height")
{
    CHECK(height(SymMatF::zero(Q(), 2)) == 0);
    CHECK(height(SymMatF::identity(Q(), 2)) == 2);
    CHECK(height(SymMatF(MatF(1, 1, K().from_coords({2, 1})))) == 5);
    CHECK_THROWS_AS(height(qmat(1, {-1})), ValidationError);
}

TEST_CASE("cone enumeration examples")
{
    const ConeLattice q1(Q(), 1, 1);
    const auto pts = q1.enumerate(Rational(3));
    REQUIRE(pts.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(q1.matrix(pts[static_cast<std::size_t>(i)]) == qmat(1, {i}));
    CHECK(q1.enumerate(Rational(0)).size() == 1);
    CHECK(ConeLattice(K(), 1, 1).enumerate(Rational(0)).size() == 1);
    CHECK(ConeLattice(Q(), 2, 1).enumerate(Rational(0)).size() == 1);

    const ConeLattice q2(Q(), 2, 1);
    const auto two = q2.enumerate(Rational(2));
    for (const auto& b : {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)})
        CHECK(std::binary_search(two.begin(), two.end(), q2.key(qmat(2, {1, b, b, 1}))));
    for (const auto& b : {Rational(-3, 2), Rational(3, 2)})
        CHECK_FALSE(std::binary_search(two.begin(), two.end(), q2.key(qmat(2, {1, b, b, 1}))));
}

TEST_CASE("cone enumeration matches brute force over Q")
{
    for (int n = 1; n <= 2; ++n)
        for (int nu = 1; nu <= 3; ++nu) {
            const ConeLattice cl(Q(), n, nu);
            for (int b = 0; b <= 6; ++b)
                CHECK(cl.enumerate(Rational(b)) == brute_force_q(cl, Rational(b)));
        }
}

TEST_CASE("cone enumeration over Q(sqrt 5) matches a coordinate box")
{
    const ConeLattice cl(K(), 1, 1);
    const auto dual = K().inverse_different();
    const Rational b(8);
    std::vector<ConeKey> expected;
    for (int c0 = -40; c0 <= 40; ++c0)
        for (int c1 = -40; c1 <= 40; ++c1) {
            const FieldElem x = dual[0] * Rational(c0) + dual[1] * Rational(c1);
            if (is_totally_nonnegative(x) && trace(x) <= b)
                expected.push_back(cl.key(SymMatF(MatF(1, 1, x))));
        }
    std::sort(expected.begin(), expected.end());
    const auto got = cl.enumerate(b);
    CHECK(got == expected);
    for (const auto& k : got) {
        const auto m = cl.matrix(k);
        CHECK(cl.contains(m));
        CHECK(height(m) == cl.height(k));
    }
}

TEST_CASE("enumeration is prefix stable and ordered")
{
    const ConeLattice cl(Q(), 2, 2);
    const auto small = cl.enumerate(Rational(3));
    const auto big = cl.enumerate(Rational(5));
    REQUIRE(small.size() <= big.size());
    CHECK(std::equal(small.begin(), small.end(), big.begin()));
    CHECK(std::is_sorted(big.begin(), big.end()));
    CHECK(cl.enumerate(Rational(5), 4) == big);
}

TEST_CASE("genus three enumeration uses the full minor test")
{
    const ConeLattice cl(Q(), 3, 1);
    const auto pts = cl.enumerate(Rational(3));
    for (const auto& k : pts)
        CHECK(is_totally_psd(cl.matrix(k)));
    // [[1,1,1],[1,1,-1],[1,-1,1]] has PSD 2x2 minors but determinant -4.
    const auto bad = qmat(3, {1, 1, 1, 1, 1, -1, 1, -1, 1});
    CHECK_FALSE(std::binary_search(pts.begin(), pts.end(), cl.key(bad)));
    CHECK(std::binary_search(pts.begin(), pts.end(), cl.key(qmat(3, {1, 1, 1, 1, 1, 1, 1, 1, 1}))));
}

TEST_CASE("cone closure under sums and scaling")
{
    const ConeLattice cl(Q(), 2, 1);
    const auto pts = cl.enumerate(Rational(4));
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    for (int i = 0; i < 100; ++i) {
        const auto a = cl.matrix(pts[pick(rng)]);
        const auto b = cl.matrix(pts[pick(rng)]);
        CHECK(cl.contains(a + b));
        CHECK(is_totally_psd(Rational(3, 7) * a));
    }
}

TEST_CASE("minimal height")
{
    CHECK(ConeLattice(Q(), 1, 1).minimal_height() == 1);
    CHECK(ConeLattice(Q(), 2, 3).minimal_height() == Rational(1, 3));
    // The smallest totally positive element of delta^{-1} has trace 1, e.g. phi^2 / sqrt 5.
    CHECK(ConeLattice(K(), 1, 1).minimal_height() == 1);
}

TEST_CASE("orbits under Lambda generators")
{
    const ConeLattice q2(Q(), 2, 1);
    const auto t = q2.key(qmat(2, {1, 0, 0, 2}));
    const auto trivial = symmetrize_orbit(q2, t, {MatF::identity(2, Q().one())}, Rational(10));
    CHECK(trivial.orbit == std::vector<ConeKey>{t});
    CHECK(trivial.complete);

    MatF swap(2, 2, Q().zero());
    swap(0, 1) = Q().one();
    swap(1, 0) = Q().one();
    const auto orb = symmetrize_orbit(q2, t, {swap}, Rational(10));
    REQUIRE(orb.orbit.size() == 2);
    CHECK(orb.complete);
    CHECK(orb.representative == t);
    CHECK(std::binary_search(orb.orbit.begin(), orb.orbit.end(), q2.key(qmat(2, {2, 0, 0, 1}))));

    const ConeLattice k1(K(), 1, 1);
    const auto one = k1.key(SymMatF::identity(K(), 1));
    const auto units = symmetrize_orbit(k1, one, {MatF(1, 1, K().generator())}, Rational(10));
    CHECK(std::binary_search(units.orbit.begin(), units.orbit.end(), k1.key(SymMatF(MatF(1, 1, K().from_coords({1, 1}))))));
    CHECK_FALSE(units.complete);
    for (const auto& k : units.orbit)
        CHECK(k1.contains(k1.matrix(k)));

    const ConeLattice q2nu3(Q(), 2, 3);
    CHECK_THROWS_AS(symmetrize_orbit(q2nu3, q2nu3.key(qmat(2, {1, 0, 0, 2})), {swap}, Rational(10)), ValidationError);
    MatF notunit(1, 1, K().from_coords({2, 0}));
    CHECK_THROWS_AS(symmetrize_orbit(k1, one, {notunit}, Rational(10)), ValidationError);
}

TEST_CASE("standard kernel")
{
    const ConeLattice q1(Q(), 1, 1);
    CHECK(standard_kernel_contains(q1, {{{Rational(2)}}}));
    CHECK_FALSE(standard_kernel_contains(q1, {{{Rational(1, 2)}}}));
    CHECK(standard_kernel_contains(q1, {{{Rational(1)}}}));
    CHECK_THROWS_AS(standard_kernel_contains(q1, {{{Rational(-1)}}}), ValidationError);
    for (int t = 1; t <= 4; ++t)
        CHECK(standard_kernel_contains(q1, {{{Rational(2 * t)}}}));

    const ConeLattice q2(Q(), 2, 1);
    CHECK(standard_kernel_contains(q2, {{{Rational(2), Rational(0)}, {Rational(0), Rational(2)}}}));
    // Singular components are rejected.
    CHECK_THROWS_AS(standard_kernel_contains(q2, {{{Rational(1), Rational(-1)}, {Rational(-1), Rational(1)}}}), ValidationError);

    const ConeLattice k1(K(), 1, 1);
    CHECK(standard_kernel_contains(k1, {{{Rational(1)}}, {{Rational(1)}}}));
    CHECK_FALSE(standard_kernel_contains(k1, {{{Rational(1, 3)}}, {{Rational(1, 3)}}}));
    CHECK(standard_kernel_contains(k1, {{{Rational(3)}}, {{Rational(2)}}}));
}
