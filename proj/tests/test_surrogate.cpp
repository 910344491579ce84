#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "orbit_fixtures.hpp"

#include <random>

using namespace ffskit;
using namespace fixtures;

namespace {

std::size_t total_orbits(const NaturalWeightedReport& r)
{
    std::size_t t = 0;
    for (const auto& c : r.cells)
        t += c.orbits;
    return t;
}

std::size_t total_double_cosets(const NaturalWeightedReport& r)
{
    std::size_t t = 0;
    for (const auto& c : r.cells)
        t += c.double_cosets;
    return t;
}

Symbol line(const OrbitDatum& od, std::vector<int> v, int j = 0)
{
    return Symbol{j, od.canonical(j, span(od.space(), {qvec(v)})), 0};
}

}  // namespace

TEST_CASE("trivial ambient group")
{
    const auto v = diagonal_space({2, 2});
    WeightFunction phi(1);
    phi.set({qvec({1, 1})}, Rational(3));
    const SurrogateDatum s(v, {}, {}, {}, {qvec({1, 1})}, phi);
    const auto r = check_natural_vs_weighted(s);
    CHECK(r.equal());
    CHECK(r.cells.size() == 1);
    CHECK(r.weighted == CycleClass::symbol(line(*r.datum, {1, 1}), Rational(3)));
}

TEST_CASE("sign flip of order two")
{
    const auto v = diagonal_space({2, 2});
    const auto flip = signed_permutation({0, 1}, {-1, 1});
    WeightFunction phi(1);
    phi.set({qvec({1, 0})}, Rational(1));
    phi.set({qvec({-1, 0})}, Rational(1));
    const SurrogateDatum s(v, {flip}, {flip}, {}, {qvec({1, 0})}, phi);
    const auto r = check_natural_vs_weighted(s);
    CHECK(r.bijective());
    CHECK(total_orbits(r) == 2);
    CHECK(total_double_cosets(r) == 2);
    CHECK(r.equal());
    CHECK(r.weighted == CycleClass::symbol(line(*r.datum, {1, 0}), Rational(2)));

    const SurrogateDatum zero(v, {flip}, {flip}, {}, {qvec({1, 0})}, WeightFunction(1));
    const auto rz = check_natural_vs_weighted(zero);
    CHECK(rz.equal());
    CHECK(rz.weighted.is_zero());
    CHECK(rz.natural.is_zero());
}

TEST_CASE("dihedral group with rotations as G+")
{
    const auto v = diagonal_space({2, 2});
    const auto rot = signed_permutation({1, 0}, {1, -1});
    const auto refl = signed_permutation({0, 1}, {1, -1});
    WeightFunction phi(1);
    for (const auto& x : {qvec({1, 0}), qvec({-1, 0}), qvec({0, 1}), qvec({0, -1})})
        phi.set({x}, Rational(1));
    const SurrogateDatum s(v, {rot, refl}, {rot}, {refl}, {qvec({1, 0})}, phi);
    CHECK(s.ambient().order() == 8);
    CHECK(s.stabilizer().order() == 2);
    const auto r = check_natural_vs_weighted(s);
    CHECK(r.component_reps.size() == 1);
    CHECK(r.datum->group(0).order() == 1);
    CHECK(r.cells.size() == 3);
    CHECK(total_orbits(r) == 4);
    CHECK(total_double_cosets(r) == 4);
    CHECK(r.equal());
    const auto expected = CycleClass::symbol(line(*r.datum, {1, 0}), Rational(2)) +
                          CycleClass::symbol(line(*r.datum, {0, 1}), Rational(2));
    CHECK(r.weighted == expected);
}

TEST_CASE("surrogate validation")
{
    const auto v = diagonal_space({2, 2});
    const auto rot = signed_permutation({1, 0}, {1, -1});
    const auto refl = signed_permutation({0, 1}, {1, -1});
    WeightFunction phi(1);
    phi.set({qvec({1, 0})}, Rational(1));
    CHECK_THROWS_AS(SurrogateDatum(v, {rot, refl}, {rot}, {refl}, {qvec({1, 0})}, phi, std::vector<MatF>{rot}),
                    ValidationError);
    CHECK_NOTHROW(SurrogateDatum(v, {rot, refl}, {rot}, {refl}, {qvec({1, 0})}, phi, std::vector<MatF>{refl}));
    CHECK_THROWS_AS(SurrogateDatum(v, {rot, refl}, {refl}, {}, {qvec({1, 0})}, phi), ValidationError);
    CHECK_THROWS_AS(SurrogateDatum(v, {refl}, {rot}, {}, {qvec({1, 0})}, phi), ValidationError);
    WeightFunction off(1);
    off.set({qvec({1, 1})}, Rational(1));
    CHECK_THROWS_AS(SurrogateDatum(v, {rot, refl}, {rot}, {}, {qvec({1, 0})}, off), ValidationError);
    WeightFunction uneven(1);
    uneven.set({qvec({0, 1})}, Rational(1));
    CHECK_THROWS_AS(SurrogateDatum(v, {rot, refl}, {rot}, {refl}, {qvec({1, 0})}, uneven), ValidationError);
}

TEST_CASE("random surrogate fixtures")
{
    std::mt19937 rng(31);
    int valid = 0;
    int nontrivial = 0;
    int attempts = 0;
    while (valid < 15 && attempts < 400) {
        ++attempts;
        auto s = random_surrogate_fixture(rng);
        try {
            const auto r = check_natural_vs_weighted(*s);
            const bool ok = r.equal();
            CHECK(ok);
            ++valid;
            if (total_double_cosets(r) > 1)
                ++nontrivial;
        } catch (const NeatnessViolation&) {
        }
    }
    CHECK(valid == 15);
    CHECK(nontrivial > 5);
}
