#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ffskit/lattice_enum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace ffskit;

namespace {

// Every point of s0/e + Z^N in the box |x_i| <= r, checked exactly.
std::vector<IntVec> box_points(const IntGram& g, const IntVec& s0, std::int64_t e, const Rational& bound, std::int64_t r)
{
    const std::size_t n = g.size();
    std::vector<IntVec> out;
    IntVec w(n, -r);
    for (;;) {
        IntVec s(n);
        for (std::size_t i = 0; i < n; ++i)
            s[i] = s0[i] + e * w[i];
        const __int128 v = bilinear(g, s, s);
        if (Rational(static_cast<long>(v)) <= bound * e * e)
            out.push_back(s);
        std::size_t k = 0;
        while (k < n && w[k] == r)
            w[k++] = -r;
        if (k == n)
            break;
        ++w[k];
    }
    std::sort(out.begin(), out.end());
    return out;
}

IntGram random_gram(std::mt19937& rng, std::size_t n)
{
    // B^T B + I for a small random B is positive definite.
    std::uniform_int_distribution<int> d(-2, 2);
    std::vector<IntVec> b(n, IntVec(n));
    for (auto& row : b)
        for (auto& x : row)
            x = d(rng);
    IntGram g(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k)
                g[i][j] += b[k][i] * b[k][j];
            if (i == j)
                g[i][j] += 1;
        }
    return g;
}

}  // namespace

TEST_CASE("sum of two squares by enumeration")
{
    const IntGram g{{1, 0}, {0, 1}};
    const auto pts = enumerate_short(g, Rational(5));
    std::size_t on_five = 0, on_one = 0;
    for (const auto& p : pts) {
        const auto v = bilinear(g, p, p);
        on_five += v == 5;
        on_one += v == 1;
    }
    CHECK(on_one == 4);
    CHECK(on_five == 8);
}

TEST_CASE("LLL returns a unimodular reduced basis")
{
    const IntGram g{{1, 100}, {100, 10001}};
    const auto u = lll_reduce(g);
    const std::int64_t det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    CHECK((det == 1 || det == -1));
    // The reduced form is the identity up to signs.
    IntVec c0{u[0][0], u[1][0]};
    IntVec c1{u[0][1], u[1][1]};
    CHECK(bilinear(g, c0, c0) == 1);
    CHECK(bilinear(g, c1, c1) == 1);
}

TEST_CASE("enumeration agrees with box brute force on random forms")
{
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> pick(1, 3);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
        const auto g = random_gram(rng, n);
        const std::int64_t e = pick(rng);
        IntVec s0(n);
        for (auto& x : s0)
            x = std::uniform_int_distribution<int>(0, static_cast<int>(e) - 1)(rng);
        const Rational bound(pick(rng) * 3);
        // Coordinates of points in the ellipsoid are bounded by sqrt(bound * (G^-1)_ii) <= sqrt(bound).
        const auto expected = box_points(g, s0, e, bound, 6);
        CHECK(enumerate_shifted(g, s0, e, bound) == expected);
        CHECK(enumerate_shifted(g, s0, e, bound, 3) == expected);
    }
}

TEST_CASE("negative bound yields nothing and zero bound yields the origin")
{
    const IntGram g{{2}};
    CHECK(enumerate_short(g, Rational(-1)).empty());
    CHECK(enumerate_short(g, Rational(0)) == std::vector<IntVec>{IntVec{0}});
    CHECK(enumerate_shifted(g, IntVec{1}, 2, Rational(1, 2)) == std::vector<IntVec>{IntVec{-1}, IntVec{1}});
}

TEST_CASE("Smith normal form")
{
    const std::vector<std::vector<Integer>> a{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
    const auto sf = smith_normal_form(a);
    CHECK(sf.diagonal == std::vector<Integer>{2, 6, 12});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            Integer acc = 0;
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l)
                    acc += sf.u[i][k] * a[k][l] * sf.v[l][j];
            CHECK(acc == (i == j ? sf.diagonal[i] : Integer(0)));
        }
    const auto two = smith_normal_form({{2, 0}, {0, 2}});
    CHECK(two.diagonal == std::vector<Integer>{2, 2});
}

TEST_CASE("Sylvester criterion")
{
    CHECK(is_positive_definite({{Rational(2), Rational(1)}, {Rational(1), Rational(2)}}));
    CHECK_FALSE(is_positive_definite({{Rational(1), Rational(2)}, {Rational(2), Rational(1)}}));
    CHECK_FALSE(is_positive_definite({{Rational(0)}}));
}
