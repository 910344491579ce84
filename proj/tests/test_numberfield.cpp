#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ffskit/numberfield.hpp"

#include <random>

using namespace ffskit;

namespace {

Rational q(const char* s) { return parse_rational(s); }

FieldElem golden_elem(const char* a, const char* b)
{
    return NumberField::golden().from_coords({q(a), q(b)});
}

}  // namespace

TEST_CASE("parse_rational accepts fractions, integers and decimals")
{
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-7") == -7);
    CHECK(parse_rational("-0.25") == Rational(-1, 4));
    CHECK(parse_rational(" 12 ") == 12);
    CHECK_THROWS_AS(parse_rational("1/0"), SchemaError);
    CHECK_THROWS_AS(parse_rational("abc"), SchemaError);
    CHECK_THROWS_AS(parse_rational(""), SchemaError);
}

TEST_CASE("to_long_double is accurate")
{
    CHECK(to_long_double(Rational(1, 3)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(to_long_double(Rational(-22, 7)) == doctest::Approx(-22.0 / 7.0).epsilon(1e-15));
    CHECK(to_long_double(Rational(Integer("123456789012345678901234567890"), 1)) ==
          doctest::Approx(1.2345678901234568e29).epsilon(1e-15));
}

TEST_CASE("root isolation by Sturm sequences")
{
    const Polynomial p({q("-2"), q("0"), q("1")});
    const auto roots = isolate_real_roots(p);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].hi < roots[1].lo);
    CHECK(SturmSequence(p).count_roots(roots[0].lo, roots[0].hi) == 1);

    const Polynomial cubic({q("1"), q("-3"), q("0"), q("1")});  // x^3 - 3x + 1, totally real
    CHECK(isolate_real_roots(cubic).size() == 3);
}

TEST_CASE("rationals as a degree one field")
{
    const auto Q = NumberField::rationals();
    CHECK(Q.degree() == 1);
    const auto three = Q.from_rational(3);
    const auto iv = embed(three, 0, Rational(1));
    CHECK(iv.contains(Rational(3)));
    CHECK(iv.width() < 1);
    CHECK(embed(Q.zero(), 0, Rational(1, 100)) == Interval(Rational(0)));
    CHECK(trace(Q.one()) == 1);
    CHECK(norm(Q.from_rational(Rational(-2, 3))) == Rational(-2, 3));
    const auto dual = Q.inverse_different();
    REQUIRE(dual.size() == 1);
    CHECK(dual[0] == Q.one());
}

TEST_CASE("golden field embeddings")
{
    const auto K = NumberField::golden();
    const auto phi = K.generator();
    // Embeddings follow the increasing order of the roots of x^2 - x - 1.
    const auto lo = embed(phi, 0, Rational(1, 1000000));
    const auto hi = embed(phi, 1, Rational(1, 1000000));
    CHECK(to_long_double(hi.midpoint()) == doctest::Approx(1.6180339887).epsilon(1e-6));
    CHECK(to_long_double(lo.midpoint()) == doctest::Approx(-0.6180339887).epsilon(1e-6));
    CHECK(embed_approx(phi, 1) == doctest::Approx(1.618033988749895L));

    // Smaller eps nests inside the coarser interval.
    const auto coarse = embed(phi, 1, Rational(1, 10));
    const auto fine = embed(phi, 1, Rational(1, 1000));
    CHECK(coarse.contains(fine));
}

TEST_CASE("total positivity")
{
    const auto K = NumberField::golden();
    CHECK(is_totally_positive(K.one()));
    CHECK_FALSE(is_totally_positive(K.generator()));
    CHECK(is_totally_positive(golden_elem("2", "1")));
    CHECK(is_totally_nonnegative(K.zero()));
    CHECK_FALSE(is_totally_positive(K.zero()));
    CHECK(embedding_sign(golden_elem("-1", "2"), 0) < 0);  // 2 phi - 1 = sqrt 5
    CHECK(embedding_sign(golden_elem("-1", "2"), 1) > 0);
    CHECK(embedding_sign(K.generator(), 0) < 0);
}

TEST_CASE("trace and norm")
{
    const auto K = NumberField::golden();
    CHECK(trace(K.one()) == 2);
    CHECK(norm(K.one()) == 1);
    CHECK(trace(K.generator()) == 1);
    CHECK(norm(K.generator()) == -1);

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dist(-9, 9);
    for (int i = 0; i < 50; ++i) {
        const auto a = K.from_coords({frac(dist(rng), 1 + (dist(rng) & 3)), Rational(dist(rng))});
        const auto b = K.from_coords({Rational(dist(rng)), frac(dist(rng), 1 + (dist(rng) & 7))});
        CHECK(trace(a + b) == trace(a) + trace(b));
        CHECK(norm(a * b) == norm(a) * norm(b));
        if (!a.is_zero())
            CHECK(a * a.inverse() == K.one());
    }
}

TEST_CASE("inverse different of Q(sqrt 5)")
{
    const auto K = NumberField::golden();
    CHECK(K.discriminant() == 5);
    const auto dual = K.inverse_different();
    REQUIRE(dual.size() == 2);
    for (const auto& x : dual)
        for (int i = 0; i < 2; ++i)
            CHECK(trace(x * K.basis_element(i)).get_den() == 1);

    // (2 phi - 1)/5 = 1/sqrt 5 lies in the span with integer coordinates.
    const auto g = golden_elem("-1/5", "2/5");
    CHECK(trace(g * K.one()).get_den() == 1);
    CHECK(trace(g * K.generator()).get_den() == 1);
    // Its coordinates in the dual basis are integers: c_i = tr(g b_i).
    // Conversely every dual basis element is an O_F multiple of g.
    for (const auto& x : dual)
        CHECK((x / g).is_integral());
}

TEST_CASE("field validation")
{
    CHECK_THROWS_AS(NumberField::create({Integer(1), Integer(0), Integer(1)}, {{1, 0}, {0, 1}}), ValidationError);
    CHECK_THROWS_AS(NumberField::create({Integer(-1), Integer(-1), Integer(2)}, {{1, 0}, {0, 1}}), ValidationError);
    CHECK_THROWS_AS(NumberField::create({Integer(-4), Integer(0), Integer(1)}, {{1, 0}, {0, 1}}), ValidationError);
    // Z[sqrt 5] is an order but the half-integral basis of O_F is accepted too.
    const auto k1 = NumberField::create({Integer(-5), Integer(0), Integer(1)}, {{1, 0}, {Rational(1, 2), Rational(1, 2)}});
    CHECK(k1.discriminant() == 5);
    CHECK_THROWS_AS(NumberField::create({Integer(-5), Integer(0), Integer(1)}, {{1, 0}, {Rational(1, 3), Rational(1, 3)}}),
                    ValidationError);
    CHECK_THROWS_AS(NumberField::create({Integer(-1), Integer(-1), Integer(1)}, {{1, 0}, {0, 1}},
                                        {Interval(Rational(1), Rational(2)), Interval(Rational(1, 2), Rational(3, 2))}),
                    ValidationError);
    const auto cubic = NumberField::create({Integer(1), Integer(-3), Integer(0), Integer(1)}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(cubic.discriminant() == 81);
}

TEST_CASE("embedding of products is contained in product of embeddings")
{
    const auto K = NumberField::golden();
    const auto a = golden_elem("3/2", "-1");
    const auto b = golden_elem("-2", "5/3");
    const Rational eps(1, 1 << 20);
    for (int j = 0; j < 2; ++j) {
        const auto ia = embed(a, j, eps);
        const auto ib = embed(b, j, eps);
        const auto iab = embed(a * b, j, eps);
        const auto prod = ia * ib;
        CHECK((prod.lo <= iab.hi && iab.lo <= prod.hi));
    }
}
