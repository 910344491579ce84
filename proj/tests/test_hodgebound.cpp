#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ffskit/hodgebound.hpp"
#include "ffskit/rational.hpp"

using namespace ffskit;

TEST_CASE("r_plus_minus examples")
{
    CHECK(r_plus_minus({9, 2, 0}) == std::pair{2, 2});
    CHECK(r_plus_minus({5, 1, 1, 1, 0, 0}) == std::pair{1, 4});
    const auto p = r_plus_minus({5, 1, 1, 1, 1, 0});
    CHECK(p == std::pair{0, 4});
    CHECK(p.first + p.second == 5 - 1);
    CHECK(r_plus_minus({5, 1, 1, -1, 0, 1}) == std::pair{4, 0});
}

TEST_CASE("invalid data are rejected")
{
    CHECK_THROWS_AS(r_plus_minus({4, 3, 0}), ValidationError);
    CHECK_THROWS_AS(r_plus_minus({4, 1, 1}), ValidationError);
    CHECK_THROWS_AS(r_plus_minus({9, 2, 0, 1, 1, 0}), ValidationError);
    CHECK_THROWS_AS(r_plus_minus({9, 2, 1, 1, 2, 1}), ValidationError);
    CHECK_THROWS_AS(r_plus_minus({9, 2, 1, 0, 0, 0}), ValidationError);
    CHECK_THROWS_AS(r_plus_minus({9, -1, 0}), ValidationError);
    CHECK_THROWS_AS(r_plus_minus({9, 1, 2}), ValidationError);
}

TEST_CASE("closed forms hold for every datum with m <= 12")
{
    int count = 0;
    for (int m = 1; m <= 12; ++m)
        for (const auto& p : enumerate_data(m)) {
            ++count;
            const auto [rp, rm] = r_plus_minus(p);
            CHECK(rp >= 0);
            CHECK(rm >= 0);
            CHECK(rp + rm <= m);
            if (p.s == 0) {
                CHECK(rp == p.r);
                CHECK(rm == p.r);
            } else {
                CHECK(rp + rm == m - p.delta_plus - p.delta_minus);
                if (p.sign_a0 > 0) {
                    CHECK(rp == p.r - p.delta_plus);
                    CHECK(rm == m - p.r - p.delta_minus);
                } else {
                    CHECK(rp == m - p.r - p.delta_plus);
                    CHECK(rm == p.r - p.delta_minus);
                }
            }
        }
    CHECK(count > 100);
    // m = 5 needs r + s <= 2: three data with s = 0, two with (r, s) = (0, 1), and for
    // (1, 1) two signs times three delta pairs.
    CHECK(enumerate_data(5).size() == 11);
}

TEST_CASE("off-diagonal degrees")
{
    CHECK(allowed_offdiagonal_degrees(1).empty());
    CHECK(allowed_offdiagonal_degrees(2).empty());
    CHECK(offdiagonal_bound(4) == 2);
    CHECK(*allowed_offdiagonal_degrees(4).begin() == 4);
    for (int m = 1; m <= 20; ++m) {
        const auto d = allowed_offdiagonal_degrees(m);
        if (d.empty()) {
            CHECK(m <= 2);
            continue;
        }
        CHECK(*d.begin() >= offdiagonal_bound(m));
        // Smallest degree: s = 1 with the largest admissible r and delta_+ = r.
        int r_max = -1;
        for (int r = 0; 2 * (r + 1) < m; ++r)
            r_max = r;
        CHECK(*d.begin() == m - r_max);
    }
}

TEST_CASE("betti vanishing")
{
    CHECK(betti_vanishing_max(4) == 1);
    CHECK_FALSE(betti_vanishing_max(1).has_value());
    CHECK(betti_vanishing_max(10) == 2);
    for (int m = 1; m <= 40; ++m) {
        const int c = (m + 1) / 2;
        std::optional<int> best;
        for (int k = 1; 2 * k - 1 < c; ++k)
            best = k;
        CHECK(betti_vanishing_max(m) == best);
    }
}

TEST_CASE("unconditional modularity range")
{
    CHECK(unconditional_modularity_range(4, 1) == 1);
    CHECK_FALSE(unconditional_modularity_range(1, 2).has_value());
    CHECK(unconditional_modularity_range(13, 1) == 3);
    for (int m = 1; m <= 30; ++m)
        for (int d = 1; d <= 6; ++d) {
            const Rational bound = m % 2 == 0 ? frac(m + 2, 4) : frac(m + 3, 4);
            std::optional<int> best;
            for (int n = 1; Rational(n * d) < bound; ++n)
                best = n;
            CHECK(unconditional_modularity_range(m, d) == best);
        }
    CHECK_THROWS_AS(unconditional_modularity_range(0, 1), ValidationError);
}

TEST_CASE("embedding parameter")
{
    const auto e = required_ell(1, 2, 1);
    CHECK(e.ell == 3);
    CHECK(e.m_tilde == 13);
    CHECK(e.consistent);
    CHECK(required_ell(1, 1, 4).ell == 2);
    for (int n = 1; n <= 6; ++n)
        for (int d = 1; d <= 6; ++d)
            for (int m = 1; m <= 20; ++m)
                CHECK(required_ell(n, d, m).consistent);
}

TEST_CASE("bound tables")
{
    const auto rows = hodge_table(1, 6, 1);
    CHECK(rows.size() == 6);
    CHECK(rows[3].m == 4);
    CHECK(rows[3].max_n == 1);
    const auto surface = hodge_table(1, 1, 2);
    CHECK_FALSE(surface[0].max_n.has_value());
    CHECK(surface[0].ell.ell == 3);
    const auto csv = format_csv(surface);
    CHECK(csv == "m,d_plus,max_n,vanishing_k,min_offdiagonal,next_n,ell,m_tilde,consistent\n"
                 "1,2,none,none,none,1,3,13,yes\n");
    CHECK(format_markdown(surface) ==
          "| m | d_plus | max_n | vanishing_k | min_offdiagonal | next_n | ell | m_tilde | consistent |\n"
          "| --- | --- | --- | --- | --- | --- | --- | --- | --- |\n"
          "| 1 | 2 | none | none | none | 1 | 3 | 13 | yes |\n");
    CHECK(format_csv(rows) == format_csv(hodge_table(1, 6, 1)));
}
