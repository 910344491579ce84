#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ffskit {

/// theta-stable parabolic datum for SO(m, 2).
struct ParabolicDatum {
    int m = 1;
    int r = 0;
    int s = 0;
    int sign_a0 = 1;  // only meaningful for s = 1
    int delta_plus = 0;
    int delta_minus = 0;
};

bool is_valid(const ParabolicDatum& p);
/// Throws ValidationError unless 0 <= r <= m/2, s in {0, 1}, 2(r + s) < m, sign_a0 = +-1,
/// 0 <= delta_+ + delta_- <= r, and delta = 0 when s = 0.
void validate(const ParabolicDatum& p);

/// (R+, R-) of the datum.
std::pair<int, int> r_plus_minus(const ParabolicDatum& p);

/// Every valid datum with the given m, in lexicographic order of (r, s, sign, delta+, delta-).
std::vector<ParabolicDatum> enumerate_data(int m);

/// R+ + R- over valid data with R+ != R-.
std::set<int> allowed_offdiagonal_degrees(int m);
/// m - floor(m / 2).
int offdiagonal_bound(int m);

/// Largest k >= 1 with 2k - 1 < ceil(m / 2), if any.
std::optional<int> betti_vanishing_max(int m);

/// Largest n >= 1 with n d+ < (m + 2) / 4 (m even) or (m + 3) / 4 (m odd), if any.
std::optional<int> unconditional_modularity_range(int m, int d_plus);

struct EllReport {
    int ell = 0;
    int m_tilde = 0;
    bool consistent = false;  // 2 n d+ - 1 < ceil(m_tilde / 2)
};
EllReport required_ell(int n, int d_plus, int m);

struct HodgeRow {
    int m = 0;
    int d_plus = 0;
    std::optional<int> max_n;
    std::optional<int> vanishing_k;
    std::optional<int> min_offdiagonal;
    int next_n = 0;  // first genus outside the unconditional range
    EllReport ell;
};
std::vector<HodgeRow> hodge_table(int m_first, int m_last, int d_plus);
std::string format_csv(const std::vector<HodgeRow>& rows);
std::string format_markdown(const std::vector<HodgeRow>& rows);

}  // namespace ffskit
