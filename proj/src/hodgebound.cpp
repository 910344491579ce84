#include "ffskit/hodgebound.hpp"

#include "ffskit/rational.hpp"

#include <algorithm>

namespace ffskit {

bool is_valid(const ParabolicDatum& p)
{
    if (p.m < 1 || p.r < 0 || 2 * p.r > p.m || (p.s != 0 && p.s != 1) || 2 * (p.r + p.s) >= p.m)
        return false;
    if (p.sign_a0 != 1 && p.sign_a0 != -1)
        return false;
    if (p.delta_plus < 0 || p.delta_minus < 0 || p.delta_plus + p.delta_minus > p.r)
        return false;
    return p.s == 1 || (p.delta_plus == 0 && p.delta_minus == 0);
}

void validate(const ParabolicDatum& p)
{
    if (!is_valid(p))
        throw ValidationError("invalid parabolic datum (m=" + std::to_string(p.m) + ", r=" + std::to_string(p.r) +
                              ", s=" + std::to_string(p.s) + ", delta=" + std::to_string(p.delta_plus) + "," +
                              std::to_string(p.delta_minus) + ")");
}

std::pair<int, int> r_plus_minus(const ParabolicDatum& p)
{
    validate(p);
    if (p.s == 0)
        return {p.r, p.r};
    if (p.sign_a0 > 0)
        return {p.r - p.delta_plus, p.m - p.r - p.delta_minus};
    return {p.m - p.r - p.delta_plus, p.r - p.delta_minus};
}

std::vector<ParabolicDatum> enumerate_data(int m)
{
    std::vector<ParabolicDatum> out;
    for (int r = 0; 2 * r <= m; ++r)
        for (int s = 0; s <= 1; ++s)
            for (int sign : {-1, 1}) {
                if (s == 0 && sign < 0)
                    continue;
                for (int dp = 0; dp <= r; ++dp)
                    for (int dm = 0; dp + dm <= r; ++dm) {
                        ParabolicDatum p{m, r, s, sign, dp, dm};
                        if (is_valid(p))
                            out.push_back(p);
                    }
            }
    return out;
}

std::set<int> allowed_offdiagonal_degrees(int m)
{
    std::set<int> out;
    for (const auto& p : enumerate_data(m)) {
        const auto [rp, rm] = r_plus_minus(p);
        if (rp != rm)
            out.insert(rp + rm);
    }
    return out;
}

int offdiagonal_bound(int m) { return m - m / 2; }

std::optional<int> betti_vanishing_max(int m)
{
    const int k = ((m + 1) / 2) / 2;
    if (k < 1)
        return std::nullopt;
    return k;
}

std::optional<int> unconditional_modularity_range(int m, int d_plus)
{
    if (m < 1 || d_plus < 1)
        throw ValidationError("m and d_plus must be positive");
    const int b = m % 2 == 0 ? m + 2 : m + 3;
    const int n = (b - 1) / (4 * d_plus);
    if (n < 1)
        return std::nullopt;
    return n;
}

EllReport required_ell(int n, int d_plus, int m)
{
    if (n < 1 || d_plus < 1 || m < 1)
        throw ValidationError("n, d_plus and m must be positive");
    EllReport e;
    e.ell = n * d_plus + 1;
    e.m_tilde = m + 4 * e.ell;
    const auto k = betti_vanishing_max(e.m_tilde);
    e.consistent = k && *k >= n * d_plus;
    return e;
}

std::vector<HodgeRow> hodge_table(int m_first, int m_last, int d_plus)
{
    std::vector<HodgeRow> rows;
    for (int m = m_first; m <= m_last; ++m) {
        HodgeRow row;
        row.m = m;
        row.d_plus = d_plus;
        row.max_n = unconditional_modularity_range(m, d_plus);
        row.vanishing_k = betti_vanishing_max(m);
        const auto degrees = allowed_offdiagonal_degrees(m);
        if (!degrees.empty())
            row.min_offdiagonal = *degrees.begin();
        row.next_n = row.max_n.value_or(0) + 1;
        row.ell = required_ell(row.next_n, d_plus, m);
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : "none"; }

std::vector<std::string> cells(const HodgeRow& r)
{
    return {std::to_string(r.m),         std::to_string(r.d_plus), opt(r.max_n),
            opt(r.vanishing_k),          opt(r.min_offdiagonal),   std::to_string(r.next_n),
            std::to_string(r.ell.ell),   std::to_string(r.ell.m_tilde), r.ell.consistent ? "yes" : "no"};
}

const std::vector<std::string> header{"m", "d_plus", "max_n", "vanishing_k", "min_offdiagonal",
                                      "next_n", "ell", "m_tilde", "consistent"};

}  // namespace

std::string format_csv(const std::vector<HodgeRow>& rows)
{
    auto line = [](const std::vector<std::string>& c) {
        std::string s;
        for (std::size_t i = 0; i < c.size(); ++i)
            s += (i ? "," : "") + c[i];
        return s + "\n";
    };
    std::string out = line(header);
    for (const auto& r : rows)
        out += line(cells(r));
    return out;
}

std::string format_markdown(const std::vector<HodgeRow>& rows)
{
    auto line = [](const std::vector<std::string>& c) {
        std::string s = "|";
        for (const auto& x : c)
            s += " " + x + " |";
        return s + "\n";
    };
    std::string out = line(header);
    out += line(std::vector<std::string>(header.size(), "---"));
    for (const auto& r : rows)
        out += line(cells(r));
    return out;
}

}  // namespace ffskit
