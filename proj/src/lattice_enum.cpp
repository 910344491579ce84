#include "ffskit/lattice_enum.hpp"

#include "ffskit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ffskit {

namespace {

using RMat = std::vector<std::vector<Rational>>;

Integer round_nearest(const Rational& q) { return floor(q + Rational(1, 2)); }

void gram_schmidt(const RMat& g, RMat& mu, std::vector<Rational>& b)
{
    const std::size_t n = g.size();
    mu.assign(n, std::vector<Rational>(n));
    b.assign(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            Rational s = g[i][j];
            for (std::size_t k = 0; k < j; ++k)
                s -= mu[j][k] * mu[i][k] * b[k];
            mu[i][j] = s / b[j];
        }
        Rational s = g[i][i];
        for (std::size_t k = 0; k < i; ++k)
            s -= mu[i][k] * mu[i][k] * b[k];
        b[i] = s;
    }
}

std::int64_t to_i64(const Integer& z)
{
    if (!z.fits_slong_p())
        throw std::overflow_error("integer does not fit in 64 bits");
    return z.get_si();
}

struct Enumerator {
    std::size_t n;
    std::vector<std::vector<long double>> q;  // q[i][i] diagonal, q[i][j] (j > i) coefficients
    std::vector<long double> shift;           // fractional offsets of the reduced coordinates
    long double bound;

    std::vector<IntVec>* out = nullptr;
    std::vector<long double> z;
    IntVec w;

    void level(std::size_t i, long double remaining)
    {
        long double center = 0;
        for (std::size_t j = i + 1; j < n; ++j)
            center -= q[i][j] * z[j];
        const long double slack = remaining < 0 ? 0 : remaining;
        const long double radius = std::sqrt(slack / q[i][i]) * (1 + 1e-12L) + 1e-9L;
        const auto lo = static_cast<std::int64_t>(std::ceil(center - radius - shift[i]));
        const auto hi = static_cast<std::int64_t>(std::floor(center + radius - shift[i]));
        for (std::int64_t v = lo; v <= hi; ++v)
            visit(i, v, center, remaining);
    }

    void visit(std::size_t i, std::int64_t v, long double center, long double remaining)
    {
        w[i] = v;
        z[i] = shift[i] + static_cast<long double>(v);
        const long double d = z[i] - center;
        const long double rest = remaining - q[i][i] * d * d;
        if (rest < -1e-9L * (1 + bound))
            return;
        if (i == 0)
            out->push_back(w);
        else
            level(i - 1, rest);
    }
};

}  // namespace

std::vector<IntVec> lll_reduce(const IntGram& gram)
{
    const std::size_t n = gram.size();
    RMat g(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            g[i][j] = Rational(static_cast<long>(gram[i][j]));
    std::vector<std::vector<Integer>> u(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i)
        u[i][i] = 1;

    // Column operations on u and the matching congruence on g.
    auto add_multiple = [&](std::size_t k, std::size_t j, const Integer& r) {
        // b_k -= r b_j
        const Rational rq(r);
        for (std::size_t i = 0; i < n; ++i)
            u[i][k] -= r * u[i][j];
        for (std::size_t i = 0; i < n; ++i)
            g[k][i] -= rq * g[j][i];
        for (std::size_t i = 0; i < n; ++i)
            g[i][k] -= rq * g[i][j];
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < n; ++i)
            std::swap(u[i][a], u[i][b]);
        std::swap(g[a], g[b]);
        for (std::size_t i = 0; i < n; ++i)
            std::swap(g[i][a], g[i][b]);
    };

    RMat mu;
    std::vector<Rational> b;
    std::size_t k = 1;
    while (k < n) {
        gram_schmidt(g, mu, b);
        for (std::size_t jj = k; jj-- > 0;) {
            const Integer r = round_nearest(mu[k][jj]);
            if (r != 0) {
                add_multiple(k, jj, r);
                gram_schmidt(g, mu, b);
            }
        }
        if (b[k] >= (Rational(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1]) {
            ++k;
        } else {
            swap_cols(k, k - 1);
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
    std::vector<IntVec> out(n, IntVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out[i][j] = to_i64(u[i][j]);
    return out;
}

__int128 bilinear(const IntGram& gram, const IntVec& s, const IntVec& t)
{
    __int128 acc = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == 0)
            continue;
        __int128 row = 0;
        for (std::size_t j = 0; j < t.size(); ++j)
            row += static_cast<__int128>(gram[i][j]) * t[j];
        acc += row * s[i];
    }
    return acc;
}

std::vector<IntVec> enumerate_shifted(const IntGram& gram, const IntVec& s0, std::int64_t e, const Rational& bound,
                                      int jobs)
{
    const std::size_t n = gram.size();
    if (e <= 0)
        throw std::invalid_argument("enumerate_shifted: denominator must be positive");
    if (s0.size() != n)
        throw std::invalid_argument("enumerate_shifted: shift has wrong length");
    if (sgn(bound) < 0)
        return {};
    if (n == 0)
        return {IntVec{}};

    const auto u = lll_reduce(gram);
    // Reduced Gram U^T G U and U^{-1}.
    IntGram red(n, IntVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            __int128 acc = 0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    acc += static_cast<__int128>(u[a][i]) * gram[a][b] * u[b][j];
            red[i][j] = static_cast<std::int64_t>(acc);
        }
    Matrix<Rational> um(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            um(i, j) = Rational(static_cast<long>(u[i][j]));
    const auto uinv = *inverse(um);

    // t0 = U^{-1} s0; reduced coordinates z = (t0 + e w)/e.
    IntVec t0(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rational acc(0);
        for (std::size_t j = 0; j < n; ++j)
            acc += uinv(i, j) * Rational(static_cast<long>(s0[j]));
        t0[i] = to_i64(acc.get_num());
    }

    Enumerator en;
    en.n = n;
    en.q.assign(n, std::vector<long double>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            en.q[i][j] = static_cast<long double>(red[i][j]);
    for (std::size_t i = 0; i < n; ++i) {
        if (en.q[i][i] <= 0)
            throw std::invalid_argument("enumerate_shifted: Gram matrix is not positive definite");
        for (std::size_t j = i + 1; j < n; ++j) {
            en.q[j][i] = en.q[i][j];
            en.q[i][j] /= en.q[i][i];
        }
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t l = k; l < n; ++l)
                en.q[k][l] -= en.q[k][i] * en.q[i][l];
    }
    en.shift.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Offsets reduced into [0, 1) to keep the search ranges small.
        std::int64_t r = t0[i] % e;
        if (r < 0)
            r += e;
        en.shift[i] = static_cast<long double>(r) / static_cast<long double>(e);
    }
    en.bound = to_long_double(bound);
    const long double total = en.bound * (1 + 1e-12L) + 1e-9L;

    // Outermost level, split across workers.
    std::vector<std::int64_t> tops;
    {
        const long double radius = std::sqrt(total / en.q[n - 1][n - 1]) * (1 + 1e-12L) + 1e-9L;
        const auto lo = static_cast<std::int64_t>(std::ceil(-radius - en.shift[n - 1]));
        const auto hi = static_cast<std::int64_t>(std::floor(radius - en.shift[n - 1]));
        for (std::int64_t v = lo; v <= hi; ++v)
            tops.push_back(v);
    }
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), tops.size()));
    std::vector<std::vector<IntVec>> partial(workers);
    auto run = [&](std::size_t worker) {
        Enumerator local = en;
        local.out = &partial[worker];
        local.z.assign(n, 0);
        local.w.assign(n, 0);
        for (std::size_t idx = worker; idx < tops.size(); idx += workers)
            local.visit(n - 1, tops[idx], 0, total);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t wk = 0; wk < workers; ++wk)
            pool.emplace_back(run, wk);
        for (auto& t : pool)
            t.join();
    }

    // Back to original coordinates with the exact filter: s = U (r + e w') where r = t0 mod e.
    std::vector<IntVec> result;
    const __int128 num = static_cast<__int128>(to_i64(bound.get_num()));
    const __int128 den = static_cast<__int128>(to_i64(bound.get_den()));
    for (const auto& part : partial)
        for (const auto& w : part) {
            IntVec t(n);
            for (std::size_t i = 0; i < n; ++i) {
                std::int64_t r = t0[i] % e;
                if (r < 0)
                    r += e;
                t[i] = r + e * w[i];
            }
            IntVec s(n, 0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    s[i] += u[i][j] * t[j];
            const __int128 norm = bilinear(gram, s, s);
            if (norm * den <= num * static_cast<__int128>(e) * e)
                result.push_back(std::move(s));
        }
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<IntVec> enumerate_short(const IntGram& gram, const Rational& bound, int jobs)
{
    return enumerate_shifted(gram, IntVec(gram.size(), 0), 1, bound, jobs);
}

SmithForm smith_normal_form(const std::vector<std::vector<Integer>>& input)
{
    const std::size_t n = input.size();
    auto a = input;
    SmithForm sf;
    sf.u.assign(n, std::vector<Integer>(n));
    sf.v.assign(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i) {
        sf.u[i][i] = 1;
        sf.v[i][i] = 1;
    }
    auto row_op = [&](std::size_t dst, std::size_t src, const Integer& f) {  // row dst -= f row src
        for (std::size_t j = 0; j < n; ++j) {
            a[dst][j] -= f * a[src][j];
            sf.u[dst][j] -= f * sf.u[src][j];
        }
    };
    auto col_op = [&](std::size_t dst, std::size_t src, const Integer& f) {  // col dst -= f col src
        for (std::size_t i = 0; i < n; ++i) {
            a[i][dst] -= f * a[i][src];
            sf.v[i][dst] -= f * sf.v[i][src];
        }
    };
    auto swap_rows = [&](std::size_t x, std::size_t y) {
        std::swap(a[x], a[y]);
        std::swap(sf.u[x], sf.u[y]);
    };
    auto swap_cols = [&](std::size_t x, std::size_t y) {
        for (std::size_t i = 0; i < n; ++i) {
            std::swap(a[i][x], a[i][y]);
            std::swap(sf.v[i][x], sf.v[i][y]);
        }
    };

    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            std::size_t pi = n, pj = n;
            for (std::size_t i = t; i < n; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (a[i][j] != 0 && (pi == n || abs(a[i][j]) < abs(a[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == n)
                break;
            swap_rows(t, pi);
            swap_cols(t, pj);
            bool clean = true;
            for (std::size_t i = t + 1; i < n; ++i) {
                Integer f;
                mpz_fdiv_q(f.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                if (f != 0)
                    row_op(i, t, f);
                if (a[i][t] != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                Integer f;
                mpz_fdiv_q(f.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                if (f != 0)
                    col_op(j, t, f);
                if (a[t][j] != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            // Divisibility of the remaining block by the pivot.
            bool divides = true;
            for (std::size_t i = t + 1; i < n && divides; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        for (std::size_t c = 0; c < n; ++c) {
                            a[t][c] += a[i][c];
                            sf.u[t][c] += sf.u[i][c];
                        }
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (a[t][t] < 0) {
            for (std::size_t j = 0; j < n; ++j) {
                a[t][j] = -a[t][j];
                sf.u[t][j] = -sf.u[t][j];
            }
        }
    }
    sf.diagonal.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        sf.diagonal[i] = a[i][i];
    return sf;
}

bool is_positive_definite(const std::vector<std::vector<Rational>>& m)
{
    const std::size_t n = m.size();
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix<Rational> sub(k, k, Rational(0));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                sub(i, j) = m[i][j];
        if (sgn(determinant(sub)) <= 0)
            return false;
    }
    return true;
}

}  // namespace ffskit
