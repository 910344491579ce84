#include "ffskit/theta.hpp"

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <thread>

namespace ffskit {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

bool is_integral(const FieldElem& x)
{
    return std::all_of(x.coords().begin(), x.coords().end(), [](const Rational& c) { return c.get_den() == 1; });
}

std::int64_t to_int64(const Rational& q, const char* what)
{
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        throw ValidationError(what);
    return q.get_num().get_si();
}

bool in_inverse_different(const FieldElem& x)
{
    const auto& f = x.field();
    for (int l = 0; l < f.degree(); ++l)
        if (trace(x * f.basis_element(l)).get_den() != 1)
            return false;
    return true;
}

Integer denominator_for_inverse_different(const FieldElem& x)
{
    const auto& f = x.field();
    Integer den = 1;
    for (int l = 0; l < f.degree(); ++l)
        den = lcm(den, Integer(trace(x * f.basis_element(l)).get_den()));
    return den;
}

std::int64_t dot(const IntVec& a, const IntVec& b)
{
    __int128 acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += static_cast<__int128>(a[i]) * b[i];
    if (acc > std::numeric_limits<std::int64_t>::max() || acc < std::numeric_limits<std::int64_t>::min())
        throw ValidationError("lattice vector pairing overflows 64 bits");
    return static_cast<std::int64_t>(acc);
}

IntVec mat_vec(const IntGram& m, const IntVec& s)
{
    IntVec out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        out[i] = dot(m[i], s);
    return out;
}

/// A candidate column s (x = s / e) with its trace norm s^T G s and the vectors M_m s.
struct Candidate {
    IntVec s;
    std::int64_t norm = 0;
    std::vector<IntVec> ms;
};

/// Shifted Z-coordinates of a coset: s0 = e * z_coords(mu_a) with a common denominator e.
struct ShiftedCoset {
    std::int64_t e = 1;
    std::vector<IntVec> s0;
};

ShiftedCoset shift_of(const QuadLattice& l, const Coset& mu)
{
    Integer e = 1;
    std::vector<std::vector<Rational>> zc;
    for (const auto& col : mu) {
        zc.push_back(l.z_coords(col));
        for (const auto& c : zc.back())
            e = lcm(e, Integer(c.get_den()));
    }
    if (!e.fits_slong_p() || e > 1000000)
        throw ValidationError("coset denominator is too large");
    ShiftedCoset out;
    out.e = e.get_si();
    for (const auto& col : zc) {
        IntVec s(col.size());
        for (std::size_t i = 0; i < col.size(); ++i)
            s[i] = to_int64(col[i] * Rational(e), "coset coordinate");
        out.s0.push_back(std::move(s));
    }
    return out;
}

std::vector<Candidate> column_candidates(const QuadLattice& l, const IntVec& s0, std::int64_t e, const Rational& bound,
                                         int jobs)
{
    std::vector<Candidate> out;
    if (l.rank() == 0) {
        out.push_back(Candidate{{}, 0, std::vector<IntVec>(idx(l.field().degree()))});
        return out;
    }
    for (auto& s : enumerate_shifted(l.trace_gram(), s0, e, bound, jobs)) {
        Candidate c;
        c.norm = dot(s, mat_vec(l.trace_gram(), s));
        for (const auto& m : l.coord_forms())
            c.ms.push_back(mat_vec(m, s));
        c.s = std::move(s);
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.norm < b.norm; });
    return out;
}

/// Depth-first walk over frames (one candidate per column) whose total norm stays within
/// budget; `accept(a, b, ca, cb)` prunes on pairs b <= a as columns are placed. `visit`
/// receives the index of the worker thread, which is below max(1, jobs).
void for_each_frame(const std::vector<std::vector<Candidate>>& cols, std::int64_t budget,
                    const std::function<bool(std::size_t, std::size_t, const Candidate&, const Candidate&)>& accept,
                    const std::function<void(int, const std::vector<const Candidate*>&)>& visit, int jobs)
{
    const std::size_t n = cols.size();
    auto walk = [&](auto&& self, int worker, std::vector<const Candidate*>& chosen, std::int64_t left) -> void {
        const std::size_t a = chosen.size();
        if (a == n) {
            visit(worker, chosen);
            return;
        }
        for (const auto& c : cols[a]) {
            if (c.norm > left)
                break;
            bool ok = true;
            for (std::size_t b = 0; b <= a && ok; ++b)
                ok = accept(a, b, c, b == a ? c : *chosen[b]);
            if (!ok)
                continue;
            chosen.push_back(&c);
            self(self, worker, chosen, left - c.norm);
            chosen.pop_back();
        }
    };
    if (n == 0)
        return;
    const auto& first = cols[0];
    const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(first.size())));
    auto run = [&](int t) {
        std::vector<const Candidate*> chosen;
        for (std::size_t i = static_cast<std::size_t>(t); i < first.size(); i += static_cast<std::size_t>(threads)) {
            const auto& c = first[i];
            if (c.norm > budget || !accept(0, 0, c, c))
                continue;
            chosen.assign(1, &c);
            walk(walk, t, chosen, budget - c.norm);
        }
    };
    if (threads == 1) {
        run(0);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(run, t);
    for (auto& th : pool)
        th.join();
}

Rational sqrt_upper(const Rational& q)
{
    const Integer scale("1000000000000");
    Integer k = floor(q * Rational(scale));
    Integer r;
    mpz_sqrt(r.get_mpz_t(), k.get_mpz_t());
    return frac(r + 1, Integer(1000000));
}

long double embed_ld(const FieldElem& x, int j)
{
    long double v = 0;
    for (int l = 0; l < x.field().degree(); ++l)
        v += to_long_double(x.coords()[idx(l)]) * x.field().basis_embedding(l, j);
    return v;
}

bool cholesky_pd(std::vector<std::vector<long double>> a, long double margin)
{
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        long double p = a[k][k];
        for (std::size_t s = 0; s < k; ++s)
            p -= a[k][s] * a[k][s];
        if (!(p > margin))
            return false;
        a[k][k] = std::sqrt(p);
        for (std::size_t i = k + 1; i < n; ++i) {
            long double v = a[i][k];
            for (std::size_t s = 0; s < k; ++s)
                v -= a[i][s] * a[k][s];
            a[i][k] = v / a[k][k];
        }
    }
    return true;
}

std::vector<std::vector<long double>> imag_part(const CMatrix& m)
{
    std::vector<std::vector<long double>> out(m.size(), std::vector<long double>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t k = 0; k < m.size(); ++k)
            out[i][k] = m[i][k].imag();
    return out;
}

long double det_real(std::vector<std::vector<long double>> a)
{
    const std::size_t n = a.size();
    long double det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[piv][k]))
                piv = i;
        if (a[piv][k] == 0)
            return 0;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const long double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j)
                a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

/// sum_{a,b} sigma_j(T_ab) tau_j[b][a].
Complex place_phase(const SymMatF& t, const CMatrix& tau, int j)
{
    Complex p = 0;
    for (int a = 0; a < t.n(); ++a)
        for (int b = 0; b < t.n(); ++b)
            p += embed_ld(t(a, b), j) * tau[idx(b)][idx(a)];
    return p;
}

Complex e_of(const Complex& z)
{
    const long double two_pi = 2 * std::numbers::pi_v<long double>;
    const long double mod = std::exp(-two_pi * z.imag());
    return {mod * std::cos(two_pi * z.real()), mod * std::sin(two_pi * z.real())};
}

}  // namespace

// QuadLattice -----------------------------------------------------------------------

QuadLattice::QuadLattice(NumberField f, MatF gram) : field_(std::move(f)), rank_(static_cast<int>(gram.rows())), gram_(std::move(gram))
{
    if (gram_.rows() != gram_.cols())
        throw ValidationError("gram matrix must be square");
    const auto r = idx(rank_);
    const auto d = idx(field_.degree());
    if (r > 0) {
        const SymMatF sym(gram_);
        if (!(sym.field() == field_))
            throw ValidationError("gram entries belong to a different field");
        if (!is_totally_pd(sym))
            throw ValidationError("gram matrix is not totally positive definite");
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < r; ++k) {
                const FieldElem v = i == k ? gram_(i, k) * frac(1, 2) : gram_(i, k);
                if (!is_integral(v))
                    throw ValidationError("form is not even integral: need (x,x) in 2 O_F and (x,y) in O_F");
            }
    }
    const std::size_t big = r * d;
    trace_gram_.assign(big, IntVec(big, 0));
    coord_forms_.assign(d, IntGram(big, IntVec(big, 0)));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < r; ++j)
                for (std::size_t l = 0; l < d; ++l) {
                    const FieldElem v = field_.basis_element(static_cast<int>(k)) * field_.basis_element(static_cast<int>(l)) * gram_(i, j);
                    trace_gram_[i * d + k][j * d + l] = to_int64(trace(v), "trace form entry");
                    for (std::size_t m = 0; m < d; ++m)
                        coord_forms_[m][i * d + k][j * d + l] = to_int64(v.coords()[m], "form coordinate");
                }
}

QuadLattice QuadLattice::rank_zero(NumberField f)
{
    const FieldElem z = f.zero();
    return QuadLattice(std::move(f), MatF(0, 0, z));
}

FieldElem QuadLattice::pair(const FVec& x, const FVec& y) const
{
    if (x.size() != idx(rank_) || y.size() != idx(rank_))
        throw ValidationError("vector has the wrong rank");
    FieldElem acc = field_.zero();
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            acc += x[i] * gram_(i, j) * y[j];
    return acc;
}

bool QuadLattice::in_dual(const FVec& x) const
{
    for (int i = 0; i < rank_; ++i) {
        FVec e(idx(rank_), field_.zero());
        e[idx(i)] = field_.one();
        if (!in_inverse_different(pair(x, e)))
            return false;
    }
    return true;
}

std::vector<Rational> QuadLattice::z_coords(const FVec& x) const
{
    if (x.size() != idx(rank_))
        throw ValidationError("vector has the wrong rank");
    std::vector<Rational> out;
    for (const auto& xi : x)
        out.insert(out.end(), xi.coords().begin(), xi.coords().end());
    return out;
}

FVec QuadLattice::from_z_coords(const std::vector<Rational>& c) const
{
    const auto d = idx(field_.degree());
    FVec out;
    for (std::size_t i = 0; i < idx(rank_); ++i)
        out.push_back(field_.from_coords(std::vector<Rational>(c.begin() + static_cast<long>(i * d),
                                                                c.begin() + static_cast<long>((i + 1) * d))));
    return out;
}

QuadLattice orthogonal_sum(const QuadLattice& a, const QuadLattice& b)
{
    if (!(a.field() == b.field()))
        throw ValidationError("orthogonal sum needs a common field");
    const auto ra = idx(a.rank()), rb = idx(b.rank());
    MatF g(ra + rb, ra + rb, a.field().zero());
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < ra; ++j)
            g(i, j) = a.gram()(i, j);
    for (std::size_t i = 0; i < rb; ++i)
        for (std::size_t j = 0; j < rb; ++j)
            g(ra + i, ra + j) = b.gram()(i, j);
    return QuadLattice(a.field(), std::move(g));
}

// Cosets and levels -----------------------------------------------------------------

Coset zero_coset(const QuadLattice& l, int n) { return Coset(idx(n), FVec(idx(l.rank()), l.field().zero())); }

void validate_coset(const QuadLattice& l, const Coset& mu)
{
    if (mu.empty())
        throw ValidationError("coset needs at least one column");
    for (const auto& col : mu) {
        if (col.size() != idx(l.rank()))
            throw ValidationError("coset column has the wrong rank");
        if (std::any_of(col.begin(), col.end(), [](const FieldElem& x) { return !x.is_zero(); }) && !l.in_dual(col))
            throw ValidationError("coset column is not in the dual lattice");
    }
}

int minimal_level(const QuadLattice& l, const Coset& mu)
{
    validate_coset(l, mu);
    Integer nu = 1;
    for (std::size_t a = 0; a < mu.size(); ++a) {
        nu = lcm(nu, denominator_for_inverse_different(l.q(mu[a])));
        for (std::size_t b = a + 1; b < mu.size(); ++b)
            nu = lcm(nu, denominator_for_inverse_different(l.pair(mu[a], mu[b])));
    }
    if (!nu.fits_sint_p())
        throw ValidationError("level does not fit in an int");
    return static_cast<int>(nu.get_si());
}

bool level_is_valid(const QuadLattice& l, const Coset& mu, int nu) { return nu >= 1 && nu % minimal_level(l, mu) == 0; }

// Enumeration -----------------------------------------------------------------------

Integer representation_number(const QuadLattice& l, const SymMatF& t, const Coset& mu, bool strict, int jobs)
{
    validate_coset(l, mu);
    const auto n = idx(t.n());
    if (mu.size() != n)
        throw ValidationError("coset genus differs from the genus of T");
    if (!(t.field() == l.field()))
        throw ValidationError("T lives in a different field");
    if (!is_totally_psd(t)) {
        if (strict)
            throw ValidationError("T is not totally positive semidefinite");
        return 0;
    }
    const auto sc = shift_of(l, mu);
    const std::int64_t e2 = sc.e * sc.e;
    const auto d = idx(l.field().degree());
    // target[a][b][m] = 2 e^2 coord_m(T_ab), the value s_a^T M_m s_b must take.
    std::vector<std::vector<IntVec>> target(n, std::vector<IntVec>(n, IntVec(d)));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t m = 0; m < d; ++m) {
                const Rational v = t(static_cast<int>(a), static_cast<int>(b)).coords()[m] * 2 * e2;
                if (v.get_den() != 1)
                    return 0;
                target[a][b][m] = to_int64(v, "target coordinate");
            }
    std::vector<std::vector<Candidate>> cols;
    std::int64_t budget = 0;
    for (std::size_t a = 0; a < n; ++a) {
        const Rational tn = 2 * trace(t(static_cast<int>(a), static_cast<int>(a)));
        auto all = column_candidates(l, sc.s0[a], sc.e, tn, jobs);
        std::vector<Candidate> keep;
        for (auto& c : all) {
            bool ok = Rational(c.norm) == tn * e2;
            for (std::size_t m = 0; m < d && ok; ++m)
                ok = dot(c.s, c.ms[m]) == target[a][a][m];
            if (ok)
                keep.push_back(std::move(c));
        }
        if (keep.empty())
            return 0;
        budget +=to_int64(tn * e2, "norm budget");
        cols.push_back(std::move(keep));
    }
    std::atomic<long long> count{0};
    for_each_frame(
        cols, budget,
        [&](std::size_t a, std::size_t b, const Candidate& ca, const Candidate& cb) {
            if (a == b)
                return true;
            for (std::size_t m = 0; m < d; ++m)
                if (dot(ca.s, cb.ms[m]) != target[a][b][m])
                    return false;
            return true;
        },
        [&](int, const std::vector<const Candidate*>&) { ++count; }, jobs);
    return Integer(static_cast<long>(count.load()));
}

FormalSeries<RationalRing> theta_expansion(const QuadLattice& l, const Coset& mu, const Rational& b,
                                           std::optional<int> nu_opt, int jobs)
{
    if (sgn(b) < 0)
        throw ValidationError("height bound must be nonnegative");
    const int minimal = minimal_level(l, mu);
    const int nu = nu_opt.value_or(minimal);
    if (!level_is_valid(l, mu, nu))
        throw ValidationError("level nu = " + std::to_string(nu) + " does not contain Q(mu + L^n); a multiple of " +
                              std::to_string(minimal) + " is needed");
    const auto n = mu.size();
    const ConeLattice cl(l.field(), static_cast<int>(n), nu);
    const auto sc = shift_of(l, mu);
    const std::int64_t e2 = sc.e * sc.e;
    const auto d = idx(l.field().degree());
    const Integer scale = Integer(nu) * l.field().discriminant();

    std::vector<std::vector<Candidate>> cols;
    for (std::size_t a = 0; a < n; ++a)
        cols.push_back(column_candidates(l, sc.s0[a], sc.e, 2 * b, jobs));
    const std::int64_t budget = to_int64(floor(2 * b * e2), "norm budget");

    std::vector<std::map<ConeKey, long long>> partial(idx(std::max(1, jobs)));
    for_each_frame(
        cols, budget, [](std::size_t, std::size_t, const Candidate&, const Candidate&) { return true; },
        [&](int worker, const std::vector<const Candidate*>& x) {
            ConeKey k;
            std::int64_t norm = 0;
            for (const auto* c : x)
                norm += c->norm;
            // h = nu * sum_a tr(x_a, x_a) / 2 and c = nu disc * coord(x_a, x_b) / e^2.
            const Integer hn = Integer(nu) * Integer(static_cast<long>(norm));
            if (!mpz_divisible_ui_p(hn.get_mpz_t(), static_cast<unsigned long>(2 * e2)))
                throw ValidationError("height of Q(x) is not in nu^{-1} Z");
            k.h = Integer(hn / (2 * e2)).get_si();
            k.c.reserve(cl.key_width());
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t bb = a; bb < n; ++bb)
                    for (std::size_t m = 0; m < d; ++m) {
                        const Integer v = scale * Integer(static_cast<long>(dot(x[a]->s, x[bb]->ms[m])));
                        if (!mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(e2)))
                            throw ValidationError("Q(x) is not in nu^{-1} S_F^vee");
                        k.c.push_back(Integer(v / e2).get_si());
                    }
            ++partial[idx(worker)][k];
        },
        jobs);

    std::map<ConeKey, long long> total;
    for (const auto& p : partial)
        for (const auto& [k, v] : p)
            total[k] += v;
    FormalSeries<RationalRing> out(cl, b);
    for (const auto& [k, v] : total)
        out.set(k, Rational(static_cast<long>(v)));

    Rational c(1);
    if (l.rank() > 0) {
        std::vector<std::vector<Rational>> g(idx(l.z_rank()), std::vector<Rational>(idx(l.z_rank())));
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j)
                g[i][j] = Rational(static_cast<long>(l.trace_gram()[i][j]));
        Matrix<Rational> gm(g.size(), g.size(), Rational(0));
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j)
                gm(i, j) = g[i][j];
        const auto inv = inverse(gm);
        if (!inv)
            throw ValidationError("trace form is singular");
        Rational per_column(1);
        for (std::size_t k = 0; k < g.size(); ++k)
            per_column *= 2 * sqrt_upper(2 * (*inv)(k, k)) + 1;
        for (std::size_t a = 0; a < n; ++a)
            c *= per_column;
    }
    out.set_growth(GrowthModel{c, frac(l.z_rank() * static_cast<long>(n), 2)});
    return out;
}

bool check_orthogonal_sum_factorization(const QuadLattice& l0, const QuadLattice& l1, int n, const Rational& b,
                                        int jobs)
{
    if (!(l0.field() == l1.field()))
        throw ValidationError("lattices live over different fields");
    const auto sum = orthogonal_sum(l0, l1);
    const auto lhs = theta_expansion(sum, zero_coset(sum, n), b, 1, jobs);
    const auto rhs = theta_expansion(l0, zero_coset(l0, n), b, 1, jobs) * theta_expansion(l1, zero_coset(l1, n), b, 1, jobs);
    return lhs == rhs;
}

DiagonalRestrictionReport check_diagonal_restriction(const QuadLattice& l, const SymMatF& t1, const SymMatF& t2)
{
    const int n1 = t1.n(), n2 = t2.n();
    DiagonalRestrictionReport rep;
    rep.rhs = representation_number(l, t1) * representation_number(l, t2);
    rep.lhs = 0;
    const ConeLattice c1(l.field(), n1, 1), c2(l.field(), n2, 1), c(l.field(), n1 + n2, 1);
    if (!c1.contains(t1) || !c2.contains(t2))
        return rep;
    const Rational h = height(t1) + height(t2);
    const auto k1 = c1.key(t1), k2 = c2.key(t2);
    for (const auto& k : c.enumerate(h)) {
        if (k.h != k1.h + k2.h)
            continue;
        const auto m = c.matrix(k);
        const auto [b1, b2] = diagonal_blocks(m, n1);
        if (!(b1 == t1) || !(b2 == t2))
            continue;
        ++rep.blocks;
        rep.lhs += representation_number(l, m);
    }
    return rep;
}

// Discriminant group ----------------------------------------------------------------

Integer DiscriminantGroup::order() const
{
    Integer o = 1;
    for (const auto& d : invariants)
        o *= d;
    return o;
}

DiscriminantGroup discriminant_group(const QuadLattice& l)
{
    DiscriminantGroup out;
    const auto big = idx(l.z_rank());
    if (big == 0) {
        out.elements.push_back({});
        return out;
    }
    std::vector<std::vector<Integer>> g(big, std::vector<Integer>(big));
    for (std::size_t i = 0; i < big; ++i)
        for (std::size_t j = 0; j < big; ++j)
            g[i][j] = Integer(static_cast<long>(l.trace_gram()[i][j]));
    const auto sf = smith_normal_form(g);
    // L^vee = G^{-1} Z^N = V D^{-1} Z^N, so V e_i / d_i generate.
    std::vector<std::vector<Rational>> gens;
    for (std::size_t i = 0; i < big; ++i) {
        if (sf.diagonal[i] == 1)
            continue;
        std::vector<Rational> v(big);
        for (std::size_t k = 0; k < big; ++k)
            v[k] = frac(sf.v[k][i], sf.diagonal[i]);
        out.invariants.push_back(sf.diagonal[i]);
        gens.push_back(v);
    }
    auto reduce = [](std::vector<Rational> v) {
        for (auto& x : v)
            x -= Rational(floor(x));
        return v;
    };
    for (const auto& v : gens)
        out.generators.push_back(l.from_z_coords(reduce(v)));
    std::vector<Integer> digit(gens.size(), 0);
    for (;;) {
        std::vector<Rational> v(big, Rational(0));
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (std::size_t k = 0; k < big; ++k)
                v[k] += Rational(digit[i]) * gens[i][k];
        out.elements.push_back(l.from_z_coords(reduce(v)));
        std::size_t pos = gens.size();
        while (pos > 0) {
            --pos;
            if (++digit[pos] < out.invariants[pos])
                break;
            digit[pos] = 0;
            if (pos == 0) {
                pos = gens.size() + 1;
                break;
            }
        }
        if (gens.empty() || pos == gens.size() + 1)
            break;
    }
    return out;
}

// Numerics --------------------------------------------------------------------------

int working_precision()
{
    const char* env = std::getenv("FFSKIT_PRECISION");
    int digits = 15;
    if (env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1)
            throw ValidationError("FFSKIT_PRECISION must be a positive integer");
        digits = static_cast<int>(std::min<long>(v, 1000));
    }
    if (digits > LDBL_DIG)
        throw PrecisionExhausted("requested " + std::to_string(digits) + " digits; long double carries " +
                                 std::to_string(LDBL_DIG));
    return digits;
}

void validate_tau(const TauPoint& tau, int d, int n)
{
    if (tau.tau.size() != idx(d))
        throw ValidationError("tau needs one matrix per real embedding");
    const long double margin = std::pow(10.0L, -static_cast<long double>(working_precision()));
    for (const auto& m : tau.tau) {
        if (m.size() != idx(n))
            throw ValidationError("tau component has the wrong genus");
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i].size() != idx(n))
                throw ValidationError("tau component is not square");
            for (std::size_t k = 0; k < m.size(); ++k)
                if (m[i][k] != m[k][i])
                    throw ValidationError("tau component is not symmetric");
        }
        if (!cholesky_pd(imag_part(m), margin))
            throw ValidationError("Im tau is not positive definite at working precision");
    }
}

long double min_imaginary_eigenvalue(const TauPoint& tau)
{
    long double best = std::numeric_limits<long double>::infinity();
    for (const auto& m : tau.tau) {
        const auto y = imag_part(m);
        long double lo = 0, hi = y[0][0];
        for (std::size_t i = 1; i < y.size(); ++i)
            hi = std::min(hi, y[i][i]);
        for (int step = 0; step < 80; ++step) {
            const long double mid = (lo + hi) / 2;
            auto s = y;
            for (std::size_t i = 0; i < s.size(); ++i)
                s[i][i] -= mid;
            if (cholesky_pd(s, 0))
                lo = mid;
            else
                hi = mid;
        }
        best = std::min(best, lo * (1 - 64 * LDBL_EPSILON));
    }
    return best;
}

Complex q_power(const SymMatF& t, const TauPoint& tau)
{
    Complex phase = 0;
    for (int j = 0; j < t.field().degree(); ++j)
        phase += place_phase(t, tau.tau[idx(j)], j);
    return e_of(phase);
}

long double upper_incomplete_gamma_bound(long double a, long double x)
{
    if (a < 1 || !(x > a - 1))
        return std::numeric_limits<long double>::infinity();
    return std::exp((a - 1) * std::log(x) - x) * x / (x - a + 1);
}

NumericValue numeric_eval(const FormalSeries<RationalRing>& f, const TauPoint& tau)
{
    const int digits = working_precision();
    const auto& cl = f.cone();
    validate_tau(tau, cl.field().degree(), cl.n());
    NumericValue out;
    long double mass = 0, cond = 0;
    for (const auto& [k, v] : f.coeffs()) {
        const auto t = cl.matrix(k);
        const Complex term = to_long_double(v) * q_power(t, tau);
        out.value += term;
        long double spread = 0;
        for (int j = 0; j < cl.field().degree(); ++j)
            for (int a = 0; a < t.n(); ++a)
                for (int b = 0; b < t.n(); ++b)
                    spread += std::fabs(embed_ld(t(a, b), j)) * std::abs(tau.tau[idx(j)][idx(b)][idx(a)]);
        mass += std::abs(term);
        cond += std::abs(term) * (32 + 8 * std::numbers::pi_v<long double> * spread);
    }
    out.rounding_bound = LDBL_EPSILON * (cond + static_cast<long double>(f.coeffs().size()) * mass);
    if (const auto& g = f.growth()) {
        const long double c = 2 * std::numbers::pi_v<long double> * min_imaginary_eigenvalue(tau);
        const long double p = to_long_double(g->p);
        const long double gam = upper_incomplete_gamma_bound(p + 1, c * (1 + to_long_double(f.bound())));
        out.tail_bound = std::isinf(gam) ? gam : to_long_double(g->c) * std::exp(c) * gam / std::pow(c, p);
    }
    const long double wanted = std::pow(10.0L, -static_cast<long double>(digits)) * std::max(1.0L, std::abs(out.value));
    if (out.rounding_bound > wanted)
        throw PrecisionExhausted("rounding error exceeds the requested " + std::to_string(digits) + " digits");
    return out;
}

long double norm_det_imaginary(const TauPoint& tau)
{
    long double nd = 1;
    for (const auto& m : tau.tau)
        nd *= det_real(imag_part(m));
    return nd;
}

Complex whittaker_factor(const SymMatF& t, const TauPoint& tau, int m)
{
    const long double expo = static_cast<long double>(m + 2) / 4;
    Complex w = 1;
    for (int j = 0; j < t.field().degree(); ++j) {
        const long double dv = det_real(imag_part(tau.tau[idx(j)]));
        w *= std::pow(dv, expo) * e_of(place_phase(t, tau.tau[idx(j)], j));
    }
    return w;
}

TauPoint translate(const TauPoint& tau, const SymMatF& beta)
{
    TauPoint out = tau;
    for (int j = 0; j < beta.field().degree(); ++j)
        for (int a = 0; a < beta.n(); ++a)
            for (int b = 0; b < beta.n(); ++b)
                out.tau[idx(j)][idx(a)][idx(b)] += embed_ld(beta(a, b), j);
    return out;
}

}  // namespace ffskit
