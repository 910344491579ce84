#include "ffskit/symcone.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <thread>

namespace ffskit {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

bool minors_nonnegative(const MatF& m, bool strict_leading)
{
    const std::size_t n = m.rows();
    const FieldElem& like = m(0, 0);
    if (strict_leading) {
        for (std::size_t k = 1; k <= n; ++k) {
            MatF sub(k, k, like);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    sub(i, j) = m(i, j);
            if (!is_totally_positive(determinant(sub)))
                return false;
        }
        return true;
    }
    // Positive semidefiniteness needs every principal minor, not only the leading ones.
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i))
                rows.push_back(i);
        MatF sub(rows.size(), rows.size(), like);
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < rows.size(); ++b)
                sub(a, b) = m(rows[a], rows[b]);
        if (!is_totally_nonnegative(rows.size() == 1 ? sub(0, 0) : determinant(sub)))
            return false;
    }
    return true;
}

std::int64_t checked_int(const Rational& q, const char* what)
{
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        throw ValidationError(what);
    return q.get_num().get_si();
}

}  // namespace

// SymMatF ---------------------------------------------------------------------

SymMatF::SymMatF(MatF m) : m_(std::move(m))
{
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw ValidationError("symmetric matrix must be square with n >= 1");
    for (std::size_t i = 0; i < m_.rows(); ++i)
        for (std::size_t k = i + 1; k < m_.cols(); ++k)
            if (!(m_(i, k) == m_(k, i)))
                throw ValidationError("matrix is not symmetric");
}

SymMatF SymMatF::zero(const NumberField& f, int n) { return SymMatF(MatF(idx(n), idx(n), f.zero())); }
SymMatF SymMatF::identity(const NumberField& f, int n) { return SymMatF(MatF::identity(idx(n), f.one())); }

SymMatF SymMatF::diagonal(const NumberField& f, const std::vector<Rational>& d)
{
    MatF m(d.size(), d.size(), f.zero());
    for (std::size_t i = 0; i < d.size(); ++i)
        m(i, i) = f.from_rational(d[i]);
    return SymMatF(std::move(m));
}

SymMatF SymMatF::rational(const NumberField& f, int n, const std::vector<Rational>& rows)
{
    if (rows.size() != idx(n * n))
        throw ValidationError("expected n*n entries");
    MatF m(idx(n), idx(n), f.zero());
    for (std::size_t i = 0; i < idx(n); ++i)
        for (std::size_t k = 0; k < idx(n); ++k)
            m(i, k) = f.from_rational(rows[i * idx(n) + k]);
    return SymMatF(std::move(m));
}

bool SymMatF::is_zero() const
{
    for (const auto& x : m_.data())
        if (!x.is_zero())
            return false;
    return true;
}

SymMatF SymMatF::conjugate(const MatF& eps) const { return SymMatF(eps * m_ * eps.transpose()); }

SymMatF operator*(const Rational& s, const SymMatF& a)
{
    MatF m = a.m_;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k)
            m(i, k) *= s;
    return SymMatF(std::move(m));
}

SymMatF block_diagonal(const SymMatF& a, const SymMatF& b)
{
    const std::size_t n1 = idx(a.n()), n2 = idx(b.n());
    MatF m(n1 + n2, n1 + n2, a.field().zero());
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t k = 0; k < n1; ++k)
            m(i, k) = a.mat()(i, k);
    for (std::size_t i = 0; i < n2; ++i)
        for (std::size_t k = 0; k < n2; ++k)
            m(n1 + i, n1 + k) = b.mat()(i, k);
    return SymMatF(std::move(m));
}

bool is_totally_psd(const SymMatF& t) { return minors_nonnegative(t.mat(), false); }
bool is_totally_pd(const SymMatF& t) { return minors_nonnegative(t.mat(), true); }

Rational height(const SymMatF& t)
{
    if (!is_totally_psd(t))
        throw ValidationError("height is only defined on totally positive semidefinite matrices");
    Rational h(0);
    for (int i = 0; i < t.n(); ++i)
        h += trace(t(i, i));
    return h;
}

// ConeKey -----------------------------------------------------------------------

ConeKey operator+(const ConeKey& a, const ConeKey& b)
{
    ConeKey r{a.h + b.h, a.c};
    for (std::size_t i = 0; i < r.c.size(); ++i)
        r.c[i] += b.c[i];
    return r;
}

ConeKey operator-(const ConeKey& a, const ConeKey& b)
{
    ConeKey r{a.h - b.h, a.c};
    for (std::size_t i = 0; i < r.c.size(); ++i)
        r.c[i] -= b.c[i];
    return r;
}

std::size_t ConeKeyHash::operator()(const ConeKey& k) const
{
    std::size_t h = std::hash<std::int64_t>{}(k.h);
    for (auto x : k.c)
        h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

// ConeLattice -------------------------------------------------------------------

ConeLattice::ConeLattice(NumberField f, int n, int nu) : field_(std::move(f)), n_(n), nu_(nu)
{
    if (n < 1)
        throw ValidationError("genus must be >= 1");
    if (nu < 1)
        throw ValidationError("level nu must be >= 1");
    const Integer& disc = field_.discriminant();
    scale_ = 2 * static_cast<std::int64_t>(nu) * disc.get_si();
    dual_basis_ = field_.inverse_different();
    const auto d = idx(field_.degree());
    adj_gram_.assign(d, IntVec(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            adj_gram_[i][j] = checked_int(trace(dual_basis_[i] * dual_basis_[j]) * Rational(disc), "adjugate trace form");
}

bool ConeLattice::in_dual_lattice(const SymMatF& t) const
{
    if (t.n() != n_)
        return false;
    const int d = field_.degree();
    for (int i = 0; i < n_; ++i)
        for (int k = i; k < n_; ++k)
            for (int l = 0; l < d; ++l) {
                const Rational f = (i == k ? nu_ : 2 * nu_) * trace(t(i, k) * field_.basis_element(l));
                if (f.get_den() != 1)
                    return false;
            }
    return true;
}

bool ConeLattice::contains(const SymMatF& t) const { return in_dual_lattice(t) && is_totally_psd(t); }

ConeKey ConeLattice::key(const SymMatF& t) const
{
    if (!in_dual_lattice(t))
        throw ValidationError("matrix is not in the lattice nu^{-1} S_F^vee");
    ConeKey k;
    Rational h(0);
    for (int i = 0; i < n_; ++i)
        h += trace(t(i, i));
    k.h = checked_int(h * nu_, "height is not in nu^{-1} Z");
    k.c.reserve(key_width());
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
            for (const auto& x : t(i, j).coords())
                k.c.push_back(checked_int(x * Rational(scale_), "coordinate exceeds the key scale"));
    return k;
}

SymMatF ConeLattice::matrix(const ConeKey& key) const
{
    const auto d = idx(field_.degree());
    MatF m(idx(n_), idx(n_), field_.zero());
    std::size_t pos = 0;
    for (std::size_t i = 0; i < idx(n_); ++i)
        for (std::size_t j = i; j < idx(n_); ++j) {
            std::vector<Rational> c(d);
            for (std::size_t l = 0; l < d; ++l)
                c[l] = frac(key.c.at(pos++), scale_);
            m(i, j) = field_.from_coords(c);
            m(j, i) = m(i, j);
        }
    return SymMatF(std::move(m));
}

std::vector<FieldElem> ConeLattice::short_dual_elements(const Rational& bound, int den) const
{
    // x = sum c_i b*_i / den has tr(x^2) = c^T G^{-1} c / den^2.
    const Rational scaled = bound * den * den * Rational(field_.discriminant());
    std::vector<FieldElem> out;
    for (const auto& c : enumerate_short(adj_gram_, scaled)) {
        FieldElem x = field_.zero();
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] != 0)
                x += dual_basis_[i] * Rational(static_cast<long>(c[i]));
        out.push_back(x * frac(1, den));
    }
    return out;
}

std::vector<ConeKey> ConeLattice::enumerate(const Rational& b, int jobs) const
{
    if (sgn(b) < 0)
        return {};
    // Diagonal entries: totally nonnegative, trace <= b, hence tr(x^2) <= b^2.
    struct Diag {
        FieldElem x;
        Rational tr;
    };
    std::vector<Diag> diag;
    for (auto& x : short_dual_elements(b * b, nu_)) {
        if (!is_totally_nonnegative(x))
            continue;
        Rational t = trace(x);
        if (t <= b)
            diag.push_back({std::move(x), std::move(t)});
    }
    std::sort(diag.begin(), diag.end(), [](const Diag& a, const Diag& c) { return a.tr < c.tr; });

    std::vector<SymMatF> found;
    if (n_ == 1) {
        for (const auto& e : diag) {
            MatF m(1, 1, e.x);
            found.emplace_back(std::move(m));
        }
    } else {
        // Off-diagonal y with x_ii x_kk - y^2 totally nonnegative, so tr(y^2) <= tr(x_ii x_kk).
        std::map<std::pair<std::size_t, std::size_t>, std::vector<FieldElem>> offdiag;
        auto off_candidates = [&](std::size_t a, std::size_t c) -> const std::vector<FieldElem>& {
            const auto key = std::minmax(a, c);
            auto it = offdiag.find(key);
            if (it != offdiag.end())
                return it->second;
            const FieldElem prod = diag[a].x * diag[c].x;
            std::vector<FieldElem> ys;
            for (auto& y : short_dual_elements(trace(prod), 2 * nu_))
                if (is_totally_nonnegative(prod - y * y))
                    ys.push_back(std::move(y));
            return offdiag.emplace(key, std::move(ys)).first->second;
        };

        std::vector<std::size_t> choice(idx(n_));
        std::vector<std::vector<std::size_t>> diag_tuples;
        std::function<void(int, Rational)> pick = [&](int i, Rational remaining) {
            if (i == n_) {
                diag_tuples.push_back(choice);
                return;
            }
            for (std::size_t a = 0; a < diag.size() && diag[a].tr <= remaining; ++a) {
                choice[idx(i)] = a;
                pick(i + 1, remaining - diag[a].tr);
            }
        };
        pick(0, b);

        std::vector<MatF> candidates;
        for (const auto& tup : diag_tuples) {
            MatF m(idx(n_), idx(n_), field_.zero());
            for (std::size_t i = 0; i < idx(n_); ++i)
                m(i, i) = diag[tup[i]].x;
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            for (std::size_t i = 0; i < idx(n_); ++i)
                for (std::size_t k = i + 1; k < idx(n_); ++k)
                    pairs.emplace_back(i, k);
            std::function<void(std::size_t)> fill = [&](std::size_t p) {
                if (p == pairs.size()) {
                    candidates.push_back(m);
                    return;
                }
                const auto [i, k] = pairs[p];
                for (const auto& y : off_candidates(tup[i], tup[k])) {
                    m(i, k) = y;
                    m(k, i) = y;
                    fill(p + 1);
                }
            };
            fill(0);
        }
        if (n_ == 2) {
            for (auto& m : candidates)
                found.emplace_back(std::move(m));
        } else {
            // The pairwise filter only covers 2x2 minors; finish with the full test.
            const std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
            std::vector<char> ok(candidates.size(), 0);
            auto run = [&](std::size_t w) {
                for (std::size_t i = w; i < candidates.size(); i += workers)
                    ok[i] = minors_nonnegative(candidates[i], false) ? 1 : 0;
            };
            if (workers == 1) {
                run(0);
            } else {
                std::vector<std::thread> pool;
                for (std::size_t w = 0; w < workers; ++w)
                    pool.emplace_back(run, w);
                for (auto& t : pool)
                    t.join();
            }
            for (std::size_t i = 0; i < candidates.size(); ++i)
                if (ok[i])
                    found.emplace_back(std::move(candidates[i]));
        }
    }

    std::vector<ConeKey> keys;
    keys.reserve(found.size());
    for (const auto& t : found)
        keys.push_back(key(t));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

Rational ConeLattice::minimal_height() const
{
    // nu^{-1} * (the identity) is a cone point, so the search terminates by height n.
    for (int k = 1;; ++k) {
        const Rational b = frac(k, nu_);
        const auto pts = enumerate(b);
        if (pts.size() > 1)
            return height(pts[1]);
    }
}

// Lambda --------------------------------------------------------------------------

void validate_lambda_generator(const ConeLattice& cl, const MatF& eps)
{
    const auto n = idx(cl.n());
    if (eps.rows() != n || eps.cols() != n)
        throw ValidationError("unit generator has the wrong size");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (!(eps(i, k).field() == cl.field()))
                throw ValidationError("unit generator over the wrong field");
            if (!eps(i, k).is_integral())
                throw ValidationError("unit generator is not in GL_n(O_F)");
            const FieldElem diff = i == k ? eps(i, k) - cl.field().one() : eps(i, k);
            if (!(diff * frac(1, cl.nu())).is_integral())
                throw ValidationError("unit generator is not congruent to 1 mod nu");
        }
    const Rational nd = norm(determinant(eps));
    if (nd != 1 && nd != -1)
        throw ValidationError("unit generator is not invertible over O_F");
}

OrbitInBall symmetrize_orbit(const ConeLattice& cl, const ConeKey& t, const std::vector<MatF>& gens,
                             const Rational& bound)
{
    std::vector<MatF> moves;
    for (const auto& g : gens) {
        validate_lambda_generator(cl, g);
        moves.push_back(g);
        moves.push_back(*inverse(g));
    }
    OrbitInBall res;
    std::set<ConeKey> seen{t};
    std::deque<ConeKey> queue{t};
    bool left_ball = cl.height(t) > bound;
    while (!queue.empty()) {
        const ConeKey cur = queue.front();
        queue.pop_front();
        const SymMatF m = cl.matrix(cur);
        for (const auto& g : moves) {
            const ConeKey next = cl.key(m.conjugate(g));
            if (cl.height(next) > bound) {
                left_ball = true;
                continue;
            }
            if (seen.insert(next).second)
                queue.push_back(next);
        }
    }
    res.orbit.assign(seen.begin(), seen.end());
    res.representative = res.orbit.front();
    res.complete = !left_ball;
    return res;
}

// Standard kernel -------------------------------------------------------------------

Rational certified_min_eigenvalue(const std::vector<std::vector<std::vector<Rational>>>& v)
{
    Rational best;
    bool first = true;
    for (const auto& comp : v) {
        if (!is_positive_definite(comp))
            throw ValidationError("standard kernel test needs positive definite components");
        Rational lo(0);
        Rational hi = comp[0][0];
        for (std::size_t i = 1; i < comp.size(); ++i)
            hi = std::min(hi, comp[i][i]);
        for (int step = 0; step < 48; ++step) {
            const Rational mid = (lo + hi) / 2;
            auto shifted = comp;
            for (std::size_t i = 0; i < shifted.size(); ++i)
                shifted[i][i] -= mid;
            if (is_positive_definite(shifted))
                lo = mid;
            else
                hi = mid;
        }
        if (first || lo < best)
            best = lo;
        first = false;
    }
    return best;
}

bool standard_kernel_contains(const ConeLattice& cl, const std::vector<std::vector<std::vector<Rational>>>& v)
{
    const int d = cl.field().degree();
    const auto n = idx(cl.n());
    if (v.size() != idx(d))
        throw ValidationError("expected one matrix per real embedding");
    for (const auto& comp : v) {
        if (comp.size() != n)
            throw ValidationError("component has the wrong size");
        for (std::size_t i = 0; i < n; ++i) {
            if (comp[i].size() != n)
                throw ValidationError("component has the wrong size");
            for (std::size_t k = 0; k < n; ++k)
                if (comp[i][k] != comp[k][i])
                    throw ValidationError("component is not symmetric");
        }
    }
    const Rational lmin = certified_min_eigenvalue(v);
    if (sgn(lmin) <= 0)
        throw ValidationError("could not certify a positive eigenvalue bound");
    // Points with height > 1/lmin pair to at least lmin * height >= 1.
    const bool uniform = std::all_of(v.begin(), v.end(), [&](const auto& c) { return c == v.front(); });
    for (const auto& key : cl.enumerate(Rational(ceil(1 / lmin)))) {
        if (key.is_zero())
            continue;
        const SymMatF x = cl.matrix(key);
        if (uniform) {
            Rational p(0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k)
                    p += trace(x(static_cast<int>(i), static_cast<int>(k))) * v[0][k][i];
            if (p < 1)
                return false;
            continue;
        }
        Rational eps(1, 1024);
        for (int attempt = 0;; ++attempt) {
            Interval p(Rational(0));
            for (int j = 0; j < d; ++j)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t k = 0; k < n; ++k)
                        p = p + v[idx(j)][k][i] * embed(x(static_cast<int>(i), static_cast<int>(k)), j, eps);
            if (p.lo >= 1)
                break;
            if (p.hi < 1)
                return false;
            if (attempt > 24)
                throw ValidationError("standard kernel pairing equals 1 to 2^-250; undecidable by refinement");
            eps /= 1024;
        }
    }
    return true;
}

}  // namespace ffskit
