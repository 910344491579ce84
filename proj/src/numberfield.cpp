#include "ffskit/numberfield.hpp"

#include "ffskit/linalg.hpp"

#include <cmath>

namespace ffskit {

namespace {

// Width below which cached isolators are kept; embeddings then carry ~64 bits.
const Rational& cache_width()
{
    static const Rational w(Integer(1), Integer(1) << 72);
    return w;
}

Polynomial reduce_mod(const Polynomial& p, const Polynomial& f) { return p.degree() < f.degree() ? p : p % f; }

std::vector<Rational> to_vector(const Polynomial& p, int d)
{
    std::vector<Rational> v(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        v[static_cast<std::size_t>(i)] = p.coeff(i);
    return v;
}

bool all_integral(const std::vector<Rational>& v)
{
    for (const auto& x : v)
        if (x.get_den() != 1)
            return false;
    return true;
}

bool has_rational_root(const std::vector<Integer>& f)
{
    // Monic integer polynomial: rational roots are integer divisors of f(0).
    const Integer c0 = f.front();
    if (c0 == 0)
        return true;
    Integer m = c0 < 0 ? Integer(-c0) : c0;
    auto eval = [&](const Integer& x) {
        Integer acc = 0;
        for (auto it = f.rbegin(); it != f.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    };
    for (Integer k = 1; k * k <= m; ++k) {
        if (m % k != 0)
            continue;
        for (const Integer& c : {Integer(k), Integer(m / k)})
            if (eval(c) == 0 || eval(-c) == 0)
                return true;
    }
    return false;
}

}  // namespace

NumberField NumberField::create(std::vector<Integer> min_poly, std::vector<std::vector<Rational>> integral_basis,
                                std::vector<Interval> isolators)
{
    auto data = std::make_shared<Data>();
    if (min_poly.size() < 2)
        throw ValidationError("minimal polynomial must have degree >= 1");
    if (min_poly.back() != 1)
        throw ValidationError("minimal polynomial must be monic");
    const int d = static_cast<int>(min_poly.size()) - 1;
    data->degree = d;
    data->min_poly_ints = min_poly;
    {
        std::vector<Rational> c;
        for (const auto& z : min_poly)
            c.emplace_back(z);
        data->min_poly = Polynomial(std::move(c));
    }
    const Polynomial& f = data->min_poly;

    if (gcd(f, f.derivative()).degree() > 0)
        throw ValidationError("minimal polynomial is not squarefree");
    if (d >= 2 && has_rational_root(min_poly))
        throw ValidationError("minimal polynomial has a rational root, so it is reducible");
    const SturmSequence sturm(f);
    if (sturm.variations_at_minus_infinity() - sturm.variations_at_plus_infinity() != d)
        throw ValidationError("minimal polynomial is not totally real");

    if (integral_basis.size() != static_cast<std::size_t>(d))
        throw ValidationError("integral basis must have d rows");
    Matrix<Rational> basis(static_cast<std::size_t>(d), static_cast<std::size_t>(d), Rational(0));
    for (int i = 0; i < d; ++i) {
        if (integral_basis[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(d))
            throw ValidationError("integral basis must be d x d");
        for (int j = 0; j < d; ++j)
            basis(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = integral_basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    auto inv = inverse(basis);
    if (!inv)
        throw ValidationError("integral basis is singular");
    data->basis = integral_basis;
    data->basis_inverse.assign(static_cast<std::size_t>(d), std::vector<Rational>(static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            data->basis_inverse[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (*inv)(static_cast<std::size_t>(i), static_cast<std::size_t>(j));

    // Power-basis vector -> integral-basis coordinates: x = c^T B, so c = x B^{-1}.
    auto to_integral = [&](const std::vector<Rational>& power) {
        std::vector<Rational> c(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i)
                c[static_cast<std::size_t>(j)] += power[static_cast<std::size_t>(i)] * data->basis_inverse[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        return c;
    };

    data->structure.assign(static_cast<std::size_t>(d), std::vector<std::vector<Rational>>(static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Polynomial prod = Polynomial(integral_basis[static_cast<std::size_t>(i)]) * Polynomial(integral_basis[static_cast<std::size_t>(j)]);
            auto c = to_integral(to_vector(reduce_mod(prod, f), d));
            if (!all_integral(c))
                throw ValidationError("integral basis is not closed under multiplication");
            data->structure[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(c);
        }
    {
        std::vector<Rational> one_power(static_cast<std::size_t>(d));
        one_power[0] = 1;
        data->one_coords = to_integral(one_power);
        if (!all_integral(data->one_coords))
            throw ValidationError("integral basis does not span 1");
        for (int k = 1; k < d; ++k) {
            std::vector<Rational> theta_k(static_cast<std::size_t>(d));
            theta_k[static_cast<std::size_t>(k)] = 1;
            if (!all_integral(to_integral(theta_k)))
                throw ValidationError("integral basis does not contain Z[theta]");
        }
    }

    data->basis_traces.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        Rational t(0);
        for (int j = 0; j < d; ++j)
            t += data->structure[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
        data->basis_traces[static_cast<std::size_t>(i)] = t;
    }
    auto trace_of = [&](const std::vector<Rational>& coords) {
        Rational t(0);
        for (int i = 0; i < d; ++i)
            t += coords[static_cast<std::size_t>(i)] * data->basis_traces[static_cast<std::size_t>(i)];
        return t;
    };
    Matrix<Rational> tg(static_cast<std::size_t>(d), static_cast<std::size_t>(d), Rational(0));
    data->trace_gram.assign(static_cast<std::size_t>(d), std::vector<Integer>(static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const Rational t = trace_of(data->structure[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            tg(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = t;
            data->trace_gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = t.get_num();
        }
    const Rational disc = determinant(tg);
    data->discriminant = disc.get_num();

    // disc(Z[theta]) = disc(O) * [O : Z[theta]]^2 with an integral index.
    {
        Matrix<Rational> pg(static_cast<std::size_t>(d), static_cast<std::size_t>(d), Rational(0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                auto c = to_integral(to_vector(reduce_mod(Polynomial::monomial(1, i + j), f), d));
                pg(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = trace_of(c);
            }
        const Rational ratio = determinant(pg) / disc;
        if (ratio.get_den() != 1 || !mpz_perfect_square_p(ratio.get_num_mpz_t()))
            throw ValidationError("discriminant of the integral basis is inconsistent with the minimal polynomial");
    }

    if (isolators.empty()) {
        isolators = isolate_real_roots(f);
    } else {
        if (isolators.size() != static_cast<std::size_t>(d))
            throw ValidationError("expected one isolator per real embedding");
        for (std::size_t j = 0; j < isolators.size(); ++j) {
            const auto& iv = isolators[j];
            if (iv.hi < iv.lo)
                throw ValidationError("isolator with hi < lo");
            if (sturm.count_roots_closed(iv.lo, iv.hi) != 1)
                throw ValidationError("isolator " + std::to_string(j) + " does not contain exactly one root");
            if (j > 0 && !(isolators[j - 1].hi < iv.lo))
                throw ValidationError("isolators must be disjoint and increasing");
        }
    }
    data->isolators = isolators;

    // Cache tight isolators and float images of the basis for numeric work.
    data->basis_embeddings.assign(static_cast<std::size_t>(d), std::vector<long double>(static_cast<std::size_t>(d)));
    for (int j = 0; j < d; ++j) {
        Interval iv = isolators[static_cast<std::size_t>(j)];
        if (iv.lo != iv.hi && (f.sign_at(iv.lo) == 0 || f.sign_at(iv.hi) == 0)) {
            // Endpoint roots only happen for degenerate inputs; collapse onto the root.
            iv = Interval(f.sign_at(iv.lo) == 0 ? iv.lo : iv.hi);
        }
        while (iv.width() > cache_width())
            iv = bisect_isolator(f, iv);
        for (int i = 0; i < d; ++i) {
            const Interval v = Polynomial(integral_basis[static_cast<std::size_t>(i)])(iv);
            data->basis_embeddings[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = to_long_double(v.midpoint());
        }
        data->isolators[static_cast<std::size_t>(j)] = isolators[static_cast<std::size_t>(j)];
    }
    return NumberField(std::move(data));
}

NumberField NumberField::rationals()
{
    static const NumberField q = create({Integer(0), Integer(1)}, {{Rational(1)}});
    return q;
}

NumberField NumberField::golden()
{
    static const NumberField k =
        create({Integer(-1), Integer(-1), Integer(1)}, {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
    return k;
}

bool NumberField::same_as(const NumberField& other) const
{
    if (data_ == other.data_)
        return true;
    return data_->min_poly_ints == other.data_->min_poly_ints && data_->basis == other.data_->basis;
}

FieldElem NumberField::zero() const { return FieldElem(*this, std::vector<Rational>(static_cast<std::size_t>(degree()))); }
FieldElem NumberField::one() const { return FieldElem(*this, data_->one_coords); }

FieldElem NumberField::from_rational(const Rational& q) const
{
    auto c = data_->one_coords;
    for (auto& x : c)
        x *= q;
    return FieldElem(*this, std::move(c));
}

FieldElem NumberField::from_coords(std::vector<Rational> coords) const { return FieldElem(*this, std::move(coords)); }

FieldElem NumberField::from_power_basis(const std::vector<Rational>& coeffs) const
{
    const int d = degree();
    auto p = to_vector(reduce_mod(Polynomial(coeffs), data_->min_poly), d);
    std::vector<Rational> c(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            c[static_cast<std::size_t>(j)] += p[static_cast<std::size_t>(i)] * data_->basis_inverse[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return FieldElem(*this, std::move(c));
}

FieldElem NumberField::basis_element(int i) const
{
    std::vector<Rational> c(static_cast<std::size_t>(degree()));
    c.at(static_cast<std::size_t>(i)) = 1;
    return FieldElem(*this, std::move(c));
}

FieldElem NumberField::generator() const
{
    std::vector<Rational> p(static_cast<std::size_t>(degree()));
    if (degree() >= 2)
        p[1] = 1;
    else
        p[0] = -Rational(data_->min_poly_ints[0]);
    return from_power_basis(p);
}

std::vector<FieldElem> NumberField::inverse_different() const
{
    const auto d = static_cast<std::size_t>(degree());
    Matrix<Rational> g(d, d, Rational(0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            g(i, j) = data_->trace_gram[i][j];
    const auto ginv = *inverse(g);
    // Dual basis b*_i = sum_j (G^{-1})_{ij} b_j satisfies tr(b*_i b_k) = delta_ik.
    std::vector<FieldElem> out;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<Rational> c(d);
        for (std::size_t j = 0; j < d; ++j)
            c[j] = ginv(i, j);
        out.emplace_back(*this, std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------

FieldElem::FieldElem(NumberField field, std::vector<Rational> coords) : field_(std::move(field)), coords_(std::move(coords))
{
    if (coords_.size() != static_cast<std::size_t>(field_.degree()))
        throw std::invalid_argument("field element has wrong number of coordinates");
    for (auto& c : coords_)
        c.canonicalize();
}

std::vector<Rational> FieldElem::power_coords() const
{
    const auto& basis = field_.data_->basis;
    const auto d = coords_.size();
    std::vector<Rational> p(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (sgn(coords_[i]) == 0)
            continue;
        for (std::size_t j = 0; j < d; ++j)
            p[j] += coords_[i] * basis[i][j];
    }
    return p;
}

bool FieldElem::is_zero() const
{
    for (const auto& x : coords_)
        if (sgn(x) != 0)
            return false;
    return true;
}

bool FieldElem::is_integral() const { return all_integral(coords_); }

bool FieldElem::is_rational() const
{
    const auto p = power_coords();
    for (std::size_t i = 1; i < p.size(); ++i)
        if (sgn(p[i]) != 0)
            return false;
    return true;
}

Rational FieldElem::rational_value() const { return power_coords().front(); }

FieldElem FieldElem::inverse() const
{
    if (is_zero())
        throw std::domain_error("inverse of zero field element");
    const auto m = multiplication_matrix(*this);
    const auto d = coords_.size();
    Matrix<Rational> a(d, d, Rational(0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            a(i, j) = m[i][j];
    auto x = solve(a, field_.data_->one_coords);
    if (!x)
        throw std::domain_error("field element is a zero divisor");
    return FieldElem(field_, std::move(*x));
}

void FieldElem::check_same_field(const FieldElem& o) const
{
    if (field_.data_ != o.field_.data_ && !field_.same_as(o.field_))
        throw std::invalid_argument("field elements from different fields");
}

FieldElem& FieldElem::operator+=(const FieldElem& o)
{
    check_same_field(o);
    for (std::size_t i = 0; i < coords_.size(); ++i)
        coords_[i] += o.coords_[i];
    return *this;
}

FieldElem& FieldElem::operator-=(const FieldElem& o)
{
    check_same_field(o);
    for (std::size_t i = 0; i < coords_.size(); ++i)
        coords_[i] -= o.coords_[i];
    return *this;
}

FieldElem& FieldElem::operator*=(const FieldElem& o)
{
    check_same_field(o);
    const auto d = coords_.size();
    if (d == 1) {
        // Q presented by x: the basis element squares to itself times the unit coordinate.
        const auto& c = field_.data_->structure[0][0][0];
        coords_[0] *= o.coords_[0] * c;
        return *this;
    }
    std::vector<Rational> out(d);
    const auto& st = field_.data_->structure;
    for (std::size_t i = 0; i < d; ++i) {
        if (sgn(coords_[i]) == 0)
            continue;
        for (std::size_t j = 0; j < d; ++j) {
            if (sgn(o.coords_[j]) == 0)
                continue;
            const Rational ab = coords_[i] * o.coords_[j];
            for (std::size_t k = 0; k < d; ++k)
                if (sgn(st[i][j][k]) != 0)
                    out[k] += ab * st[i][j][k];
        }
    }
    coords_ = std::move(out);
    return *this;
}

FieldElem& FieldElem::operator*=(const Rational& s)
{
    for (auto& x : coords_)
        x *= s;
    return *this;
}

FieldElem FieldElem::operator-() const
{
    FieldElem r(*this);
    for (auto& x : r.coords_)
        x = -x;
    return r;
}

std::strong_ordering operator<=>(const FieldElem& a, const FieldElem& b)
{
    for (std::size_t i = 0; i < a.coords_.size() && i < b.coords_.size(); ++i) {
        const int c = cmp(a.coords_[i], b.coords_[i]);
        if (c != 0)
            return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.coords_.size() <=> b.coords_.size();
}

// ---------------------------------------------------------------------------

namespace {

Interval tight_isolator(const NumberField& f, int j)
{
    Interval iv = f.isolators().at(static_cast<std::size_t>(j));
    const auto& p = f.min_poly();
    if (iv.lo != iv.hi && (p.sign_at(iv.lo) == 0 || p.sign_at(iv.hi) == 0))
        iv = Interval(p.sign_at(iv.lo) == 0 ? iv.lo : iv.hi);
    return iv;
}

}  // namespace

Interval embed(const FieldElem& alpha, int j, const Rational& eps)
{
    if (sgn(eps) <= 0)
        throw std::invalid_argument("embed: eps must be positive");
    const auto& field = alpha.field();
    if (j < 0 || j >= field.degree())
        throw std::out_of_range("embed: embedding index out of range");
    if (alpha.is_zero())
        return Interval(Rational(0));
    const Polynomial p(alpha.power_coords());
    const auto& f = field.min_poly();
    Interval iv = tight_isolator(field, j);
    for (;;) {
        Interval v = p(iv);
        if (v.width() < eps)
            return v;
        iv = bisect_isolator(f, iv);
    }
}

int embedding_sign(const FieldElem& alpha, int j)
{
    const auto& field = alpha.field();
    if (j < 0 || j >= field.degree())
        throw std::out_of_range("embedding_sign: embedding index out of range");
    if (alpha.is_zero())
        return 0;
    const Polynomial p(alpha.power_coords());
    if (p.degree() == 0)
        return sgn(p.leading());
    const auto& f = field.min_poly();
    Interval iv = tight_isolator(field, j);
    bool zero_tested = false;
    for (int step = 0;; ++step) {
        const Interval v = p(iv);
        if (v.excludes_zero())
            return sgn(v.lo);
        if (iv.lo == iv.hi)
            return 0;
        if (!zero_tested && step >= 8) {
            // sigma_j(alpha) = 0 iff theta_j is a common root of p and f.
            const Polynomial g = gcd(p, f);
            if (g.degree() > 0 && SturmSequence(g).count_roots_closed(iv.lo, iv.hi) > 0)
                return 0;
            zero_tested = true;
        }
        iv = bisect_isolator(f, iv);
    }
}

bool is_totally_positive(const FieldElem& alpha)
{
    for (int j = 0; j < alpha.field().degree(); ++j)
        if (embedding_sign(alpha, j) <= 0)
            return false;
    return true;
}

bool is_totally_nonnegative(const FieldElem& alpha)
{
    for (int j = 0; j < alpha.field().degree(); ++j)
        if (embedding_sign(alpha, j) < 0)
            return false;
    return true;
}

Rational trace(const FieldElem& alpha)
{
    const auto& bt = alpha.field().basis_traces();
    Rational t(0);
    for (std::size_t i = 0; i < bt.size(); ++i)
        t += alpha.coords()[i] * bt[i];
    return t;
}

Rational norm(const FieldElem& alpha)
{
    const auto m = multiplication_matrix(alpha);
    const auto d = m.size();
    Matrix<Rational> a(d, d, Rational(0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            a(i, j) = m[i][j];
    return determinant(a);
}

std::vector<std::vector<Rational>> multiplication_matrix(const FieldElem& alpha)
{
    const auto& field = alpha.field();
    const auto d = static_cast<std::size_t>(field.degree());
    std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d));
    for (std::size_t j = 0; j < d; ++j) {
        const FieldElem img = alpha * field.basis_element(static_cast<int>(j));
        for (std::size_t k = 0; k < d; ++k)
            m[k][j] = img.coords()[k];
    }
    return m;
}

long double embed_approx(const FieldElem& alpha, int j)
{
    long double v = 0;
    for (int i = 0; i < alpha.field().degree(); ++i)
        v += to_long_double(alpha.coords()[static_cast<std::size_t>(i)]) * alpha.field().basis_embedding(i, j);
    return v;
}

}  // namespace ffskit

namespace ffskit {

std::string to_string(const FieldElem& alpha)
{
    if (alpha.field().degree() == 1)
        return to_string(alpha.coords()[0]);
    std::string out = "[";
    for (std::size_t i = 0; i < alpha.coords().size(); ++i) {
        if (i > 0)
            out += ", ";
        out += to_string(alpha.coords()[i]);
    }
    return out + "]";
}

}  // namespace ffskit
