#pragma once

#include "ffskit/lattice_enum.hpp"
#include "ffskit/linalg.hpp"
#include "ffskit/numberfield.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

namespace ffskit {

using MatF = Matrix<FieldElem>;

/// Symmetric n x n matrix over a number field.
class SymMatF {
public:
    /// Throws ValidationError when `m` is not square or not symmetric.
    explicit SymMatF(MatF m);
    static SymMatF zero(const NumberField& f, int n);
    static SymMatF identity(const NumberField& f, int n);
    /// Diagonal matrix with rational entries.
    static SymMatF diagonal(const NumberField& f, const std::vector<Rational>& d);
    /// Rational symmetric matrix given row-major.
    static SymMatF rational(const NumberField& f, int n, const std::vector<Rational>& rows);

    int n() const { return static_cast<int>(m_.rows()); }
    const NumberField& field() const { return m_(0, 0).field(); }
    const FieldElem& operator()(int i, int k) const { return m_(static_cast<std::size_t>(i), static_cast<std::size_t>(k)); }
    const MatF& mat() const { return m_; }

    bool is_zero() const;
    /// eps T eps^t.
    SymMatF conjugate(const MatF& eps) const;

    friend SymMatF operator+(const SymMatF& a, const SymMatF& b) { return SymMatF(a.m_ + b.m_); }
    friend SymMatF operator-(const SymMatF& a, const SymMatF& b) { return SymMatF(a.m_ - b.m_); }
    friend SymMatF operator*(const Rational& s, const SymMatF& a);
    friend bool operator==(const SymMatF& a, const SymMatF& b) { return a.m_ == b.m_; }

private:
    MatF m_;
};

/// Block diagonal matrix diag(a, b).
SymMatF block_diagonal(const SymMatF& a, const SymMatF& b);

bool is_totally_psd(const SymMatF& t);
bool is_totally_pd(const SymMatF& t);
/// tr_{F/Q} tr(T); throws ValidationError when T is not totally positive semidefinite.
Rational height(const SymMatF& t);

/// A cone point in integer form: h = nu * height and c = D * (integral-basis coordinates
/// of the upper-triangle entries, row-major) with D = 2 nu disc(F). The defaulted
/// comparison is exactly the canonical order (height, then row-major coordinates).
struct ConeKey {
    std::int64_t h = 0;
    IntVec c;

    friend auto operator<=>(const ConeKey&, const ConeKey&) = default;
    friend bool operator==(const ConeKey&, const ConeKey&) = default;
    friend ConeKey operator+(const ConeKey& a, const ConeKey& b);
    friend ConeKey operator-(const ConeKey& a, const ConeKey& b);
    bool is_zero() const { return h == 0; }
};

struct ConeKeyHash {
    std::size_t operator()(const ConeKey& k) const;
};

/// nu^{-1} S_F^vee, the totally positive semidefinite cone and its lattice points.
class ConeLattice {
public:
    ConeLattice(NumberField f, int n, int nu);

    const NumberField& field() const { return field_; }
    int n() const { return n_; }
    int nu() const { return nu_; }
    /// The coordinate scale D.
    std::int64_t scale() const { return scale_; }
    std::size_t key_width() const { return static_cast<std::size_t>(n_ * (n_ + 1) / 2 * field_.degree()); }

    /// tr_{F/Q} tr(nu T y) in Z for all y in Sym_n(O_F).
    bool in_dual_lattice(const SymMatF& t) const;
    /// in_dual_lattice and totally positive semidefinite.
    bool contains(const SymMatF& t) const;

    /// Integer key of a lattice point; throws ValidationError outside nu^{-1} S_F^vee.
    /// Positivity is not checked here.
    ConeKey key(const SymMatF& t) const;
    SymMatF matrix(const ConeKey& k) const;
    Rational height(const ConeKey& k) const { return frac(k.h, nu_); }
    ConeKey zero_key() const { return ConeKey{0, IntVec(key_width(), 0)}; }

    /// Every point of S^._F union {0} with height <= b, in canonical order.
    std::vector<ConeKey> enumerate(const Rational& b, int jobs = 1) const;
    /// Smallest height of a nonzero cone point.
    Rational minimal_height() const;

    bool same_as(const ConeLattice& o) const { return n_ == o.n_ && nu_ == o.nu_ && field_ == o.field_; }

private:
    /// Elements x of (den)^{-1} delta^{-1} with tr(x^2) <= bound.
    std::vector<FieldElem> short_dual_elements(const Rational& bound, int den) const;

    NumberField field_;
    int n_;
    int nu_;
    std::int64_t scale_;
    IntGram adj_gram_;  // disc * G^{-1}, the trace form on the dual basis scaled to integers
    std::vector<FieldElem> dual_basis_;
};

/// Result of exploring a Lambda-orbit inside a height ball.
struct OrbitInBall {
    std::vector<ConeKey> orbit;  // sorted; includes the starting point
    ConeKey representative;      // canonical minimum
    bool complete = false;       // the ball provably contains the full orbit
};

/// Validates eps in GL_n(O_F) with eps = 1 mod nu O_F; throws ValidationError otherwise.
void validate_lambda_generator(const ConeLattice& cl, const MatF& eps);

/// {eps T eps^t} over the group generated by `gens`, intersected with height <= bound.
OrbitInBall symmetrize_orbit(const ConeLattice& cl, const ConeKey& t, const std::vector<MatF>& gens,
                             const Rational& bound);

/// Certified rational lower bound on the smallest eigenvalue over all components of v
/// (each component rational symmetric positive definite; throws ValidationError otherwise).
Rational certified_min_eigenvalue(const std::vector<std::vector<std::vector<Rational>>>& v);

/// Membership of v = (v_1, ..., v_d) in the standard kernel
/// A = {v : tr_{F/Q} tr(x v) >= 1 for all x in S^._F}.
bool standard_kernel_contains(const ConeLattice& cl, const std::vector<std::vector<std::vector<Rational>>>& v);

}  // namespace ffskit
