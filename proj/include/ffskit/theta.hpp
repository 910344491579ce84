#pragma once

#include "ffskit/ffs.hpp"
#include "ffskit/lattice_enum.hpp"
#include "ffskit/symcone.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace ffskit {

/// A vector of V = F^r in standard coordinates.
using FVec = std::vector<FieldElem>;

/// An O_F-lattice O_F^r with a totally positive definite even bilinear form.
class QuadLattice {
public:
    /// Throws ValidationError unless gram is symmetric, totally positive definite, has
    /// diagonal entries in 2 O_F and off-diagonal entries in O_F. Rank 0 is allowed.
    QuadLattice(NumberField f, MatF gram);
    static QuadLattice rank_zero(NumberField f);

    const NumberField& field() const { return field_; }
    int rank() const { return rank_; }
    const MatF& gram() const { return gram_; }
    /// Rank of the underlying Z-lattice, r d.
    int z_rank() const { return rank_ * field_.degree(); }

    /// Integer Gram of tr_{F/Q}(x, y) on the Z-basis e_i b_k (index i d + k).
    const IntGram& trace_gram() const { return trace_gram_; }
    /// m-th integral-basis coordinate of (x, y) as an integer bilinear form on Z-coordinates.
    const std::vector<IntGram>& coord_forms() const { return coord_forms_; }

    /// (x, y) for vectors in F^r.
    FieldElem pair(const FVec& x, const FVec& y) const;
    /// Q(x) = (x, x) / 2.
    FieldElem q(const FVec& x) const { return pair(x, x) * frac(1, 2); }

    /// x in L^vee, i.e. (x, L) in the inverse different.
    bool in_dual(const FVec& x) const;

    /// Rational Z-coordinates of x (entry i d + k is the b_k coordinate of x_i).
    std::vector<Rational> z_coords(const FVec& x) const;
    FVec from_z_coords(const std::vector<Rational>& c) const;

    friend QuadLattice orthogonal_sum(const QuadLattice& a, const QuadLattice& b);

private:
    NumberField field_;
    int rank_;
    MatF gram_;
    IntGram trace_gram_;
    std::vector<IntGram> coord_forms_;
};

QuadLattice orthogonal_sum(const QuadLattice& a, const QuadLattice& b);

/// mu = (mu_1, ..., mu_n), one vector of L^vee per column; the coset mu + L^n.
using Coset = std::vector<FVec>;

/// The zero coset of genus n.
Coset zero_coset(const QuadLattice& l, int n);

/// Throws ValidationError unless every column of mu lies in L^vee.
void validate_coset(const QuadLattice& l, const Coset& mu);

/// Every Q(x), x in mu + L^n, lies in nu^{-1} S_F^vee.
bool level_is_valid(const QuadLattice& l, const Coset& mu, int nu);
/// The smallest valid nu.
int minimal_level(const QuadLattice& l, const Coset& mu);

/// #{x in mu + L^n : Q(x) = T}. A T that is not totally positive semidefinite has no
/// representations; with strict = true it is rejected instead.
Integer representation_number(const QuadLattice& l, const SymMatF& t, const Coset& mu, bool strict = false,
                              int jobs = 1);
inline Integer representation_number(const QuadLattice& l, const SymMatF& t)
{
    return representation_number(l, t, zero_coset(l, t.n()));
}

/// The theta series sum q^{Q(x)} over x in mu + L^n, truncated at height b, on the cone
/// lattice of level nu (the minimal valid level when nu is empty). Carries a growth model.
FormalSeries<RationalRing> theta_expansion(const QuadLattice& l, const Coset& mu, const Rational& b,
                                           std::optional<int> nu = std::nullopt, int jobs = 1);

/// theta_{L0 + L1} = theta_{L0} theta_{L1} up to height b in genus n.
bool check_orthogonal_sum_factorization(const QuadLattice& l0, const QuadLattice& l1, int n, const Rational& b,
                                        int jobs = 1);

struct DiagonalRestrictionReport {
    Integer lhs;  // sum of r_{n1+n2}(T) over T with diagonal blocks T1, T2
    Integer rhs;  // r_{n1}(T1) r_{n2}(T2)
    std::size_t blocks = 0;  // number of candidate T examined
    bool holds() const { return lhs == rhs; }
};
DiagonalRestrictionReport check_diagonal_restriction(const QuadLattice& l, const SymMatF& t1, const SymMatF& t2);

/// L^vee / L.
struct DiscriminantGroup {
    std::vector<Integer> invariants;  // d_i > 1 with d_1 | d_2 | ...
    std::vector<FVec> generators;     // one of order d_i each
    std::vector<FVec> elements;       // every class, reduced mod L, in a fixed order
    Integer order() const;
};
DiscriminantGroup discriminant_group(const QuadLattice& l);

// Numerics ----------------------------------------------------------------------

using Complex = std::complex<long double>;
using CMatrix = std::vector<std::vector<Complex>>;

/// tau = (tau_1, ..., tau_d), each a complex symmetric n x n matrix with Im tau_j > 0.
struct TauPoint {
    std::vector<CMatrix> tau;
    int n() const { return static_cast<int>(tau.front().size()); }
};

class PrecisionExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decimal digits requested through FFSKIT_PRECISION (default 15). More than long double
/// can deliver raises PrecisionExhausted.
int working_precision();

/// Throws ValidationError when tau is malformed or Im tau_j is not certified positive
/// definite at working precision.
void validate_tau(const TauPoint& tau, int d, int n);

/// Smallest eigenvalue over all Im tau_j (a lower bound).
long double min_imaginary_eigenvalue(const TauPoint& tau);

/// q^T = e(sum_j tr(sigma_j(T) tau_j)).
Complex q_power(const SymMatF& t, const TauPoint& tau);

struct NumericValue {
    Complex value;
    long double tail_bound = 0;      // bound on the omitted terms; infinity if unavailable
    long double rounding_bound = 0;  // floating point error estimate of the partial sum
};
NumericValue numeric_eval(const FormalSeries<RationalRing>& f, const TauPoint& tau);

/// Upper bound for the upper incomplete gamma function Gamma(a, x), or infinity.
long double upper_incomplete_gamma_bound(long double a, long double x);

/// W_T(g'_tau) = prod_j det(v_j)^{(m+2)/4} e(tr(sigma_j(T) tau_j)), principal branch.
Complex whittaker_factor(const SymMatF& t, const TauPoint& tau, int m);
/// N(det v) = prod_j det(Im tau_j).
long double norm_det_imaginary(const TauPoint& tau);

/// tau + beta for beta in Sym_n(F), embedded as sigma_j(beta) in the j-th factor.
TauPoint translate(const TauPoint& tau, const SymMatF& beta);

}  // namespace ffskit
