#pragma once

#include "ffskit/rational.hpp"

#include <compare>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ffskit {

class FieldElem;

/// A totally real number field given by a monic integer minimal polynomial and
/// a user-supplied integral basis (rows are power-basis coordinates).
///
/// Embeddings are indexed by the increasing order of the real roots of the
/// minimal polynomial; each is tracked by a rational isolating interval.
/// Instances are cheap handles onto immutable shared data.
class NumberField {
public:
    /// Validates the data; throws ValidationError on any violated invariant.
    static NumberField create(std::vector<Integer> min_poly, std::vector<std::vector<Rational>> integral_basis,
                              std::vector<Interval> isolators = {});

    /// The rationals, presented as Q(theta) with theta a root of x.
    static NumberField rationals();
    /// Q(sqrt 5) via x^2 - x - 1 with integral basis {1, phi}.
    static NumberField golden();

    int degree() const { return data_->degree; }
    const Polynomial& min_poly() const { return data_->min_poly; }
    const std::vector<Integer>& min_poly_coeffs() const { return data_->min_poly_ints; }
    /// Rows: integral basis elements in power-basis coordinates.
    const std::vector<std::vector<Rational>>& integral_basis() const { return data_->basis; }
    const std::vector<Interval>& isolators() const { return data_->isolators; }
    /// det(tr(b_i b_j)).
    const Integer& discriminant() const { return data_->discriminant; }
    /// tr(b_i b_j) for the integral basis.
    const std::vector<std::vector<Integer>>& trace_gram() const { return data_->trace_gram; }
    /// tr(b_i) for the integral basis.
    const std::vector<Rational>& basis_traces() const { return data_->basis_traces; }

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem from_rational(const Rational& q) const;
    FieldElem from_coords(std::vector<Rational> coords) const;
    /// The element with power-basis coordinates `coeffs` (a polynomial in theta).
    FieldElem from_power_basis(const std::vector<Rational>& coeffs) const;
    /// i-th integral basis element.
    FieldElem basis_element(int i) const;
    /// The generator theta.
    FieldElem generator() const;

    /// A Z-basis of the inverse different, {x : tr(x O_F) in Z}.
    std::vector<FieldElem> inverse_different() const;

    /// Real value of the j-th embedding of the i-th integral basis element (~64 bits).
    long double basis_embedding(int i, int j) const { return data_->basis_embeddings[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]; }

    bool same_as(const NumberField& other) const;
    friend bool operator==(const NumberField& a, const NumberField& b) { return a.same_as(b); }

private:
    struct Data {
        int degree = 0;
        std::vector<Integer> min_poly_ints;
        Polynomial min_poly;
        std::vector<std::vector<Rational>> basis;
        std::vector<std::vector<Rational>> basis_inverse;
        // structure[i][j][k]: coordinate k of b_i * b_j.
        std::vector<std::vector<std::vector<Rational>>> structure;
        std::vector<Rational> basis_traces;
        std::vector<std::vector<Integer>> trace_gram;
        Integer discriminant;
        std::vector<Interval> isolators;
        std::vector<std::vector<long double>> basis_embeddings;
        std::vector<Rational> one_coords;
    };
    explicit NumberField(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

    std::shared_ptr<const Data> data_;
    friend class FieldElem;
};

/// An element of a NumberField, stored as rational coordinates in the integral basis.
class FieldElem {
public:
    FieldElem(NumberField field, std::vector<Rational> coords);

    const NumberField& field() const { return field_; }
    const std::vector<Rational>& coords() const { return coords_; }
    /// Coordinates in the power basis 1, theta, ..., theta^{d-1}.
    std::vector<Rational> power_coords() const;

    bool is_zero() const;
    bool is_integral() const;
    bool is_rational() const;
    /// The rational value when is_rational().
    Rational rational_value() const;

    FieldElem inverse() const;

    FieldElem& operator+=(const FieldElem& o);
    FieldElem& operator-=(const FieldElem& o);
    FieldElem& operator*=(const FieldElem& o);
    FieldElem& operator*=(const Rational& s);
    friend FieldElem operator+(FieldElem a, const FieldElem& b) { return a += b; }
    friend FieldElem operator-(FieldElem a, const FieldElem& b) { return a -= b; }
    friend FieldElem operator*(FieldElem a, const FieldElem& b) { return a *= b; }
    friend FieldElem operator*(FieldElem a, const Rational& s) { return a *= s; }
    friend FieldElem operator*(const Rational& s, FieldElem a) { return a *= s; }
    friend FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inverse(); }
    FieldElem operator-() const;

    friend bool operator==(const FieldElem& a, const FieldElem& b) { return a.coords_ == b.coords_; }
    /// Lexicographic on coordinates; used for canonical orderings only.
    friend std::strong_ordering operator<=>(const FieldElem& a, const FieldElem& b);

private:
    void check_same_field(const FieldElem& o) const;

    NumberField field_;
    std::vector<Rational> coords_;
};

// Free operations -----------------------------------------------------------

/// Rational interval of width < eps containing sigma_j(alpha) (j is 0-based).
Interval embed(const FieldElem& alpha, int j, const Rational& eps);
/// Exact sign of sigma_j(alpha).
int embedding_sign(const FieldElem& alpha, int j);
bool is_totally_positive(const FieldElem& alpha);
bool is_totally_nonnegative(const FieldElem& alpha);
Rational trace(const FieldElem& alpha);
Rational norm(const FieldElem& alpha);
/// d x d matrix of multiplication by alpha in the integral basis (columns are images).
std::vector<std::vector<Rational>> multiplication_matrix(const FieldElem& alpha);

/// Approximate real embedding sigma_j(alpha) from the cached basis embeddings.
long double embed_approx(const FieldElem& alpha, int j);

/// The rational value when d = 1, otherwise the basis coordinates as "[c_0, ..., c_{d-1}]".
std::string to_string(const FieldElem& alpha);

}  // namespace ffskit
