#pragma once

#include "ffskit/rational.hpp"

#include <cstdint>
#include <vector>

namespace ffskit {

using IntVec = std::vector<std::int64_t>;
using IntGram = std::vector<IntVec>;

/// Exact LLL reduction (delta = 3/4) of a positive definite integer Gram matrix.
/// Returns a unimodular U (columns are the new basis in old coordinates) with U^T G U reduced.
std::vector<IntVec> lll_reduce(const IntGram& gram);

/// All integer vectors s with s = s0 (mod e) and s^T G s <= bound * e^2, i.e. all points
/// x = s/e of the shifted lattice s0/e + Z^N inside the ellipsoid x^T G x <= bound.
///
/// G must be positive definite. Results are sorted lexicographically. `jobs` > 1 splits
/// the outermost coordinate range across threads; the output does not depend on it.
std::vector<IntVec> enumerate_shifted(const IntGram& gram, const IntVec& s0, std::int64_t e, const Rational& bound,
                                      int jobs = 1);

/// Convenience wrapper for the unshifted lattice Z^N.
std::vector<IntVec> enumerate_short(const IntGram& gram, const Rational& bound, int jobs = 1);

/// Exact s^T G t.
__int128 bilinear(const IntGram& gram, const IntVec& s, const IntVec& t);

/// Smith normal form U A V = D of a square integer matrix with U, V unimodular and
/// d_1 | d_2 | ... on the diagonal of D (entries nonnegative).
struct SmithForm {
    std::vector<Integer> diagonal;
    std::vector<std::vector<Integer>> u;
    std::vector<std::vector<Integer>> v;
};
SmithForm smith_normal_form(const std::vector<std::vector<Integer>>& a);

/// Positive definiteness of a rational symmetric matrix by Sylvester's criterion.
bool is_positive_definite(const std::vector<std::vector<Rational>>& m);

}  // namespace ffskit
