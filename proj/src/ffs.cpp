#include "ffskit/ffs.hpp"

#include <algorithm>

namespace ffskit {

LambdaTable::LambdaTable(const ConeLattice& cl, const Rational& bound, int jobs)
    : cone_(cl), bound_(bound), points_(cl.enumerate(bound, jobs))
{
    value_.reserve(points_.size());
    for (const auto& t : points_) {
        if (t.is_zero())
            continue;
        int best = 1;
        for (const auto& x : points_) {
            if (2 * x.h > t.h)
                break;
            if (x.is_zero())
                continue;
            const auto it = value_.find(t - x);
            if (it != value_.end())
                best = std::max(best, value_.at(x) + it->second);
        }
        value_.emplace(t, best);
    }
}

int LambdaTable::operator()(const ConeKey& t) const
{
    if (t.is_zero())
        throw ValidationError("lambda is undefined at T = 0");
    const auto it = value_.find(t);
    if (it == value_.end())
        throw ValidationError("point is not a cone point inside the lambda table");
    return it->second;
}

int lambda(const ConeLattice& cl, const SymMatF& t)
{
    if (!cl.contains(t))
        throw ValidationError("lambda needs a point of the cone lattice");
    return LambdaTable(cl, height(t)).at(t);
}

std::pair<SymMatF, SymMatF> diagonal_blocks(const SymMatF& t, int n1)
{
    const auto a = static_cast<std::size_t>(n1);
    const auto n = static_cast<std::size_t>(t.n());
    MatF m1(a, a, t(0, 0));
    MatF m2(n - a, n - a, t(0, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (i < a && k < a)
                m1(i, k) = t.mat()(i, k);
            else if (i >= a && k >= a)
                m2(i - a, k - a) = t.mat()(i, k);
        }
    return {SymMatF(std::move(m1)), SymMatF(std::move(m2))};
}

}  // namespace ffskit
