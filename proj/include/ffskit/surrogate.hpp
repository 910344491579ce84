#pragma once

#include "ffskit/cyclealg.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace ffskit {

/// Finite stand-in for the adelic data: an ambient group A, a normal subgroup G+ of A, a
/// level subgroup K of A, a base frame x0 with pointwise stabilizer H, and a K-invariant
/// weight supported on the orbit A x0.
class SurrogateDatum {
public:
    /// Throws ValidationError on inconsistent data: G+ or K not contained in A, G+ not
    /// normal, H (when supplied) not the pointwise stabilizer of x0, or a weight that is not
    /// K-invariant or not supported on A x0.
    SurrogateDatum(QuadSpace space, const std::vector<MatF>& ambient, const std::vector<MatF>& plus,
                   const std::vector<MatF>& level, Frame base, WeightFunction weight,
                   const std::optional<std::vector<MatF>>& stabilizer = std::nullopt,
                   Neatness policy = Neatness::enforce);

    const QuadSpace& space() const { return space_; }
    const FiniteGroup& ambient() const { return ambient_; }
    const FiniteGroup& plus() const { return plus_; }
    const FiniteGroup& level() const { return level_; }
    const FiniteGroup& stabilizer() const { return stabilizer_; }
    const Frame& base() const { return base_; }
    const WeightFunction& weight() const { return weight_; }
    Neatness policy() const { return policy_; }

private:
    QuadSpace space_;
    FiniteGroup ambient_;
    FiniteGroup plus_;
    FiniteGroup level_;
    Frame base_;
    WeightFunction weight_;
    FiniteGroup stabilizer_;
    Neatness policy_;
};

/// One (r, eps, j) cell: Gamma_j-orbits on G+ gamma_eps x0 meet g_j K xi_r^{-1} x0 against
/// H+ \ (H meet gamma_eps^{-1} G+ g_j K xi_r^{-1}) / (H meet xi_r K xi_r^{-1}).
struct BijectionCell {
    int r = 0;
    int eps = 0;
    int component = 0;
    std::size_t orbits = 0;
    std::size_t double_cosets = 0;
    bool bijective = false;
};

struct NaturalWeightedReport {
    std::shared_ptr<const OrbitDatum> datum;  // components g_j with Gamma_j = G+ meet g_j K g_j^{-1}
    std::vector<MatF> component_reps;
    CycleClass weighted;
    CycleClass natural;
    std::vector<BijectionCell> cells;
    bool bijective() const;
    bool equal() const { return bijective() && weighted == natural; }
};

NaturalWeightedReport check_natural_vs_weighted(const SurrogateDatum& s);

}  // namespace ffskit
