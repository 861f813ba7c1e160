#pragma once

// Pile in n stacked soil layers. Within layer i the displacement is
//   u_i(xi) = a_i cosh(psi_i xi) + b_i sinh(psi_i xi),   xi in [0, h_i],
// with xi measured from the layer bottom. Displacement and axial stress are
// continuous across interfaces; with uniform E and alpha dT the latter means
// du/dx is continuous too.
//
// Solution method: the tip condition defines a line in the (u, du/dx) state
// plane; the 2x2 layer transfer matrix
//   [[cosh(psi h), sinh(psi h)/psi], [psi sinh(psi h), cosh(psi h)]]
// carries that line up through each layer. The head condition is carried
// down the same way. The state at each interface is the intersection of the
// two lines, and each layer is then reconstructed from its two end
// displacements, so no hyperbolic argument exceeds psi_i h_i.

#include <cstddef>
#include <vector>

#include "epile/kernels.hpp"
#include "epile/pile_model.hpp"

namespace epile {

class LayeredCase {
public:
    /// Validates the pairing and requires psi_i h_i <= kMaxPsiLength.
    LayeredCase(PileSection pile, SoilProfile profile, LoadCase load);

    const PileSection& pile() const { return pile_; }
    const SoilProfile& profile() const { return profile_; }
    const LoadCase& load() const { return load_; }
    std::size_t layer_count() const { return profile_.layers.size(); }
    /// psi of each layer, tip to head.
    const std::vector<double>& psis() const { return psis_; }
    /// {0, z_1, ..., L}
    const std::vector<double>& interfaces() const { return interfaces_; }

    LayeredCase with_load(LoadCase load) const;
    LayeredCase with_profile(SoilProfile profile) const;

    /// Index of the layer containing x; an interface belongs to the layer
    /// below it.
    std::size_t layer_at(double x) const;

private:
    PileSection pile_;
    SoilProfile profile_;
    LoadCase load_;
    std::vector<double> psis_;
    std::vector<double> interfaces_;
};

/// Solution inside one layer, stored as its end states.
struct LayerSolution {
    double psi = 0.0;
    double thickness = 0.0;
    double bottom_u = 0.0;
    double bottom_slope = 0.0;
    double top_u = 0.0;
    double top_slope = 0.0;

    /// Coefficients of u = a cosh(psi xi) + b sinh(psi xi). For psi = 0 the
    /// layer is linear and b is reported as the slope.
    double a() const { return bottom_u; }
    double b() const;

    /// (u, du/dx) at local coordinate xi.
    std::pair<double, double> state(double xi) const;
};

struct LayerCoefficients {
    std::vector<LayerSolution> layers; // tip to head
};

/// Throws SolverError when the head and tip conditions do not pin the pile
/// (no shaft springs anywhere and a floating tip).
LayerCoefficients solve_layered(const LayeredCase& c);

/// Response at x. At an interface the lower layer's values are returned; u
/// and the stress are continuous there but the shear jumps with k_s.
PointResponse evaluate_layered(const LayerCoefficients& coeffs, const LayeredCase& c, double x);

/// Response at local coordinate xi of one layer.
PointResponse evaluate_in_layer(const LayerCoefficients& coeffs, const LayeredCase& c,
                                std::size_t layer, double xi);

/// All zeros of u on [0, L]; at most one per layer. Empty for an unloaded
/// pile.
std::vector<double> null_points_layered(const LayerCoefficients& coeffs, const LayeredCase& c);

/// samples_per_layer evenly spaced points in every layer, ends included, so
/// each interior interface appears twice: first with the lower layer's shear,
/// then with the upper layer's.
ResponseProfile sample_layered_profile(const LayeredCase& c, std::size_t samples_per_layer,
                                       Execution exec = Execution::parallel);

/// u(L) for each temperature change, keeping the head force of the template.
std::vector<double> head_displacement_series(const LayeredCase& tmpl,
                                             std::span<const double> delta_t_series);

} // namespace epile
