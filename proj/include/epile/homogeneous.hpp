#pragma once

// Closed-form response of a pile in a single soil layer: semi-floating tip
// spring or ideal end bearing, thermal and head-force loads superposed.

#include <cstddef>
#include <span>
#include <vector>

#include "epile/kernels.hpp"
#include "epile/pile_model.hpp"

namespace epile {

class HomogeneousCase {
public:
    /// Validates the inputs and requires psi * L <= kMaxPsiLength. The layer
    /// thickness must match the pile length.
    HomogeneousCase(PileSection pile, SoilLayer layer, TipStiffness tip, LoadCase load);

    const PileSection& pile() const { return pile_; }
    const SoilLayer& layer() const { return layer_; }
    const TipStiffness& tip() const { return tip_; }
    const LoadCase& load() const { return load_; }
    double psi() const { return psi_; }

    /// Same pile, soil and tip with another load.
    HomogeneousCase with_load(LoadCase load) const;

private:
    PileSection pile_;
    SoilLayer layer_;
    TipStiffness tip_;
    LoadCase load_;
    double psi_;
};

/// Convenience: one layer spanning the whole pile.
HomogeneousCase make_homogeneous_case(const PileSection& pile, double shear_stiffness,
                                      TipStiffness tip, LoadCase load);

/// Location x0 of the thermal null point,
///   x0 = atanh[(cosh(psi L) - 1) / (sinh(psi L) + k_b / (E psi))] / psi,
/// and 0 for a rigid tip. Throws SolverError when psi = 0; evaluate() covers
/// that case through the psi -> 0 limit.
double null_point(const HomogeneousCase& c);

/// Thermal and mechanical contributions at x, and their sum.
PointResponse thermal_response(const HomogeneousCase& c, double x);
PointResponse mechanical_response(const HomogeneousCase& c, double x);
PointResponse evaluate(const HomogeneousCase& c, double x);

/// n evenly spaced samples on [0, L] including both ends (n >= 2).
ResponseProfile sample_profile(const HomogeneousCase& c, std::size_t n,
                               Execution exec = Execution::parallel);

/// Head displacement u(L) for each temperature change, keeping the head
/// force of the template.
std::vector<double> head_displacement_series(const HomogeneousCase& tmpl,
                                             std::span<const double> delta_t_series);

} // namespace epile
