#pragma once

// Comparison of the finite-difference oracle against the analytic solvers,
// plus the integral checks used by the test suites.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epile/homogeneous.hpp"
#include "epile/layered.hpp"
#include "epile/pile_model.hpp"

namespace epile::verify {

using Reference = std::function<PointResponse(double)>;

/// Analytic response for a pile/profile/load: the closed form for a single
/// layer, the layered solver otherwise (or always, with force_layered).
Reference analytic_reference(const PileSection& pile, const SoilProfile& profile,
                             const LoadCase& load, bool force_layered = false);

struct FieldErrors {
    double u = 0.0;
    double strain = 0.0;
    double stress = 0.0;

    double max() const;
};

/// max_i |candidate_i - ref(x_i)| / max_i |ref(x_i)| per field. A field whose
/// reference is identically zero is compared in absolute terms.
FieldErrors relative_linf(const ResponseProfile& candidate, const Reference& reference);

struct ConvergenceResult {
    double order = 0.0;
    std::vector<std::size_t> sizes;
    std::vector<double> spacings;
    std::vector<double> errors;
    std::optional<std::string> warning;
};

/// Least-squares slope of log(error) against log(L / (n - 1)) over the FD
/// solutions for the given node counts; error is FieldErrors::max() against
/// the analytic reference. Needs >= 3 sizes, each at least double the last.
ConvergenceResult observed_convergence_order(const PileSection& pile, const SoilProfile& profile,
                                             const LoadCase& load,
                                             std::span<const std::size_t> sizes);

/// Composite Simpson rule with an even number of intervals (rounded up).
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t intervals);

/// A sigma(top) - A sigma(bottom) + p * integral(tau) over one stretch of
/// pile, with the scale it should be compared against.
struct EquilibriumCheck {
    double residual = 0.0;
    double scale = 0.0;

    double relative() const { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }
};

EquilibriumCheck global_equilibrium(const HomogeneousCase& c, std::size_t intervals = 1000);

/// One entry per layer followed by the whole-pile balance.
std::vector<EquilibriumCheck> layered_equilibrium(const LayeredCase& c,
                                                  std::size_t intervals_per_layer = 1000);

} // namespace epile::verify
