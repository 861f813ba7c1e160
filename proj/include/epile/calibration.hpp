#pragma once

// Fitting spring stiffnesses (k_b and per-layer k_s) to measured profiles by
// bounded derivative-free minimization of a weighted least-squares misfit.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epile/kernels.hpp"
#include "epile/pile_model.hpp"

namespace epile::calibration {

enum class ObservationKind { displacement, strain, stress, head_displacement };

std::string_view to_string(ObservationKind kind);
/// Throws ValidationError for an unknown name.
ObservationKind parse_kind(std::string_view name);

struct Observation {
    ObservationKind kind = ObservationKind::strain;
    double x = 0.0;     // [m] from the tip; ignored for head_displacement
    double value = 0.0; // SI unit of the kind
    double weight = 1.0;
    std::string load_tag;
};

struct Parameter {
    enum class Target { tip_stiffness, shear_stiffness };
    Target target = Target::tip_stiffness;
    std::size_t layer = 0; // tip-to-head index, for shear_stiffness

    bool operator==(const Parameter&) const = default;
};

struct FreeParameter {
    Parameter parameter;
    double lower = 0.0; // [Pa/m]
    double upper = 0.0; // [Pa/m]
    std::string label;
};

struct FitSpec {
    PileSection pile;
    /// Values of the fixed parameters; free ones are overwritten per trial.
    SoilProfile profile;
    std::map<std::string, LoadCase> loads;
    std::vector<FreeParameter> free;
    std::vector<Observation> observations;
    double tolerance = 1e3;           // absolute parameter tolerance [Pa/m]
    std::size_t max_evaluations = 500;
    Execution execution = Execution::parallel;
};

void validate(const FitSpec& spec);

/// Profile with the free parameters set to params (in FitSpec::free order).
SoilProfile apply_parameters(const FitSpec& spec, std::span<const double> params);

/// sum_i w_i ((model_i - observed_i) / scale_kind)^2 where scale_kind is the
/// largest |observed| among observations of that kind.
double objective(std::span<const double> params, const FitSpec& spec);

struct TraceEntry {
    std::vector<double> params;
    double objective = 0.0;
};

struct FitResult {
    std::vector<double> best;
    double objective = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
    std::string method; // "golden-section", "grid+golden-section" or "nelder-mead"
    std::vector<TraceEntry> trace;
};

/// One free parameter: golden-section search on [lower, upper], with a
/// 64-point grid scan first if the opening probes show the objective is not
/// unimodal. Several: Nelder-Mead on the box scaled to [0, 1]^d, started at
/// the midpoint with edges of 0.1, trial points projected onto the box.
/// Deterministic; every evaluation is recorded in the trace.
FitResult fit(const FitSpec& spec);

} // namespace epile::calibration
