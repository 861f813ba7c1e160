#pragma once

// Domain types shared by every solver.
//
// Conventions used throughout the library:
//   * x is measured upward from the pile tip (x = 0) to the head (x = L).
//   * Tension is positive; a compressive head load has F < 0.
//   * Interface shear is tau = -k_s * u, the upward-positive shear the soil
//     applies to the pile, so that A * dsigma/dx + p * tau = 0.
//   * Everything is SI internally: m, Pa, N, degC, springs in Pa/m.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace epile {

/// Invalid input data (non-positive length, mismatched layer stack, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The model has no (unique) solution or cannot be evaluated in double
/// precision for the given inputs.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A query point lies outside [0, L].
class DomainError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Largest psi * length accepted by the hyperbolic solvers. cosh(350) is
/// about 5e151, which keeps products with spring stiffnesses finite.
inline constexpr double kMaxPsiLength = 350.0;

struct PileSection {
    double length = 0.0;            // L  [m]
    double diameter = 0.0;          // D  [m]
    double area = 0.0;              // A  [m^2]
    double perimeter = 0.0;         // p  [m]
    double young_modulus = 0.0;     // E  [Pa]
    double thermal_expansion = 0.0; // alpha [1/degC]

    /// p / A [1/m]
    double shape_factor() const { return perimeter / area; }

    bool operator==(const PileSection&) const = default;
};

/// Circular section: A = pi D^2 / 4, p = pi D.
PileSection make_circular_pile(double length, double diameter, double young_modulus,
                               double thermal_expansion);

void validate(const PileSection& pile);

struct SoilLayer {
    double thickness = 0.0;       // h   [m]
    double shear_stiffness = 0.0; // k_s [Pa/m]; 0 means a free-standing segment
    std::string name;

    bool operator==(const SoilLayer&) const = default;
};

void validate(const SoilLayer& layer);

/// Tip spring k_b. "Rigid" (ideal end bearing, k_b -> infinity) is its own
/// state rather than a large number so the end-bearing formulas apply exactly.
class TipStiffness {
public:
    static TipStiffness rigid() { return TipStiffness{}; }
    static TipStiffness spring(double stiffness);

    bool is_rigid() const { return !value_.has_value(); }
    /// Finite k_b in Pa/m. Throws std::logic_error when rigid.
    double value() const;

    bool operator==(const TipStiffness&) const = default;

private:
    TipStiffness() = default;
    std::optional<double> value_;
};

/// Layers ordered from the tip upward (increasing x).
struct SoilProfile {
    std::vector<SoilLayer> layers;
    TipStiffness tip = TipStiffness::rigid();

    bool operator==(const SoilProfile&) const = default;
};

struct LoadCase {
    double delta_t = 0.0;    // pile temperature change relative to the soil [degC]
    double head_force = 0.0; // F [N], tension positive

    bool operator==(const LoadCase&) const = default;
};

void validate(const LoadCase& load);

struct PsiFactors {
    double geometric; // xi_g = p / A
    double soil;      // xi_s = k_s / E
    double psi;       // sqrt(xi_g * xi_s)
};

PsiFactors psi_factors(const PileSection& pile, const SoilLayer& layer);
double psi(const PileSection& pile, const SoilLayer& layer);

/// Checks that the layer thicknesses add up to the pile length (within
/// 1e-9 L) and returns the interface coordinates {0, z_1, ..., L} measured
/// from the tip. The last entry is exactly L.
std::vector<double> validate_pairing(const PileSection& pile, const SoilProfile& profile);

/// Response at a single point.
struct PointResponse {
    double u = 0.0;      // axial displacement [m], upward positive
    double strain = 0.0; // du/dx
    double stress = 0.0; // E (strain - alpha dT) [Pa]
    double shear = 0.0;  // -k_s u [Pa]
};

struct Sample {
    double x = 0.0;
    double u = 0.0;
    double strain = 0.0;
    double stress = 0.0;
    double shear = 0.0;
};

/// Sampled response along the pile. Samples are ordered by x over [0, L];
/// layered profiles repeat the x of each interior interface once per side
/// because the shear is double-valued there.
struct ResponseProfile {
    std::vector<Sample> samples;
    /// Zero of the thermal part of u, when there is a thermal load.
    std::optional<double> thermal_null_point;
    /// Zeros of the total displacement.
    std::vector<double> null_points;
    std::string solver;
    std::string case_tag;
};

} // namespace epile
