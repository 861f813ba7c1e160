#include "epile/pile_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace epile {

namespace {

void require_positive(double value, const char* field) {
    if (!(std::isfinite(value) && value > 0.0)) {
        std::ostringstream msg;
        msg << field << " must be positive and finite (got " << value << ")";
        throw ValidationError(msg.str());
    }
}

void require_finite(double value, const char* field) {
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << field << " must be finite (got " << value << ")";
        throw ValidationError(msg.str());
    }
}

} // namespace

PileSection make_circular_pile(double length, double diameter, double young_modulus,
                               double thermal_expansion) {
    require_positive(length, "length");
    require_positive(diameter, "diameter");
    require_positive(young_modulus, "young_modulus");
    require_finite(thermal_expansion, "thermal_expansion");

    PileSection pile;
    pile.length = length;
    pile.diameter = diameter;
    pile.area = std::numbers::pi * diameter * diameter / 4.0;
    pile.perimeter = std::numbers::pi * diameter;
    pile.young_modulus = young_modulus;
    pile.thermal_expansion = thermal_expansion;
    return pile;
}

void validate(const PileSection& pile) {
    require_positive(pile.length, "length");
    require_positive(pile.diameter, "diameter");
    require_positive(pile.area, "area");
    require_positive(pile.perimeter, "perimeter");
    require_positive(pile.young_modulus, "young_modulus");
    require_finite(pile.thermal_expansion, "thermal_expansion");
}

void validate(const SoilLayer& layer) {
    require_positive(layer.thickness, "thickness");
    if (!(std::isfinite(layer.shear_stiffness) && layer.shear_stiffness >= 0.0)) {
        std::ostringstream msg;
        msg << "shear_stiffness must be finite and >= 0 (got " << layer.shear_stiffness << ")";
        throw ValidationError(msg.str());
    }
}

void validate(const LoadCase& load) {
    require_finite(load.delta_t, "delta_t");
    require_finite(load.head_force, "head_force");
}

TipStiffness TipStiffness::spring(double stiffness) {
    if (!(std::isfinite(stiffness) && stiffness >= 0.0)) {
        std::ostringstream msg;
        msg << "tip stiffness must be finite and >= 0, or rigid (got " << stiffness << ")";
        throw ValidationError(msg.str());
    }
    TipStiffness tip;
    tip.value_ = stiffness;
    return tip;
}

double TipStiffness::value() const {
    if (!value_) {
        throw std::logic_error("rigid tip has no finite stiffness");
    }
    return *value_;
}

PsiFactors psi_factors(const PileSection& pile, const SoilLayer& layer) {
    PsiFactors f{};
    f.geometric = pile.perimeter / pile.area;
    f.soil = layer.shear_stiffness / pile.young_modulus;
    f.psi = std::sqrt(f.geometric * f.soil);
    return f;
}

double psi(const PileSection& pile, const SoilLayer& layer) {
    return psi_factors(pile, layer).psi;
}

std::vector<double> validate_pairing(const PileSection& pile, const SoilProfile& profile) {
    validate(pile);
    if (profile.layers.empty()) {
        throw ValidationError("soil profile needs at least one layer");
    }
    std::vector<double> interfaces;
    interfaces.reserve(profile.layers.size() + 1);
    interfaces.push_back(0.0);
    double total = 0.0;
    for (const auto& layer : profile.layers) {
        validate(layer);
        total += layer.thickness;
        interfaces.push_back(total);
    }
    if (std::abs(total - pile.length) > 1e-9 * pile.length) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "layer thicknesses sum to " << total << " m but the pile length is "
            << pile.length << " m";
        throw ValidationError(msg.str());
    }
    interfaces.back() = pile.length;
    for (std::size_t i = 1; i < interfaces.size(); ++i) {
        if (!(interfaces[i] > interfaces[i - 1])) {
            throw ValidationError("layer interfaces are not strictly increasing");
        }
    }
    return interfaces;
}

} // namespace epile
