#pragma once

// Scenario files: a sectioned key = value text format whose field names carry
// their units. Layers are listed top-down, as in a borehole log, and are
// reversed into tip-up order when converted to a SoilProfile.
//
//   # comment
//   [pile]
//   L_m = 12.8
//   D_m = 1.22
//   E_pa = 7.17e9
//   alpha_per_c = 7.5e-6
//
//   [soil]
//   k_b_mpa_per_m = rigid        # or a number
//
//   [layer silt]                 # one section per layer, top first
//   h_m = 12.8
//   k_s_mpa_per_m = 55
//
//   [load dT20]                  # one section per load case
//   delta_t_c = 20
//   head_force_kn = 0
//
//   [output]
//   samples_per_layer = 129
//   formats = csv

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epile/pile_model.hpp"

namespace epile {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message);
    /// 1-based line number, 0 when the error is not tied to a line.
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct ScenarioLayer {
    std::string name;
    double h_m = 0.0;
    double k_s_mpa_per_m = 0.0;

    bool operator==(const ScenarioLayer&) const = default;
};

struct ScenarioLoad {
    std::string name;
    double delta_t_c = 0.0;
    double head_force_kn = 0.0;

    bool operator==(const ScenarioLoad&) const = default;
};

struct Scenario {
    double L_m = 0.0;
    double D_m = 0.0;
    double E_pa = 0.0;
    double alpha_per_c = 0.0;
    std::vector<ScenarioLayer> layers; // top-down
    std::optional<double> k_b_mpa_per_m; // empty = rigid
    std::vector<ScenarioLoad> loads;
    std::size_t samples_per_layer = 101;
    std::vector<std::string> formats{"csv"};

    bool operator==(const Scenario&) const = default;

    const ScenarioLoad* find_load(std::string_view name) const;
    const ScenarioLayer* find_layer(std::string_view name) const;
    std::vector<std::string> load_names() const;
};

/// Parses and checks the scenario (all required fields present, pile and
/// layers valid, thicknesses summing to L). Throws ParseError.
Scenario parse_scenario(std::string_view text);

/// Canonical text form; numbers use the shortest round-tripping notation.
std::string format_scenario(const Scenario& scenario);

PileSection to_pile(const Scenario& scenario);
/// Tip-up layer order and Pa/m springs.
SoilProfile to_profile(const Scenario& scenario);
/// kN -> N.
LoadCase to_load(const ScenarioLoad& load);

/// Applies "key=value" overrides: k_b_mpa_per_m=<number|rigid> or
/// k_s_mpa_per_m.<layer>=<number>. Throws ParseError.
void apply_override(Scenario& scenario, std::string_view assignment);

/// Shipped scenarios with provenance comments.
std::vector<std::string> shipped_scenario_names();
/// Throws std::out_of_range for an unknown name.
std::string shipped_scenario(std::string_view name);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);
/// 17 significant digits, for numeric tables.
std::string format_full(double value);

} // namespace epile
