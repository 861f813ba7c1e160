#include <stdexcept>
#include <string>

#include "epile/scenario.hpp"

namespace epile {

namespace {

constexpr const char* kCentrifuge = R"(# Centrifuge test of an end-bearing energy pile in unsaturated silt,
# prototype-scale values (no g-level scaling is applied).
#
# Pile: length 12.8 m, diameter 1.22 m, Young's modulus 7.17 GPa.
# alpha: the reported 7.5e-6 1/degC is stated next to the soil description;
#   the model needs the coefficient of the pile, and this file uses the
#   reported value for it. Replace it if the pile's own value is known.
# k_s = 55 MPa/m: shaft spring fitted to this test.
# Tip: the pile showed practically zero tip movement, modelled as ideal end
#   bearing (rigid tip spring, null point at the tip).

[pile]
L_m = 12.8
D_m = 1.22
E_pa = 7.17e9
alpha_per_c = 7.5e-6

[soil]
k_b_mpa_per_m = rigid

[layer silt]
h_m = 12.8
k_s_mpa_per_m = 55

[load dT10]
delta_t_c = 10
head_force_kn = 0

[load dT20]
delta_t_c = 20
head_force_kn = 0

[load mech1000]
delta_t_c = 0
head_force_kn = -1000

[output]
samples_per_layer = 129
formats = csv
)";

constexpr const char* kLausanne = R"(# Full-scale test pile at EPFL Lausanne in a four-layer profile of low
# plasticity clays and moraines over molasse bedrock.
#
# Reported values used as-is:
#   pile length 26 m;
#   shaft springs 16.7, 10.8, 18.2 and 121.4 MPa/m for layers A1, A2, B, C;
#   tip spring 6675 MPa/m (best fit to the thermal test; the site literature
#   suggested one to two times layer C, 667.7 to 1335.5 MPa/m);
#   load T1: heating by 13.4 degC, no head load;
#   load T7: heating by 14 degC with a 1000 kN compressive head load.
#
# APPROXIMATE, user-supplied (not among the reported values; check against
# the site logs before relying on them):
#   layer thicknesses: only the 26 m total and A1 + B = 15.5 m are fixed;
#     5.5 / 6.5 / 10.0 / 4.0 m is one split consistent with both;
#   pile diameter 0.56 m, Young's modulus 29.2 GPa, alpha 1e-5 1/degC.

[pile]
L_m = 26
D_m = 0.56
E_pa = 29.2e9
alpha_per_c = 1e-5

[soil]
k_b_mpa_per_m = 6675

# layers from the ground surface down
[layer A1]
h_m = 5.5
k_s_mpa_per_m = 16.7

[layer A2]
h_m = 6.5
k_s_mpa_per_m = 10.8

[layer B]
h_m = 10
k_s_mpa_per_m = 18.2

[layer C]
h_m = 4
k_s_mpa_per_m = 121.4

[load T1]
delta_t_c = 13.4
head_force_kn = 0

[load T7]
delta_t_c = 14
head_force_kn = -1000

[output]
samples_per_layer = 65
formats = csv
)";

} // namespace

std::vector<std::string> shipped_scenario_names() {
    return {"centrifuge", "lausanne"};
}

std::string shipped_scenario(std::string_view name) {
    if (name == "centrifuge") return kCentrifuge;
    if (name == "lausanne") return kLausanne;
    throw std::out_of_range("unknown shipped scenario '" + std::string(name) +
                            "' (available: centrifuge, lausanne)");
}

} // namespace epile
