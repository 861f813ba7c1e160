#include "epile/scenario.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace epile {

namespace {

std::string_view trim(std::string_view s) {
    const auto not_space = [](char ch) { return !std::isspace(static_cast<unsigned char>(ch)); };
    const auto b = std::find_if(s.begin(), s.end(), not_space);
    const auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
    return b < e ? std::string_view(&*b, static_cast<std::size_t>(e - b)) : std::string_view{};
}

bool valid_name(std::string_view name) {
    return !name.empty() && std::all_of(name.begin(), name.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
    });
}

double parse_double(std::string_view text, std::size_t line, std::string_view key) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw ParseError(line, std::string(key) + ": expected a finite number, got '" +
                                   std::string(text) + "'");
    }
    return value;
}

std::size_t parse_count(std::string_view text, std::size_t line, std::string_view key) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(line, std::string(key) + ": expected a non-negative integer, got '" +
                                   std::string(text) + "'");
    }
    return value;
}

std::optional<double> parse_tip(std::string_view text, std::size_t line) {
    if (text == "rigid") return std::nullopt;
    const double v = parse_double(text, line, "k_b_mpa_per_m");
    if (v < 0.0) throw ParseError(line, "k_b_mpa_per_m must be >= 0 or 'rigid'");
    return v;
}

[[noreturn]] void unknown_key(std::size_t line, std::string_view section, std::string_view key) {
    static const std::map<std::string_view, std::string_view> hints = {
        {"k_s", "k_s_mpa_per_m"}, {"k_b", "k_b_mpa_per_m"}, {"L", "L_m"},
        {"D", "D_m"},            {"E", "E_pa"},           {"alpha", "alpha_per_c"},
        {"h", "h_m"},            {"delta_t", "delta_t_c"}, {"F", "head_force_kn"},
        {"head_force", "head_force_kn"}};
    std::string msg = "unknown field '" + std::string(key) + "' in [" + std::string(section) + "]";
    if (auto it = hints.find(key); it != hints.end()) {
        msg += "; field names carry their unit, did you mean '" + std::string(it->second) + "'?";
    }
    throw ParseError(line, msg);
}

} // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

const ScenarioLoad* Scenario::find_load(std::string_view name) const {
    for (const auto& l : loads) {
        if (l.name == name) return &l;
    }
    return nullptr;
}

const ScenarioLayer* Scenario::find_layer(std::string_view name) const {
    for (const auto& l : layers) {
        if (l.name == name) return &l;
    }
    return nullptr;
}

std::vector<std::string> Scenario::load_names() const {
    std::vector<std::string> names;
    for (const auto& l : loads) names.push_back(l.name);
    return names;
}

Scenario parse_scenario(std::string_view text) {
    Scenario sc;
    enum class Section { none, pile, soil, layer, load, output };
    Section section = Section::none;
    std::string section_label;
    std::map<std::string, std::size_t> seen; // "section/key" -> line
    std::array<bool, 4> pile_set{};
    bool tip_set = false;
    std::vector<std::array<bool, 2>> layer_set;
    std::vector<std::array<bool, 2>> load_set;
    bool pile_seen = false, soil_seen = false, output_seen = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
            const std::string_view inner = trim(line.substr(1, line.size() - 2));
            const auto space = inner.find_first_of(" \t");
            const std::string_view kind = inner.substr(0, space);
            const std::string_view name =
                space == std::string_view::npos ? std::string_view{} : trim(inner.substr(space));
            section_label = std::string(inner);
            if (kind == "pile" || kind == "soil" || kind == "output") {
                if (!name.empty()) {
                    throw ParseError(line_no, "section [" + std::string(kind) + "] takes no name");
                }
                bool& flag = kind == "pile" ? pile_seen : kind == "soil" ? soil_seen : output_seen;
                if (flag) throw ParseError(line_no, "duplicate section [" + std::string(kind) + "]");
                flag = true;
                section = kind == "pile" ? Section::pile
                          : kind == "soil" ? Section::soil
                                           : Section::output;
            } else if (kind == "layer" || kind == "load") {
                if (!valid_name(name)) {
                    throw ParseError(line_no, "section [" + std::string(kind) +
                                                  " NAME] needs a name of letters, digits, '_' or '-'");
                }
                if (kind == "layer") {
                    if (sc.find_layer(name)) {
                        throw ParseError(line_no, "duplicate layer '" + std::string(name) + "'");
                    }
                    sc.layers.push_back(ScenarioLayer{std::string(name), 0.0, 0.0});
                    layer_set.push_back({false, false});
                    section = Section::layer;
                } else {
                    if (sc.find_load(name)) {
                        throw ParseError(line_no, "duplicate load case '" + std::string(name) + "'");
                    }
                    sc.loads.push_back(ScenarioLoad{std::string(name), 0.0, 0.0});
                    load_set.push_back({false, false});
                    section = Section::load;
                }
            } else {
                throw ParseError(line_no, "unknown section [" + std::string(inner) + "]");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "missing key before '='");
        if (value.empty()) throw ParseError(line_no, std::string(key) + ": missing value");
        if (section == Section::none) {
            throw ParseError(line_no, "field '" + std::string(key) + "' outside any section");
        }
        const std::string id = section_label + "/" + std::string(key);
        if (auto it = seen.find(id); it != seen.end()) {
            throw ParseError(line_no, "duplicate field '" + std::string(key) + "' (first set on line " +
                                          std::to_string(it->second) + ")");
        }
        seen.emplace(id, line_no);

        switch (section) {
        case Section::pile:
            if (key == "L_m") { sc.L_m = parse_double(value, line_no, key); pile_set[0] = true; }
            else if (key == "D_m") { sc.D_m = parse_double(value, line_no, key); pile_set[1] = true; }
            else if (key == "E_pa") { sc.E_pa = parse_double(value, line_no, key); pile_set[2] = true; }
            else if (key == "alpha_per_c") { sc.alpha_per_c = parse_double(value, line_no, key); pile_set[3] = true; }
            else unknown_key(line_no, "pile", key);
            break;
        case Section::soil:
            if (key == "k_b_mpa_per_m") { sc.k_b_mpa_per_m = parse_tip(value, line_no); tip_set = true; }
            else unknown_key(line_no, "soil", key);
            break;
        case Section::layer: {
            ScenarioLayer& layer = sc.layers.back();
            if (key == "h_m") { layer.h_m = parse_double(value, line_no, key); layer_set.back()[0] = true; }
            else if (key == "k_s_mpa_per_m") { layer.k_s_mpa_per_m = parse_double(value, line_no, key); layer_set.back()[1] = true; }
            else unknown_key(line_no, "layer", key);
            break;
        }
        case Section::load: {
            ScenarioLoad& load = sc.loads.back();
            if (key == "delta_t_c") { load.delta_t_c = parse_double(value, line_no, key); load_set.back()[0] = true; }
            else if (key == "head_force_kn") { load.head_force_kn = parse_double(value, line_no, key); load_set.back()[1] = true; }
            else unknown_key(line_no, "load", key);
            break;
        }
        case Section::output:
            if (key == "samples_per_layer") {
                sc.samples_per_layer = parse_count(value, line_no, key);
                if (sc.samples_per_layer < 2) throw ParseError(line_no, "samples_per_layer must be >= 2");
            } else if (key == "formats") {
                sc.formats.clear();
                std::string_view rest = value;
                while (!rest.empty()) {
                    const auto comma = rest.find(',');
                    const std::string_view item = trim(rest.substr(0, comma));
                    if (item != "csv") {
                        throw ParseError(line_no, "unsupported output format '" + std::string(item) + "'");
                    }
                    sc.formats.emplace_back(item);
                    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
                }
            } else {
                unknown_key(line_no, "output", key);
            }
            break;
        case Section::none:
            break;
        }
    }

    static constexpr std::array<const char*, 4> pile_keys{"L_m", "D_m", "E_pa", "alpha_per_c"};
    for (std::size_t i = 0; i < pile_keys.size(); ++i) {
        if (!pile_set[i]) throw ParseError(0, std::string("[pile] is missing ") + pile_keys[i]);
    }
    if (!tip_set) throw ParseError(0, "[soil] is missing k_b_mpa_per_m (a number or 'rigid')");
    if (sc.layers.empty()) throw ParseError(0, "scenario needs at least one [layer NAME] section");
    for (std::size_t i = 0; i < sc.layers.size(); ++i) {
        if (!layer_set[i][0]) throw ParseError(0, "[layer " + sc.layers[i].name + "] is missing h_m");
        if (!layer_set[i][1]) {
            throw ParseError(0, "[layer " + sc.layers[i].name + "] is missing k_s_mpa_per_m");
        }
    }
    if (sc.loads.empty()) throw ParseError(0, "scenario needs at least one [load NAME] section");
    for (std::size_t i = 0; i < sc.loads.size(); ++i) {
        if (!load_set[i][0]) throw ParseError(0, "[load " + sc.loads[i].name + "] is missing delta_t_c");
        if (!load_set[i][1]) {
            throw ParseError(0, "[load " + sc.loads[i].name + "] is missing head_force_kn");
        }
    }

    try {
        (void)validate_pairing(to_pile(sc), to_profile(sc));
    } catch (const ValidationError& e) {
        throw ParseError(0, e.what());
    }
    return sc;
}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    (void)ec;
    return std::string(buf.data(), ptr);
}

std::string format_full(double value) {
    if (value == 0.0) value = 0.0; // no "-0" in tables
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", value);
    return std::string(buf.data());
}

std::string format_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "[pile]\n"
        << "L_m = " << format_number(sc.L_m) << "\n"
        << "D_m = " << format_number(sc.D_m) << "\n"
        << "E_pa = " << format_number(sc.E_pa) << "\n"
        << "alpha_per_c = " << format_number(sc.alpha_per_c) << "\n\n"
        << "[soil]\n"
        << "k_b_mpa_per_m = " << (sc.k_b_mpa_per_m ? format_number(*sc.k_b_mpa_per_m) : "rigid")
        << "\n";
    for (const auto& layer : sc.layers) {
        out << "\n[layer " << layer.name << "]\n"
            << "h_m = " << format_number(layer.h_m) << "\n"
            << "k_s_mpa_per_m = " << format_number(layer.k_s_mpa_per_m) << "\n";
    }
    for (const auto& load : sc.loads) {
        out << "\n[load " << load.name << "]\n"
            << "delta_t_c = " << format_number(load.delta_t_c) << "\n"
            << "head_force_kn = " << format_number(load.head_force_kn) << "\n";
    }
    out << "\n[output]\n"
        << "samples_per_layer = " << sc.samples_per_layer << "\n"
        << "formats = ";
    for (std::size_t i = 0; i < sc.formats.size(); ++i) out << (i ? ", " : "") << sc.formats[i];
    out << "\n";
    return out.str();
}

PileSection to_pile(const Scenario& sc) {
    return make_circular_pile(sc.L_m, sc.D_m, sc.E_pa, sc.alpha_per_c);
}

SoilProfile to_profile(const Scenario& sc) {
    SoilProfile profile;
    for (auto it = sc.layers.rbegin(); it != sc.layers.rend(); ++it) {
        profile.layers.push_back(SoilLayer{it->h_m, it->k_s_mpa_per_m * 1e6, it->name});
    }
    profile.tip = sc.k_b_mpa_per_m ? TipStiffness::spring(*sc.k_b_mpa_per_m * 1e6)
                                   : TipStiffness::rigid();
    return profile;
}

LoadCase to_load(const ScenarioLoad& load) {
    return LoadCase{load.delta_t_c, load.head_force_kn * 1e3};
}

void apply_override(Scenario& sc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ParseError(0, "override '" + std::string(assignment) + "' is not of the form key=value");
    }
    const std::string_view key = trim(assignment.substr(0, eq));
    const std::string_view value = trim(assignment.substr(eq + 1));
    if (key == "k_b_mpa_per_m") {
        sc.k_b_mpa_per_m = parse_tip(value, 0);
        return;
    }
    constexpr std::string_view ks_prefix = "k_s_mpa_per_m.";
    if (key.starts_with(ks_prefix)) {
        const std::string_view name = key.substr(ks_prefix.size());
        for (auto& layer : sc.layers) {
            if (layer.name == name) {
                const double v = parse_double(value, 0, key);
                if (v < 0.0) throw ParseError(0, std::string(key) + " must be >= 0");
                layer.k_s_mpa_per_m = v;
                return;
            }
        }
        throw ParseError(0, "override refers to unknown layer '" + std::string(name) + "'");
    }
    throw ParseError(0, "unsupported override '" + std::string(key) +
                            "' (use k_b_mpa_per_m or k_s_mpa_per_m.<layer>)");
}

} // namespace epile
