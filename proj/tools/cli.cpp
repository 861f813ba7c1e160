#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "epile/calibration.hpp"
#include "epile/fd_oracle.hpp"
#include "epile/homogeneous.hpp"
#include "epile/layered.hpp"
#include "epile/scenario.hpp"
#include "epile/verification.hpp"

namespace epile::cli {

namespace {

constexpr double kOracleTolerance = 1e-4;

// Carries an exit code up to run().
struct Failure {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kUsage, "cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides) {
    Scenario sc;
    try {
        sc = parse_scenario(read_file(path));
        for (const auto& o : overrides) apply_override(sc, o);
        // Re-check the pairing after overrides.
        (void)validate_pairing(to_pile(sc), to_profile(sc));
    } catch (const ParseError& e) {
        throw Failure{kUsage, path + ": " + e.what()};
    } catch (const ValidationError& e) {
        throw Failure{kUsage, path + ": " + e.what()};
    }
    return sc;
}

const ScenarioLoad& require_case(const Scenario& sc, const std::string& name) {
    if (const ScenarioLoad* load = sc.find_load(name)) return *load;
    std::string list;
    for (const auto& n : sc.load_names()) list += (list.empty() ? "" : ", ") + n;
    throw Failure{kSolver, "case '" + name + "' not found; available cases: " + list};
}

// Runs f, mapping model exceptions to the solver exit code.
template <class F>
auto solving(F&& f) {
    try {
        return f();
    } catch (const SolverError& e) {
        throw Failure{kSolver, std::string("solver error: ") + e.what()};
    } catch (const ValidationError& e) {
        throw Failure{kSolver, std::string("invalid model: ") + e.what()};
    } catch (const DomainError& e) {
        throw Failure{kSolver, std::string("domain error: ") + e.what()};
    }
}

ResponseProfile solve_profile(const Scenario& sc, const ScenarioLoad& load) {
    return solving([&] {
        const PileSection pile = to_pile(sc);
        const SoilProfile profile = to_profile(sc);
        ResponseProfile out;
        if (profile.layers.size() == 1) {
            const HomogeneousCase c(pile, profile.layers.front(), profile.tip, to_load(load));
            out = sample_profile(c, sc.samples_per_layer);
        } else {
            const LayeredCase c(pile, profile, to_load(load));
            out = sample_layered_profile(c, sc.samples_per_layer);
        }
        out.case_tag = load.name;
        return out;
    });
}

// Writes to the file at path, or to out when path is empty or "-".
class Sink {
public:
    Sink(const std::string& path, std::ostream& out) {
        if (path.empty() || path == "-") {
            stream_ = &out;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw Failure{kUsage, "cannot write '" + path + "'"};
            stream_ = file_.get();
        }
    }
    std::ostream& stream() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

void write_profile_csv(std::ostream& os, const ResponseProfile& profile, double length) {
    os << "x_m,depth_m,u_m,strain,stress_pa,shear_pa\n";
    for (const Sample& s : profile.samples) {
        os << format_full(s.x) << ',' << format_full(length - s.x) << ',' << format_full(s.u) << ','
           << format_full(s.strain) << ',' << format_full(s.stress) << ',' << format_full(s.shear)
           << '\n';
    }
}

struct CommonOptions {
    std::string scenario;
    std::string case_name;
    std::string out;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_out) {
    cmd->add_option("--scenario", o.scenario, "Scenario file")->required();
    cmd->add_option("--case", o.case_name, "Load case name")->required();
    if (with_out) cmd->add_option("--out", o.out, "Output file (default: stdout)");
    cmd->add_option("--override", o.overrides,
                    "Override a spring: k_b_mpa_per_m=VALUE|rigid or k_s_mpa_per_m.LAYER=VALUE");
}

int cmd_cases(const std::string& name, std::ostream& out) {
    try {
        out << shipped_scenario(name);
    } catch (const std::out_of_range& e) {
        throw Failure{kUsage, e.what()};
    }
    return kOk;
}

int cmd_solve(const CommonOptions& o, std::ostream& out) {
    const Scenario sc = load_scenario(o.scenario, o.overrides);
    const ScenarioLoad& load = require_case(sc, o.case_name);
    const ResponseProfile profile = solve_profile(sc, load);
    Sink sink(o.out, out);
    write_profile_csv(sink.stream(), profile, sc.L_m);
    return kOk;
}

int cmd_null_point(const CommonOptions& o, std::ostream& out) {
    const Scenario sc = load_scenario(o.scenario, o.overrides);
    const ScenarioLoad& load = require_case(sc, o.case_name);
    const ResponseProfile profile = solve_profile(sc, load);
    out << "case " << load.name << "\n";
    if (profile.thermal_null_point) {
        const double x = *profile.thermal_null_point;
        out << "thermal_null_point x_m=" << format_full(x) << " depth_m=" << format_full(sc.L_m - x)
            << "\n";
    } else {
        out << "thermal_null_point none\n";
    }
    out << "null_points " << profile.null_points.size() << "\n";
    for (double x : profile.null_points) {
        out << "null_point x_m=" << format_full(x) << " depth_m=" << format_full(sc.L_m - x) << "\n";
    }
    return kOk;
}

int cmd_sweep(const CommonOptions& o, const std::vector<double>& series, std::ostream& out) {
    const Scenario sc = load_scenario(o.scenario, o.overrides);
    const ScenarioLoad& load = require_case(sc, o.case_name);
    const std::vector<double> heads = solving([&] {
        const PileSection pile = to_pile(sc);
        const SoilProfile profile = to_profile(sc);
        if (profile.layers.size() == 1) {
            const HomogeneousCase c(pile, profile.layers.front(), profile.tip, to_load(load));
            return head_displacement_series(c, series);
        }
        const LayeredCase c(pile, profile, to_load(load));
        return head_displacement_series(c, series);
    });
    Sink sink(o.out, out);
    sink.stream() << "step,delta_t_c,u_head_m\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        sink.stream() << i << ',' << format_full(series[i]) << ',' << format_full(heads[i]) << '\n';
    }
    return kOk;
}

int cmd_oracle_check(const CommonOptions& o, std::size_t n, bool via_layered, std::ostream& out) {
    const Scenario sc = load_scenario(o.scenario, o.overrides);
    const ScenarioLoad& load = require_case(sc, o.case_name);
    const PileSection pile = to_pile(sc);
    const SoilProfile profile = to_profile(sc);
    const LoadCase lc = to_load(load);

    const std::size_t min_n = 2 * profile.layers.size() + 1;
    if (n < std::max<std::size_t>(3, min_n)) {
        throw Failure{kUsage, "--n must be at least " + std::to_string(std::max<std::size_t>(3, min_n))};
    }
    const verify::FieldErrors errors = solving([&] {
        const verify::Reference ref = verify::analytic_reference(pile, profile, lc, via_layered);
        return verify::relative_linf(fd::solve_fd(pile, profile, lc, n), ref);
    });
    const bool pass = errors.max() <= kOracleTolerance;
    out << "oracle-check case=" << load.name << " n=" << n
        << " analytic=" << ((profile.layers.size() == 1 && !via_layered) ? "homogeneous" : "layered")
        << "\n"
        << "u rel_linf=" << format_full(errors.u) << "\n"
        << "strain rel_linf=" << format_full(errors.strain) << "\n"
        << "stress rel_linf=" << format_full(errors.stress) << "\n"
        << "tolerance " << format_number(kOracleTolerance) << "\n"
        << "result " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kOk : kVerification;
}

std::vector<calibration::Observation> read_observations(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<calibration::Observation> obs;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_done = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!header_done) {
            header_done = true;
            if (!cells.empty() && cells.front() == "kind") {
                if (cells != std::vector<std::string>{"kind", "x_m", "value_si", "weight", "case_tag"}) {
                    throw Failure{kUsage, path + ": header must be kind,x_m,value_si,weight,case_tag"};
                }
                continue;
            }
        }
        const auto where = path + ":" + std::to_string(line_no) + ": ";
        if (cells.size() != 5) throw Failure{kUsage, where + "expected 5 columns"};
        try {
            calibration::Observation o;
            o.kind = calibration::parse_kind(cells[0]);
            o.x = std::stod(cells[1]);
            o.value = std::stod(cells[2]);
            o.weight = std::stod(cells[3]);
            o.load_tag = cells[4];
            obs.push_back(o);
        } catch (const ValidationError& e) {
            throw Failure{kUsage, where + e.what()};
        } catch (const std::exception&) {
            throw Failure{kUsage, where + "malformed number"};
        }
    }
    return obs;
}

calibration::FreeParameter parse_free(const std::string& text, const Scenario& sc) {
    const auto eq = text.find('=');
    const auto colon = text.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos) {
        throw Failure{kUsage, "--free expects NAME=LOWER:UPPER, got '" + text + "'"};
    }
    const std::string key = text.substr(0, eq);
    calibration::FreeParameter f;
    f.label = key;
    try {
        f.lower = std::stod(text.substr(eq + 1, colon - eq - 1)) * 1e6;
        f.upper = std::stod(text.substr(colon + 1)) * 1e6;
    } catch (const std::exception&) {
        throw Failure{kUsage, "--free bounds must be numbers in MPa/m: '" + text + "'"};
    }
    if (key == "k_b_mpa_per_m") {
        f.parameter.target = calibration::Parameter::Target::tip_stiffness;
        return f;
    }
    const std::string prefix = "k_s_mpa_per_m.";
    if (key.rfind(prefix, 0) == 0) {
        const std::string name = key.substr(prefix.size());
        for (std::size_t i = 0; i < sc.layers.size(); ++i) {
            if (sc.layers[i].name == name) {
                f.parameter.target = calibration::Parameter::Target::shear_stiffness;
                f.parameter.layer = sc.layers.size() - 1 - i; // tip-up index
                return f;
            }
        }
        throw Failure{kUsage, "--free refers to unknown layer '" + name + "'"};
    }
    throw Failure{kUsage, "--free supports k_b_mpa_per_m and k_s_mpa_per_m.<layer>, got '" + key + "'"};
}

struct CalibrateOptions {
    std::string observations;
    std::vector<std::string> free;
    double tol_mpa_per_m = 1e-3;
    std::size_t max_evals = 500;
    std::string trace;
};

int cmd_calibrate(const CommonOptions& o, const CalibrateOptions& c, std::ostream& out) {
    const Scenario sc = load_scenario(o.scenario, o.overrides);
    calibration::FitSpec spec;
    spec.pile = to_pile(sc);
    spec.profile = to_profile(sc);
    spec.observations = read_observations(c.observations);
    if (spec.observations.empty()) {
        throw Failure{kUsage, c.observations + ": no observations"};
    }
    for (const auto& obs : spec.observations) {
        const ScenarioLoad* load = sc.find_load(obs.load_tag);
        if (!load) {
            throw Failure{kUsage, "observation refers to unknown case '" + obs.load_tag + "'"};
        }
        spec.loads[load->name] = to_load(*load);
    }
    if (c.free.empty()) throw Failure{kUsage, "calibrate needs at least one --free parameter"};
    for (const auto& f : c.free) spec.free.push_back(parse_free(f, sc));
    spec.tolerance = c.tol_mpa_per_m * 1e6;
    spec.max_evaluations = c.max_evals;
    try {
        calibration::validate(spec);
    } catch (const ValidationError& e) {
        throw Failure{kUsage, e.what()};
    }

    const calibration::FitResult result = solving([&] { return calibration::fit(spec); });

    out << "method " << result.method << "\n"
        << "status " << (result.converged ? "CONVERGED" : "NONCONVERGED") << "\n";
    for (std::size_t i = 0; i < spec.free.size(); ++i) {
        out << spec.free[i].label << " = " << format_full(result.best[i] / 1e6) << "\n";
    }
    out << "objective " << format_full(result.objective) << "\n"
        << "evaluations " << result.evaluations << "\n";

    if (!c.trace.empty()) {
        Sink sink(c.trace, out);
        std::ostream& t = sink.stream();
        t << "evaluation";
        for (const auto& f : spec.free) t << ',' << f.label;
        t << ",objective\n";
        for (std::size_t k = 0; k < result.trace.size(); ++k) {
            t << k;
            for (double p : result.trace[k].params) t << ',' << format_full(p / 1e6);
            t << ',' << format_full(result.trace[k].objective) << '\n';
        }
    }
    return kOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Thermo-mechanical response of energy piles in homogeneous and layered soil"};
    app.require_subcommand(1);

    std::string case_library_name;
    auto* cases = app.add_subcommand("cases", "Print a shipped scenario (centrifuge, lausanne)");
    cases->add_option("name", case_library_name, "Scenario name")->required();

    CommonOptions solve_opts;
    auto* solve = app.add_subcommand("solve", "Write the response profile as CSV");
    add_common(solve, solve_opts, true);

    CommonOptions np_opts;
    auto* np = app.add_subcommand("null-point", "Report thermal and combined null points");
    add_common(np, np_opts, false);

    CommonOptions sweep_opts;
    std::vector<double> series;
    auto* sweep = app.add_subcommand("sweep", "Head displacement for a series of temperature changes");
    add_common(sweep, sweep_opts, true);
    sweep->add_option("--delta-t", series, "Temperature changes in degC, comma separated")
        ->required()
        ->delimiter(',');

    CommonOptions oracle_opts;
    std::size_t oracle_n = 8192;
    bool via_layered = false;
    auto* oracle = app.add_subcommand("oracle-check", "Compare the analytic solution with finite differences");
    add_common(oracle, oracle_opts, false);
    oracle->add_option("--n", oracle_n, "Finite-difference node count")->capture_default_str();
    oracle->add_flag("--via-layered", via_layered, "Use the layered solver even for one layer");

    CommonOptions cal_opts;
    CalibrateOptions cal;
    auto* calibrate = app.add_subcommand("calibrate", "Fit spring stiffnesses to observations");
    calibrate->add_option("--scenario", cal_opts.scenario, "Scenario file")->required();
    calibrate->add_option("--override", cal_opts.overrides, "Override a spring before fitting");
    calibrate->add_option("--observations", cal.observations,
                          "CSV with columns kind,x_m,value_si,weight,case_tag")
        ->required();
    calibrate->add_option("--free", cal.free, "Free parameter NAME=LOWER:UPPER in MPa/m")->required();
    calibrate->add_option("--tol-mpa-per-m", cal.tol_mpa_per_m, "Absolute parameter tolerance")
        ->capture_default_str();
    calibrate->add_option("--max-evals", cal.max_evals, "Evaluation budget")->capture_default_str();
    calibrate->add_option("--trace", cal.trace, "Write every evaluation to this CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (*cases) return cmd_cases(case_library_name, out);
        if (*solve) return cmd_solve(solve_opts, out);
        if (*np) return cmd_null_point(np_opts, out);
        if (*sweep) return cmd_sweep(sweep_opts, series, out);
        if (*oracle) return cmd_oracle_check(oracle_opts, oracle_n, via_layered, out);
        if (*calibrate) return cmd_calibrate(cal_opts, cal, out);
    } catch (const Failure& f) {
        err << "error: " << f.message << "\n";
        return f.code;
    }
    return kUsage;
}

} // namespace epile::cli
