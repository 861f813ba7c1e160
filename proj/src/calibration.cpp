#include "epile/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "epile/homogeneous.hpp"
#include "epile/layered.hpp"

namespace epile::calibration {

std::string_view to_string(ObservationKind kind) {
    switch (kind) {
    case ObservationKind::displacement: return "displacement";
    case ObservationKind::strain: return "strain";
    case ObservationKind::stress: return "stress";
    case ObservationKind::head_displacement: return "head_displacement";
    }
    return "unknown";
}

ObservationKind parse_kind(std::string_view name) {
    for (auto kind : {ObservationKind::displacement, ObservationKind::strain,
                      ObservationKind::stress, ObservationKind::head_displacement}) {
        if (name == to_string(kind)) return kind;
    }
    throw ValidationError("unknown observation kind '" + std::string(name) +
                          "' (expected displacement, strain, stress or head_displacement)");
}

void validate(const FitSpec& spec) {
    validate(spec.pile);
    if (spec.free.empty()) throw ValidationError("fit needs at least one free parameter");
    for (std::size_t i = 0; i < spec.free.size(); ++i) {
        const FreeParameter& f = spec.free[i];
        if (!(std::isfinite(f.lower) && std::isfinite(f.upper) && f.lower > 0.0 &&
              f.upper > f.lower)) {
            std::ostringstream msg;
            msg << "free parameter '" << f.label << "': bounds must satisfy 0 < lower < upper";
            throw ValidationError(msg.str());
        }
        if (f.parameter.target == Parameter::Target::shear_stiffness &&
            f.parameter.layer >= spec.profile.layers.size()) {
            throw ValidationError("free parameter '" + f.label + "' refers to a missing layer");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (spec.free[j].parameter == f.parameter) {
                throw ValidationError("free parameter '" + f.label + "' listed twice");
            }
        }
    }
    if (!(std::isfinite(spec.tolerance) && spec.tolerance > 0.0)) {
        throw ValidationError("fit tolerance must be positive");
    }
    if (spec.max_evaluations < 4) throw ValidationError("fit needs max_evaluations >= 4");

    bool any_weight = false;
    for (const Observation& o : spec.observations) {
        if (!std::isfinite(o.value)) throw ValidationError("observation value must be finite");
        if (!(std::isfinite(o.weight) && o.weight >= 0.0)) {
            throw ValidationError("observation weight must be finite and >= 0");
        }
        if (o.kind != ObservationKind::head_displacement &&
            !(o.x >= 0.0 && o.x <= spec.pile.length)) {
            std::ostringstream msg;
            msg << "observation at x = " << o.x << " m lies outside the pile";
            throw ValidationError(msg.str());
        }
        if (!spec.loads.contains(o.load_tag)) {
            throw ValidationError("observation refers to unknown load case '" + o.load_tag + "'");
        }
        any_weight = any_weight || o.weight > 0.0;
    }
    if (!any_weight) throw ValidationError("fit needs at least one observation with weight > 0");
}

SoilProfile apply_parameters(const FitSpec& spec, std::span<const double> params) {
    if (params.size() != spec.free.size()) {
        throw ValidationError("parameter vector does not match the free parameter list");
    }
    SoilProfile profile = spec.profile;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Parameter& p = spec.free[i].parameter;
        if (p.target == Parameter::Target::tip_stiffness) {
            profile.tip = TipStiffness::spring(params[i]);
        } else {
            profile.layers[p.layer].shear_stiffness = params[i];
        }
    }
    return profile;
}

namespace {

// Response of one load case, solved once per objective evaluation.
class Model {
public:
    Model(const PileSection& pile, const SoilProfile& profile, const LoadCase& load) {
        if (profile.layers.size() == 1) {
            homogeneous_.emplace(pile, profile.layers.front(), profile.tip, load);
            (void)evaluate(*homogeneous_, 0.0);
        } else {
            layered_.emplace(pile, profile, load);
            coeffs_ = solve_layered(*layered_);
        }
    }

    PointResponse at(double x) const {
        if (homogeneous_) return evaluate(*homogeneous_, x);
        return evaluate_layered(coeffs_, *layered_, x);
    }

private:
    std::optional<HomogeneousCase> homogeneous_;
    std::optional<LayeredCase> layered_;
    LayerCoefficients coeffs_;
};

double model_value(const Model& model, const Observation& o, double length) {
    switch (o.kind) {
    case ObservationKind::displacement: return model.at(o.x).u;
    case ObservationKind::strain: return model.at(o.x).strain;
    case ObservationKind::stress: return model.at(o.x).stress;
    case ObservationKind::head_displacement: return model.at(length).u;
    }
    return 0.0;
}

std::string describe(const FitSpec& spec, std::span<const double> params) {
    std::ostringstream msg;
    msg.precision(17);
    for (std::size_t i = 0; i < params.size(); ++i) {
        msg << (i ? ", " : "") << spec.free[i].label << " = " << params[i] << " Pa/m";
    }
    return msg.str();
}

} // namespace

double objective(std::span<const double> params, const FitSpec& spec) {
    for (std::size_t i = 0; i < params.size() && i < spec.free.size(); ++i) {
        const FreeParameter& f = spec.free[i];
        if (!(params[i] >= f.lower && params[i] <= f.upper)) {
            throw ValidationError("parameter '" + f.label + "' outside its bounds");
        }
    }
    const SoilProfile profile = apply_parameters(spec, params);

    std::map<std::string, Model> models;
    try {
        for (const auto& [tag, load] : spec.loads) models.emplace(tag, Model(spec.pile, profile, load));
    } catch (const SolverError& e) {
        throw SolverError(std::string(e.what()) + " [at " + describe(spec, params) + "]");
    }

    std::map<ObservationKind, double> scale;
    for (const Observation& o : spec.observations) {
        scale[o.kind] = std::max(scale[o.kind], std::abs(o.value));
    }

    // Pointers into the map so the parallel kernel does no lookups.
    std::vector<const Model*> model_of(spec.observations.size());
    std::vector<double> scale_of(spec.observations.size());
    for (std::size_t i = 0; i < spec.observations.size(); ++i) {
        const Observation& o = spec.observations[i];
        model_of[i] = &models.at(o.load_tag);
        const double s = scale[o.kind];
        scale_of[i] = s > 0.0 ? s : 1.0;
    }

    const double length = spec.pile.length;
    auto term = [&](std::size_t i) {
        const Observation& o = spec.observations[i];
        if (o.weight == 0.0) return 0.0;
        const double r = (model_value(*model_of[i], o, length) - o.value) / scale_of[i];
        return o.weight * r * r;
    };
    std::vector<double> terms(spec.observations.size());
    if (spec.execution == Execution::parallel) {
        kernels::map_parallel(terms.size(), std::span<double>(terms), term);
    } else {
        kernels::map_serial(terms.size(), std::span<double>(terms), term);
    }
    return std::accumulate(terms.begin(), terms.end(), 0.0);
}

namespace {

struct BudgetExhausted {};

class Evaluator {
public:
    explicit Evaluator(const FitSpec& spec) : spec_(spec) {}

    double operator()(std::vector<double> params) {
        if (result.evaluations >= spec_.max_evaluations) throw BudgetExhausted{};
        const double value = objective(params, spec_);
        ++result.evaluations;
        result.trace.push_back(TraceEntry{std::move(params), value});
        return value;
    }

    void finish(bool converged) {
        result.converged = converged;
        const auto best = std::min_element(
            result.trace.begin(), result.trace.end(),
            [](const TraceEntry& a, const TraceEntry& b) { return a.objective < b.objective; });
        if (best != result.trace.end()) {
            result.best = best->params;
            result.objective = best->objective;
        }
    }

    FitResult result;

private:
    const FitSpec& spec_;
};

void golden_section(const FitSpec& spec, Evaluator& eval) {
    const FreeParameter& p = spec.free.front();
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double x) { return eval({x}); };

    double lo = p.lower;
    double hi = p.upper;
    eval.result.method = "golden-section";
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = f(c);
    double fd = f(d);

    const double ends = std::max(f_lo, f_hi);
    if (fc > ends || fd > ends) {
        // Not unimodal on the bracket: locate the best basin on a grid first.
        eval.result.method = "grid+golden-section";
        constexpr int kGrid = 64;
        std::vector<double> xs(kGrid);
        int best = 0;
        double f_best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < kGrid; ++k) {
            xs[k] = (k == kGrid - 1) ? p.upper : p.lower + (p.upper - p.lower) * k / (kGrid - 1);
            const double v = f(xs[k]);
            if (v < f_best) {
                f_best = v;
                best = k;
            }
        }
        lo = xs[std::max(best - 1, 0)];
        hi = xs[std::min(best + 1, kGrid - 1)];
        c = hi - invphi * (hi - lo);
        d = lo + invphi * (hi - lo);
        fc = f(c);
        fd = f(d);
    }

    while (hi - lo > spec.tolerance) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = f(d);
        }
    }
}

// Nelder-Mead with reflection 1, expansion 2, contraction 1/2, shrink 1/2
// in unit-box coordinates.
bool nelder_mead(const FitSpec& spec, Evaluator& eval) {
    eval.result.method = "nelder-mead";
    const std::size_t dim = spec.free.size();
    std::vector<double> range(dim);
    for (std::size_t k = 0; k < dim; ++k) range[k] = spec.free[k].upper - spec.free[k].lower;

    auto to_params = [&](const std::vector<double>& t) {
        std::vector<double> p(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            p[k] = std::clamp(spec.free[k].lower + t[k] * range[k], spec.free[k].lower,
                              spec.free[k].upper);
        }
        return p;
    };
    auto project = [](std::vector<double> t) {
        for (double& v : t) v = std::clamp(v, 0.0, 1.0);
        return t;
    };
    auto f = [&](const std::vector<double>& t) { return eval(to_params(t)); };

    struct Vertex {
        std::vector<double> t;
        double value;
    };
    std::vector<Vertex> simplex;
    simplex.reserve(dim + 1);
    const std::vector<double> start(dim, 0.5);
    simplex.push_back({start, f(start)});
    for (std::size_t k = 0; k < dim; ++k) {
        std::vector<double> t = start;
        t[k] += 0.1;
        simplex.push_back({t, f(t)});
    }

    auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double w) {
        // a + w (b - a)
        std::vector<double> out(dim);
        for (std::size_t k = 0; k < dim; ++k) out[k] = a[k] + w * (b[k] - a[k]);
        return out;
    };

    while (true) {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) { return a.value < b.value; });

        double spread = 0.0;
        for (std::size_t i = 1; i <= dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) {
                spread = std::max(spread, std::abs(simplex[i].t[k] - simplex[0].t[k]) * range[k]);
            }
        }
        if (spread <= spec.tolerance) return true;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i].t[k] / dim;
        }
        Vertex& worst = simplex[dim];

        const auto reflected = project(blend(centroid, worst.t, -1.0));
        const double f_reflected = f(reflected);
        if (f_reflected < simplex[0].value) {
            const auto expanded = project(blend(centroid, worst.t, -2.0));
            const double f_expanded = f(expanded);
            if (f_expanded < f_reflected) {
                worst = {expanded, f_expanded};
            } else {
                worst = {reflected, f_reflected};
            }
            continue;
        }
        if (f_reflected < simplex[dim - 1].value) {
            worst = {reflected, f_reflected};
            continue;
        }

        const bool outside = f_reflected < worst.value;
        const auto contracted =
            outside ? blend(centroid, reflected, 0.5) : blend(centroid, worst.t, 0.5);
        const double f_contracted = f(contracted);
        if (outside ? f_contracted <= f_reflected : f_contracted < worst.value) {
            worst = {contracted, f_contracted};
            continue;
        }

        for (std::size_t i = 1; i <= dim; ++i) {
            simplex[i].t = blend(simplex[0].t, simplex[i].t, 0.5);
            simplex[i].value = f(simplex[i].t);
        }
    }
}

} // namespace

FitResult fit(const FitSpec& spec) {
    validate(spec);
    Evaluator eval(spec);
    bool converged = false;
    try {
        if (spec.free.size() == 1) {
            golden_section(spec, eval);
            converged = true;
        } else {
            converged = nelder_mead(spec, eval);
        }
    } catch (const BudgetExhausted&) {
        converged = false;
    }
    eval.finish(converged);
    return eval.result;
}

} // namespace epile::calibration
