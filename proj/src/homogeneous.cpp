#include "epile/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "epile/roots.hpp"

namespace epile {

namespace {

void require_in_domain(const PileSection& pile, double x) {
    if (!(x >= 0.0 && x <= pile.length)) {
        std::ostringstream msg;
        msg << "x = " << x << " m is outside [0, " << pile.length << "]";
        throw DomainError(msg.str());
    }
}

// Thermal null point, including the psi -> 0 limit (free expansion about the
// tip for any restraining tip, about mid-length for a floating tip).
double thermal_null_point(const HomogeneousCase& c) {
    const double L = c.pile().length;
    const double s = c.psi();
    if (c.tip().is_rigid()) return 0.0;
    const double kb = c.tip().value();
    if (s == 0.0) return kb > 0.0 ? 0.0 : 0.5 * L;

    // atanh(t) with t = (cosh y - 1) / (sinh y + k) rewritten as
    // 0.5 log((e^y - 1 + k) / (1 + k - e^-y)), which stays finite where t
    // rounds to 1.
    const double y = s * L;
    const double k = kb / (c.pile().young_modulus * s);
    const double ratio = (std::expm1(y) + k) / (k - std::expm1(-y));
    if (!(std::isfinite(ratio) && ratio >= 1.0)) {
        std::ostringstream msg;
        msg << "null point argument out of range (psi L = " << y << ", k_b/(E psi) = " << k << ")";
        throw SolverError(msg.str());
    }
    const double x0 = 0.5 * std::log(ratio) / s;
    if (!(x0 >= 0.0 && x0 <= L * (1.0 + 1e-12))) {
        std::ostringstream msg;
        msg << "null point " << x0 << " m falls outside the pile";
        throw SolverError(msg.str());
    }
    return std::min(x0, L);
}

} // namespace

HomogeneousCase::HomogeneousCase(PileSection pile, SoilLayer layer, TipStiffness tip,
                                 LoadCase load)
    : pile_(std::move(pile)), layer_(std::move(layer)), tip_(tip), load_(load), psi_(0.0) {
    validate(pile_);
    validate(layer_);
    validate(load_);
    if (std::abs(layer_.thickness - pile_.length) > 1e-9 * pile_.length) {
        std::ostringstream msg;
        msg << "homogeneous layer thickness " << layer_.thickness << " m differs from pile length "
            << pile_.length << " m";
        throw ValidationError(msg.str());
    }
    psi_ = epile::psi(pile_, layer_);
    if (psi_ * pile_.length > kMaxPsiLength) {
        std::ostringstream msg;
        msg << "psi L = " << psi_ * pile_.length << " exceeds " << kMaxPsiLength;
        throw SolverError(msg.str());
    }
}

HomogeneousCase HomogeneousCase::with_load(LoadCase load) const {
    return HomogeneousCase(pile_, layer_, tip_, load);
}

HomogeneousCase make_homogeneous_case(const PileSection& pile, double shear_stiffness,
                                      TipStiffness tip, LoadCase load) {
    return HomogeneousCase(pile, SoilLayer{pile.length, shear_stiffness, {}}, tip, load);
}

double null_point(const HomogeneousCase& c) {
    if (c.psi() == 0.0) {
        throw SolverError("null point formula is degenerate for k_s = 0 (psi = 0); "
                          "evaluate() handles this case through the psi -> 0 limit");
    }
    return thermal_null_point(c);
}

PointResponse thermal_response(const HomogeneousCase& c, double x) {
    const PileSection& pile = c.pile();
    require_in_domain(pile, x);
    const double free_strain = pile.thermal_expansion * c.load().delta_t;
    const double E = pile.young_modulus;
    const double L = pile.length;
    const double s = c.psi();

    PointResponse r;
    if (s == 0.0) {
        r.u = free_strain * (x - thermal_null_point(c));
        r.strain = free_strain;
        r.stress = 0.0;
    } else if (c.tip().is_rigid()) {
        const double head = std::cosh(s * L);
        r.u = free_strain * std::sinh(s * x) / (s * head);
        r.strain = free_strain * std::cosh(s * x) / head;
        r.stress = E * free_strain * (std::cosh(s * x) / head - 1.0);
    } else {
        const double x0 = thermal_null_point(c);
        const double head = std::cosh(s * (L - x0));
        r.u = free_strain * std::sinh(s * (x - x0)) / (s * head);
        r.strain = free_strain * std::cosh(s * (x - x0)) / head;
        r.stress = E * free_strain * (std::cosh(s * (x - x0)) / head - 1.0);
    }
    r.shear = -c.layer().shear_stiffness * r.u;
    return r;
}

PointResponse mechanical_response(const HomogeneousCase& c, double x) {
    const PileSection& pile = c.pile();
    require_in_domain(pile, x);
    const double F = c.load().head_force;
    const double A = pile.area;
    const double E = pile.young_modulus;
    const double L = pile.length;
    const double s = c.psi();

    PointResponse r;
    if (s == 0.0) {
        // Free-standing column: u'' = 0, uniform axial force F.
        double base = 0.0;
        if (!c.tip().is_rigid()) {
            const double kb = c.tip().value();
            if (kb == 0.0) {
                if (F != 0.0) {
                    throw SolverError("no equilibrium: head force on a pile with k_s = 0 and k_b = 0");
                }
            } else {
                base = F / (A * kb);
            }
        }
        r.u = base + F * x / (A * E);
        r.strain = F / (A * E);
        r.stress = F / A;
    } else if (c.tip().is_rigid()) {
        const double head = std::cosh(s * L);
        r.u = F * std::sinh(s * x) / (A * E * s * head);
        r.strain = F * std::cosh(s * x) / (A * E * head);
        r.stress = F * std::cosh(s * x) / (A * head);
    } else {
        const double kb = c.tip().value();
        const double denom = E * s * std::sinh(s * L) + kb * std::cosh(s * L);
        const double shape_u = E * s * std::cosh(s * x) + kb * std::sinh(s * x);
        const double shape_e = E * s * std::sinh(s * x) + kb * std::cosh(s * x);
        r.u = F * shape_u / (A * E * s * denom);
        r.strain = F * shape_e / (A * E * denom);
        r.stress = F * shape_e / (A * denom);
    }
    r.shear = -c.layer().shear_stiffness * r.u;
    return r;
}

PointResponse evaluate(const HomogeneousCase& c, double x) {
    const PointResponse t = thermal_response(c, x);
    const PointResponse m = mechanical_response(c, x);
    return PointResponse{t.u + m.u, t.strain + m.strain, t.stress + m.stress, t.shear + m.shear};
}

ResponseProfile sample_profile(const HomogeneousCase& c, std::size_t n, Execution exec) {
    if (n < 2) {
        throw ValidationError("sample_profile needs at least 2 samples");
    }
    const double L = c.pile().length;
    std::vector<double> xs(n);
    for (std::size_t j = 0; j < n; ++j) {
        xs[j] = L * static_cast<double>(j) / static_cast<double>(n - 1);
    }
    xs.back() = L;

    // Surface solver errors (e.g. no equilibrium) before entering the
    // parallel region.
    (void)evaluate(c, 0.0);

    ResponseProfile profile;
    profile.solver = "homogeneous";
    profile.samples = kernels::sample(
        n, [&](std::size_t i) { return kernels::to_sample(xs[i], evaluate(c, xs[i])); }, exec);

    const bool thermal = c.pile().thermal_expansion * c.load().delta_t != 0.0;
    if (thermal) profile.thermal_null_point = thermal_null_point(c);
    if (c.load().head_force == 0.0) {
        if (thermal) profile.null_points.push_back(*profile.thermal_null_point);
    } else {
        profile.null_points = scan_zeros([&c](double x) { return evaluate(c, x).u; }, 0.0, L,
                                         1024, 1e-12 * L);
    }
    return profile;
}

std::vector<double> head_displacement_series(const HomogeneousCase& tmpl,
                                             std::span<const double> delta_t_series) {
    std::vector<double> out;
    out.reserve(delta_t_series.size());
    const double L = tmpl.pile().length;
    for (double dt : delta_t_series) {
        const HomogeneousCase c = tmpl.with_load(LoadCase{dt, tmpl.load().head_force});
        out.push_back(evaluate(c, L).u);
    }
    return out;
}

} // namespace epile
