#include "epile/layered.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "epile/roots.hpp"

namespace epile {

namespace {

// Affine constraint n1 u + n2 du/dx = c, with (n1, n2) scaled to unit length.
struct StateLine {
    double n1;
    double n2;
    double c;
};

StateLine normalized(double n1, double n2, double c) {
    const double s = std::hypot(n1, n2);
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw SolverError("degenerate state constraint while propagating through layers");
    }
    return StateLine{n1 / s, n2 / s, c / s};
}

struct Transfer {
    double ch;        // cosh(psi h)
    double sh_by_psi; // sinh(psi h) / psi, -> h as psi -> 0
    double psi_sh;    // psi sinh(psi h)
};

Transfer transfer(double psi, double h) {
    if (psi == 0.0) return Transfer{1.0, h, 0.0};
    const double sh = std::sinh(psi * h);
    return Transfer{std::cosh(psi * h), sh / psi, psi * sh};
}

// Constraint on the bottom state carried to the top of the layer:
// n . s_bot = c with s_bot = T^-1 s_top.
StateLine carry_up(const StateLine& line, const Transfer& t) {
    return normalized(line.n1 * t.ch - line.n2 * t.psi_sh, -line.n1 * t.sh_by_psi + line.n2 * t.ch,
                      line.c);
}

// Constraint on the top state carried to the bottom: n . (T s_bot) = c.
StateLine carry_down(const StateLine& line, const Transfer& t) {
    return normalized(line.n1 * t.ch + line.n2 * t.psi_sh, line.n1 * t.sh_by_psi + line.n2 * t.ch,
                      line.c);
}

std::pair<double, double> intersect(const StateLine& below, const StateLine& above) {
    const double det = below.n1 * above.n2 - below.n2 * above.n1;
    const double scale = std::abs(below.n1 * above.n2) + std::abs(below.n2 * above.n1);
    if (!(std::abs(det) > 1e-14 * scale)) {
        throw SolverError("singular pile: the tip and head conditions do not restrain the pile "
                          "(no shaft springs and a floating tip)");
    }
    const double u = (below.c * above.n2 - below.n2 * above.c) / det;
    const double slope = (below.n1 * above.c - below.c * above.n1) / det;
    return {u, slope};
}

} // namespace

LayeredCase::LayeredCase(PileSection pile, SoilProfile profile, LoadCase load)
    : pile_(std::move(pile)), profile_(std::move(profile)), load_(load) {
    interfaces_ = validate_pairing(pile_, profile_);
    validate(load_);
    psis_.reserve(profile_.layers.size());
    for (std::size_t i = 0; i < profile_.layers.size(); ++i) {
        const SoilLayer& layer = profile_.layers[i];
        const double s = psi(pile_, layer);
        if (s * layer.thickness > kMaxPsiLength) {
            std::ostringstream msg;
            msg << "layer " << i << ": psi h = " << s * layer.thickness << " exceeds "
                << kMaxPsiLength;
            throw SolverError(msg.str());
        }
        psis_.push_back(s);
    }
}

LayeredCase LayeredCase::with_load(LoadCase load) const {
    return LayeredCase(pile_, profile_, load);
}

LayeredCase LayeredCase::with_profile(SoilProfile profile) const {
    return LayeredCase(pile_, std::move(profile), load_);
}

std::size_t LayeredCase::layer_at(double x) const {
    if (!(x >= 0.0 && x <= pile_.length)) {
        std::ostringstream msg;
        msg << "x = " << x << " m is outside [0, " << pile_.length << "]";
        throw DomainError(msg.str());
    }
    // First layer whose top is at or above x.
    const auto it = std::lower_bound(interfaces_.begin() + 1, interfaces_.end(), x);
    const auto index = static_cast<std::size_t>(it - interfaces_.begin()) - 1;
    return std::min(index, layer_count() - 1);
}

double LayerSolution::b() const {
    if (psi == 0.0) return bottom_slope;
    return (top_u - bottom_u * std::cosh(psi * thickness)) / std::sinh(psi * thickness);
}

std::pair<double, double> LayerSolution::state(double xi) const {
    if (xi <= 0.0) return {bottom_u, bottom_slope};
    if (xi >= thickness) return {top_u, top_slope};
    if (psi == 0.0) {
        const double slope = (top_u - bottom_u) / thickness;
        return {bottom_u + slope * xi, slope};
    }
    // Interpolate between the end displacements; both weights lie in [0, 1].
    const double sh = std::sinh(psi * thickness);
    const double rest = thickness - xi;
    const double u = (bottom_u * std::sinh(psi * rest) + top_u * std::sinh(psi * xi)) / sh;
    const double slope =
        psi * (top_u * std::cosh(psi * xi) - bottom_u * std::cosh(psi * rest)) / sh;
    return {u, slope};
}

LayerCoefficients solve_layered(const LayeredCase& c) {
    const PileSection& pile = c.pile();
    const std::size_t n = c.layer_count();
    const double free_strain = pile.thermal_expansion * c.load().delta_t;
    const double head_slope = free_strain + c.load().head_force / (pile.area * pile.young_modulus);

    std::vector<Transfer> transfers;
    transfers.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        transfers.push_back(transfer(c.psis()[i], c.profile().layers[i].thickness));
    }

    // E (u' - alpha dT) = k_b u at the tip, or u = 0 for a rigid tip.
    std::vector<StateLine> from_tip(n + 1);
    if (c.profile().tip.is_rigid()) {
        from_tip[0] = StateLine{1.0, 0.0, 0.0};
    } else {
        from_tip[0] =
            normalized(-c.profile().tip.value() / pile.young_modulus, 1.0, free_strain);
    }
    for (std::size_t i = 0; i < n; ++i) from_tip[i + 1] = carry_up(from_tip[i], transfers[i]);

    // E (u' - alpha dT) = F / A at the head.
    std::vector<StateLine> from_head(n + 1);
    from_head[n] = StateLine{0.0, 1.0, head_slope};
    for (std::size_t i = n; i-- > 0;) from_head[i] = carry_down(from_head[i + 1], transfers[i]);

    std::vector<std::pair<double, double>> states(n + 1);
    for (std::size_t k = 0; k <= n; ++k) states[k] = intersect(from_tip[k], from_head[k]);
    // The two conditions hold exactly at their own ends.
    if (c.profile().tip.is_rigid()) states[0].first = 0.0;
    states[n].second = head_slope;

    LayerCoefficients coeffs;
    coeffs.layers.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        LayerSolution s;
        s.psi = c.psis()[i];
        s.thickness = c.profile().layers[i].thickness;
        s.bottom_u = states[i].first;
        s.bottom_slope = states[i].second;
        s.top_u = states[i + 1].first;
        s.top_slope = states[i + 1].second;
        coeffs.layers.push_back(s);
    }
    return coeffs;
}

PointResponse evaluate_in_layer(const LayerCoefficients& coeffs, const LayeredCase& c,
                                std::size_t layer, double xi) {
    if (layer >= coeffs.layers.size()) {
        throw DomainError("layer index out of range");
    }
    const LayerSolution& s = coeffs.layers[layer];
    if (!(xi >= 0.0 && xi <= s.thickness)) {
        std::ostringstream msg;
        msg << "xi = " << xi << " m is outside layer " << layer << " [0, " << s.thickness << "]";
        throw DomainError(msg.str());
    }
    const PileSection& pile = c.pile();
    const auto [u, slope] = s.state(xi);
    PointResponse r;
    r.u = u;
    r.strain = slope;
    r.stress = pile.young_modulus * (slope - pile.thermal_expansion * c.load().delta_t);
    r.shear = -c.profile().layers[layer].shear_stiffness * u;
    return r;
}

PointResponse evaluate_layered(const LayerCoefficients& coeffs, const LayeredCase& c, double x) {
    const std::size_t i = c.layer_at(x);
    const double xi = std::clamp(x - c.interfaces()[i], 0.0, coeffs.layers[i].thickness);
    return evaluate_in_layer(coeffs, c, i, xi);
}

std::vector<double> null_points_layered(const LayerCoefficients& coeffs, const LayeredCase& c) {
    const double L = c.pile().length;
    const double xtol = 1e-12 * L;
    std::vector<double> zeros;
    auto push = [&](double z) {
        if (zeros.empty() || z - zeros.back() > xtol) zeros.push_back(z);
    };

    const bool all_zero = std::all_of(coeffs.layers.begin(), coeffs.layers.end(), [](const auto& s) {
        return s.bottom_u == 0.0 && s.top_u == 0.0 && s.bottom_slope == 0.0;
    });
    if (all_zero) return zeros;

    for (std::size_t i = 0; i < coeffs.layers.size(); ++i) {
        const LayerSolution& s = coeffs.layers[i];
        const double z = c.interfaces()[i];
        if (s.bottom_u == 0.0) push(z);
        // u is a positive-weight blend of the end values, so it vanishes
        // inside the layer only if they differ in sign.
        if (s.bottom_u != 0.0 && s.top_u != 0.0 &&
            std::signbit(s.bottom_u) != std::signbit(s.top_u)) {
            const double xi = bisect([&s](double t) { return s.state(t).first; }, 0.0,
                                     s.thickness, xtol);
            push(z + xi);
        }
        if (s.top_u == 0.0) push(c.interfaces()[i + 1]);
    }
    return zeros;
}

ResponseProfile sample_layered_profile(const LayeredCase& c, std::size_t samples_per_layer,
                                       Execution exec) {
    if (samples_per_layer < 2) {
        throw ValidationError("sample_layered_profile needs at least 2 samples per layer");
    }
    const LayerCoefficients coeffs = solve_layered(c);

    struct Point {
        std::size_t layer;
        double xi;
        double x;
    };
    std::vector<Point> points;
    points.reserve(c.layer_count() * samples_per_layer);
    for (std::size_t i = 0; i < c.layer_count(); ++i) {
        const double h = c.profile().layers[i].thickness;
        const double z = c.interfaces()[i];
        for (std::size_t j = 0; j < samples_per_layer; ++j) {
            const bool last = j + 1 == samples_per_layer;
            const double xi =
                last ? h : h * static_cast<double>(j) / static_cast<double>(samples_per_layer - 1);
            points.push_back(Point{i, xi, last ? c.interfaces()[i + 1] : z + xi});
        }
    }

    ResponseProfile profile;
    profile.solver = "layered";
    profile.samples = kernels::sample(
        points.size(),
        [&](std::size_t k) {
            const Point& p = points[k];
            return kernels::to_sample(p.x, evaluate_in_layer(coeffs, c, p.layer, p.xi));
        },
        exec);

    profile.null_points = null_points_layered(coeffs, c);
    if (c.pile().thermal_expansion * c.load().delta_t != 0.0) {
        if (c.load().head_force == 0.0) {
            if (!profile.null_points.empty()) profile.thermal_null_point = profile.null_points.front();
        } else {
            const LayeredCase thermal = c.with_load(LoadCase{c.load().delta_t, 0.0});
            const auto zeros = null_points_layered(solve_layered(thermal), thermal);
            if (!zeros.empty()) profile.thermal_null_point = zeros.front();
        }
    }
    return profile;
}

std::vector<double> head_displacement_series(const LayeredCase& tmpl,
                                             std::span<const double> delta_t_series) {
    std::vector<double> out;
    out.reserve(delta_t_series.size());
    for (double dt : delta_t_series) {
        const LayeredCase c = tmpl.with_load(LoadCase{dt, tmpl.load().head_force});
        out.push_back(solve_layered(c).layers.back().top_u);
    }
    return out;
}

} // namespace epile
