#include "epile/verification.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "epile/fd_oracle.hpp"

namespace epile::verify {

Reference analytic_reference(const PileSection& pile, const SoilProfile& profile,
                             const LoadCase& load, bool force_layered) {
    if (profile.layers.size() == 1 && !force_layered) {
        auto c = std::make_shared<HomogeneousCase>(pile, profile.layers.front(), profile.tip, load);
        return [c](double x) { return evaluate(*c, x); };
    }
    auto c = std::make_shared<LayeredCase>(pile, profile, load);
    auto coeffs = std::make_shared<LayerCoefficients>(solve_layered(*c));
    return [c, coeffs](double x) { return evaluate_layered(*coeffs, *c, x); };
}

double FieldErrors::max() const {
    return std::max({u, strain, stress});
}

FieldErrors relative_linf(const ResponseProfile& candidate, const Reference& reference) {
    double du = 0.0, de = 0.0, ds = 0.0;
    double ru = 0.0, re = 0.0, rs = 0.0;
    for (const Sample& s : candidate.samples) {
        const PointResponse r = reference(s.x);
        du = std::max(du, std::abs(s.u - r.u));
        de = std::max(de, std::abs(s.strain - r.strain));
        ds = std::max(ds, std::abs(s.stress - r.stress));
        ru = std::max(ru, std::abs(r.u));
        re = std::max(re, std::abs(r.strain));
        rs = std::max(rs, std::abs(r.stress));
    }
    auto rel = [](double diff, double ref) { return ref > 0.0 ? diff / ref : diff; };
    return FieldErrors{rel(du, ru), rel(de, re), rel(ds, rs)};
}

ConvergenceResult observed_convergence_order(const PileSection& pile, const SoilProfile& profile,
                                             const LoadCase& load,
                                             std::span<const std::size_t> sizes) {
    if (sizes.size() < 3) {
        throw ValidationError("convergence study needs at least 3 grid sizes");
    }
    for (std::size_t k = 1; k < sizes.size(); ++k) {
        if (sizes[k] < 2 * sizes[k - 1]) {
            throw ValidationError("convergence study grid sizes must at least double");
        }
    }
    const Reference reference = analytic_reference(pile, profile, load);

    ConvergenceResult result;
    result.sizes.assign(sizes.begin(), sizes.end());
    for (std::size_t n : sizes) {
        const ResponseProfile fd = fd::solve_fd(pile, profile, load, n);
        result.spacings.push_back(pile.length / static_cast<double>(n - 1));
        result.errors.push_back(relative_linf(fd, reference).max());
    }

    const std::size_t m = sizes.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double lx = std::log(result.spacings[k]);
        const double ly = std::log(result.errors[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double dm = static_cast<double>(m);
    result.order = (dm * sxy - sx * sy) / (dm * sxx - sx * sx);

    for (std::size_t k = 1; k < m; ++k) {
        if (!(result.errors[k] < result.errors[k - 1])) {
            result.warning = "error does not decrease monotonically with refinement";
            break;
        }
    }
    return result;
}

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t intervals) {
    if (intervals < 2) intervals = 2;
    if (intervals % 2 != 0) ++intervals;
    const double h = (b - a) / static_cast<double>(intervals);
    double sum = f(a) + f(b);
    for (std::size_t k = 1; k < intervals; ++k) {
        sum += (k % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(k));
    }
    return sum * h / 3.0;
}

EquilibriumCheck global_equilibrium(const HomogeneousCase& c, std::size_t intervals) {
    const PileSection& pile = c.pile();
    const double L = pile.length;
    const PointResponse head = evaluate(c, L);
    const PointResponse tip = evaluate(c, 0.0);
    const double shear = simpson([&c](double x) { return evaluate(c, x).shear; }, 0.0, L, intervals);
    const double shear_abs =
        simpson([&c](double x) { return std::abs(evaluate(c, x).shear); }, 0.0, L, intervals);

    EquilibriumCheck check;
    check.residual = pile.area * head.stress - pile.area * tip.stress + pile.perimeter * shear;
    check.scale = pile.area * (std::abs(head.stress) + std::abs(tip.stress)) +
                  pile.perimeter * shear_abs;
    return check;
}

std::vector<EquilibriumCheck> layered_equilibrium(const LayeredCase& c,
                                                  std::size_t intervals_per_layer) {
    const PileSection& pile = c.pile();
    const LayerCoefficients coeffs = solve_layered(c);
    std::vector<EquilibriumCheck> checks;
    EquilibriumCheck total;
    for (std::size_t i = 0; i < c.layer_count(); ++i) {
        const double h = coeffs.layers[i].thickness;
        auto tau = [&](double xi) { return evaluate_in_layer(coeffs, c, i, xi).shear; };
        const double shear = simpson(tau, 0.0, h, intervals_per_layer);
        const double shear_abs =
            simpson([&](double xi) { return std::abs(tau(xi)); }, 0.0, h, intervals_per_layer);
        const PointResponse top = evaluate_in_layer(coeffs, c, i, h);
        const PointResponse bottom = evaluate_in_layer(coeffs, c, i, 0.0);

        EquilibriumCheck check;
        check.residual = pile.area * (top.stress - bottom.stress) + pile.perimeter * shear;
        check.scale = pile.area * (std::abs(top.stress) + std::abs(bottom.stress)) +
                      pile.perimeter * shear_abs;
        checks.push_back(check);

        total.residual += pile.perimeter * shear;
        total.scale += pile.perimeter * shear_abs;
    }
    const PointResponse head = evaluate_in_layer(coeffs, c, c.layer_count() - 1,
                                                 coeffs.layers.back().thickness);
    const PointResponse tip = evaluate_in_layer(coeffs, c, 0, 0.0);
    total.residual += pile.area * (head.stress - tip.stress);
    total.scale += pile.area * (std::abs(head.stress) + std::abs(tip.stress));
    checks.push_back(total);
    return checks;
}

} // namespace epile::verify
