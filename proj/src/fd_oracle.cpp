#include "epile/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epile::fd {

FdGrid make_grid(const PileSection& pile, const SoilProfile& profile, std::size_t n) {
    const std::vector<double> interfaces = validate_pairing(pile, profile);
    const std::size_t layers = profile.layers.size();
    if (n < 3 || n - 1 < 2 * layers) {
        std::ostringstream msg;
        msg << "finite-difference grid needs n >= 3 and at least 2 intervals per layer (n = " << n
            << ", layers = " << layers << ")";
        throw ValidationError(msg.str());
    }

    const std::size_t total = n - 1;
    std::vector<double> ideal(layers);
    std::vector<std::size_t> count(layers);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < layers; ++i) {
        ideal[i] = static_cast<double>(total) * profile.layers[i].thickness / pile.length;
        count[i] = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(ideal[i])));
        assigned += count[i];
    }
    while (assigned < total) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < layers; ++i) {
            if (ideal[i] - count[i] > ideal[best] - count[best]) best = i;
        }
        ++count[best];
        ++assigned;
    }
    while (assigned > total) {
        std::size_t best = layers;
        for (std::size_t i = 0; i < layers; ++i) {
            if (count[i] <= 2) continue;
            if (best == layers || ideal[i] - count[i] < ideal[best] - count[best]) best = i;
        }
        --count[best];
        --assigned;
    }

    FdGrid grid;
    grid.x.reserve(n);
    grid.node_layer.reserve(n);
    grid.interval_layer.reserve(total);
    grid.x.push_back(0.0);
    grid.node_layer.push_back(0);
    for (std::size_t i = 0; i < layers; ++i) {
        const double bottom = interfaces[i];
        const double h = profile.layers[i].thickness;
        for (std::size_t j = 1; j <= count[i]; ++j) {
            const double x = (j == count[i]) ? interfaces[i + 1]
                                             : bottom + h * static_cast<double>(j) /
                                                            static_cast<double>(count[i]);
            grid.x.push_back(x);
            grid.node_layer.push_back(i);
            grid.interval_layer.push_back(i);
        }
        if (i + 1 < layers) grid.interface_nodes.push_back(grid.x.size() - 1);
    }
    return grid;
}

FdSystem assemble(const PileSection& pile, const SoilProfile& profile, const LoadCase& load,
                  const FdGrid& grid) {
    const std::size_t n = grid.size();
    const double E = pile.young_modulus;
    const double free_strain = pile.thermal_expansion * load.delta_t;
    const double geometric = pile.perimeter / pile.area;

    FdSystem sys;
    sys.lower.assign(n, 0.0);
    sys.diag.assign(n, 0.0);
    sys.upper.assign(n, 0.0);
    sys.rhs.assign(n, 0.0);

    // Tip: three-point one-sided derivative, or u_0 = 0.
    if (profile.tip.is_rigid()) {
        sys.diag[0] = 1.0;
    } else {
        const double h = grid.x[1] - grid.x[0];
        sys.diag[0] = -3.0 / (2.0 * h) - profile.tip.value() / E;
        sys.upper[0] = 4.0 / (2.0 * h);
        sys.tip_fill = -1.0 / (2.0 * h);
        sys.rhs[0] = free_strain;
    }

    // Interior: flux balance over the dual cell, which is the usual central
    // difference on uniform spacing and keeps u' continuous at interfaces.
    const auto last = static_cast<std::ptrdiff_t>(n) - 1;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t jj = 1; jj < last; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        const double hm = grid.x[j] - grid.x[j - 1];
        const double hp = grid.x[j + 1] - grid.x[j];
        const double psi2m = geometric * profile.layers[grid.interval_layer[j - 1]].shear_stiffness / E;
        const double psi2p = geometric * profile.layers[grid.interval_layer[j]].shear_stiffness / E;
        sys.lower[j] = 1.0 / hm;
        sys.upper[j] = 1.0 / hp;
        sys.diag[j] = -1.0 / hm - 1.0 / hp - 0.5 * (psi2m * hm + psi2p * hp);
    }

    // Head: three-point one-sided derivative.
    {
        const double h = grid.x[n - 1] - grid.x[n - 2];
        sys.diag[n - 1] = 3.0 / (2.0 * h);
        sys.lower[n - 1] = -4.0 / (2.0 * h);
        sys.head_fill = 1.0 / (2.0 * h);
        sys.rhs[n - 1] = free_strain + load.head_force / (pile.area * E);
    }
    return sys;
}

std::vector<double> solve_system(FdSystem s) {
    const std::size_t n = s.diag.size();
    if (n < 3) throw ValidationError("finite-difference system needs at least 3 unknowns");

    // Fold the fill-ins into the tridiagonal band using rows 1 and n-2.
    if (s.tip_fill != 0.0) {
        const double f = s.tip_fill / s.upper[1];
        s.diag[0] -= f * s.lower[1];
        s.upper[0] -= f * s.diag[1];
        s.rhs[0] -= f * s.rhs[1];
        s.tip_fill = 0.0;
    }
    if (s.head_fill != 0.0) {
        const double f = s.head_fill / s.lower[n - 2];
        s.lower[n - 1] -= f * s.diag[n - 2];
        s.diag[n - 1] -= f * s.upper[n - 2];
        s.rhs[n - 1] -= f * s.rhs[n - 2];
        s.head_fill = 0.0;
    }

    auto check_pivot = [&](std::size_t j, double pivot) {
        const double scale = std::abs(s.lower[j]) + std::abs(s.diag[j]) + std::abs(s.upper[j]);
        if (!(std::abs(pivot) > 1e-12 * scale)) {
            std::ostringstream msg;
            msg << "singular finite-difference system (pivot " << pivot << " at row " << j
                << "): the pile is not restrained";
            throw SolverError(msg.str());
        }
    };

    std::vector<double> c(n, 0.0);
    std::vector<double> d(n, 0.0);
    check_pivot(0, s.diag[0]);
    c[0] = s.upper[0] / s.diag[0];
    d[0] = s.rhs[0] / s.diag[0];
    for (std::size_t j = 1; j < n; ++j) {
        const double pivot = s.diag[j] - s.lower[j] * c[j - 1];
        check_pivot(j, pivot);
        c[j] = (j + 1 < n) ? s.upper[j] / pivot : 0.0;
        d[j] = (s.rhs[j] - s.lower[j] * d[j - 1]) / pivot;
    }
    std::vector<double> u(n);
    u[n - 1] = d[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) u[j] = d[j] - c[j] * u[j + 1];
    return u;
}

ResponseProfile solve_fd(const PileSection& pile, const SoilProfile& profile, const LoadCase& load,
                         std::size_t n) {
    validate(load);
    const FdGrid grid = make_grid(pile, profile, n);
    const std::vector<double> u = solve_system(assemble(pile, profile, load, grid));

    const auto& x = grid.x;
    std::vector<bool> is_interface(n, false);
    for (std::size_t j : grid.interface_nodes) is_interface[j] = true;

    std::vector<double> strain(n);
    {
        const double h = x[1] - x[0];
        strain[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    }
    {
        const double h = x[n - 1] - x[n - 2];
        strain[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
    }
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (is_interface[j]) {
            // u'' jumps here; use the lower layer's one-sided stencil.
            const double h = x[j] - x[j - 1];
            strain[j] = (3.0 * u[j] - 4.0 * u[j - 1] + u[j - 2]) / (2.0 * h);
        } else {
            strain[j] = (u[j + 1] - u[j - 1]) / (x[j + 1] - x[j - 1]);
        }
    }

    ResponseProfile profile_out;
    profile_out.solver = "fd";
    profile_out.samples.resize(n);
    const double free_strain = pile.thermal_expansion * load.delta_t;
    for (std::size_t j = 0; j < n; ++j) {
        Sample& s = profile_out.samples[j];
        s.x = x[j];
        s.u = u[j];
        s.strain = strain[j];
        s.stress = pile.young_modulus * (strain[j] - free_strain);
        s.shear = -profile.layers[grid.node_layer[j]].shear_stiffness * u[j];
    }

    // Nodal sign scan with linear interpolation.
    for (std::size_t j = 0; j < n; ++j) {
        if (u[j] == 0.0) {
            profile_out.null_points.push_back(x[j]);
        } else if (j + 1 < n && u[j + 1] != 0.0 && std::signbit(u[j]) != std::signbit(u[j + 1])) {
            profile_out.null_points.push_back(x[j] - u[j] * (x[j + 1] - x[j]) / (u[j + 1] - u[j]));
        }
    }
    if (std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; })) {
        profile_out.null_points.clear();
    }
    return profile_out;
}

} // namespace epile::fd
