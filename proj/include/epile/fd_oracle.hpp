#pragma once

// Second-order finite-difference solution of
//   u'' = psi(x)^2 u on [0, L],
//   E (u'(0) - alpha dT) = k_b u(0)   (or u(0) = 0 for a rigid tip),
//   E (u'(L) - alpha dT) = F / A,
// for piecewise-constant k_s. Used only to verify the analytic solvers; it
// shares the domain types with them and nothing else.

#include <cstddef>
#include <vector>

#include "epile/pile_model.hpp"

namespace epile::fd {

/// Nodes placed layer by layer so every interface is a node. Each layer gets
/// at least two intervals; the rest of the n - 1 intervals are split in
/// proportion to the layer thicknesses.
struct FdGrid {
    std::vector<double> x;
    /// Layer of every node; an interface node belongs to the layer below.
    std::vector<std::size_t> node_layer;
    /// Layer of every interval [x_j, x_j+1].
    std::vector<std::size_t> interval_layer;
    /// Indices of the interior interface nodes.
    std::vector<std::size_t> interface_nodes;

    std::size_t size() const { return x.size(); }
};

FdGrid make_grid(const PileSection& pile, const SoilProfile& profile, std::size_t n);

/// Tridiagonal system plus the two fill-ins from the one-sided boundary
/// stencils: row 0 also touches u_2, row n-1 also touches u_{n-3}.
struct FdSystem {
    std::vector<double> lower; // lower[j]: coefficient of u_{j-1} in row j (lower[0] unused)
    std::vector<double> diag;
    std::vector<double> upper; // upper[j]: coefficient of u_{j+1} in row j (upper[n-1] unused)
    std::vector<double> rhs;
    double tip_fill = 0.0;  // coefficient of u_2 in row 0
    double head_fill = 0.0; // coefficient of u_{n-3} in row n-1

    bool operator==(const FdSystem&) const = default;
};

FdSystem assemble(const PileSection& pile, const SoilProfile& profile, const LoadCase& load,
                  const FdGrid& grid);

/// Direct elimination (Thomas algorithm after folding the fill-ins into the
/// neighbouring rows). Throws SolverError on a vanishing pivot.
std::vector<double> solve_system(FdSystem system);

/// Full solve on n nodes (n >= 3, and at least 2 intervals per layer).
ResponseProfile solve_fd(const PileSection& pile, const SoilProfile& profile, const LoadCase& load,
                         std::size_t n);

} // namespace epile::fd
