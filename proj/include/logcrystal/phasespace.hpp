#pragma once

#include <cstddef>
#include <vector>

#include "logcrystal/core.hpp"
#include "logcrystal/meanfield.hpp"
#include "logcrystal/states.hpp"

namespace logcrystal {

// SU(2) coherent state |Q, P> with mode weights (1/2 - P, 1/2 + P) and the
// relative phase Q on mode 2:
//   amp(n1) = sqrt(C(N, n1)) (1/2 - P)^(n1/2) (1/2 + P)^((N - n1)/2) e^{i Q (N - n1)}.
FockBasisState coherent_state(const ModelParams& params, PhasePoint point);

struct HusimiGrid {
    ModelParams params;
    LevelIndex level;
    PhaseGrid grid;
    std::vector<double> values;  // |<Q_i, P_j | m>|^2, row-major i * n_p + j

    double at(std::size_t i, std::size_t j) const { return values[i * grid.n_p + j]; }
    double total() const;
};

// Projection of the S_x eigenstate |m> onto coherent states on the node grid.
HusimiGrid husimi(const ModelParams& params, LevelIndex m, const BasisTransform& transform, std::size_t n_q,
                  std::size_t n_p, unsigned workers = 1);

// Chebyshev distance, in grid steps (Q periodic), from node (i, j) to the
// mean-field minimum locus.
double cell_distance_to_locus(double gamma, const PhaseGrid& grid, std::size_t i, std::size_t j);

// Nodes within `cells` grid steps (square neighbourhood) of a node crossed by
// the minimum locus. Row-major like the grids.
std::vector<bool> locus_neighbourhood(double gamma, const PhaseGrid& grid, std::size_t cells);

// Share of the grid's total value lying on locus_neighbourhood(gamma, grid, cells).
double locus_mass_fraction(const HusimiGrid& husimi, double gamma, std::size_t cells);

}  // namespace logcrystal
