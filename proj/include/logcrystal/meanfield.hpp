#pragma once

#include <cstddef>
#include <vector>

namespace logcrystal {

// Q: phase difference arg(a2) - arg(a1); P: imbalance (|a2|^2 - |a1|^2) / 2.
struct PhasePoint {
    double q = 0.0;
    double p = 0.0;
};

// Uniform node grid over the phase space: Q_i = -pi + 2 pi i / nQ (periodic,
// [-pi, pi)), P_j = -1/2 + j / (nP - 1) (both edges included).
struct PhaseGrid {
    std::size_t n_q = 0;
    std::size_t n_p = 0;

    double q(std::size_t i) const;
    double p(std::size_t j) const;
    double q_step() const;
    double p_step() const;
};

// H_m = -sqrt(1 - 4P^2) cos Q + gamma (1 - 4P^2) cos^2 Q. Throws DomainError for |P| > 1/2.
double classical_energy(double gamma, PhasePoint point);

// Ground energy of H_m: -1/(4 gamma) for gamma > 1/2, otherwise gamma - 1 at the origin.
double classical_minimum(double gamma);

// gamma > 1/2: n_points samples of sqrt(1 - 4P^2) cos Q = 1/(2 gamma), uniform
// in P over |P| <= sqrt(1 - 1/(4 gamma^2)) / 2; the first ceil(n/2) on the
// Q > 0 branch, the rest on the mirror branch. Otherwise the single point (0, 0).
std::vector<PhasePoint> minimum_locus(double gamma, std::size_t n_points);

struct LandscapeGrid {
    double gamma;
    PhaseGrid grid;
    std::vector<double> values;  // row-major, index i * n_p + j

    double at(std::size_t i, std::size_t j) const { return values[i * grid.n_p + j]; }
};

// Requires nQ, nP >= 16.
LandscapeGrid landscape_grid(double gamma, std::size_t n_q, std::size_t n_p, unsigned workers = 1);

}  // namespace logcrystal
