#include "logcrystal/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "logcrystal/errors.hpp"
#include "logcrystal/parallel.hpp"

namespace logcrystal {

// Written around the grid centre so that Q = 0, P = 0 and P = +-1/2 come out exact.
double PhaseGrid::q(std::size_t i) const {
    const double n = static_cast<double>(n_q);
    return (2.0 * static_cast<double>(i) - n) * std::numbers::pi / n;
}
double PhaseGrid::p(std::size_t j) const {
    const double span = static_cast<double>(n_p - 1);
    return (2.0 * static_cast<double>(j) - span) / (2.0 * span);
}
double PhaseGrid::q_step() const { return 2.0 * std::numbers::pi / static_cast<double>(n_q); }
double PhaseGrid::p_step() const { return 1.0 / static_cast<double>(n_p - 1); }

double classical_energy(double gamma, PhasePoint point) {
    if (!(std::abs(point.p) <= 0.5)) throw DomainError("|P| must not exceed 1/2");
    const double radial = 1.0 - 4.0 * point.p * point.p;
    const double u = std::sqrt(radial) * std::cos(point.q);
    return -u + gamma * u * u;
}

double classical_minimum(double gamma) { return gamma > 0.5 ? -0.25 / gamma : gamma - 1.0; }

std::vector<PhasePoint> minimum_locus(double gamma, std::size_t n_points) {
    if (n_points < 2) throw ValidationError("minimum_locus needs n_points >= 2");
    if (!(gamma > 0.5)) return {PhasePoint{0.0, 0.0}};

    const double u = 0.5 / gamma;
    const double p_max = 0.5 * std::sqrt(1.0 - u * u);
    const std::size_t upper = (n_points + 1) / 2;
    const std::size_t lower = n_points - upper;
    std::vector<PhasePoint> out;
    out.reserve(n_points);
    const auto branch = [&](std::size_t count, double sign) {
        for (std::size_t k = 0; k < count; ++k) {
            const double p = count == 1 ? 0.0
                                        : -p_max + 2.0 * p_max * static_cast<double>(k) / static_cast<double>(count - 1);
            const double c = std::min(1.0, u / std::sqrt(1.0 - 4.0 * p * p));
            out.push_back({sign * std::acos(c), p});
        }
    };
    branch(upper, 1.0);
    branch(lower, -1.0);
    return out;
}

LandscapeGrid landscape_grid(double gamma, std::size_t n_q, std::size_t n_p, unsigned workers) {
    if (n_q < 16 || n_p < 16) throw ValidationError("landscape grid needs nQ, nP >= 16");
    LandscapeGrid out{gamma, PhaseGrid{n_q, n_p}, std::vector<double>(n_q * n_p)};
    parallel_for(n_q, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t j = 0; j < n_p; ++j)
                out.values[i * n_p + j] = classical_energy(gamma, {out.grid.q(i), out.grid.p(j)});
    });
    return out;
}

}  // namespace logcrystal
