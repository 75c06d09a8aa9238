#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace logcrystal {

// Particle number N and dimensionless coupling gamma of the two-mode boson
// model. Energies follow H' = -S_x + (2 gamma / N) S_x^2 with hbar = 1 and the
// single-particle hopping as the energy unit.
class ModelParams {
public:
    // Throws ValidationError unless n_particles >= 1 and gamma >= 0 (finite).
    ModelParams(std::int64_t n_particles, double gamma);

    std::int64_t n() const noexcept { return n_; }
    double gamma() const noexcept { return gamma_; }
    double spin() const noexcept { return 0.5 * static_cast<double>(n_); }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(n_) + 1; }
    // True in the regime with a quasi-degenerate ground manifold.
    bool degenerate() const noexcept { return gamma_ > 0.5; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
    std::int64_t n_;
    double gamma_;
};

// S_x quantum number m. Stored as 2m so that odd N (half-integer m) is exact.
class LevelIndex {
public:
    constexpr LevelIndex() = default;
    static constexpr LevelIndex from_m(std::int64_t m) { return LevelIndex(2 * m); }
    static constexpr LevelIndex from_twice_m(std::int64_t twice_m) { return LevelIndex(twice_m); }
    // k = m + N/2 runs over 0..N; this is the storage index of state vectors.
    static LevelIndex from_offset(const ModelParams& params, std::size_t k);

    constexpr std::int64_t twice_m() const noexcept { return twice_m_; }
    constexpr double m() const noexcept { return 0.5 * static_cast<double>(twice_m_); }

    bool valid_for(const ModelParams& params) const noexcept;
    // Storage index k; throws DomainError if the level does not exist for params.
    std::size_t offset(const ModelParams& params) const;

    constexpr LevelIndex shifted(std::int64_t dm) const { return LevelIndex(twice_m_ + 2 * dm); }
    // Integer distance m - other.m (levels of one model differ by integers).
    constexpr std::int64_t minus(LevelIndex other) const { return (twice_m_ - other.twice_m_) / 2; }

    friend constexpr auto operator<=>(LevelIndex, LevelIndex) = default;

private:
    constexpr explicit LevelIndex(std::int64_t twice_m) : twice_m_(twice_m) {}
    std::int64_t twice_m_ = 0;
};

// Base of the logarithm in log N. Natural log unless overridden.
struct LogBase {
    double base = std::numbers::e;

    // Throws ValidationError for base <= 0 or base == 1.
    void validate() const;
    double log(double x) const;
};

struct Spectrum {
    ModelParams params;
    std::vector<std::pair<LevelIndex, double>> energies;  // ascending m
    LevelIndex m0;
};

// E_m = (2 gamma / N) m^2 - m.
double energy_level(const ModelParams& params, LevelIndex m);

// E_m - E_{m-1} = (2 gamma / N)(2m - 1) - 1. Needs a lower neighbour.
double neighbor_gap(const ModelParams& params, LevelIndex m);

// Argmin of E_m over all levels; ties go to the larger m.
LevelIndex ground_index(const ModelParams& params);

// floor(N / (4 gamma)), kept for comparison with ground_index. Not clamped.
double floor_rule_ground(const ModelParams& params);

// E_m - E_{m0} >= 0.
double gap_to_ground(const ModelParams& params, LevelIndex m);

// All levels with |m - m0| <= N^(1/2 - delta), ascending.
std::vector<LevelIndex> quasi_ground_set(const ModelParams& params, double delta);

// floor(sqrt(N / log N)): distance between m0 and the partner level m1.
std::int64_t time_crystal_offset(const ModelParams& params, LogBase base = {});

// m1 = m0 - time_crystal_offset(params, base).
LevelIndex m1_index(const ModelParams& params, LogBase base = {});

Spectrum spectrum(const ModelParams& params);

}  // namespace logcrystal
