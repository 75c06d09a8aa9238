#include "logcrystal/core.hpp"

#include <cmath>
#include <string>

#include "logcrystal/errors.hpp"

namespace logcrystal {

ModelParams::ModelParams(std::int64_t n_particles, double gamma) : n_(n_particles), gamma_(gamma) {
    if (n_particles < 1)
        throw ValidationError("n_particles must be >= 1, got " + std::to_string(n_particles));
    if (!std::isfinite(gamma) || gamma < 0.0)
        throw ValidationError("gamma must be finite and >= 0, got " + std::to_string(gamma));
}

LevelIndex LevelIndex::from_offset(const ModelParams& params, std::size_t k) {
    if (k > static_cast<std::size_t>(params.n()))
        throw DomainError("level offset " + std::to_string(k) + " exceeds N=" + std::to_string(params.n()));
    return LevelIndex(2 * static_cast<std::int64_t>(k) - params.n());
}

bool LevelIndex::valid_for(const ModelParams& params) const noexcept {
    const auto n = params.n();
    return twice_m_ >= -n && twice_m_ <= n && ((twice_m_ + n) % 2 == 0);
}

std::size_t LevelIndex::offset(const ModelParams& params) const {
    if (!valid_for(params))
        throw DomainError("level m=" + std::to_string(m()) + " does not exist for N=" + std::to_string(params.n()));
    return static_cast<std::size_t>((twice_m_ + params.n()) / 2);
}

void LogBase::validate() const {
    if (!(base > 0.0) || base == 1.0 || !std::isfinite(base))
        throw ValidationError("log base must be positive and != 1");
}

double LogBase::log(double x) const {
    if (base == std::numbers::e) return std::log(x);
    return std::log(x) / std::log(base);
}

namespace {

void require_level(const ModelParams& params, LevelIndex m) { (void)m.offset(params); }

}  // namespace

double energy_level(const ModelParams& params, LevelIndex m) {
    require_level(params, m);
    const double mm = m.m();
    return 2.0 * params.gamma() / static_cast<double>(params.n()) * mm * mm - mm;
}

double neighbor_gap(const ModelParams& params, LevelIndex m) {
    require_level(params, m);
    if (m.twice_m() == -params.n()) throw DomainError("m = -N/2 has no lower neighbour");
    const double two_m_minus_one = static_cast<double>(m.twice_m() - 1);
    return 2.0 * params.gamma() / static_cast<double>(params.n()) * two_m_minus_one - 1.0;
}

LevelIndex ground_index(const ModelParams& params) {
    const auto n = params.n();
    const double g = params.gamma();
    // E_m <= E_{m-1}  <=>  2 gamma (2m - 1) <= N. E is convex in m, so the
    // argmin (ties upward) is the largest level satisfying the predicate.
    const auto descends = [&](std::int64_t twice_m) {
        return 2.0 * g * static_cast<double>(twice_m - 1) <= static_cast<double>(n);
    };
    std::int64_t t = n;
    if (g > 0.0) {
        const double guess = static_cast<double>(n) / (2.0 * g) + 1.0;
        if (guess < static_cast<double>(n)) t = static_cast<std::int64_t>(std::floor(guess));
        if ((t + n) % 2 != 0) --t;
        if (t < -n) t = -n;
    }
    while (t + 2 <= n && descends(t + 2)) t += 2;
    while (t > -n && !descends(t)) t -= 2;
    return LevelIndex::from_twice_m(t);
}

double floor_rule_ground(const ModelParams& params) {
    if (params.gamma() == 0.0) return INFINITY;
    return std::floor(static_cast<double>(params.n()) / (4.0 * params.gamma()));
}

double gap_to_ground(const ModelParams& params, LevelIndex m) {
    require_level(params, m);
    const LevelIndex m0 = ground_index(params);
    // (m - m0) * ((2 gamma / N)(m + m0) - 1): avoids cancelling two O(N) energies.
    const double diff = static_cast<double>(m.minus(m0));
    const double sum = m.m() + m0.m();
    return diff * (2.0 * params.gamma() / static_cast<double>(params.n()) * sum - 1.0);
}

std::vector<LevelIndex> quasi_ground_set(const ModelParams& params, double delta) {
    if (!(delta > 0.0 && delta < 0.5)) throw ValidationError("delta must lie in (0, 1/2)");
    if (!params.degenerate()) throw RegimeError("quasi-degenerate manifold needs gamma > 1/2");
    const LevelIndex m0 = ground_index(params);
    const double radius = std::pow(static_cast<double>(params.n()), 0.5 - delta);
    // Exact powers such as 10000^0.25 must not round down to 9.
    const auto reach = static_cast<std::int64_t>(std::floor(radius * (1.0 + 1e-12)));
    std::vector<LevelIndex> out;
    for (std::int64_t d = -reach; d <= reach; ++d) {
        const LevelIndex m = m0.shifted(d);
        if (m.valid_for(params)) out.push_back(m);
    }
    return out;
}

std::int64_t time_crystal_offset(const ModelParams& params, LogBase base) {
    base.validate();
    const double n = static_cast<double>(params.n());
    const double lg = base.log(n);
    if (!(lg > 0.0)) throw ValidationError("log N must be positive for the time-crystal offset");
    return static_cast<std::int64_t>(std::floor(std::sqrt(n / lg) * (1.0 + 1e-12)));
}

LevelIndex m1_index(const ModelParams& params, LogBase base) {
    if (!params.degenerate()) throw RegimeError("m1 construction needs gamma > 1/2");
    const std::int64_t offset = time_crystal_offset(params, base);
    if (offset == 0) throw ValidationError("floor(sqrt(N / log N)) = 0: m1 would coincide with m0");
    const LevelIndex m1 = ground_index(params).shifted(-offset);
    if (!m1.valid_for(params)) throw DomainError("m1 = m0 - offset falls outside [-N/2, N/2]");
    return m1;
}

Spectrum spectrum(const ModelParams& params) {
    Spectrum s{params, {}, ground_index(params)};
    s.energies.reserve(params.dimension());
    for (std::size_t k = 0; k < params.dimension(); ++k) {
        const auto m = LevelIndex::from_offset(params, k);
        s.energies.emplace_back(m, energy_level(params, m));
    }
    return s;
}

}  // namespace logcrystal
