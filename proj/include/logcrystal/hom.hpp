#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "logcrystal/core.hpp"
#include "logcrystal/states.hpp"

namespace logcrystal {

// Largest N for which the exact two-copy simulation is attempted by default.
inline constexpr std::int64_t kHomMaxN = 256;

// Two independent N-particle copies before mixing. amplitudes(n_a1, n_b1);
// n_a2 = N - n_a1 and n_b2 = N - n_b1 are implied.
class CompositeState {
public:
    CompositeState(ModelParams params, Eigen::MatrixXcd amplitudes);

    const ModelParams& params() const noexcept { return params_; }
    const Eigen::MatrixXcd& amplitudes() const noexcept { return amplitudes_; }

private:
    ModelParams params_;
    Eigen::MatrixXcd amplitudes_;
};

// M(k', k) = <k', n - k'| U |k, n - k> for the 50:50 mixer that sends
// a^dag -> (a^dag + b^dag)/sqrt(2) and b^dag -> (a^dag - b^dag)/sqrt(2).
// k counts a-mode particles. Column signs follow from that substitution.
struct BeamSplitterTable {
    std::int64_t n_total;
    Eigen::MatrixXd coefficients;
};

BeamSplitterTable beamsplitter_table(std::int64_t n_total);

// Four-mode state after mixing. Pair i conserves T_i = n_ai + n_bi and
// T_1 + T_2 = 2N, so sector T_1 holds a (T_1 + 1) x (2N - T_1 + 1) block over
// the a-mode counts (n_a1, n_a2). Copies no longer hold N particles each.
struct InterferedState {
    ModelParams params;
    std::vector<Eigen::MatrixXcd> sectors;  // indexed by T_1 = 0..2N

    // Zero for any occupation outside the conserved sectors.
    std::complex<double> amplitude(std::int64_t n_a1, std::int64_t n_b1, std::int64_t n_a2, std::int64_t n_b2) const;
    double squared_norm() const;
};

// Joint distribution of the copy-b counts (n_b1, n_b2) in [0, 2N]^2, a-modes
// marginalized. Row-major over n_b1.
struct OutcomeDistribution {
    std::int64_t n_particles;
    std::vector<double> probabilities;

    std::int64_t side() const noexcept { return 2 * n_particles + 1; }
    double at(std::int64_t n_b1, std::int64_t n_b2) const {
        return probabilities[static_cast<std::size_t>(n_b1 * side() + n_b2)];
    }
};

struct ParityShot {
    std::int64_t n_b1;
    std::int64_t n_b2;
    int v;  // +1 iff n_b1 and n_b2 have equal parity
};

struct EstimatorResult {
    double mean;
    double std_error;
    std::uint64_t shots;
    std::uint64_t seed;
};

CompositeState compose(const FockBasisState& a, const FockBasisState& b);

// Mixes (a1, b1) and (a2, b2). Throws ResourceError above max_n.
InterferedState apply_hom(const CompositeState& state, unsigned workers = 1, std::int64_t max_n = kHomMaxN);

OutcomeDistribution outcome_distribution(const InterferedState& state);

// Mixes and measures sector by sector without keeping the four-mode state.
OutcomeDistribution measure_copy_b(const CompositeState& state, unsigned workers = 1,
                                   std::int64_t max_n = kHomMaxN);

// Same for several states of one model; each beam-splitter table is built once
// for the whole batch.
std::vector<OutcomeDistribution> measure_copy_b(std::span<const CompositeState> states, unsigned workers = 1,
                                                std::int64_t max_n = kHomMaxN);

// Probability of V = +1 (equal copy-b parities).
double parity_distribution(const OutcomeDistribution& outcomes);
double parity_distribution(const InterferedState& state);

// Shot `shot_index` of the stream `seed`: inverse CDF over the flattened
// outcome table with a uniform variate hashed from (seed, shot_index).
ParityShot draw_shot(const OutcomeDistribution& outcomes, std::uint64_t seed, std::uint64_t shot_index);

// Mean of V over shots 0..shots-1 and its standard error. Identical for any
// worker count.
EstimatorResult sample_shots(const OutcomeDistribution& outcomes, std::uint64_t shots, std::uint64_t seed,
                             unsigned workers = 1);
EstimatorResult sample_shots(const InterferedState& state, std::uint64_t shots, std::uint64_t seed,
                             unsigned workers = 1);

// |<a|b>|^2 straight from the amplitudes.
double swap_expectation_exact(const FockBasisState& a, const FockBasisState& b);

// 2 P(+1) - 1 from the simulated parity measurement.
double swap_expectation_measured(const FockBasisState& a, const FockBasisState& b, unsigned workers = 1);

}  // namespace logcrystal
