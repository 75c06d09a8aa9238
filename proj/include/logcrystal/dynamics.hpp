#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "logcrystal/core.hpp"
#include "logcrystal/states.hpp"

namespace logcrystal {

// Samples per expected oscillation period used by default time grids.
inline constexpr std::size_t kSamplesPerPeriod = 256;

// T0 log N with T0 = pi / gamma.
double log_period(const ModelParams& params, LogBase base = {});

// Exact period 2 pi / (E_{m1} - E_{m0}) of the two-level superposition.
double two_level_period(const ModelParams& params, std::int64_t m1_offset);

// t_k = k t_max / (samples - 1), k = 0..samples-1.
std::vector<double> uniform_times(double t_max, std::size_t samples);

// c_m -> c_m exp(-i (E_m - E_{m0}) t). The dropped factor exp(-i E_{m0} t) is
// a global phase.
SxBasisState evolve_phase(const SxBasisState& state, double t);

// <Psi(0)|Psi(t)> = sum_m |c_m|^2 exp(-i (E_m - E_{m0}) t), summed in ascending m.
std::complex<double> overlap_exact(const SxBasisState& state, double t);

// Same sum on a time grid; samples are split across `workers` threads and the
// result is bit-identical for any worker count.
std::vector<std::complex<double>> overlap_exact(const SxBasisState& state, std::span<const double> times,
                                                unsigned workers = 1);

struct EnvelopeParams {
    double period;                   // T(t)
    double width;                    // Sigma(t); +inf at t = 0
    std::complex<double> amplitude;  // A(t)
};

struct ClosedFormOverlap {
    std::complex<double> value;
    EnvelopeParams envelope;
};

// Continuum approximation of the double-Gaussian overlap, from the exact
// Gaussian integral with D = m1_offset^2 and kappa = 4 gamma sigma^2 t / N:
//   A(t)     = (1/2) sqrt(N / (N + 4 i gamma sigma^2 t))
//   T(t)     = (pi N / (gamma D)) (1 + kappa^2)
//   Sigma(t) = sqrt((N / (4 gamma sigma t))^2 + sigma^2)
//   value    = A(t) {1 + exp(-D / (2 Sigma^2)) exp(-2 pi i t / T(t))}
// For D = N / log N the period at t = 0 is T0 log N.
ClosedFormOverlap overlap_closed_form(const ModelParams& params, double sigma, std::int64_t m1_offset, double t);

struct OverlapSample {
    double t;
    std::complex<double> exact;
    std::complex<double> closed_form;
    EnvelopeParams envelope;
};

struct OverlapSeries {
    ModelParams params;
    double sigma;
    std::int64_t m1_offset;
    std::vector<OverlapSample> samples;
};

// Double-Gaussian state evaluated both ways on `times`.
OverlapSeries overlap_series(const ModelParams& params, double sigma, std::int64_t m1_offset,
                             std::span<const double> times, unsigned workers = 1);

// Mean spacing of successive local maxima of `values`, each refined by a
// parabola through the three samples around it. Throws InsufficientDataError
// with fewer than three maxima.
double extract_period(std::span<const double> times, std::span<const double> values);

// extract_period on |exact|^2.
double extract_period(const OverlapSeries& series);

// One term w exp(-i omega t) of the S_z autocorrelation of the two-level state.
struct SzCorrelationTerm {
    LevelIndex level;          // m_j
    int direction;             // +1 or -1: coupling to m_j + direction
    double ladder_weight;      // (N/2 + 1)(N/2) - m_j (m_j + direction)
    double frequency;          // E_{m_j + direction} - E_{m_j}
};

struct SzCorrelation {
    // Overall factor relating ladder weights to the signal: 1/2 from the
    // two-level populations times 1/4 from |<m +- 1|S_z|m>|^2.
    static constexpr double kPrefactor = 0.125;

    std::array<SzCorrelationTerm, 4> terms;  // (m0,+), (m0,-), (m1,+), (m1,-)

    std::complex<double> operator()(double t) const;
};

// (N/2 + 1)(N/2) - m (m + direction); zero when the ladder leaves the band.
double sz_ladder_weight(const ModelParams& params, LevelIndex m, int direction);

// Requires gamma > 1/2 and |m1_offset| >= 3 (closer levels share S_z couplings).
SzCorrelation sz_correlation_terms(const ModelParams& params, std::int64_t m1_offset);

std::complex<double> sz_correlation_closed_form(const ModelParams& params, std::int64_t m1_offset, double t);

inline constexpr std::int64_t kSzOracleMaxN = 2000;

// <Psi| S_z e^{-iH't} S_z e^{iH't} |Psi> by brute force: S_z is built in the
// Fock basis and carried into the S_x basis with the transform. Only columns
// on the support of the state are formed, so sparse states stay cheap.
class SzCorrelationOracle {
public:
    SzCorrelationOracle(const SxBasisState& state, const BasisTransform& transform,
                        std::int64_t max_n = kSzOracleMaxN);

    std::complex<double> operator()(double t) const;

private:
    std::vector<Eigen::Index> support_;
    Eigen::VectorXcd support_amplitudes_;
    Eigen::MatrixXd columns_;          // S_z columns for the support, S_x basis
    Eigen::VectorXcd bra_;             // S_z |Psi>
    Eigen::VectorXd gaps_;             // E_m - E_{m0}
};

std::complex<double> sz_correlation_brute(const SxBasisState& state, const BasisTransform& transform, double t,
                                          std::int64_t max_n = kSzOracleMaxN);

}  // namespace logcrystal
