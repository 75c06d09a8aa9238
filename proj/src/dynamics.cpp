#include "logcrystal/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "logcrystal/errors.hpp"
#include "logcrystal/parallel.hpp"

namespace logcrystal {

namespace {

using cplx = std::complex<double>;

Eigen::VectorXd ground_gaps(const ModelParams& params) {
    Eigen::VectorXd gaps(static_cast<Eigen::Index>(params.dimension()));
    for (Eigen::Index k = 0; k < gaps.size(); ++k)
        gaps(k) = gap_to_ground(params, LevelIndex::from_offset(params, static_cast<std::size_t>(k)));
    return gaps;
}

// Populated levels only, in ascending m.
struct Populations {
    std::vector<double> weights;
    std::vector<double> gaps;
};

Populations populations(const SxBasisState& state) {
    const Eigen::VectorXd all_gaps = ground_gaps(state.params());
    Populations p;
    for (Eigen::Index k = 0; k < state.amplitudes().size(); ++k) {
        const double w = std::norm(state.amplitudes()(k));
        if (w == 0.0) continue;
        p.weights.push_back(w);
        p.gaps.push_back(all_gaps(k));
    }
    return p;
}

cplx overlap_sum(const Populations& p, double t) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < p.weights.size(); ++i) acc += p.weights[i] * std::polar(1.0, -p.gaps[i] * t);
    return acc;
}

double parabola_vertex_offset(double left, double mid, double right) {
    const double curvature = left - 2.0 * mid + right;
    if (curvature == 0.0) return 0.0;
    return 0.5 * (left - right) / curvature;
}

}  // namespace

double log_period(const ModelParams& params, LogBase base) {
    base.validate();
    if (!(params.gamma() > 0.0)) throw ValidationError("log period needs gamma > 0");
    return std::numbers::pi / params.gamma() * base.log(static_cast<double>(params.n()));
}

double two_level_period(const ModelParams& params, std::int64_t m1_offset) {
    const LevelIndex m1 = ground_index(params).shifted(-m1_offset);
    const double gap = gap_to_ground(params, m1);
    if (!(gap > 0.0)) throw ValidationError("two-level gap is zero; no oscillation");
    return 2.0 * std::numbers::pi / gap;
}

std::vector<double> uniform_times(double t_max, std::size_t samples) {
    if (samples < 2) throw ValidationError("a time grid needs at least 2 samples");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max must be positive");
    std::vector<double> t(samples);
    for (std::size_t k = 0; k < samples; ++k)
        t[k] = t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
    return t;
}

SxBasisState evolve_phase(const SxBasisState& state, double t) {
    if (!std::isfinite(t)) throw ValidationError("evolution time must be finite");
    const Eigen::VectorXd gaps = ground_gaps(state.params());
    Eigen::VectorXcd c = state.amplitudes();
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -gaps(k) * t);
    return SxBasisState(state.params(), std::move(c));
}

cplx overlap_exact(const SxBasisState& state, double t) { return overlap_sum(populations(state), t); }

std::vector<cplx> overlap_exact(const SxBasisState& state, std::span<const double> times, unsigned workers) {
    const Populations p = populations(state);
    std::vector<cplx> out(times.size());
    parallel_for(times.size(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = overlap_sum(p, times[i]);
    });
    return out;
}

ClosedFormOverlap overlap_closed_form(const ModelParams& params, double sigma, std::int64_t m1_offset, double t) {
    if (!params.degenerate()) throw RegimeError("closed-form overlap needs gamma > 1/2");
    if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
    if (m1_offset == 0) throw ValidationError("m1_offset must be nonzero");

    const double n = static_cast<double>(params.n());
    const double g = params.gamma();
    const double d2 = static_cast<double>(m1_offset) * static_cast<double>(m1_offset);
    const double kappa = 4.0 * g * sigma * sigma * t / n;

    EnvelopeParams env{};
    env.period = std::numbers::pi * n / (g * d2) * (1.0 + kappa * kappa);
    env.amplitude = 0.5 * std::sqrt(cplx(n, 0.0) / cplx(n, 4.0 * g * sigma * sigma * t));
    double damping = 1.0;
    if (t == 0.0) {
        env.width = std::numeric_limits<double>::infinity();
    } else {
        const double r = n / (4.0 * g * sigma * t);
        env.width = std::sqrt(r * r + sigma * sigma);
        damping = std::exp(-d2 / (2.0 * env.width * env.width));
    }
    const cplx value = env.amplitude * (1.0 + damping * std::polar(1.0, -2.0 * std::numbers::pi * t / env.period));
    return {value, env};
}

OverlapSeries overlap_series(const ModelParams& params, double sigma, std::int64_t m1_offset,
                             std::span<const double> times, unsigned workers) {
    const SxBasisState state = double_gaussian_state(params, sigma, m1_offset);
    const std::vector<cplx> exact = overlap_exact(state, times, workers);
    OverlapSeries series{params, sigma, m1_offset, {}};
    series.samples.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const ClosedFormOverlap cf = overlap_closed_form(params, sigma, m1_offset, times[i]);
        series.samples.push_back({times[i], exact[i], cf.value, cf.envelope});
    }
    return series;
}

double extract_period(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size()) throw ValidationError("times and values differ in length");
    if (times.size() < 3) throw InsufficientDataError("fewer than three samples");
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // A maximum counts only if the signal dipped by a thousandth of its range
    // since the previous one; rounding ripples near extrema are skipped.
    const double tol = 1e-3 * (hi - lo);
    double low_since_peak = values[0];
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        low_since_peak = std::min(low_since_peak, values[i]);
        if (!(values[i] > values[i - 1] && values[i] >= values[i + 1])) continue;
        if (values[i] - low_since_peak < tol) continue;
        const double step = 0.5 * (times[i + 1] - times[i - 1]);
        peaks.push_back(times[i] + step * parabola_vertex_offset(values[i - 1], values[i], values[i + 1]));
        low_since_peak = values[i];
    }
    if (peaks.size() < 3)
        throw InsufficientDataError("found " + std::to_string(peaks.size()) + " maxima, need at least 3");
    return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

double extract_period(const OverlapSeries& series) {
    std::vector<double> t, v;
    t.reserve(series.samples.size());
    v.reserve(series.samples.size());
    for (const auto& s : series.samples) {
        t.push_back(s.t);
        v.push_back(std::norm(s.exact));
    }
    return extract_period(t, v);
}

cplx SzCorrelation::operator()(double t) const {
    cplx acc{0.0, 0.0};
    for (const auto& term : terms) acc += term.ladder_weight * std::polar(1.0, -term.frequency * t);
    return kPrefactor * acc;
}

double sz_ladder_weight(const ModelParams& params, LevelIndex m, int direction) {
    if (direction != 1 && direction != -1) throw ValidationError("direction must be +1 or -1");
    if (!m.valid_for(params)) throw DomainError("level m=" + std::to_string(m.m()) + " outside the band");
    const double s = params.spin();
    return (s + 1.0) * s - m.m() * (m.m() + direction);
}

SzCorrelation sz_correlation_terms(const ModelParams& params, std::int64_t m1_offset) {
    if (!params.degenerate()) throw RegimeError("S_z correlation of the time crystal needs gamma > 1/2");
    if (std::abs(m1_offset) < 3)
        throw ValidationError("|m1_offset| must be >= 3 so that m0 and m1 have disjoint S_z neighbours");
    const LevelIndex m0 = ground_index(params);
    const LevelIndex m1 = m0.shifted(-m1_offset);
    SzCorrelation out{};
    std::size_t slot = 0;
    for (const LevelIndex mj : {m0, m1}) {
        for (const int dir : {+1, -1}) {
            const LevelIndex neighbour = mj.shifted(dir);
            if (!mj.valid_for(params) || !neighbour.valid_for(params))
                throw DomainError("level m=" + std::to_string(mj.m()) + " has no neighbour in direction " +
                                  std::to_string(dir));
            out.terms[slot++] = SzCorrelationTerm{
                mj, dir, sz_ladder_weight(params, mj, dir),
                energy_level(params, neighbour) - energy_level(params, mj)};
        }
    }
    return out;
}

cplx sz_correlation_closed_form(const ModelParams& params, std::int64_t m1_offset, double t) {
    return sz_correlation_terms(params, m1_offset)(t);
}

SzCorrelationOracle::SzCorrelationOracle(const SxBasisState& state, const BasisTransform& transform,
                                         std::int64_t max_n) {
    const ModelParams& params = state.params();
    if (!(params == transform.params)) throw MismatchError("state and transform belong to different models");
    if (params.n() > max_n)
        throw ResourceError("S_z oracle limited to N <= " + std::to_string(max_n) + ", got N=" +
                            std::to_string(params.n()));
    const Eigen::MatrixXd& u = transform.matrix;
    const Eigen::Index dim = u.rows();
    Eigen::VectorXd sz_fock(dim);
    for (Eigen::Index n1 = 0; n1 < dim; ++n1) sz_fock(n1) = static_cast<double>(n1) - params.spin();

    for (Eigen::Index k = 0; k < dim; ++k)
        if (state.amplitudes()(k) != cplx(0.0, 0.0)) support_.push_back(k);
    const auto n_support = static_cast<Eigen::Index>(support_.size());
    support_amplitudes_.resize(n_support);
    columns_.resize(dim, n_support);
    for (Eigen::Index s = 0; s < n_support; ++s) {
        const Eigen::Index k = support_[static_cast<std::size_t>(s)];
        support_amplitudes_(s) = state.amplitudes()(k);
        columns_.col(s) = u.transpose() * sz_fock.cwiseProduct(u.col(k));
    }
    bra_ = columns_ * support_amplitudes_;
    gaps_ = ground_gaps(params);
}

cplx SzCorrelationOracle::operator()(double t) const {
    // S_z e^{iH't}|Psi>, then project on e^{iH't} S_z |Psi>.
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(columns_.rows());
    for (Eigen::Index s = 0; s < columns_.cols(); ++s) {
        const Eigen::Index k = support_[static_cast<std::size_t>(s)];
        ket += (support_amplitudes_(s) * std::polar(1.0, gaps_(k) * t)) * columns_.col(s).cast<cplx>();
    }
    cplx acc{0.0, 0.0};
    for (Eigen::Index k = 0; k < ket.size(); ++k) acc += std::conj(bra_(k)) * std::polar(1.0, -gaps_(k) * t) * ket(k);
    return acc;
}

cplx sz_correlation_brute(const SxBasisState& state, const BasisTransform& transform, double t, std::int64_t max_n) {
    return SzCorrelationOracle(state, transform, max_n)(t);
}

}  // namespace logcrystal
