#include "logcrystal/hom.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <utility>
#include <string>

#include "logcrystal/errors.hpp"
#include "logcrystal/parallel.hpp"

namespace logcrystal {

namespace {

using cplx = std::complex<double>;

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based variate in [0, 1): depends only on (seed, index).
double counter_uniform(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t bits = mix64(mix64(seed) ^ index);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

void check_bound(const ModelParams& params, std::int64_t max_n) {
    if (params.n() > max_n)
        throw ResourceError("two-copy simulation limited to N <= " + std::to_string(max_n) + ", got N=" +
                            std::to_string(params.n()));
}

// Calls fn(s, T1, block) for every state s and conserved sector T1, where
// block is the mixed amplitude over (n_a1', n_a2'). Tables are built once per
// group of sizes and shared by all states; sectors of a group are mixed in
// parallel, one whole product per sector, and handed to fn in a fixed order.
template <typename Fn>
void for_each_sector(std::span<const CompositeState> states, unsigned workers, Fn&& fn) {
    const std::int64_t n = states.front().params().n();

    const auto mix_sector = [n](const Eigen::MatrixXcd& psi, std::int64_t t1, const Eigen::MatrixXd& m1,
                                const Eigen::MatrixXd& m2) {
        const std::int64_t lo = std::max<std::int64_t>(0, t1 - n);
        const std::int64_t hi = std::min<std::int64_t>(n, t1);
        const Eigen::Index d = hi - lo + 1;
        // Pair 1 holds (j, t1 - j); pair 2 holds (n - j, n - t1 + j) with a-count n - j.
        Eigen::MatrixXd left_re(m1.rows(), d);
        Eigen::MatrixXd left_im(m1.rows(), d);
        Eigen::MatrixXd right(m2.rows(), d);
        for (Eigen::Index c = 0; c < d; ++c) {
            const std::int64_t j = lo + c;
            const cplx w = psi(j, t1 - j);
            left_re.col(c) = m1.col(j) * w.real();
            left_im.col(c) = m1.col(j) * w.imag();
            right.col(c) = m2.col(n - j);
        }
        Eigen::MatrixXcd block(m1.rows(), m2.rows());
        block.real().noalias() = left_re * right.transpose();
        block.imag().noalias() = left_im * right.transpose();
        return block;
    };

    const std::int64_t group = std::max<std::int64_t>(1, workers);
    for (std::int64_t first = n; first <= 2 * n; first += group) {
        const std::int64_t count = std::min(group, 2 * n - first + 1);
        std::vector<Eigen::MatrixXd> high(static_cast<std::size_t>(count));
        std::vector<Eigen::MatrixXd> low(static_cast<std::size_t>(count));
        parallel_for(static_cast<std::size_t>(count), workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                const std::int64_t size = first + static_cast<std::int64_t>(i);
                high[i] = beamsplitter_table(size).coefficients;
                low[i] = size == n ? high[i] : beamsplitter_table(2 * n - size).coefficients;
            }
        });
        // (group slot, partner?) in emission order: size first, then 2N - size.
        std::vector<std::pair<std::size_t, bool>> tasks;
        for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
            tasks.emplace_back(i, false);
            if (first + static_cast<std::int64_t>(i) != n) tasks.emplace_back(i, true);
        }
        for (std::size_t s = 0; s < states.size(); ++s) {
            const Eigen::MatrixXcd& psi = states[s].amplitudes();
            std::vector<Eigen::MatrixXcd> blocks(tasks.size());
            parallel_for(tasks.size(), workers, [&](std::size_t b, std::size_t e) {
                for (std::size_t k = b; k < e; ++k) {
                    const auto [i, partner] = tasks[k];
                    const std::int64_t size = first + static_cast<std::int64_t>(i);
                    blocks[k] = partner ? mix_sector(psi, 2 * n - size, low[i], high[i])
                                        : mix_sector(psi, size, high[i], low[i]);
                }
            });
            for (std::size_t k = 0; k < tasks.size(); ++k) {
                const auto [i, partner] = tasks[k];
                const std::int64_t size = first + static_cast<std::int64_t>(i);
                fn(s, partner ? 2 * n - size : size, blocks[k]);
            }
        }
    }
}

void accumulate_outcomes(OutcomeDistribution& out, std::int64_t t1, const Eigen::MatrixXcd& block) {
    const std::int64_t t2 = 2 * out.n_particles - t1;
    const std::int64_t side = out.side();
    for (std::int64_t k1 = 0; k1 <= t1; ++k1)
        for (std::int64_t k2 = 0; k2 <= t2; ++k2)
            out.probabilities[static_cast<std::size_t>((t1 - k1) * side + (t2 - k2))] += std::norm(block(k1, k2));
}

}  // namespace

CompositeState::CompositeState(ModelParams params, Eigen::MatrixXcd amplitudes)
    : params_(params), amplitudes_(std::move(amplitudes)) {
    const auto dim = static_cast<Eigen::Index>(params_.dimension());
    if (amplitudes_.rows() != dim || amplitudes_.cols() != dim)
        throw ValidationError("composite amplitudes must be (N+1) x (N+1)");
    if (!(std::abs(amplitudes_.squaredNorm() - 1.0) <= 1e-10)) throw ValidationError("composite state is not normalized");
}

BeamSplitterTable beamsplitter_table(std::int64_t n_total) {
    if (n_total < 0) throw ValidationError("n_total must be >= 0");
    if (n_total == 0) return {0, Eigen::MatrixXd::Ones(1, 1)};
    // The outputs are Fock states of the modes (a +- b)/sqrt(2), i.e. S_x
    // eigenstates with m = k - n/2. The phase fixes the |0, n> entry to the
    // sign of (-1)^(n-k) coming from (a^dag - b^dag)^(n-k).
    BeamSplitterTable table{n_total, sx_eigenbasis(ModelParams(n_total, 0.0)).matrix};
    for (std::int64_t k = 0; k <= n_total; ++k) {
        if ((n_total - k) % 2) table.coefficients.col(k) *= -1.0;
    }
    return table;
}

cplx InterferedState::amplitude(std::int64_t n_a1, std::int64_t n_b1, std::int64_t n_a2, std::int64_t n_b2) const {
    const std::int64_t n = params.n();
    if (std::min({n_a1, n_b1, n_a2, n_b2}) < 0) return {0.0, 0.0};
    if (n_a1 + n_b1 + n_a2 + n_b2 != 2 * n) return {0.0, 0.0};
    return sectors[static_cast<std::size_t>(n_a1 + n_b1)](n_a1, n_a2);
}

double InterferedState::squared_norm() const {
    double s = 0.0;
    for (const auto& block : sectors) s += block.squaredNorm();
    return s;
}

CompositeState compose(const FockBasisState& a, const FockBasisState& b) {
    if (!(a.params() == b.params())) throw MismatchError("copies a and b belong to different models");
    return CompositeState(a.params(), a.amplitudes() * b.amplitudes().transpose());
}

InterferedState apply_hom(const CompositeState& state, unsigned workers, std::int64_t max_n) {
    check_bound(state.params(), max_n);
    InterferedState out{state.params(), std::vector<Eigen::MatrixXcd>(static_cast<std::size_t>(2 * state.params().n() + 1))};
    for_each_sector(std::span(&state, 1), workers, [&](std::size_t, std::int64_t t1, Eigen::MatrixXcd& block) {
        out.sectors[static_cast<std::size_t>(t1)] = std::move(block);
    });
    return out;
}

OutcomeDistribution outcome_distribution(const InterferedState& state) {
    const std::int64_t n = state.params.n();
    OutcomeDistribution out{n, std::vector<double>(static_cast<std::size_t>((2 * n + 1) * (2 * n + 1)), 0.0)};
    for (std::int64_t t1 = 0; t1 <= 2 * n; ++t1) accumulate_outcomes(out, t1, state.sectors[static_cast<std::size_t>(t1)]);
    return out;
}

std::vector<OutcomeDistribution> measure_copy_b(std::span<const CompositeState> states, unsigned workers,
                                                std::int64_t max_n) {
    if (states.empty()) return {};
    const ModelParams& params = states.front().params();
    for (const CompositeState& st : states)
        if (!(st.params() == params)) throw MismatchError("batched composite states belong to different models");
    check_bound(params, max_n);
    const std::int64_t n = params.n();
    std::vector<OutcomeDistribution> out(
        states.size(), OutcomeDistribution{n, std::vector<double>(static_cast<std::size_t>((2 * n + 1) * (2 * n + 1)), 0.0)});
    for_each_sector(states, workers, [&](std::size_t s, std::int64_t t1, const Eigen::MatrixXcd& block) {
        accumulate_outcomes(out[s], t1, block);
    });
    return out;
}

OutcomeDistribution measure_copy_b(const CompositeState& state, unsigned workers, std::int64_t max_n) {
    return std::move(measure_copy_b(std::span(&state, 1), workers, max_n).front());
}

double parity_distribution(const OutcomeDistribution& outcomes) {
    double plus = 0.0;
    const std::int64_t side = outcomes.side();
    for (std::int64_t b1 = 0; b1 < side; ++b1)
        for (std::int64_t b2 = (b1 % 2); b2 < side; b2 += 2) plus += outcomes.at(b1, b2);
    return plus;
}

double parity_distribution(const InterferedState& state) { return parity_distribution(outcome_distribution(state)); }

ParityShot draw_shot(const OutcomeDistribution& outcomes, std::uint64_t seed, std::uint64_t shot_index) {
    // Built per call for clarity; sample_shots keeps its own cumulative table.
    std::vector<double> cdf(outcomes.probabilities.size());
    std::partial_sum(outcomes.probabilities.begin(), outcomes.probabilities.end(), cdf.begin());
    const double target = counter_uniform(seed, shot_index) * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.end()) --it;
    const auto flat = static_cast<std::int64_t>(it - cdf.begin());
    const std::int64_t b1 = flat / outcomes.side();
    const std::int64_t b2 = flat % outcomes.side();
    return {b1, b2, (b1 % 2) == (b2 % 2) ? 1 : -1};
}

EstimatorResult sample_shots(const OutcomeDistribution& outcomes, std::uint64_t shots, std::uint64_t seed,
                             unsigned workers) {
    if (shots < 1) throw ValidationError("shots must be >= 1");
    std::vector<double> cdf(outcomes.probabilities.size());
    std::partial_sum(outcomes.probabilities.begin(), outcomes.probabilities.end(), cdf.begin());
    const double total = cdf.back();
    const std::int64_t side = outcomes.side();

    std::atomic<std::uint64_t> n_plus{0};
    parallel_for(static_cast<std::size_t>(shots), workers, [&](std::size_t begin, std::size_t end) {
        std::uint64_t local = 0;
        for (std::size_t s = begin; s < end; ++s) {
            auto it = std::upper_bound(cdf.begin(), cdf.end(), counter_uniform(seed, s) * total);
            if (it == cdf.end()) --it;
            const auto flat = static_cast<std::int64_t>(it - cdf.begin());
            if ((flat / side) % 2 == (flat % side) % 2) ++local;
        }
        n_plus += local;
    });

    const double n = static_cast<double>(shots);
    const double mean = (2.0 * static_cast<double>(n_plus.load()) - n) / n;
    const double variance = shots > 1 ? std::max(0.0, (1.0 - mean * mean) * n / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(variance / n), shots, seed};
}

EstimatorResult sample_shots(const InterferedState& state, std::uint64_t shots, std::uint64_t seed, unsigned workers) {
    return sample_shots(outcome_distribution(state), shots, seed, workers);
}

double swap_expectation_exact(const FockBasisState& a, const FockBasisState& b) {
    return std::norm(inner_product(a, b));
}

double swap_expectation_measured(const FockBasisState& a, const FockBasisState& b, unsigned workers) {
    return 2.0 * parity_distribution(measure_copy_b(compose(a, b), workers)) - 1.0;
}

}  // namespace logcrystal
