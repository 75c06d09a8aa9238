// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fft.hpp"
#include "logcrystal/cli/commands.hpp"
#include "logcrystal/core.hpp"
#include "logcrystal/dynamics.hpp"
#include "logcrystal/hom.hpp"
#include "logcrystal/meanfield.hpp"
#include "logcrystal/phasespace.hpp"
#include "logcrystal/states.hpp"
#include "oracles.hpp"

using namespace logcrystal;

namespace {

// Pinned thresholds.
constexpr double kSpectrumTol = 1e-10;
constexpr double kSpectrumSeconds = 1.0;
constexpr double kFiniteGapFloor = 0.5;
constexpr double kCollapseLo = 0.5;
constexpr double kCollapseHi = 2.0;
constexpr double kGapSeconds = 1.0;
constexpr double kCosRelTol = 1e-12;
constexpr double kTwoLevelSeconds = 1.0;
constexpr double kFig4AbsTol = 0.02;
constexpr double kFig4PeriodTol = 0.01;
constexpr double kFig4Seconds = 30.0;
constexpr double kScalingTol = 0.02;
constexpr double kScalingSeconds = 60.0;
constexpr double kMeanFieldC = 5.0;
constexpr double kMeanFieldSeconds = 5.0;
constexpr double kHusimiMass = 0.90;
constexpr std::size_t kHusimiCells = 3;
constexpr double kHusimiSeconds = 10.0;
constexpr double kSzAmplitudeTol = 0.01;
constexpr double kSzSlowBound = 0.2;
constexpr double kSzPeakThreshold = 0.05;  // relative to the tallest peak
constexpr double kSzSeconds = 10.0;
constexpr double kSwapTol = 1e-9;
constexpr double kSwapCoverage = 0.95;
constexpr std::uint64_t kSwapShots = 100000;
constexpr double kSwapSeconds = 30.0;
constexpr double kReadoutTol = 1e-9;
constexpr double kReadoutPeriodTol = 0.02;
constexpr double kReadoutSeconds = 30.0;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

int failures = 0;

void run(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < limit_seconds;
    const bool pass = out.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s  [%2d] %-34s %s; runtime %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", id, title,
                out.detail.c_str(), seconds, limit_seconds);
    std::fflush(stdout);
}

Outcome spectrum_oracle() {
    double worst = 0.0;
    for (std::int64_t n = 1; n <= 12; ++n) {
        for (double gamma : {0.25, 0.75, 1.5}) {
            ModelParams p(n, gamma);
            std::vector<double> closed;
            for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k)
                closed.push_back(energy_level(p, LevelIndex::from_offset(p, k)));
            std::sort(closed.begin(), closed.end());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(oracle::lmg_hamiltonian(n, gamma));
            for (std::size_t k = 0; k < closed.size(); ++k)
                worst = std::max(worst, std::abs(solver.eigenvalues()(static_cast<Eigen::Index>(k)) - closed[k]));
        }
    }
    return {worst <= kSpectrumTol, fmt("max |E_closed - E_brute| = %.2e (tol %.0e)", worst, kSpectrumTol)};
}

Outcome gap_dichotomy() {
    Outcome out;
    double finite_min = 1e300;
    double lo = 1e300;
    double hi = -1e300;
    std::string per_n;
    for (std::int64_t n : {100, 1000, 10000}) {
        ModelParams weak(n, 0.25);
        for (std::size_t k = 1; k <= static_cast<std::size_t>(n); ++k)
            finite_min = std::min(finite_min, std::abs(neighbor_gap(weak, LevelIndex::from_offset(weak, k))));
        ModelParams strong(n, 0.75);
        LevelIndex m0 = ground_index(strong);
        const double scale = static_cast<double>(n) / (2.0 * 0.75);
        double up = gap_to_ground(strong, m0.shifted(1)) * scale;
        double down = gap_to_ground(strong, m0.shifted(-1)) * scale;
        lo = std::min({lo, up, down});
        hi = std::max({hi, up, down});
        per_n += fmt(" N=%lld:(%.3f,%.3f)", static_cast<long long>(n), down, up);
    }
    out.pass = finite_min >= kFiniteGapFloor && lo >= kCollapseLo && hi <= kCollapseHi;
    out.detail = fmt("gamma=0.25 min|gap| = %.4f (>= %.1f); gamma=0.75 gap(m0-+1)*N/2g in [%.3f, %.3f] (need [%.1f, %.1f]);",
                     finite_min, kFiniteGapFloor, lo, hi, kCollapseLo, kCollapseHi) +
                 per_n;
    return out;
}

Outcome two_level() {
    ModelParams p(10000, 0.75);
    std::int64_t offset = time_crystal_offset(p);
    SxBasisState s = two_level_state(p, offset);
    const double period = log_period(p);
    const double gap = gap_to_ground(p, m1_index(p));
    double worst = 0.0;
    double worst_gap = 0.0;
    for (double t : uniform_times(3.0 * period, 3001)) {
        const double value = std::norm(overlap_exact(s, t));
        const double c = std::cos(std::numbers::pi * t / period);
        const double cg = std::cos(0.5 * gap * t);
        worst = std::max(worst, std::abs(value - c * c));
        worst_gap = std::max(worst_gap, std::abs(value - cg * cg));
    }
    return {worst <= kCosRelTol,
            fmt("max |P(t) - cos^2(pi t / T0 ln N)| = %.3e (tol %.0e); gap of m1 = %.6f vs 2g/ln N = %.6f; "
                "with the exact gap the cos^2 law holds to %.1e",
                worst, kCosRelTol, gap, 2.0 * 0.75 / std::log(10000.0), worst_gap)};
}

Outcome fig4() {
    // gamma = 1 puts N / (4 gamma) = 7310 exactly on a level.
    ModelParams p(29240, 1.0);
    const std::int64_t offset = -91;
    const double period = log_period(p);
    auto times = uniform_times(10.0 * period, 10 * kSamplesPerPeriod + 1);
    OverlapSeries series = overlap_series(p, 1.0, offset, times, 1);
    double worst = 0.0;
    double worst_t = 0.0;
    for (const OverlapSample& s : series.samples) {
        double d = std::abs(std::abs(s.exact) - std::abs(s.closed_form));
        if (d > worst) {
            worst = d;
            worst_t = s.t;
        }
    }
    double extracted = extract_period(series);
    double ratio = extracted / period;
    bool pass = worst <= kFig4AbsTol && std::abs(ratio - 1.0) <= kFig4PeriodTol;
    return {pass, fmt("m0 = %g (gamma = 1); max ||exact| - |closed|| = %.4f at t = %.1f (tol %.2f); period %.3f = "
                      "%.4f x T0 ln N (tol %.0f%%), two-Gaussian beat pi N/(g D) = %.3f",
                      ground_index(p).m(), worst, worst_t, kFig4AbsTol, extracted, ratio, kFig4PeriodTol * 100,
                      std::numbers::pi * 29240.0 / (91.0 * 91.0))};
}

Outcome scaling() {
    double num = 0.0;
    double den = 0.0;
    std::string per_n;
    for (std::int64_t n : {1000, 10000, 30000}) {
        ModelParams p(n, 0.75);
        std::int64_t offset = time_crystal_offset(p);
        const double period = log_period(p);
        auto times = uniform_times(10.0 * period, 10 * kSamplesPerPeriod + 1);
        double extracted = extract_period(overlap_series(p, 1.0, offset, times, 1));
        const double ln = std::log(static_cast<double>(n));
        num += extracted * ln;
        den += ln * ln;
        per_n += fmt(" N=%lld:d=%lld,T/(T0 lnN)=%.4f", static_cast<long long>(n), static_cast<long long>(offset),
                     extracted / period);
    }
    const double a = num / den;
    const double ratio = a / (std::numbers::pi / 0.75);
    return {std::abs(ratio - 1.0) <= kScalingTol,
            fmt("fitted a = %.4f = %.4f x pi/gamma (tol %.0f%%);", a, ratio, kScalingTol * 100) + per_n};
}

Outcome mean_field() {
    double worst_scaled = 0.0;
    for (std::int64_t n : {1000, 10000}) {
        ModelParams p(n, 0.75);
        double e0 = energy_level(p, ground_index(p));
        double err = std::abs(2.0 * e0 / static_cast<double>(n) + 1.0 / (4.0 * 0.75));
        worst_scaled = std::max(worst_scaled, err * static_cast<double>(n));
    }
    bool grid_ok = true;
    std::string grids;
    for (std::size_t side : {32, 64, 128, 256, 512}) {
        LandscapeGrid g = landscape_grid(0.75, side, side, 1);
        double lowest = *std::min_element(g.values.begin(), g.values.end());
        double h = std::max(g.grid.q_step(), g.grid.p_step());
        double err = lowest - classical_minimum(0.75);
        grid_ok = grid_ok && err >= -1e-15 && err <= h * h;
        grids += fmt(" %zu:%.1e/%.1e", side, err, h * h);
    }
    return {worst_scaled <= kMeanFieldC && grid_ok,
            fmt("max N |2E0/N + 1/4g| = %.3f (<= %.0f); grid min error / step^2:", worst_scaled, kMeanFieldC) + grids};
}

Outcome husimi_concentration() {
    ModelParams p(440, 0.75);
    BasisTransform u = sx_eigenbasis(p);
    LevelIndex m0 = ground_index(p);
    auto fraction = [&](LevelIndex m) {
        return locus_mass_fraction(husimi(p, m, u, 200, 200, 1), 0.75, kHusimiCells);
    };
    double f0 = fraction(m0);
    double f29 = fraction(m0.shifted(-29));
    // 29th excited level in energy order, for reference.
    std::vector<std::pair<double, LevelIndex>> order;
    for (std::size_t k = 0; k <= 440; ++k) {
        LevelIndex m = LevelIndex::from_offset(p, k);
        order.emplace_back(gap_to_ground(p, m), m);
    }
    std::sort(order.begin(), order.end());
    LevelIndex excited = order[29].second;
    double fe = fraction(excited);
    return {f0 >= kHusimiMass && f29 >= kHusimiMass,
            fmt("mass within %zu cells: m0=%g -> %.3f, m0-29=%g -> %.3f (need %.2f); 29th level by energy m=%g -> %.3f",
                kHusimiCells, m0.m(), f0, m0.shifted(-29).m(), f29, kHusimiMass, excited.m(), fe)};
}

Outcome sz_spectrum() {
    ModelParams p(400, 0.75);
    const std::int64_t offset = time_crystal_offset(p);
    SxBasisState s = two_level_state(p, offset);
    BasisTransform u = sx_eigenbasis(p);
    SzCorrelationOracle brute(s, u);
    SzCorrelation corr = sz_correlation_terms(p, offset);

    double slowest = 1e300;
    double fastest = 0.0;
    for (const auto& term : corr.terms) {
        slowest = std::min(slowest, std::abs(term.frequency));
        fastest = std::max(fastest, std::abs(term.frequency));
    }
    // 20 periods of the slowest component; the sampling resolves the fastest.
    const double window = 20.0 * 2.0 * std::numbers::pi / slowest;
    std::size_t n = 1;
    while (static_cast<double>(n) < 8.0 * window * fastest / (2.0 * std::numbers::pi)) n <<= 1;
    n = std::max<std::size_t>(n, 4096);
    const double dt = window / static_cast<double>(n);

    std::vector<std::complex<double>> signal(n);
    std::vector<double> hann(n);
    double hann_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        hann[j] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
        hann_sum += hann[j];
        signal[j] = brute(dt * static_cast<double>(j));
    }
    std::vector<std::complex<double>> spectrum(n);
    for (std::size_t j = 0; j < n; ++j) spectrum[j] = signal[j] * hann[j];
    testing_fft::fft(spectrum);

    // A term w exp(-i omega t) peaks at bin k = -omega n dt / 2 pi (mod n).
    const double bin_omega = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
    std::vector<double> mag(n);
    for (std::size_t k = 0; k < n; ++k) mag[k] = std::abs(spectrum[k]);
    const double tallest = *std::max_element(mag.begin(), mag.end());
    std::vector<double> peak_omegas;
    for (std::size_t k = 0; k < n; ++k) {
        const double left = mag[(k + n - 1) % n];
        const double right = mag[(k + 1) % n];
        if (mag[k] > left && mag[k] >= right && mag[k] >= kSzPeakThreshold * tallest) {
            double signed_k = k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
            peak_omegas.push_back(-signed_k * bin_omega);
        }
    }

    // Windowed DTFT amplitude at the refined peak near each predicted frequency.
    auto dtft = [&](double omega) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += signal[j] * hann[j] * std::polar(1.0, omega * dt * static_cast<double>(j));
        return std::abs(acc) / hann_sum;
    };
    bool located = peak_omegas.size() == 4;
    std::vector<double> amplitude;
    std::vector<double> predicted;
    std::string freqs;
    for (const auto& term : corr.terms) {
        double nearest = 1e300;
        for (double w : peak_omegas) nearest = std::min(nearest, std::abs(w - term.frequency));
        located = located && nearest <= bin_omega;
        // Golden-section search over one bin around the prediction.
        double a = term.frequency - bin_omega;
        double b = term.frequency + bin_omega;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 60; ++it) {
            double c = b - g * (b - a);
            double d = a + g * (b - a);
            if (dtft(c) > dtft(d)) b = d;
            else a = c;
        }
        amplitude.push_back(dtft(0.5 * (a + b)));
        predicted.push_back(SzCorrelation::kPrefactor * term.ladder_weight);
        freqs += fmt(" %.5f", term.frequency);
    }
    double worst_ratio = 0.0;
    for (std::size_t j = 1; j < 4; ++j) {
        double measured = amplitude[j] / amplitude[0];
        double expect = predicted[j] / predicted[0];
        worst_ratio = std::max(worst_ratio, std::abs(measured / expect - 1.0));
    }
    const double ln = std::log(400.0);
    double worst_slow = 0.0;
    for (const auto& term : corr.terms) worst_slow = std::max(worst_slow, std::abs(term.frequency) * ln);
    bool pass = located && worst_ratio <= kSzAmplitudeTol && worst_slow <= kSzSlowBound;
    return {pass, fmt("%zu peaks (need 4 at predicted bins: %s); worst amplitude-ratio error %.2e (tol %.0e); "
                      "max |dE| ln N = %.3f (need <= %.1f); frequencies:",
                      peak_omegas.size(), located ? "yes" : "no", worst_ratio, kSzAmplitudeTol, worst_slow,
                      kSzSlowBound) +
                      freqs + fmt("; window %.0f, %zu samples", window, n)};
}

Outcome swap_identity() {
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    int covered = 0;
    int cases = 0;
    for (std::int64_t n : {4, 8, 12}) {
        ModelParams p(n, 0.75);
        auto random_state = [&] {
            Eigen::VectorXcd v(p.dimension());
            for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = {gauss(rng), gauss(rng)};
            return FockBasisState(p, v / v.norm());
        };
        for (int pair = 0; pair < 50; ++pair) {
            FockBasisState a = random_state();
            FockBasisState b = random_state();
            OutcomeDistribution table = measure_copy_b(compose(a, b));
            const double measured = 2.0 * parity_distribution(table) - 1.0;
            const double exact = std::norm(a.amplitudes().dot(b.amplitudes()));
            worst = std::max(worst, std::abs(measured - exact));
            EstimatorResult mc = sample_shots(table, kSwapShots, static_cast<std::uint64_t>(1000 * n + pair));
            if (std::abs(mc.mean - exact) <= 3.0 * mc.std_error) ++covered;
            ++cases;
        }
    }
    double coverage = static_cast<double>(covered) / cases;
    return {worst <= kSwapTol && coverage >= kSwapCoverage,
            fmt("max |2P(+1)-1 - |<a|b>|^2| = %.2e (tol %.0e); MC within 3 se in %d/%d = %.1f%% (need %.0f%%)", worst,
                kSwapTol, covered, cases, 100.0 * coverage, 100.0 * kSwapCoverage)};
}

Outcome readout() {
    // Narrow peaks (sigma = d / 10) so the two Gaussians stay separated at N = 40.
    cli::RunConfig c;
    c.model.n = 40;
    c.model.gamma = 0.75;
    c.state.kind = cli::StateKind::double_gaussian;
    c.state.sigma = 0.3;
    ModelParams p(40, 0.75);
    const double period = log_period(p);
    c.time.t_max = 3.0 * period;
    c.time.samples = 64;
    cli::RunConfig resolved = cli::resolve(c, cli::Command::hom);
    cli::CommandOutput out = cli::cmd_hom(resolved);

    SxBasisState psi = double_gaussian_state(p, 0.3, *resolved.state.m1_offset);
    double worst = 0.0;
    std::vector<double> times;
    std::vector<double> v;
    for (const auto& row : out.main.rows) {
        double t = std::get<double>(row[0]);
        double exact_v = std::get<double>(row[1]);
        worst = std::max(worst, std::abs(exact_v - std::norm(overlap_exact(psi, t))));
        times.push_back(t);
        v.push_back(exact_v);
    }
    double extracted = extract_period(times, v);
    double ratio = extracted / period;
    return {out.main.rows.size() == 64 && worst <= kReadoutTol && std::abs(ratio - 1.0) <= kReadoutPeriodTol,
            fmt("%zu samples; max |exact_V - |overlap|^2| = %.2e (tol %.0e); period %.3f = %.4f x T0 ln N (tol %.0f%%)",
                out.main.rows.size(), worst, kReadoutTol, extracted, ratio, kReadoutPeriodTol * 100)};
}

}  // namespace

int main() {
    run(1, "spectrum oracle equivalence", kSpectrumSeconds, spectrum_oracle);
    run(2, "gap dichotomy", kGapSeconds, gap_dichotomy);
    run(3, "two-level time crystal", kTwoLevelSeconds, two_level);
    run(4, "double-Gaussian overlap N=29240", kFig4Seconds, fig4);
    run(5, "period scaling law", kScalingSeconds, scaling);
    run(6, "mean-field correspondence", kMeanFieldSeconds, mean_field);
    run(7, "husimi concentration", kHusimiSeconds, husimi_concentration);
    run(8, "S_z correlation spectrum", kSzSeconds, sz_spectrum);
    run(9, "swap identity via parity", kSwapSeconds, swap_identity);
    run(10, "end-to-end readout N=40", kReadoutSeconds, readout);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
