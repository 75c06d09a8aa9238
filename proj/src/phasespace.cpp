#include "logcrystal/phasespace.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "logcrystal/errors.hpp"
#include "logcrystal/parallel.hpp"

namespace logcrystal {

namespace {

// Dense enough that consecutive samples are well under a grid step apart.
std::vector<PhasePoint> dense_locus(double gamma, const PhaseGrid& grid) {
    return minimum_locus(gamma, 40 * (grid.n_q + grid.n_p));
}

// log of base^exponent with 0^0 = 1; -inf for a vanishing factor.
double log_power(double base, double exponent) {
    if (exponent == 0.0) return 0.0;
    if (base <= 0.0) return -std::numeric_limits<double>::infinity();
    return exponent * std::log(base);
}

// Real magnitudes sqrt(C(N, n1)) (1/2 - P)^(n1/2) (1/2 + P)^((N - n1)/2).
Eigen::VectorXd coherent_magnitudes(std::int64_t n, double p) {
    Eigen::VectorXd r(n + 1);
    const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
    for (std::int64_t k = 0; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double rest = static_cast<double>(n - k);
        const double log_binom = lg_n - std::lgamma(kk + 1.0) - std::lgamma(rest + 1.0);
        r(k) = std::exp(0.5 * log_binom + log_power(0.5 - p, 0.5 * kk) + log_power(0.5 + p, 0.5 * rest));
    }
    return r;
}

double wrapped_index_distance(double a, double b, double period) {
    const double d = std::fmod(std::abs(a - b), period);
    return std::min(d, period - d);
}

}  // namespace

FockBasisState coherent_state(const ModelParams& params, PhasePoint point) {
    if (!(std::abs(point.p) <= 0.5)) throw DomainError("|P| must not exceed 1/2");
    const std::int64_t n = params.n();
    const Eigen::VectorXd r = coherent_magnitudes(n, point.p);
    Eigen::VectorXcd amp(n + 1);
    for (std::int64_t k = 0; k <= n; ++k) amp(k) = r(k) * std::polar(1.0, point.q * static_cast<double>(n - k));
    // Binomial normalization is exact analytically; this removes rounding only.
    amp /= amp.norm();
    return FockBasisState(params, std::move(amp));
}

double HusimiGrid::total() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

HusimiGrid husimi(const ModelParams& params, LevelIndex m, const BasisTransform& transform, std::size_t n_q,
                  std::size_t n_p, unsigned workers) {
    if (!(params == transform.params)) throw MismatchError("transform belongs to a different model");
    if (n_q < 2 || n_p < 2) throw ValidationError("husimi grid needs at least 2 nodes per axis");
    const Eigen::VectorXd level = transform.matrix.col(static_cast<Eigen::Index>(m.offset(params)));
    HusimiGrid out{params, m, PhaseGrid{n_q, n_p}, std::vector<double>(n_q * n_p)};
    const std::int64_t n = params.n();

    // <Q,P|m> = sum_n1 r(n1) v(n1) z^(N - n1) with z = e^{-iQ}; Horner in z.
    parallel_for(n_p, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            const Eigen::VectorXd r = coherent_magnitudes(n, out.grid.p(j));
            const double norm = r.norm();
            const Eigen::VectorXd w = r.cwiseProduct(level) / norm;
            for (std::size_t i = 0; i < n_q; ++i) {
                const std::complex<double> z = std::polar(1.0, -out.grid.q(i));
                std::complex<double> acc = w(0);
                for (std::int64_t k = 1; k <= n; ++k) acc = acc * z + w(k);
                out.values[i * n_p + j] = std::norm(acc);
            }
        }
    });
    return out;
}

double cell_distance_to_locus(double gamma, const PhaseGrid& grid, std::size_t i, std::size_t j) {
    const double nq = static_cast<double>(grid.n_q);
    double best = std::numeric_limits<double>::infinity();
    for (const PhasePoint& pt : dense_locus(gamma, grid)) {
        const double fi = (pt.q + std::numbers::pi) / grid.q_step();
        const double fj = (pt.p + 0.5) / grid.p_step();
        const double di = wrapped_index_distance(fi, static_cast<double>(i), nq);
        const double dj = std::abs(fj - static_cast<double>(j));
        best = std::min(best, std::max(di, dj));
    }
    return best;
}

std::vector<bool> locus_neighbourhood(double gamma, const PhaseGrid& grid, std::size_t cells) {
    const auto nq = static_cast<std::int64_t>(grid.n_q);
    const auto np = static_cast<std::int64_t>(grid.n_p);
    std::vector<bool> hit(grid.n_q * grid.n_p, false);
    for (const PhasePoint& pt : dense_locus(gamma, grid)) {
        auto i = static_cast<std::int64_t>(std::lround((pt.q + std::numbers::pi) / grid.q_step()));
        const auto j = static_cast<std::int64_t>(std::lround((pt.p + 0.5) / grid.p_step()));
        i = ((i % nq) + nq) % nq;
        hit[static_cast<std::size_t>(i * np + j)] = true;
    }
    const auto reach = static_cast<std::int64_t>(cells);
    std::vector<bool> out(hit.size(), false);
    for (std::int64_t i = 0; i < nq; ++i) {
        for (std::int64_t j = 0; j < np; ++j) {
            if (!hit[static_cast<std::size_t>(i * np + j)]) continue;
            for (std::int64_t di = -reach; di <= reach; ++di) {
                const std::int64_t ii = (((i + di) % nq) + nq) % nq;
                for (std::int64_t jj = std::max<std::int64_t>(0, j - reach); jj <= std::min(np - 1, j + reach); ++jj)
                    out[static_cast<std::size_t>(ii * np + jj)] = true;
            }
        }
    }
    return out;
}

double locus_mass_fraction(const HusimiGrid& husimi, double gamma, std::size_t cells) {
    const std::vector<bool> near = locus_neighbourhood(gamma, husimi.grid, cells);
    double inside = 0.0, total = 0.0;
    for (std::size_t k = 0; k < husimi.values.size(); ++k) {
        total += husimi.values[k];
        if (near[k]) inside += husimi.values[k];
    }
    return total > 0.0 ? inside / total : 0.0;
}

}  // namespace logcrystal
