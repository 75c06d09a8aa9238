#include "logcrystal/states.hpp"

#include <lapacke.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "logcrystal/errors.hpp"

namespace logcrystal {

namespace {

constexpr double kNormSlack = 1e-10;

void check_vector(const ModelParams& params, const Eigen::VectorXcd& v, const char* what) {
    if (static_cast<std::size_t>(v.size()) != params.dimension())
        throw ValidationError(std::string(what) + ": expected " + std::to_string(params.dimension()) +
                              " amplitudes, got " + std::to_string(v.size()));
    const double norm2 = v.squaredNorm();
    if (!(std::abs(norm2 - 1.0) <= kNormSlack))
        throw ValidationError(std::string(what) + ": state is not normalized (|psi|^2 = " + std::to_string(norm2) + ")");
}

void require_same(const ModelParams& a, const ModelParams& b) {
    if (!(a == b)) throw MismatchError("states belong to different model parameters");
}

LevelIndex partner_level(const ModelParams& params, std::int64_t m1_offset) {
    if (m1_offset == 0) throw ValidationError("m1_offset = 0 makes m1 coincide with m0");
    const LevelIndex m1 = ground_index(params).shifted(-m1_offset);
    if (!m1.valid_for(params))
        throw DomainError("m1 = m0 - (" + std::to_string(m1_offset) + ") lies outside [-N/2, N/2]");
    return m1;
}

// Sign of the n1 = 0 entry of an exact S_x eigenvector is recovered from the
// three-term recurrence started at v(0) = 1. The recurrence is only trusted up
// to the first entry that the eigensolver resolves well, and it is rescaled to
// stay finite.
bool column_needs_flip(const Eigen::Ref<const Eigen::VectorXd>& col, std::int64_t n, double eigenvalue) {
    const Eigen::Index dim = col.size();
    const double peak = col.cwiseAbs().maxCoeff();
    Eigen::Index stop = 0;
    while (stop < dim - 1 && std::abs(col(stop)) < 1e-3 * peak) ++stop;

    const auto b = [n](Eigen::Index k) {  // <k+1|S_x|k>
        return 0.5 * std::sqrt(static_cast<double>(k + 1) * static_cast<double>(n - k));
    };
    double prev = 0.0, cur = 1.0, overlap = col(0);
    for (Eigen::Index k = 0; k < stop; ++k) {
        const double next = (eigenvalue * cur - (k > 0 ? b(k - 1) * prev : 0.0)) / b(k);
        prev = cur;
        cur = next;
        const double scale = std::max(std::abs(prev), std::abs(cur));
        if (scale > 1e100) {
            prev /= scale;
            cur /= scale;
            overlap /= scale;
        }
        overlap += cur * col(k + 1);
    }
    return overlap < 0.0;
}

}  // namespace

SxBasisState::SxBasisState(ModelParams params, Eigen::VectorXcd amplitudes)
    : params_(params), amplitudes_(std::move(amplitudes)) {
    check_vector(params_, amplitudes_, "SxBasisState");
}

FockBasisState::FockBasisState(ModelParams params, Eigen::VectorXcd amplitudes)
    : params_(params), amplitudes_(std::move(amplitudes)) {
    check_vector(params_, amplitudes_, "FockBasisState");
}

SxBasisState two_level_state(const ModelParams& params, std::int64_t m1_offset) {
    const LevelIndex m1 = partner_level(params, m1_offset);
    const LevelIndex m0 = ground_index(params);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(params.dimension()));
    c(static_cast<Eigen::Index>(m0.offset(params))) = std::numbers::sqrt2 / 2.0;
    c(static_cast<Eigen::Index>(m1.offset(params))) = std::numbers::sqrt2 / 2.0;
    return SxBasisState(params, std::move(c));
}

Eigen::VectorXd raw_double_gaussian_amplitudes(const ModelParams& params, double sigma, std::int64_t m1_offset) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be positive");
    const LevelIndex m1 = partner_level(params, m1_offset);
    const LevelIndex m0 = ground_index(params);
    const double prefactor = 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma);
    const double inv_4s2 = 1.0 / (4.0 * sigma * sigma);
    Eigen::VectorXd c(static_cast<Eigen::Index>(params.dimension()));
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        const LevelIndex m = LevelIndex::from_offset(params, static_cast<std::size_t>(k));
        const double d0 = static_cast<double>(m.minus(m0));
        const double d1 = static_cast<double>(m.minus(m1));
        c(k) = prefactor * (std::exp(-d0 * d0 * inv_4s2) + std::exp(-d1 * d1 * inv_4s2));
    }
    return c;
}

SxBasisState double_gaussian_state(const ModelParams& params, double sigma, std::int64_t m1_offset) {
    if (m1_offset != 0 && sigma > std::abs(static_cast<double>(m1_offset)) / 3.0)
        throw ValidationError("sigma must not exceed |m1_offset| / 3");
    Eigen::VectorXd raw = raw_double_gaussian_amplitudes(params, sigma, m1_offset);
    raw /= raw.norm();
    return SxBasisState(params, raw.cast<std::complex<double>>());
}

BasisTransform sx_eigenbasis(const ModelParams& params) {
    const std::int64_t n = params.n();
    const auto dim = static_cast<lapack_int>(n + 1);
    std::vector<double> diag(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> off(static_cast<std::size_t>(dim), 0.0);
    for (std::int64_t k = 0; k < n; ++k)
        off[static_cast<std::size_t>(k)] = 0.5 * std::sqrt(static_cast<double>(k + 1) * static_cast<double>(n - k));

    std::vector<double> eigenvalues(static_cast<std::size_t>(dim));
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(dim));
    Eigen::MatrixXd vectors(dim, dim);
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', dim, diag.data(), off.data(), 0.0, 0.0, 0, 0,
                                           0.0, &found, eigenvalues.data(), vectors.data(), dim, support.data());
    if (info != 0 || found != dim) throw Error("dstevr failed with info=" + std::to_string(info));

    for (Eigen::Index k = 0; k < dim; ++k) {
        if (column_needs_flip(vectors.col(k), n, eigenvalues[static_cast<std::size_t>(k)])) vectors.col(k) *= -1.0;
    }
    return BasisTransform{params, std::move(vectors)};
}

FockBasisState to_fock(const SxBasisState& state, const BasisTransform& transform) {
    require_same(state.params(), transform.params);
    Eigen::VectorXcd f = transform.matrix * state.amplitudes();
    return FockBasisState(state.params(), std::move(f));
}

SxBasisState to_sx(const FockBasisState& state, const BasisTransform& transform) {
    require_same(state.params(), transform.params);
    Eigen::VectorXcd c = transform.matrix.transpose() * state.amplitudes();
    return SxBasisState(state.params(), std::move(c));
}

std::complex<double> inner_product(const SxBasisState& a, const SxBasisState& b) {
    require_same(a.params(), b.params());
    return a.amplitudes().dot(b.amplitudes());
}

std::complex<double> inner_product(const FockBasisState& a, const FockBasisState& b) {
    require_same(a.params(), b.params());
    return a.amplitudes().dot(b.amplitudes());
}

}  // namespace logcrystal
