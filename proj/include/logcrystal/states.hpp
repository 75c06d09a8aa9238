#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "logcrystal/core.hpp"

namespace logcrystal {

// Pure state over the S_x eigenlevels; amplitude k belongs to m = k - N/2.
class SxBasisState {
public:
    // Throws ValidationError on a length mismatch or a norm off by more than 1e-10.
    SxBasisState(ModelParams params, Eigen::VectorXcd amplitudes);

    const ModelParams& params() const noexcept { return params_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    std::complex<double> amplitude(LevelIndex m) const { return amplitudes_(static_cast<Eigen::Index>(m.offset(params_))); }

private:
    ModelParams params_;
    Eigen::VectorXcd amplitudes_;
};

// Pure state over two-mode Fock states |n1, N - n1>; amplitude k belongs to n1 = k.
class FockBasisState {
public:
    FockBasisState(ModelParams params, Eigen::VectorXcd amplitudes);

    const ModelParams& params() const noexcept { return params_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }

private:
    ModelParams params_;
    Eigen::VectorXcd amplitudes_;
};

// Real orthogonal U with U(n1, k) = <n1, N - n1 | m = k - N/2>. Each column's
// first entry (n1 = 0) is positive; it is never zero for this Jacobi matrix.
struct BasisTransform {
    ModelParams params;
    Eigen::MatrixXd matrix;
};

// (|m0> + |m0 - m1_offset>) / sqrt(2). A negative offset puts m1 above m0.
SxBasisState two_level_state(const ModelParams& params, std::int64_t m1_offset);

// Unnormalized c_m = [exp(-(m-m0)^2/4s^2) + exp(-(m-m1)^2/4s^2)] / sqrt(2 pi s).
Eigen::VectorXd raw_double_gaussian_amplitudes(const ModelParams& params, double sigma, std::int64_t m1_offset);

// The double Gaussian above rescaled to unit norm. Requires sigma <= |offset| / 3.
SxBasisState double_gaussian_state(const ModelParams& params, double sigma, std::int64_t m1_offset);

// Diagonalizes the tridiagonal S_x matrix in the Fock basis.
BasisTransform sx_eigenbasis(const ModelParams& params);

FockBasisState to_fock(const SxBasisState& state, const BasisTransform& transform);
SxBasisState to_sx(const FockBasisState& state, const BasisTransform& transform);

// <a|b> for states of the same model.
std::complex<double> inner_product(const SxBasisState& a, const SxBasisState& b);
std::complex<double> inner_product(const FockBasisState& a, const FockBasisState& b);

}  // namespace logcrystal
