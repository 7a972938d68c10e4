#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "psel/errors.hpp"

namespace psel {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr double pi = std::numbers::pi;

// Basis ordering is (|1>, |0>) everywhere: component 0 is the |1> amplitude.
// sigma_z|1> = +|1>, sigma_z|0> = -|0>.
inline constexpr int basis_index_one = 0;
inline constexpr int basis_index_zero = 1;

// Squared-modulus threshold below which weak-value quotients refuse to divide.
inline constexpr double orthogonality_threshold = 1e-14;

// Bloch-sphere pure state |psi> = cos(theta/2)|1> + e^{i phi} sin(theta/2)|0>.
struct QubitState {
    double theta = 0.0;
    double phi = 0.0;

    QubitState() = default;
    QubitState(double theta_, double phi_) {
        if (!std::isfinite(theta_) || !std::isfinite(phi_))
            throw InvalidParameter("QubitState: non-finite angle");
        if (theta_ < -1e-9 || theta_ > pi + 1e-9)
            throw InvalidParameter("QubitState: theta outside [0, pi]");
        theta = std::clamp(theta_, 0.0, pi);
        phi = std::fmod(phi_, 2.0 * pi);
        if (phi < 0.0) phi += 2.0 * pi;
    }
};

inline Vec2 state_vector(const QubitState& q) {
    Vec2 v;
    v(basis_index_one) = std::cos(0.5 * q.theta);
    v(basis_index_zero) = std::exp(cplx(0.0, q.phi)) * std::sin(0.5 * q.theta);
    return v;
}

// Hermitian 2x2 observable with A^2 = 1 (required by the branch decomposition
// of the impulsive coupling).
struct Observable {
    Mat2 matrix;

    explicit Observable(const Mat2& m) : matrix(m) {
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw InvalidParameter("Observable: not Hermitian");
        if ((m * m - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-12)
            throw InvalidParameter("Observable: square is not the identity");
    }
};

inline Mat2 sigma_z_matrix() {
    Mat2 m = Mat2::Zero();
    m(basis_index_one, basis_index_one) = 1.0;
    m(basis_index_zero, basis_index_zero) = -1.0;
    return m;
}

inline Observable sigma_z() { return Observable(sigma_z_matrix()); }

inline Mat2 projector(const QubitState& q) {
    Vec2 v = state_vector(q);
    return v * v.adjoint();
}

inline cplx inner(const QubitState& bra, const QubitState& ket) {
    return state_vector(bra).dot(state_vector(ket)); // Eigen dot conjugates the left argument
}

// <psi_f|A|psi_i> / <psi_f|psi_i>; refuses near-orthogonal selections so the
// anomalous-divergence regime is an explicit error, never an inf.
inline cplx aav_weak_value(const QubitState& pre, const QubitState& post, const Observable& obs) {
    const cplx denom = inner(post, pre);
    if (std::norm(denom) < orthogonality_threshold)
        throw OrthogonalSelection("aav_weak_value: selections orthogonal within threshold");
    const cplx numer = state_vector(post).dot(obs.matrix * state_vector(pre));
    return numer / denom;
}

} // namespace psel
