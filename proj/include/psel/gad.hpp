#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "psel/qubit.hpp"

namespace psel {

// Thermal reservoir coupled to the qubit. Stores the mean photon number;
// the (omega, T) constructor converts via Bose-Einstein occupation with
// hbar = 1 and k_B carried explicitly.
struct BathSpec {
    double q_bar = 0.0;

    BathSpec() = default;
    explicit BathSpec(double q_bar_) : q_bar(q_bar_) {
        if (!(q_bar >= 0.0) || !std::isfinite(q_bar))
            throw InvalidParameter("BathSpec: q_bar must be finite and >= 0");
    }
    static BathSpec from_temperature(double omega_s, double t_b, double k_b = 1.0) {
        if (!(omega_s > 0.0) || !(t_b > 0.0) || !(k_b > 0.0))
            throw InvalidParameter("BathSpec: omega_s, T_B, k_B must be > 0");
        return BathSpec(1.0 / std::expm1(omega_s / (k_b * t_b)));
    }
};

// Bath with mean photon number q_bar drives the qubit toward excited-state
// population q_bar/(2 q_bar + 1); saturates at 1/2 from below.
inline double p_from_bath(double q_bar) {
    if (!(q_bar >= 0.0) || !std::isfinite(q_bar))
        throw InvalidParameter("p_from_bath: q_bar must be finite and >= 0");
    return q_bar / (2.0 * q_bar + 1.0);
}

inline double p_from_bath(const BathSpec& b) { return p_from_bath(b.q_bar); }

// Same map applied to the meter occupation; the resulting p_eq is the bias at
// which heating and cooling of the success probability balance.
inline double p_equilibrium(double n_bar) {
    if (!(n_bar >= 0.0) || !std::isfinite(n_bar))
        throw InvalidParameter("p_equilibrium: n_bar must be finite and >= 0");
    return n_bar / (2.0 * n_bar + 1.0);
}

// Generalized amplitude damping. gamma is the exchange probability, p the
// excited-state bath population (p = 0: zero temperature, p -> 1/2: infinite).
struct GadChannel {
    double gamma = 0.0;
    double p = 0.0;

    GadChannel() = default;
    GadChannel(double gamma_, double p_) : gamma(gamma_), p(p_) {
        if (!(gamma >= 0.0 && gamma <= 1.0) || !std::isfinite(gamma))
            throw InvalidParameter("GadChannel: gamma must lie in [0, 1]");
        if (!(p >= 0.0 && p <= 0.5) || !std::isfinite(p))
            throw InvalidParameter("GadChannel: p must lie in [0, 1/2]");
    }
    GadChannel(double gamma_, const BathSpec& bath) : GadChannel(gamma_, p_from_bath(bath)) {}
};

// Kraus operators in the (|1>, |0>) ordering. K0/K1 are the decay pair,
// K2/K3 the excitation pair; sum of K^dag K is the identity for all
// parameters in range.
inline std::array<Mat2, 4> kraus_ops(const GadChannel& ch) {
    const double root_1mg = std::sqrt(1.0 - ch.gamma);
    std::array<Mat2, 4> k;
    k.fill(Mat2::Zero());

    k[0](basis_index_one, basis_index_one) = root_1mg;
    k[0](basis_index_zero, basis_index_zero) = 1.0;
    k[0] *= std::sqrt(1.0 - ch.p);

    k[1](basis_index_zero, basis_index_one) = std::sqrt((1.0 - ch.p) * ch.gamma);

    k[2](basis_index_one, basis_index_one) = 1.0;
    k[2](basis_index_zero, basis_index_zero) = root_1mg;
    k[2] *= std::sqrt(ch.p);

    k[3](basis_index_one, basis_index_zero) = std::sqrt(ch.p * ch.gamma);

    return k;
}

inline void check_density(const Mat2& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidState("density matrix not Hermitian");
    if (std::abs(rho.trace() - cplx(1.0)) > 1e-10)
        throw InvalidState("density matrix trace != 1");
    Eigen::SelfAdjointEigenSolver<Mat2> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw InvalidState("density matrix not positive semidefinite");
}

inline Mat2 apply(const GadChannel& ch, const Mat2& rho) {
    check_density(rho);
    const auto ks = kraus_ops(ch);
    Mat2 out = Mat2::Zero();
    for (const auto& k : ks) out += k * rho * k.adjoint();
    return out;
}

// Heisenberg picture: sum K^dag X K. Dual side of
// tr[E(rho) X] = tr[rho E^dag(X)]; unital on the identity.
inline Mat2 adjoint_apply(const GadChannel& ch, const Mat2& x) {
    const auto ks = kraus_ops(ch);
    Mat2 out = Mat2::Zero();
    for (const auto& k : ks) out += k.adjoint() * x * k;
    return out;
}

} // namespace psel
