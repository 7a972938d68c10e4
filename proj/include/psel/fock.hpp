#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "psel/pointer.hpp"
#include "psel/qubit.hpp"

namespace psel {

using MatX = Eigen::MatrixXcd;
using VecX = Eigen::VectorXcd;

// Truncation necessarily corrupts the top-right corner of every exponentiated
// operator; unitarity is therefore gated on an interior block only.
inline constexpr double interior_unitarity_gate = 1e-8;

struct FockDensity {
    int cutoff = 0;
    MatX matrix;
};

inline void require_cutoff(int n) {
    if (n < 2) throw InvalidParameter("Fock cutoff must be >= 2");
}

// Annihilation operator: a|n> = sqrt(n)|n-1>, entries on the superdiagonal.
inline MatX ladder_a(int n) {
    require_cutoff(n);
    MatX a = MatX::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
    return a;
}

inline MatX xop(int n, double sigma) {
    const MatX a = ladder_a(n);
    return sigma * (a + a.adjoint());
}

inline MatX pop(int n, double sigma) {
    const MatX a = ladder_a(n);
    return cplx(0.0, 1.0) / (2.0 * sigma) * (a.adjoint() - a);
}

// Largest |(U^dag U - I)_{jk}| over the leading dim x dim block.
inline double interior_unitarity_error(const MatX& u, int dim) {
    const MatX g = u.adjoint() * u;
    double worst = 0.0;
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) {
            const double dev = std::abs(g(j, k) - (j == k ? cplx(1.0) : cplx(0.0)));
            worst = std::max(worst, dev);
        }
    return worst;
}

inline double interior_unitarity_error(const Eigen::MatrixXd& u, int dim) {
    const Eigen::MatrixXd g = u.transpose() * u;
    double worst = 0.0;
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
            worst = std::max(worst, std::abs(g(j, k) - (j == k ? 1.0 : 0.0)));
    return worst;
}

// M -> e^{i phi n_hat} M e^{-i phi n_hat}: entry (j,k) picks up e^{i phi (j-k)}.
inline void rotate_phase(MatX& m, double phi) {
    if (phi == 0.0) return;
    const int n = int(m.rows());
    VecX ph(n);
    for (int k = 0; k < n; ++k) ph(k) = std::polar(1.0, phi * double(k));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) m(j, k) *= ph(j) * std::conj(ph(k));
}

// exp[mag (a^dag - a)] for mag >= 0: the phase-free displacement core. The
// generator is real antisymmetric, so the exponential is real orthogonal and
// costs a fraction of the complex path. A displacement spreads Fock support
// by about |alpha|^2 levels, hence the guard band in the interior gate.
inline Eigen::MatrixXd displacement_core(int n, double mag) {
    require_cutoff(n);
    const int guard = int(std::ceil(4.0 * mag * mag)) + 4;
    const int interior = n - guard;
    if (interior < 2)
        throw CutoffTooSmall("displacement: cutoff leaves no interior block for |alpha|");
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double v = mag * std::sqrt(double(k));
        gen(k, k - 1) = v;
        gen(k - 1, k) = -v;
    }
    Eigen::MatrixXd u = gen.exp();
    if (interior_unitarity_error(u, interior) > interior_unitarity_gate)
        throw CutoffTooSmall("displacement: interior unitarity deviation above gate");
    return u;
}

// exp(alpha a^dag - conj(alpha) a), assembled from the real core through
// D(|alpha| e^{i phi}) = e^{i phi n_hat} D(|alpha|) e^{-i phi n_hat};
// the identity is exact for the truncated matrices, not just asymptotically.
inline MatX displacement(int n, cplx alpha) {
    MatX u = displacement_core(n, std::abs(alpha)).cast<cplx>();
    rotate_phase(u, std::arg(alpha));
    return u;
}

// exp[r (a^dag^2 - a^2)/2]: real orthogonal squeeze core along the position
// axis. A squeeze scales Fock support by about e^{2r}, so the trustworthy
// interior shrinks accordingly.
inline Eigen::MatrixXd squeeze_core(int n, double r) {
    require_cutoff(n);
    const int interior = int(std::floor((n - 8) * std::exp(-2.0 * r)));
    if (interior < 2)
        throw CutoffTooSmall("squeeze: cutoff leaves no interior block for |zeta|");
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 2 < n; ++k) {
        const double v = 0.5 * r * std::sqrt(double(k + 1) * double(k + 2));
        gen(k + 2, k) = v;
        gen(k, k + 2) = -v;
    }
    Eigen::MatrixXd u = gen.exp();
    if (interior_unitarity_error(u, interior) > interior_unitarity_gate)
        throw CutoffTooSmall("squeeze: interior unitarity deviation above gate");
    return u;
}

// exp[(zeta a^dag^2 - conj(zeta) a^2)/2], zeta = r e^{i 2 chi}. With this
// sign, chi = 0 stretches the position quadrature (Var X grows as e^{2r}),
// which is the orientation the decay-rate formulas assume: interference decay
// slows with r at chi = 0. Assembled as S(zeta) = e^{i chi n_hat} S(r)
// e^{-i chi n_hat}, exact at the truncated level.
inline MatX squeeze(int n, cplx zeta) {
    MatX u = squeeze_core(n, std::abs(zeta)).cast<cplx>();
    rotate_phase(u, 0.5 * std::arg(zeta));
    return u;
}

// Geometric occupation p_k = n_bar^k/(n_bar+1)^{k+1}, deliberately NOT
// renormalized after truncation: renormalizing silently biases purity and
// moments. The trace deficit (n_bar/(n_bar+1))^N is left visible.
inline FockDensity thermal_state(int n, double n_bar) {
    require_cutoff(n);
    if (!(n_bar >= 0.0) || !std::isfinite(n_bar))
        throw InvalidParameter("thermal_state: n_bar must be finite and >= 0");
    FockDensity rho{n, MatX::Zero(n, n)};
    const double ratio = n_bar / (n_bar + 1.0);
    double pk = 1.0 / (n_bar + 1.0);
    for (int k = 0; k < n; ++k) {
        rho.matrix(k, k) = pk;
        pk *= ratio;
    }
    return rho;
}

// rho0 = D(alpha) S(zeta) rho_th S^dag D^dag. The unitaries are peeled into
// real orthogonal cores and diagonal phase rotations, so every matrix product
// runs in real arithmetic: with eta = chi - arg(alpha),
//   rho0 = e^{i arg(alpha) n_hat} D_r [ e^{i eta n_hat} S_r rho_th S_r^T
//          e^{-i eta n_hat} ] D_r^T e^{-i arg(alpha) n_hat}.
inline FockDensity build_pointer(int n, const PointerState& pt) {
    FockDensity rho = thermal_state(n, pt.n_bar);
    const Eigen::VectorXd w = rho.matrix.diagonal().real();
    const bool squeezed = pt.r != 0.0;
    Eigen::MatrixXd core;
    if (squeezed) {
        const Eigen::MatrixXd sr = squeeze_core(n, pt.r);
        core = sr * w.asDiagonal() * sr.transpose();
    }
    const cplx alpha(pt.a, pt.b);
    if (alpha == cplx(0.0)) {
        if (squeezed) {
            rho.matrix = core.cast<cplx>();
            rotate_phase(rho.matrix, pt.chi);
        }
        return rho;
    }
    const double phi = std::arg(alpha);
    const Eigen::MatrixXd dr = displacement_core(n, std::abs(alpha));
    Eigen::MatrixXd wre(n, n), wim;
    bool has_im = false;
    if (!squeezed) {
        // isotropic thermal core: the inner rotation is invisible
        wre = (dr * w.asDiagonal()) * dr.transpose();
    } else {
        const double eta = pt.chi - phi;
        Eigen::VectorXd c(n), sv(n);
        for (int k = 0; k < n; ++k) {
            c(k) = std::cos(eta * double(k));
            sv(k) = std::sin(eta * double(k));
        }
        // e^{i eta (j-k)} written as cos/sin outer products keeps the split real
        const Eigen::MatrixXd yre =
            ((c * c.transpose() + sv * sv.transpose()).array() * core.array()).matrix();
        const Eigen::MatrixXd yim =
            ((sv * c.transpose() - c * sv.transpose()).array() * core.array()).matrix();
        wre = dr * yre * dr.transpose();
        wim = dr * yim * dr.transpose();
        has_im = true;
    }
    rho.matrix.resize(n, n);
    rho.matrix.real() = wre;
    if (has_im)
        rho.matrix.imag() = wim;
    else
        rho.matrix.imag().setZero();
    rotate_phase(rho.matrix, phi);
    return rho;
}

// Tr[A B] without forming the product.
inline cplx trace_product(const MatX& a, const MatX& b) {
    return (a.transpose().cwiseProduct(b)).sum();
}

inline double trace_deficit(const FockDensity& rho) {
    return std::abs(1.0 - rho.matrix.trace().real()) + std::abs(rho.matrix.trace().imag());
}

} // namespace psel
