#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "psel/gad.hpp"
#include "psel/pointer.hpp"
#include "psel/qubit.hpp"

namespace psel {

// Success probabilities below this are treated as exactly zero post-selection.
inline constexpr double zero_postselection_threshold = 1e-14;
// Below this the conditioned-state quotients still evaluate but are flagged:
// divergence-dominated regime, not an error.
inline constexpr double anomalous_threshold = 1e-6;

struct MeasurementSetup {
    QubitState pre;
    QubitState post;
    GadChannel channel;
    PointerState pointer;
    double s = 0.0;

    MeasurementSetup() = default;
    MeasurementSetup(QubitState pre_, QubitState post_, GadChannel ch, PointerState pt, double s_)
        : pre(pre_), post(post_), channel(ch), pointer(pt), s(s_) {
        if (!(s >= 0.0) || !std::isfinite(s))
            throw InvalidParameter("MeasurementSetup: s must be finite and >= 0");
    }
};

// Eight branch amplitudes of the conditioned pointer mixture: one (+/-)
// eigenprojection pair per Kraus operator. mu are the raw matrix elements
// <psi_f|K_j Pi_{+/-}|psi_i>; c are the same divided by sqrt(P_succ).
struct BranchCoefficients {
    std::array<cplx, 4> mu_plus{}, mu_minus{};
    std::array<cplx, 4> c_plus{}, c_minus{};
};

// w_pp = sum |c_j^+|^2, w_mm = sum |c_j^-|^2, w_pm = sum c_j^+ conj(c_j^-);
// w_mp is the conjugate and is not stored.
struct BranchWeights {
    double w_pp = 0.0;
    double w_mm = 0.0;
    cplx w_pm{0.0, 0.0};
};

struct ProtocolResult {
    double p_succ = 0.0;
    cplx weak_value{0.0, 0.0};
    double overlap = 0.0;
    double delta_x = 0.0; // units of sigma
    double delta_p = 0.0; // units of 1/sigma
    double amp_x = 0.0;
    double amp_p = 0.0;
    double eta = 0.0;
    double psi = 0.0;
    bool anomalous = false; // p_succ below anomalous_threshold but above zero
};

// Background term of P_succ: survives at every strength.
inline double eta_term(const MeasurementSetup& su) {
    const double ci = std::cos(su.pre.theta), cf = std::cos(su.post.theta);
    const double gamma = su.channel.gamma, p = su.channel.p;
    return 1.0 + gamma * (2.0 * p - 1.0) * cf + (1.0 - gamma) * ci * cf;
}

// Interference term of P_succ; the strength enters through the running phase
// 2bs on top of the selection phase difference.
inline double psi_term(const MeasurementSetup& su) {
    const double si = std::sin(su.pre.theta), sf = std::sin(su.post.theta);
    return std::sqrt(1.0 - su.channel.gamma) * si * sf *
           std::cos(2.0 * su.pointer.b * su.s + su.pre.phi - su.post.phi);
}

inline double p_succ(const MeasurementSetup& su, const Convention& conv = Convention::calibrated()) {
    const double env = std::exp(-conv.kappa * rate_gamma(su.pointer) * su.s * su.s);
    const double v = 0.5 * (eta_term(su) + env * psi_term(su));
    return std::clamp(v, 0.0, 1.0);
}

// Raw branch matrix elements mu_j^{+/-} = <psi_f|K_j Pi_{+/-}|psi_i> for the
// four exchange operators, written out against the sigma_z eigenprojections.
inline BranchCoefficients branch_mu(const MeasurementSetup& su) {
    const double hi = 0.5 * su.pre.theta, hf = 0.5 * su.post.theta;
    const double chi = std::cos(hi), shi = std::sin(hi);
    const double chf = std::cos(hf), shf = std::sin(hf);
    const double gamma = su.channel.gamma, p = su.channel.p;
    const cplx ei_dphi = std::exp(cplx(0.0, su.pre.phi - su.post.phi));

    BranchCoefficients bc;
    bc.mu_plus[0] = std::sqrt((1.0 - p) * (1.0 - gamma)) * chf * chi;
    bc.mu_minus[0] = std::sqrt(1.0 - p) * ei_dphi * shf * shi;
    bc.mu_plus[1] = std::sqrt((1.0 - p) * gamma) * std::exp(cplx(0.0, -su.post.phi)) * shf * chi;
    bc.mu_minus[1] = 0.0;
    bc.mu_plus[2] = std::sqrt(p) * chf * chi;
    bc.mu_minus[2] = std::sqrt(p * (1.0 - gamma)) * ei_dphi * shf * shi;
    bc.mu_plus[3] = 0.0;
    bc.mu_minus[3] = std::sqrt(p * gamma) * std::exp(cplx(0.0, su.pre.phi)) * chf * shi;
    return bc;
}

inline BranchCoefficients branch_coefficients(const MeasurementSetup& su,
                                              const Convention& conv = Convention::calibrated()) {
    const double ps = p_succ(su, conv);
    if (ps < zero_postselection_threshold)
        throw ZeroPostSelection("branch_coefficients: success probability below threshold");
    BranchCoefficients bc = branch_mu(su);
    const double inv_root = 1.0 / std::sqrt(ps);
    for (int j = 0; j < 4; ++j) {
        bc.c_plus[j] = bc.mu_plus[j] * inv_root;
        bc.c_minus[j] = bc.mu_minus[j] * inv_root;
    }
    return bc;
}

inline BranchWeights branch_weights(const MeasurementSetup& su,
                                    const Convention& conv = Convention::calibrated()) {
    const BranchCoefficients bc = branch_coefficients(su, conv);
    BranchWeights w;
    for (int j = 0; j < 4; ++j) {
        w.w_pp += std::norm(bc.c_plus[j]);
        w.w_mm += std::norm(bc.c_minus[j]);
        w.w_pm += bc.c_plus[j] * std::conj(bc.c_minus[j]);
    }
    return w;
}

// Weak value retrodicted through the channel: numerator and denominator are
// the closed rational forms in the Bloch angles and (gamma, p).
inline cplx weak_value_gad(const QubitState& pre, const QubitState& post, const GadChannel& ch) {
    const double ci = std::cos(pre.theta), cf = std::cos(post.theta);
    const double si = std::sin(pre.theta), sf = std::sin(post.theta);
    const double dphi = pre.phi - post.phi;
    const double root_1mg = std::sqrt(1.0 - ch.gamma);

    const double re_num = ci + cf * (1.0 - ch.gamma + ch.gamma * (2.0 * ch.p - 1.0) * ci);
    const double im_num = -std::sin(dphi) * si * sf * root_1mg;
    const double den = 1.0 + ch.gamma * (2.0 * ch.p - 1.0) * cf + (1.0 - ch.gamma) * ci * cf +
                       root_1mg * si * sf * std::cos(dphi);
    if (std::abs(den) < zero_postselection_threshold)
        throw OrthogonalSelection("weak_value_gad: channel-dressed selection overlap vanishes");
    return cplx(re_num, im_num) / den;
}

// Same quantity from an arbitrary Kraus list by direct 2x2 algebra:
// <psi_f|E(A rho_i)|psi_f> / <psi_f|E(rho_i)|psi_f>.
inline cplx weak_value_general(const QubitState& pre, const QubitState& post,
                               const std::vector<Mat2>& kraus, const Observable& obs) {
    Mat2 comp = Mat2::Zero();
    for (const auto& k : kraus) comp += k.adjoint() * k;
    if ((comp - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidKraus("weak_value_general: Kraus completeness violated");

    const Vec2 vi = state_vector(pre), vf = state_vector(post);
    const Mat2 rho_i = vi * vi.adjoint();
    const Mat2 a_rho = obs.matrix * rho_i;
    cplx num = 0.0, den = 0.0;
    for (const auto& k : kraus) {
        num += vf.dot(k * a_rho * k.adjoint() * vf);
        den += vf.dot(k * rho_i * k.adjoint() * vf);
    }
    if (std::abs(den) < zero_postselection_threshold)
        throw OrthogonalSelection("weak_value_general: channel-dressed selection overlap vanishes");
    return num / den;
}

// Quantum overlap of the conditioned pointer state with its own initial
// state. The background piece decays at the tilde rate, the interference
// piece at the plain rate; the printed common-envelope form is produced by
// paper conventions.
inline double overlap(const MeasurementSetup& su, const Convention& conv = Convention::calibrated()) {
    const double ps = p_succ(su, conv);
    if (ps < zero_postselection_threshold)
        throw ZeroPostSelection("overlap: success probability below threshold");
    const double g_big = rate_gamma(su.pointer);
    const double g_tilde = rate_gamma_tilde(su.pointer);
    const double s2 = su.s * su.s;
    const double env_diag = std::exp(-0.5 * conv.kappa_tilde * g_tilde * s2);
    const double env_cross = conv.paper ? env_diag : std::exp(-0.5 * conv.kappa_tilde * g_big * s2);
    const double e = eta_term(su), ps_i = psi_term(su);
    return (e * env_diag + ps_i * env_cross) / ((2.0 * su.pointer.n_bar + 1.0) * 2.0 * ps);
}

inline double amp_x(const MeasurementSetup& su, const Convention& conv = Convention::calibrated()) {
    const double ps = p_succ(su, conv);
    if (ps < zero_postselection_threshold)
        throw ZeroPostSelection("amp_x: success probability below threshold");
    const double ci = std::cos(su.pre.theta), cf = std::cos(su.post.theta);
    const double gamma = su.channel.gamma, p = su.channel.p;
    double num = ci + cf * (1.0 - gamma + gamma * (2.0 * p - 1.0) * ci);
    if (!conv.paper) {
        // A tilted squeeze correlates the two quadratures, so the interference
        // term leaks the momentum harmonic into the position shift. The leak
        // vanishes for chi in {0, pi/2}, r = 0, or an aligned phase, which
        // covers every printed special case; the oracle requires it elsewhere.
        const double cov = (2.0 * su.pointer.n_bar + 1.0) * std::sinh(2.0 * su.pointer.r) *
                           std::sin(2.0 * su.pointer.chi);
        if (cov != 0.0) {
            const double g_big = rate_gamma(su.pointer);
            const double phase = 2.0 * su.pointer.b * su.s + su.pre.phi - su.post.phi;
            num -= std::exp(-conv.kappa * g_big * su.s * su.s) * cov *
                   std::sqrt(1.0 - gamma) * std::sin(su.pre.theta) *
                   std::sin(su.post.theta) * std::sin(phase);
        }
    }
    return num / (2.0 * ps);
}

inline double amp_p(const MeasurementSetup& su, const Convention& conv = Convention::calibrated()) {
    const double ps = p_succ(su, conv);
    if (ps < zero_postselection_threshold)
        throw ZeroPostSelection("amp_p: success probability below threshold");
    const double g_big = rate_gamma(su.pointer);
    const double si = std::sin(su.pre.theta), sf = std::sin(su.post.theta);
    const double phase = conv.m * su.pointer.b * su.s + su.pre.phi - su.post.phi;
    return -conv.kappa * g_big * std::exp(-conv.kappa * g_big * su.s * su.s) *
           std::sqrt(1.0 - su.channel.gamma) * si * sf * std::sin(phase) / (2.0 * ps);
}

// (delta_x in units of sigma-scaled position, delta_p in 1/sigma units).
inline std::pair<double, double> mean_shifts(const MeasurementSetup& su,
                                             const Convention& conv = Convention::calibrated()) {
    const double ax = amp_x(su, conv);
    const double ap = amp_p(su, conv);
    return {su.pointer.sigma * su.s * ax, su.s / su.pointer.sigma * ap};
}

inline ProtocolResult protocol_result(const MeasurementSetup& su,
                                      const Convention& conv = Convention::calibrated()) {
    ProtocolResult r;
    r.eta = eta_term(su);
    r.psi = psi_term(su);
    r.p_succ = p_succ(su, conv);
    if (r.p_succ < zero_postselection_threshold)
        throw ZeroPostSelection("protocol_result: success probability below threshold");
    r.anomalous = r.p_succ < anomalous_threshold;
    // The weak value can be singular (field-free selection at s = 0) while the
    // protocol itself still succeeds; report it as NaN instead of aborting the row.
    try {
        r.weak_value = weak_value_gad(su.pre, su.post, su.channel);
    } catch (const OrthogonalSelection&) {
        r.weak_value = cplx(std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN());
    }
    r.overlap = overlap(su, conv);
    r.amp_x = amp_x(su, conv);
    r.amp_p = amp_p(su, conv);
    r.delta_x = su.pointer.sigma * su.s * r.amp_x;
    r.delta_p = su.s / su.pointer.sigma * r.amp_p;
    return r;
}

} // namespace psel
