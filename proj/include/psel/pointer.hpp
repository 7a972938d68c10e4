#pragma once

#include <cmath>

#include "psel/errors.hpp"

namespace psel {

// Meter mode prepared as displaced squeezed thermal state:
//   rho0 = D(alpha) S(zeta) rho_th(n_bar) S(zeta)^dag D(alpha)^dag,
// alpha = a + i b, zeta = r e^{i 2 chi}.
// Position/momentum scale: X = sigma (a + a^dag), P = i (a^dag - a) / (2 sigma),
// so at chi = 0 squeezing stretches X (Var X = sigma^2 e^{2r} at n_bar = 0).
struct PointerState {
    double sigma = 1.0;
    double n_bar = 0.0;
    double r = 0.0;
    double chi = 0.0;
    double a = 0.0;
    double b = 0.0;

    PointerState() = default;
    PointerState(double sigma_, double n_bar_, double r_, double chi_, double a_, double b_)
        : sigma(sigma_), n_bar(n_bar_), r(r_), chi(chi_), a(a_), b(b_) {
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw InvalidParameter("PointerState: sigma must be finite and > 0");
        if (!(n_bar >= 0.0) || !std::isfinite(n_bar))
            throw InvalidParameter("PointerState: n_bar must be finite and >= 0");
        if (!(r >= 0.0) || !std::isfinite(r))
            throw InvalidParameter("PointerState: r must be finite and >= 0");
        if (!std::isfinite(chi) || !std::isfinite(a) || !std::isfinite(b))
            throw InvalidParameter("PointerState: chi, a, b must be finite");
    }
};

// Exponent conventions for the Gaussian envelopes. The calibrated set is what
// the Fock-space oracle certifies; the printed set reproduces the published
// formulas verbatim (common envelope for both trace identities, unit
// prefactors, single-angle phase).
struct Convention {
    double kappa = 0.5;       // chi0(s) = exp(-kappa Gamma s^2)
    double kappa_tilde = 0.5; // overlap envelopes exp(-2 kappa_tilde ...)
    int m = 2;                // phase multiplicity in the momentum-shift harmonic
    bool paper = false;       // true: use the printed common-envelope forms

    static Convention calibrated() { return Convention{0.5, 0.5, 2, false}; }
    static Convention paper_printed() { return Convention{1.0, 1.0, 1, true}; }
};

// Gamma = (2 n_bar + 1)(cosh 2r - cos 2chi sinh 2r): thermal-squeezed second
// moment along the displacement direction.
inline double rate_gamma(const PointerState& pt) {
    return (2.0 * pt.n_bar + 1.0) * (std::cosh(2.0 * pt.r) - std::cos(2.0 * pt.chi) * std::sinh(2.0 * pt.r));
}

inline double rate_gamma_tilde(const PointerState& pt) {
    const double w = 2.0 * pt.n_bar + 1.0;
    return rate_gamma(pt) / (w * w);
}

inline double purity(const PointerState& pt) { return 1.0 / (2.0 * pt.n_bar + 1.0); }

struct DecayRates {
    double gamma_big = 0.0;
    double gamma_tilde = 0.0;
    double kappa = 0.0;
};

inline DecayRates decay_rates(const PointerState& pt, const Convention& conv = Convention::calibrated()) {
    return DecayRates{rate_gamma(pt), rate_gamma_tilde(pt), conv.kappa};
}

// Gaussian envelope of Tr[rho0 D(s)] for real s. The full trace is
// exp(-2 i b s) times this: conjugating D(s) through the displacement leaves
// a unit-modulus phase from the momentum offset, so the envelope equals the
// trace itself only at b = 0 and |Tr| everywhere.
inline double char_fn(const PointerState& pt, double s, const Convention& conv = Convention::calibrated()) {
    return std::exp(-conv.kappa * rate_gamma(pt) * s * s);
}

// Tr[rho0 D(s) rho0 D(s)^dag] for real s: purity times a Gaussian in the
// tilde rate. Same closed form in both conventions up to kappa_tilde.
inline double overlap_identity(const PointerState& pt, double s, const Convention& conv = Convention::calibrated()) {
    return purity(pt) * std::exp(-2.0 * conv.kappa_tilde * rate_gamma_tilde(pt) * s * s);
}

// Tr[rho0 D(s) rho0 D(s)] for real s at alpha = 0. Calibrated: decays at the
// plain rate Gamma. Printed: shares the tilde-rate envelope with
// overlap_identity (the two coincide only at n_bar = 0).
inline double coherence_identity(const PointerState& pt, double s, const Convention& conv = Convention::calibrated()) {
    const double rate = conv.paper ? rate_gamma_tilde(pt) : rate_gamma(pt);
    return purity(pt) * std::exp(-2.0 * conv.kappa_tilde * rate * s * s);
}

} // namespace psel
