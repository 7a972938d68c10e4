#include "catch2/catch_amalgamated.hpp"

#include "psel/oracle.hpp"

using namespace psel;

namespace {

constexpr int trace_cutoff = 160;

FockDensity centered_pointer(double n_bar, double r, double chi) {
    return build_pointer(trace_cutoff, PointerState(1.0, n_bar, r, chi, 0.0, 0.0));
}

cplx displaced_trace(const FockDensity& rho, double s) {
    const MatX d = displacement(rho.cutoff, cplx(s, 0.0));
    return trace_product(rho.matrix, d);
}

cplx two_sided_trace(const FockDensity& rho, double s, bool dagger) {
    const MatX d = displacement(rho.cutoff, cplx(s, 0.0));
    const MatX rd = rho.matrix * d;
    return dagger ? trace_product(rd, MatX(rho.matrix * d.adjoint())) : trace_product(rd, rd);
}

} // namespace

TEST_CASE("displaced-pointer trace matches the Gaussian envelope", "[convention]") {
    const double probes[][3] = {
        {0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, {0.0, 0.5, 0.0}, {0.3, 0.4, 0.25 * pi},
        {0.0, 0.6, 0.5 * pi},
    };
    for (const auto& pr : probes) {
        const PointerState pt(1.0, pr[0], pr[1], pr[2], 0.0, 0.0);
        const FockDensity rho = centered_pointer(pr[0], pr[1], pr[2]);
        for (double s : {0.2, 0.5, 0.9, 1.3}) {
            const cplx tr = displaced_trace(rho, s);
            CAPTURE(pr[0], pr[1], pr[2], s);
            REQUIRE(std::abs(tr.imag()) < 1e-10);
            REQUIRE(tr.real() == Catch::Approx(char_fn(pt, s)).margin(1e-8));
        }
    }
}

TEST_CASE("momentum offset rotates the displaced-pointer trace", "[convention]") {
    const PointerState pt(1.0, 0.3, 0.2, 0.5, 0.15, 0.65);
    const FockDensity rho = build_pointer(trace_cutoff, pt);
    for (double s : {0.3, 0.7, 1.1}) {
        const cplx tr = displaced_trace(rho, s);
        const cplx expected = std::exp(cplx(0.0, -2.0 * pt.b * s)) * char_fn(pt, s);
        CAPTURE(s);
        REQUIRE(std::abs(tr - expected) < 1e-8);
        REQUIRE(std::abs(tr) == Catch::Approx(char_fn(pt, s)).margin(1e-8));
    }
}

TEST_CASE("pointer overlap identity is displacement invariant", "[convention]") {
    const PointerState moved(1.0, 0.5, 0.3, 0.6, 0.2, -0.4);
    const PointerState still(1.0, 0.5, 0.3, 0.6, 0.0, 0.0);
    const FockDensity rho_m = build_pointer(trace_cutoff, moved);
    const FockDensity rho_s = build_pointer(trace_cutoff, still);
    for (double s : {0.25, 0.6, 1.0}) {
        const cplx tm = two_sided_trace(rho_m, s, true);
        const cplx ts = two_sided_trace(rho_s, s, true);
        CAPTURE(s);
        REQUIRE(std::abs(tm.imag()) < 1e-10);
        REQUIRE(tm.real() == Catch::Approx(ts.real()).margin(1e-9));
        REQUIRE(tm.real() == Catch::Approx(overlap_identity(moved, s)).margin(1e-8));
    }
}

TEST_CASE("coherence trace decays at the plain rate, not the tilde rate", "[convention]") {
    const PointerState pt(1.0, 0.5, 0.3, 0.4, 0.0, 0.0);
    const FockDensity rho = build_pointer(trace_cutoff, pt);
    const double g_big = rate_gamma(pt), g_tilde = rate_gamma_tilde(pt);
    for (double s : {0.3, 0.6, 1.0}) {
        const cplx tc = two_sided_trace(rho, s, false);
        const cplx to = two_sided_trace(rho, s, true);
        CAPTURE(s);
        REQUIRE(std::abs(tc.imag()) < 1e-10);
        REQUIRE(tc.real() == Catch::Approx(coherence_identity(pt, s)).margin(1e-8));
        // envelope ratio between the two identities exposes the rate gap
        const double ratio = tc.real() / to.real();
        REQUIRE(ratio == Catch::Approx(std::exp(-(g_big - g_tilde) * s * s)).margin(1e-7));
    }
    // printed convention assigns both identities the common tilde envelope,
    // which the measured trace contradicts away from n_bar = 0
    const Convention printed = Convention::paper_printed();
    const double measured = two_sided_trace(rho, 1.0, false).real();
    REQUIRE(coherence_identity(pt, 1.0, printed) ==
            Catch::Approx(overlap_identity(pt, 1.0, printed)).margin(1e-15));
    REQUIRE(std::abs(coherence_identity(pt, 1.0, printed) - measured) > 1e-3);
}

TEST_CASE("zero-temperature pointer collapses the two trace identities", "[convention]") {
    const PointerState pt(1.0, 0.0, 0.5, 0.7, 0.0, 0.0);
    const FockDensity rho = build_pointer(trace_cutoff, pt);
    REQUIRE(rate_gamma(pt) == Catch::Approx(rate_gamma_tilde(pt)).epsilon(1e-15));
    for (double s : {0.4, 0.9}) {
        const double tc = two_sided_trace(rho, s, false).real();
        const double to = two_sided_trace(rho, s, true).real();
        CAPTURE(s);
        REQUIRE(tc == Catch::Approx(to).margin(1e-9));
        REQUIRE(tc == Catch::Approx(overlap_identity(pt, s)).margin(1e-8));
    }
}

TEST_CASE("printed envelope is the square of the calibrated one", "[convention]") {
    const PointerState pt(1.0, 0.4, 0.6, 0.9, 0.0, 0.0);
    const Convention cal = Convention::calibrated(), printed = Convention::paper_printed();
    for (double s : {0.3, 0.8, 1.4}) {
        const double c = char_fn(pt, s, cal);
        REQUIRE(char_fn(pt, s, printed) == Catch::Approx(c * c).epsilon(1e-14));
    }
}

TEST_CASE("oracle calibration certifies the halved exponents and the doubled phase",
          "[convention][calibration]") {
    const CalibrationReport rep = calibrate_convention();
    REQUIRE(rep.kappa == Catch::Approx(0.5).margin(1e-6));
    REQUIRE(rep.kappa_tilde == Catch::Approx(0.5).margin(1e-6));
    REQUIRE(rep.m == 2);
    REQUIRE(rep.max_fit_residual < 1e-8);
    REQUIRE(rep.kappa_spread < 1e-6);
    REQUIRE(rep.kappa_tilde_spread < 1e-6);
    REQUIRE(rep.dp_err_m2 < 1e-6);
    REQUIRE(rep.dp_err_m1 > 1e-3); // the single-angle harmonic misses by a wide margin

    const Convention conv = rep.to_convention();
    REQUIRE(conv.kappa == Catch::Approx(rep.kappa));
    REQUIRE(conv.kappa_tilde == Catch::Approx(rep.kappa_tilde));
    REQUIRE(conv.m == 2);
    REQUIRE_FALSE(conv.paper);
}
