#include "catch2/catch_amalgamated.hpp"

#include "psel/oracle.hpp"

#include <utility>

using namespace psel;

namespace {

// kron(k, I_n) with the qubit index outer, matching JointState's block layout.
MatX embed_system(const Mat2& k, int n) {
    MatX out = MatX::Zero(2 * n, 2 * n);
    for (int lam = 0; lam < 2; ++lam)
        for (int nu = 0; nu < 2; ++nu)
            out.block(lam * n, nu * n, n, n) = k(lam, nu) * MatX::Identity(n, n);
    return out;
}

double max_block_dev(const JointState& a, const JointState& b) {
    return (a.matrix - b.matrix).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("initial joint state factorizes into qubit-weighted pointer blocks", "[oracle]") {
    const int n = 12;
    const QubitState pre(0.9, 0.4);
    const FockDensity rho0 = thermal_state(n, 0.3);
    const JointState js = initial_joint(pre, rho0);

    REQUIRE(js.cutoff == n);
    const double c = std::cos(0.45), s = std::sin(0.45);
    const cplx ph = std::exp(cplx(0.0, 0.4));
    const MatX b00 = c * c * rho0.matrix;
    const MatX b01 = c * s * std::conj(ph) * rho0.matrix;
    const MatX b11 = s * s * rho0.matrix;
    REQUIRE((MatX(js.block(0, 0)) - b00).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE((MatX(js.block(0, 1)) - b01).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE((MatX(js.block(1, 0)) - MatX(b01.adjoint())).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE((MatX(js.block(1, 1)) - b11).cwiseAbs().maxCoeff() < 1e-15);
    // joint trace inherits the thermal truncation deficit, nothing more
    REQUIRE(std::abs(js.matrix.trace() - rho0.matrix.trace()) < 1e-14);
}

TEST_CASE("interaction unitary is the exponential of the branch-conditioned shift generator",
          "[oracle]") {
    const int n = 48;
    const double s = 0.8;
    const MatX a = ladder_a(n);
    const MatX half = 0.5 * s * (MatX(a.adjoint()) - a);
    MatX gen = MatX::Zero(2 * n, 2 * n);
    gen.block(0, 0, n, n) = half;
    gen.block(n, n, n, n) = -half;
    const MatX direct = gen.exp();
    const MatX u = interaction_unitary(n, s);

    const int interior = n - (int(std::ceil(4.0 * 0.25 * s * s)) + 4);
    double worst = 0.0;
    for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
            for (int j = 0; j < interior; ++j)
                for (int k = 0; k < interior; ++k)
                    worst = std::max(worst,
                                     std::abs(u(b1 * n + j, b2 * n + k) -
                                              direct(b1 * n + j, b2 * n + k)));
    REQUIRE(worst < 1e-9);
}

TEST_CASE("blockwise interaction equals conjugation by the explicit unitary", "[oracle]") {
    const int n = 32;
    const double s = 0.6;
    const QubitState pre(1.1, 2.3);
    const FockDensity rho0 = thermal_state(n, 0.3);
    const JointState js = initial_joint(pre, rho0);

    const JointState fast = interact(js, s);
    const MatX u = interaction_unitary(n, s);
    const MatX slow = u * js.matrix * u.adjoint();
    REQUIRE((fast.matrix - slow).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("system channel acts as embedded Kraus conjugation and preserves the trace",
          "[oracle]") {
    const int n = 16;
    const QubitState pre(0.8, 1.7);
    const FockDensity rho0 = thermal_state(n, 0.5);
    JointState js = initial_joint(pre, rho0);
    js = interact(js, 0.9);

    const GadChannel ch(0.35, 0.2);
    const JointState fast = apply_system_channel(js, ch);

    JointState slow{n, MatX::Zero(2 * n, 2 * n)};
    for (const auto& k : kraus_ops(ch)) {
        const MatX kf = embed_system(k, n);
        slow.matrix += kf * js.matrix * kf.adjoint();
    }
    REQUIRE(max_block_dev(fast, slow) < 1e-13);
    REQUIRE(std::abs(fast.matrix.trace().real() - js.matrix.trace().real()) < 1e-12);
    REQUIRE(std::abs(fast.matrix.trace().imag()) < 1e-13);
}

TEST_CASE("post-selection returns a normalized conditioned pointer", "[oracle]") {
    const int n = 24;
    const QubitState pre(0.9, 0.4), post(2.0, 1.1);
    const FockDensity rho0 = thermal_state(n, 0.4);
    JointState js = initial_joint(pre, rho0);
    js = interact(js, 0.7);
    js = apply_system_channel(js, GadChannel(0.3, 0.15));

    const auto [p, cond] = post_select(js, post);
    REQUIRE(p > 0.0);
    REQUIRE(p < 1.0);
    REQUIRE(cond.cutoff == n);
    REQUIRE((cond.matrix - MatX(cond.matrix.adjoint())).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE(std::abs(cond.matrix.trace().real() - 1.0) < 1e-12);
    Eigen::SelfAdjointEigenSolver<MatX> es(cond.matrix);
    REQUIRE(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("post-selection on the orthogonal state is rejected", "[oracle]") {
    const int n = 16;
    const QubitState pre(0.5 * pi, 0.0), post(0.5 * pi, pi);
    const FockDensity rho0 = thermal_state(n, 0.0);
    JointState js = initial_joint(pre, rho0);
    js = interact(js, 0.0);
    js = apply_system_channel(js, GadChannel(0.0, 0.0));
    REQUIRE_THROWS_AS(post_select(js, post), ZeroPostSelection);

    MeasurementSetup su(pre, post, GadChannel(0.0, 0.0),
                        PointerState(1.0, 0.0, 0.0, 0.0, 0.0, 0.0), 0.0);
    REQUIRE_THROWS_AS(run_protocol(su), ZeroPostSelection);
}

TEST_CASE("identity selection on the identity protocol keeps the pointer intact", "[oracle]") {
    const int n = 16;
    const QubitState psi(0.5 * pi, 0.0);
    const FockDensity rho0 = thermal_state(n, 0.0);
    JointState js = initial_joint(psi, rho0);
    js = interact(js, 0.0);
    js = apply_system_channel(js, GadChannel(0.0, 0.0));
    const auto [p, cond] = post_select(js, psi);
    REQUIRE(p == Catch::Approx(1.0).margin(1e-13));
    REQUIRE((cond.matrix - rho0.matrix).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("uncoupled protocol leaves the pointer statistics at their initial values",
          "[oracle]") {
    const PointerState pt(1.2, 0.4, 0.2, 0.3, 0.1, -0.2);
    MeasurementSetup su(QubitState(0.8, 0.5), QubitState(1.4, 2.0), GadChannel(0.4, 0.3), pt,
                        0.0);
    const OracleReport rep = run_protocol(su);
    REQUIRE(rep.overlap == Catch::Approx(purity(pt)).margin(1e-8));
    REQUIRE(rep.delta_x == Catch::Approx(0.0).margin(1e-8));
    REQUIRE(rep.delta_p == Catch::Approx(0.0).margin(1e-8));
    REQUIRE(rep.mean_x == Catch::Approx(2.0 * pt.sigma * pt.a).margin(1e-8));
    REQUIRE(rep.mean_p == Catch::Approx(pt.b / pt.sigma).margin(1e-8));
}

TEST_CASE("clean uncoupled protocol succeeds with the selection overlap probability",
          "[oracle]") {
    const QubitState pre(0.7, 0.3), post(1.9, 1.2);
    MeasurementSetup su(pre, post, GadChannel(0.0, 0.25),
                        PointerState(1.0, 0.2, 0.0, 0.0, 0.0, 0.0), 0.0);
    const OracleReport rep = run_protocol(su);
    const cplx amp = std::cos(0.95) * std::cos(0.35) +
                     std::sin(0.95) * std::sin(0.35) * std::exp(cplx(0.0, 0.3 - 1.2));
    REQUIRE(rep.p_succ == Catch::Approx(std::norm(amp)).margin(1e-8));
}

TEST_CASE("eigenstate preparation shifts the position by exactly one coupling unit",
          "[oracle]") {
    // Pre in the upper eigenstate: every channel branch leaves the pointer in
    // D(s/2) rho0 D(s/2)^dag, so the conditioned shift is s*sigma regardless
    // of the selection and the bath.
    const double sigma = 1.3, s = 0.7;
    MeasurementSetup su(QubitState(0.0, 0.0), QubitState(0.9, 0.0), GadChannel(0.3, 0.1),
                        PointerState(sigma, 0.3, 0.0, 0.0, 0.25, 0.4), s);
    const OracleReport rep = run_protocol(su);
    REQUIRE(rep.delta_x == Catch::Approx(sigma * s).margin(1e-8));
    REQUIRE(rep.delta_p == Catch::Approx(0.0).margin(1e-8));
}

TEST_CASE("protocol runner reports its convergence metadata", "[oracle]") {
    MeasurementSetup su(QubitState(0.9, 0.4), QubitState(2.0, 1.1), GadChannel(0.3, 0.15),
                        PointerState(1.0, 0.5, 0.3, 0.7, 0.2, 0.8), 0.6);
    const OracleReport rep = run_protocol(su);
    REQUIRE(rep.cutoff_used >= starting_cutoff(su));
    REQUIRE(rep.cutoff_used <= max_fock_cutoff);
    REQUIRE(rep.truncation_loss < thermal_deficit_gate);
    REQUIRE(rep.conditioned_state.cutoff == rep.cutoff_used);
    REQUIRE(std::abs(rep.conditioned_state.matrix.trace().real() - 1.0) < 1e-10);
}

TEST_CASE("closed forms track the oracle on representative setups", "[oracle]") {
    const Convention conv = Convention::calibrated();
    const MeasurementSetup setups[] = {
        MeasurementSetup(QubitState(0.5 * pi, 0.0), QubitState(0.5 * pi, pi / 3.0),
                         GadChannel(0.25, 0.2), PointerState(1.0, 0.5, 0.3, 0.7, 0.2, 0.8),
                         0.6),
        MeasurementSetup(QubitState(0.7, 0.3), QubitState(1.9, 1.2), GadChannel(0.35, 0.15),
                         PointerState(0.8, 0.0, 0.0, 0.0, -0.3, 0.5), 1.1),
        MeasurementSetup(QubitState(2.2, 4.0), QubitState(0.9, 5.5), GadChannel(0.6, 0.45),
                         PointerState(1.5, 1.0, 0.6, 1.1, 0.4, -0.7), 0.8),
    };
    for (const auto& su : setups) {
        const OracleReport orep = run_protocol(su);
        const auto [dx, dp] = mean_shifts(su, conv);
        CAPTURE(su.s, su.pointer.n_bar, su.channel.gamma);
        REQUIRE(p_succ(su, conv) == Catch::Approx(orep.p_succ).margin(1e-7));
        REQUIRE(overlap(su, conv) == Catch::Approx(orep.overlap).margin(1e-7));
        REQUIRE(dx == Catch::Approx(orep.delta_x).margin(1e-7));
        REQUIRE(dp == Catch::Approx(orep.delta_p).margin(1e-7));
    }
}
