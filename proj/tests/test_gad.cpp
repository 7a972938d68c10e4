#include "catch2/catch_amalgamated.hpp"

#include <random>

#include "psel/gad.hpp"

using namespace psel;

namespace {

Mat2 random_density(std::mt19937_64& eng) {
    auto u = [&eng]() { return double(eng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    Mat2 g;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) g(i, j) = cplx(u(), u());
    Mat2 rho = g * g.adjoint();
    return rho / rho.trace();
}

} // namespace

TEST_CASE("Kraus operator entries") {
    const GadChannel ch(0.3, 0.2);
    const auto k = kraus_ops(ch);
    const double rg = std::sqrt(0.7);

    REQUIRE(std::abs(k[0](basis_index_one, basis_index_one) - std::sqrt(0.8) * rg) < 1e-15);
    REQUIRE(std::abs(k[0](basis_index_zero, basis_index_zero) - std::sqrt(0.8)) < 1e-15);
    // decay jump |0><1|
    REQUIRE(std::abs(k[1](basis_index_zero, basis_index_one) - std::sqrt(0.8 * 0.3)) < 1e-15);
    REQUIRE(std::abs(k[1](basis_index_one, basis_index_zero)) == 0.0);
    REQUIRE(std::abs(k[2](basis_index_one, basis_index_one) - std::sqrt(0.2)) < 1e-15);
    REQUIRE(std::abs(k[2](basis_index_zero, basis_index_zero) - std::sqrt(0.2) * rg) < 1e-15);
    // excitation jump |1><0|
    REQUIRE(std::abs(k[3](basis_index_one, basis_index_zero) - std::sqrt(0.2 * 0.3)) < 1e-15);
}

TEST_CASE("Kraus completeness across the parameter box") {
    for (int ig = 0; ig <= 10; ++ig)
        for (int ip = 0; ip <= 10; ++ip) {
            const auto k = kraus_ops(GadChannel(ig / 10.0, ip / 20.0));
            Mat2 comp = Mat2::Zero();
            for (const auto& kj : k) comp += kj.adjoint() * kj;
            REQUIRE((comp - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-14);
        }
}

TEST_CASE("channel application preserves density-matrix structure") {
    std::mt19937_64 eng(42);
    const GadChannel ch(0.45, 0.3);
    for (int t = 0; t < 20; ++t) {
        const Mat2 rho = random_density(eng);
        const Mat2 out = psel::apply(ch, rho);
        REQUIRE(std::abs(out.trace() - cplx(1.0)) < 1e-13);
        REQUIRE((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
        Eigen::SelfAdjointEigenSolver<Mat2> es(out);
        REQUIRE(es.eigenvalues().minCoeff() > -1e-13);
    }
}

TEST_CASE("coherence scales by sqrt(1-gamma)") {
    // equatorial |+x| state has all entries 1/2; the channel multiplies the
    // off-diagonal by sqrt(1-gamma) independent of p
    Mat2 plus;
    plus << 0.5, 0.5, 0.5, 0.5;
    for (double gamma : {0.0, 0.36, 0.91})
        for (double p : {0.0, 0.25, 0.5}) {
            const Mat2 out = psel::apply(GadChannel(gamma, p), plus);
            REQUIRE(std::abs(out(basis_index_one, basis_index_zero) -
                             cplx(0.5 * std::sqrt(1.0 - gamma))) < 1e-14);
        }
}

TEST_CASE("full damping drives every state to diag(p, 1-p)") {
    std::mt19937_64 eng(7);
    for (double p : {0.0, 0.17, 0.5}) {
        const GadChannel ch(1.0, p);
        for (int t = 0; t < 10; ++t) {
            const Mat2 out = psel::apply(ch, random_density(eng));
            REQUIRE(std::abs(out(basis_index_one, basis_index_one) - cplx(p)) < 1e-13);
            REQUIRE(std::abs(out(basis_index_zero, basis_index_zero) - cplx(1.0 - p)) < 1e-13);
            REQUIRE(std::abs(out(0, 1)) < 1e-13);
        }
    }
}

TEST_CASE("Choi matrix is positive semidefinite") {
    for (int ig = 0; ig <= 10; ++ig)
        for (int ip = 0; ip <= 5; ++ip) {
            const auto ks = kraus_ops(GadChannel(ig / 10.0, ip / 10.0));
            Eigen::Matrix4cd choi = Eigen::Matrix4cd::Zero();
            for (const auto& k : ks) {
                Eigen::Vector4cd v;
                v << k(0, 0), k(1, 0), k(0, 1), k(1, 1);
                choi += v * v.adjoint();
            }
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(choi);
            REQUIRE(es.eigenvalues().minCoeff() > -1e-10);
            REQUIRE(std::abs(choi.trace() - cplx(2.0)) < 1e-13); // trace-preserving
        }
}

TEST_CASE("Heisenberg adjoint is the trace dual and unital") {
    std::mt19937_64 eng(11);
    const GadChannel ch(0.6, 0.35);
    REQUIRE((adjoint_apply(ch, Mat2::Identity()) - Mat2::Identity()).cwiseAbs().maxCoeff() <
            1e-13);
    for (int t = 0; t < 20; ++t) {
        const Mat2 rho = random_density(eng);
        Mat2 g;
        auto u = [&eng]() { return double(eng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) g(i, j) = cplx(u(), u());
        const Mat2 x = 0.5 * (g + g.adjoint());
        const cplx lhs = (x * psel::apply(ch, rho)).trace();
        const cplx rhs = (adjoint_apply(ch, x) * rho).trace();
        REQUIRE(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("apply rejects non-density input") {
    const GadChannel ch(0.2, 0.1);
    Mat2 bad_trace = 2.0 * Mat2::Identity();
    REQUIRE_THROWS_AS(psel::apply(ch, bad_trace), InvalidState);
    Mat2 not_herm;
    not_herm << 0.5, cplx(0.2, 0.3), cplx(0.2, -0.1), 0.5;
    REQUIRE_THROWS_AS(psel::apply(ch, not_herm), InvalidState);
    Mat2 not_psd;
    not_psd << 1.5, 0.0, 0.0, -0.5;
    REQUIRE_THROWS_AS(psel::apply(ch, not_psd), InvalidState);
}

TEST_CASE("parameter validation") {
    REQUIRE_THROWS_AS(GadChannel(-0.1, 0.2), InvalidParameter);
    REQUIRE_THROWS_AS(GadChannel(1.1, 0.2), InvalidParameter);
    REQUIRE_THROWS_AS(GadChannel(0.5, 0.51), InvalidParameter);
    REQUIRE_THROWS_AS(GadChannel(0.5, -0.01), InvalidParameter);
    REQUIRE_NOTHROW(GadChannel(0.0, 0.5));
    REQUIRE_NOTHROW(GadChannel(1.0, 0.0));
}

TEST_CASE("bath population map") {
    REQUIRE(p_from_bath(0.0) == 0.0);
    REQUIRE(p_from_bath(1.0) == Catch::Approx(1.0 / 3.0));
    REQUIRE(p_from_bath(1e9) == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(p_equilibrium(0.5) == Catch::Approx(0.25));
    REQUIRE_THROWS_AS(p_from_bath(-0.5), InvalidParameter);

    // omega/(k_B T) = ln 2 puts exactly one thermal quantum in the mode
    const BathSpec b = BathSpec::from_temperature(std::log(2.0), 1.0);
    REQUIRE(b.q_bar == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE(p_from_bath(b) == Catch::Approx(1.0 / 3.0));
    // explicit k_B rescales the same way
    const BathSpec b2 = BathSpec::from_temperature(2.0 * std::log(2.0), 1.0, 2.0);
    REQUIRE(b2.q_bar == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE_THROWS_AS(BathSpec::from_temperature(-1.0, 1.0), InvalidParameter);
    REQUIRE_THROWS_AS(BathSpec(-0.2), InvalidParameter);

    // channel built from a bath carries the converted population
    const GadChannel ch(0.4, b);
    REQUIRE(ch.p == Catch::Approx(1.0 / 3.0));
}
