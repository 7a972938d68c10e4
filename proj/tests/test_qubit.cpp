#include "catch2/catch_amalgamated.hpp"

#include "psel/qubit.hpp"

using namespace psel;

TEST_CASE("Bloch state components and angle normalization") {
    const QubitState q(0.3 * pi, 1.2);
    const Vec2 v = state_vector(q);
    REQUIRE(std::abs(v(basis_index_one) - cplx(std::cos(0.15 * pi), 0.0)) < 1e-15);
    REQUIRE(std::abs(v(basis_index_zero) - std::polar(std::sin(0.15 * pi), 1.2)) < 1e-15);
    REQUIRE(std::abs(v.norm() - 1.0) < 1e-15);

    // poles
    REQUIRE(std::abs(state_vector(QubitState(0.0, 0.7))(basis_index_one) - cplx(1.0)) < 1e-15);
    REQUIRE(std::abs(state_vector(QubitState(pi, 0.0))(basis_index_zero) - cplx(1.0)) < 1e-15);

    // phi wraps into [0, 2 pi)
    REQUIRE(QubitState(1.0, -0.5 * pi).phi == Catch::Approx(1.5 * pi));
    REQUIRE(QubitState(1.0, 2.0 * pi).phi == Catch::Approx(0.0).margin(1e-15));

    // theta clamps roundoff but rejects genuinely out-of-range values
    REQUIRE(QubitState(-1e-12, 0.0).theta == 0.0);
    REQUIRE(QubitState(pi + 1e-12, 0.0).theta == pi);
    REQUIRE_THROWS_AS(QubitState(-1e-6, 0.0), InvalidParameter);
    REQUIRE_THROWS_AS(QubitState(pi + 1e-6, 0.0), InvalidParameter);
    REQUIRE_THROWS_AS(QubitState(std::nan(""), 0.0), InvalidParameter);
}

TEST_CASE("sigma_z convention: |1> is the +1 eigenvector at index 0") {
    const Mat2 sz = sigma_z_matrix();
    REQUIRE(sz(basis_index_one, basis_index_one) == cplx(1.0));
    REQUIRE(sz(basis_index_zero, basis_index_zero) == cplx(-1.0));
    REQUIRE(sz(0, 1) == cplx(0.0));

    // theta = 0 state is the excited (+1) pole
    const Vec2 north = state_vector(QubitState(0.0, 0.0));
    REQUIRE(std::abs((sz * north - north).norm()) < 1e-15);
}

TEST_CASE("Observable validation") {
    REQUIRE_NOTHROW(sigma_z());
    Mat2 not_herm = Mat2::Zero();
    not_herm(0, 1) = cplx(0.0, 1.0);
    REQUIRE_THROWS_AS(Observable(not_herm), InvalidParameter);
    Mat2 not_invol = Mat2::Identity();
    not_invol(0, 0) = 0.5;
    REQUIRE_THROWS_AS(Observable(not_invol), InvalidParameter);
    // sigma_x is fine: Hermitian with unit square
    Mat2 sx = Mat2::Zero();
    sx(0, 1) = sx(1, 0) = 1.0;
    REQUIRE_NOTHROW(Observable(sx));
}

TEST_CASE("inner product conjugates the bra") {
    const QubitState x(0.5 * pi, 0.0);
    const QubitState y(0.5 * pi, 0.5 * pi);
    // <y|x> = (1/2)(1 + e^{-i pi/2}) = (1 - i)/2
    const cplx v = inner(y, x);
    REQUIRE(std::abs(v - cplx(0.5, -0.5)) < 1e-15);
    REQUIRE(std::abs(inner(x, x) - cplx(1.0)) < 1e-15);
    REQUIRE(std::abs(inner(x, y) - std::conj(v)) < 1e-15);
}

TEST_CASE("projector is rank one and idempotent") {
    const QubitState q(1.1, 2.3);
    const Mat2 p = projector(q);
    REQUIRE((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE((p * p - p).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE(std::abs(p.trace() - cplx(1.0)) < 1e-15);
}

TEST_CASE("bare weak value: eigenstate, zero, and anomalous cases") {
    const Observable sz = sigma_z();

    // pre-selection on an eigenstate pins the weak value to the eigenvalue
    for (double thf : {0.2, 1.0, 2.7})
        REQUIRE(std::abs(aav_weak_value(QubitState(0.0, 0.0), QubitState(thf, 0.9), sz) -
                         cplx(1.0)) < 1e-12);
    REQUIRE(std::abs(aav_weak_value(QubitState(pi, 0.0), QubitState(1.3, 0.4), sz) -
                     cplx(-1.0)) < 1e-12);

    // equatorial pre = post: expectation value, here zero
    const QubitState eq(0.5 * pi, 0.0);
    REQUIRE(std::abs(aav_weak_value(eq, eq, sz)) < 1e-12);

    // nearly-orthogonal post-selection amplifies beyond the spectral range
    const cplx wv = aav_weak_value(eq, QubitState(0.5 * pi - 0.2, pi), sz);
    REQUIRE(std::abs(wv.imag()) < 1e-12);
    REQUIRE(wv.real() > 5.0);

    REQUIRE_THROWS_AS(aav_weak_value(QubitState(0.0, 0.0), QubitState(pi, 0.0), sz),
                      OrthogonalSelection);
}
