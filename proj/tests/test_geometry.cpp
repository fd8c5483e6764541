#include "calabi/geometry.hpp"
#include "calabi/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace calabi;

namespace {

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Box square(double lo, double hi) {
    Box b;
    b.lo = v2(lo, lo);
    b.hi = v2(hi, hi);
    return b;
}

} // namespace

TEST_CASE("omega pairing on the standard basis and antisymmetry") {
    CHECK(omega_pairing(v2(1, 0), v2(0, 1)) == doctest::Approx(1.0));
    CHECK(omega_pairing(v2(3, 7), v2(3, 7)) == doctest::Approx(0.0));

    // 2x2 determinant oracle on random samples.
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> U(-5.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double a = U(rng), b = U(rng), c = U(rng), d = U(rng);
        CHECK(omega_pairing(v2(a, b), v2(c, d)) == doctest::Approx(a * d - b * c));
        CHECK(omega_pairing(v2(a, b), v2(c, d)) ==
              doctest::Approx(-omega_pairing(v2(c, d), v2(a, b))));
    }
}

TEST_CASE("omega pairing rejects bad dimensions and is nondegenerate") {
    Vec u(3), w(3);
    u << 1, 2, 3;
    w << 1, 2, 3;
    CHECK_THROWS_AS(omega_pairing(u, w), std::invalid_argument);
    CHECK_THROWS_AS(omega_pairing(v2(1, 0), Vec::Zero(4)), std::invalid_argument);

    for (int n : {1, 2, 3}) {
        const Mat Om = omega_matrix(n);
        CHECK(std::abs(std::abs(Om.determinant()) - 1.0) < 1e-12);
        // matrix form agrees with the pairing
        std::mt19937 rng(11u);
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        Vec a(2 * n), b(2 * n);
        for (int i = 0; i < 2 * n; ++i) {
            a[i] = U(rng);
            b[i] = U(rng);
        }
        CHECK(omega_pairing(a, b) == doctest::Approx(a.dot(Om * b)));
    }
}

TEST_CASE("liouville primitives and their exterior derivative") {
    CHECK(liouville(PrimitiveKind::radial, v2(0, 0)).norm() == doctest::Approx(0.0));
    const Covector c = liouville(PrimitiveKind::xdy, v2(2, 5));
    CHECK(c[0] == doctest::Approx(0.0));
    CHECK(c[1] == doctest::Approx(2.0));

    // finite-difference d(lambda) equals the standard symplectic matrix at
    // 100 random points, for both built-ins and in dimensions 2 and 4
    for (int n : {1, 2}) {
        const Mat Om = omega_matrix(n);
        std::mt19937 rng(13u);
        std::uniform_real_distribution<double> U(-3.0, 3.0);
        for (PrimitiveKind kind : {PrimitiveKind::radial, PrimitiveKind::xdy}) {
            const OneForm lam = liouville_form(kind);
            for (int s = 0; s < 100; ++s) {
                Vec z(2 * n);
                for (int i = 0; i < 2 * n; ++i) z[i] = U(rng);
                CHECK((fd_exterior_derivative(lam, z) - Om).lpNorm<Eigen::Infinity>() < 1e-6);
            }
        }
    }
}

TEST_CASE("hamiltonian vector field: zero field, quadratic field, defining identity") {
    TimeDepField zero;
    zero.support = square(-1, 1);
    zero.autonomous = true;
    zero.value = [](double, const Vec&) { return 0.0; };
    zero.gradient = [](double, const Vec& x, Vec& g) { g = Vec::Zero(x.size()); };
    CHECK(hamiltonian_vector_field(zero, 0.3, v2(0.2, -0.4)).norm() == doctest::Approx(0.0));

    // H = (x^2 + y^2)/2 (support ignored locally): X = (H_y, -H_x) = (y, -x).
    TimeDepField quad;
    quad.support = square(-10, 10);
    quad.autonomous = true;
    quad.value = [](double, const Vec& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
    quad.gradient = [](double, const Vec& x, Vec& g) { g = x; };
    const Vector X = hamiltonian_vector_field(quad, 0.0, v2(1, 0));
    CHECK(X[0] == doctest::Approx(0.0));
    CHECK(X[1] == doctest::Approx(-1.0));

    // Defining identity omega(X_H, v) = <dH, v> against an independent FD
    // gradient, for a bump field at random probes and directions.
    const ScalarField bump = plateau_bump(square(-1, 1), 0.4, 0.7);
    const TimeDepField H = autonomous(bump);
    std::mt19937 rng(17u);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int s = 0; s < 100; ++s) {
        const Vec x = v2(U(rng), U(rng));
        const Vec v = v2(U(rng), U(rng));
        const Vector Xh = hamiltonian_vector_field(H, 0.0, x);
        Vec dh(2);
        fd_gradient([&](const Vec& y) { return bump.value(y); }, x, dh);
        CHECK(omega_pairing(Xh, v) == doctest::Approx(dh.dot(v)).epsilon(1e-6));
    }
}

TEST_CASE("plateau bump: plateau value, support, mass bounds") {
    const Box box = square(-1, 1);
    const double rho = 0.5, height = 2.0;
    const ScalarField f = plateau_bump(box, rho, height);

    CHECK(f.value(box.center()) == doctest::Approx(height));
    CHECK(f.value(v2(1.0, 0.0)) == 0.0);
    CHECK(f.value(v2(-1.0, 0.3)) == 0.0);
    CHECK(f.value(v2(1.5, 0.0)) == 0.0);
    CHECK(f.value(v2(0.3, 2.0)) == 0.0);

    // 0 <= F <= height everywhere, exactly zero outside the box.
    std::mt19937 rng(23u);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int s = 0; s < 500; ++s) {
        const Vec x = v2(U(rng), U(rng));
        const double v = f.value(x);
        CHECK(v >= 0.0);
        CHECK(v <= height + 1e-15);
        if (!box.contains(x)) CHECK(v == 0.0);
    }

    // Mass bounds against a high-resolution quadrature oracle.
    const double mass = integrate_box([&](const Vec& x) { return f.value(x); }, box,
                                      QuadratureRule::gauss_legendre, 160);
    CHECK(mass >= rho * height * box.volume());
    CHECK(mass <= height * box.volume());

    // The standard config agrees with the oracle to 1e-6.
    const double mass_std = integrate_box([&](const Vec& x) { return f.value(x); }, box,
                                          QuadratureRule::gauss_legendre, 64);
    CHECK(mass_std == doctest::Approx(mass).epsilon(1e-8));
}

TEST_CASE("plateau bump in dimension 4 keeps its plateau fraction") {
    Box box;
    box.lo = Vec::Constant(4, -0.5);
    box.hi = Vec::Constant(4, 0.5);
    const ScalarField f = plateau_bump(box, 0.4, 1.0);
    CHECK(f.value(box.center()) == doctest::Approx(1.0));
    const double mass = integrate_box([&](const Vec& x) { return f.value(x); }, box,
                                      QuadratureRule::gauss_legendre, 24);
    CHECK(mass >= 0.4 * box.volume());
    CHECK(mass <= box.volume());
}

TEST_CASE("plateau bump infeasibility reports the achievable fraction") {
    const Box box = square(0, 0.01); // tiny box, default min_width 1e-4
    try {
        plateau_bump(box, 0.999, 1.0);
        FAIL("expected bump_infeasible");
    } catch (const bump_infeasible& e) {
        CHECK(e.max_feasible_rho == doctest::Approx(max_feasible_rho(box)));
        CHECK(e.max_feasible_rho < 0.999);
        CHECK(e.max_feasible_rho > 0.0);
    }
    CHECK_NOTHROW(plateau_bump(box, 0.5, 1.0));
    CHECK_THROWS_AS(plateau_bump(box, 1.2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(plateau_bump(box, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("bump gradient matches finite differences") {
    const ScalarField f = plateau_bump(square(-1, 1), 0.3, 1.5);
    std::mt19937 rng(29u);
    std::uniform_real_distribution<double> U(-1.2, 1.2);
    Vec g(2), gfd(2);
    for (int s = 0; s < 200; ++s) {
        const Vec x = v2(U(rng), U(rng));
        f.gradient(x, g);
        fd_gradient([&](const Vec& y) { return f.value(y); }, x, gfd);
        CHECK((g - gfd).lpNorm<Eigen::Infinity>() < 1e-6);
    }
}

TEST_CASE("smooth step endpoints and midpoint slope") {
    CHECK(smooth_step(-0.5) == 0.0);
    CHECK(smooth_step(0.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(2.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    CHECK(smooth_step_prime(0.5) == doctest::Approx(2.0));
    // symmetry s(u) + s(1-u) = 1
    for (double u : {0.1, 0.25, 0.7})
        CHECK(smooth_step(u) + smooth_step(1.0 - u) == doctest::Approx(1.0));
}

TEST_CASE("field algebra: scale, add, modulate keep values and gradients consistent") {
    const ScalarField a = plateau_bump(square(-1, 0), 0.3, 1.0);
    const ScalarField b = plateau_bump(square(0.1, 0.9), 0.2, 0.5);
    const ScalarField s = add(scale(a, -2.0), b);

    std::mt19937 rng(31u);
    std::uniform_real_distribution<double> U(-1.1, 1.1);
    Vec g(2), gfd(2);
    for (int i = 0; i < 100; ++i) {
        const Vec x = v2(U(rng), U(rng));
        CHECK(s.value(x) == doctest::Approx(-2.0 * a.value(x) + b.value(x)));
        s.gradient(x, g);
        fd_gradient([&](const Vec& y) { return s.value(y); }, x, gfd);
        CHECK((g - gfd).lpNorm<Eigen::Infinity>() < 1e-6);
    }
    CHECK(s.support.lo[0] == doctest::Approx(-1.0));
    CHECK(s.support.hi[0] == doctest::Approx(0.9));

    const TimeDepField m = modulated(a, [](double t) { return std::sin(2 * M_PI * t); });
    CHECK(m.value(0.25, v2(-0.5, -0.5)) == doctest::Approx(a.value(v2(-0.5, -0.5))));
    CHECK(m.value(0.0, v2(-0.5, -0.5)) == doctest::Approx(0.0));
}

TEST_CASE("uniform grids nest under resolution doubling") {
    const Box box = square(0, 1);
    const auto coarse = uniform_grid(box, 5);
    const auto fine = uniform_grid(box, 9);
    for (const Vec& c : coarse) {
        bool found = false;
        for (const Vec& f : fine)
            if ((c - f).norm() < 1e-15) found = true;
        CHECK(found);
    }
    CHECK(coarse.size() == 25);
    CHECK(grid_spacing(box, 5) == doctest::Approx(0.25));
}
