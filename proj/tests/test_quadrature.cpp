#include "calabi/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace calabi;

TEST_CASE("Gauss-Legendre is exact for polynomials of degree 2m-1") {
    for (int m : {2, 4, 8, 16}) {
        Rule1D r = rule_1d(QuadratureRule::gauss_legendre, m, -1.0, 3.0);
        double wsum = 0.0;
        for (double w : r.weights) wsum += w;
        CHECK(wsum == doctest::Approx(4.0));

        const int deg = 2 * m - 1;
        double got = 0.0;
        for (int i = 0; i < m; ++i) got += r.weights[i] * std::pow(r.nodes[i], deg);
        const double exact = (std::pow(3.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
        CHECK(got == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("tensor quadrature over boxes") {
    Box box;
    box.lo = Vec(2);
    box.hi = Vec(2);
    box.lo << 0.0, -1.0;
    box.hi << 2.0, 1.0;

    // integral of x*y^2 over [0,2]x[-1,1] = 2 * (2/3) = 4/3
    const double exact = 4.0 / 3.0;
    CHECK(integrate_box([](const Vec& x) { return x[0] * x[1] * x[1]; }, box,
                        QuadratureRule::gauss_legendre, 8) == doctest::Approx(exact));
    CHECK(integrate_box([](const Vec& x) { return x[0] * x[1] * x[1]; }, box,
                        QuadratureRule::midpoint, 200) ==
          doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("time quadrature splits at kinks") {
    // f(t) = |t - 1/2| integrates to 1/4; GL on the halves is exact.
    auto f = [](double t) { return std::abs(t - 0.5); };
    const double with_kink = integrate_time(f, QuadratureRule::gauss_legendre, 8, {0.5});
    CHECK(with_kink == doctest::Approx(0.25).epsilon(1e-14));
    // without the split an 8-node rule cannot be exact
    const double without = integrate_time(f, QuadratureRule::gauss_legendre, 8, {});
    CHECK(std::abs(without - 0.25) > 1e-8);
}

TEST_CASE("smooth integrand converges to the oracle under node refinement") {
    Box box;
    box.lo = Vec(2);
    box.hi = Vec(2);
    box.lo << -1.0, -1.0;
    box.hi << 1.0, 1.0;
    auto f = [](const Vec& x) { return std::exp(-x.squaredNorm()); };
    const double fine = integrate_box(f, box, QuadratureRule::gauss_legendre, 96);
    const double coarse = integrate_box(f, box, QuadratureRule::gauss_legendre, 24);
    CHECK(coarse == doctest::Approx(fine).epsilon(1e-10));
}
