#include "calabi/chart.hpp"
#include "calabi/suite.hpp"

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

TimeDepField zero_field() {
    TimeDepField z;
    Box b;
    b.lo = v2(-1, -1);
    b.hi = v2(1, 1);
    z.support = b;
    z.autonomous = true;
    z.value = [](double, const Vec&) { return 0.0; };
    z.gradient = [](double, const Vec& x, Vec& g) { g = Vec::Zero(x.size()); };
    return z;
}

} // namespace

TEST_CASE("chart sends the diagonal to the zero section") {
    const Vec z = v2(0.7, -0.3);
    const ChartPoint c = chart_to_cotangent(z, z);
    CHECK((c.q - z).norm() == 0.0);
    CHECK(c.p.norm() == 0.0);
}

TEST_CASE("chart block signs are the ones forced by symplecticity") {
    const ChartPoint c = chart_to_cotangent(v2(1, 0), v2(0, 0));
    CHECK(c.q[0] == doctest::Approx(0.5));
    CHECK(c.q[1] == doctest::Approx(0.0));
    CHECK(c.p[0] == doctest::Approx(0.0));
    CHECK(c.p[1] == doctest::Approx(-1.0));
}

TEST_CASE("chart inverse round trip to machine precision") {
    std::mt19937 rng(53u);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int n : {1, 2}) {
        for (int s = 0; s < 50; ++s) {
            Vec X(2 * n), Y(2 * n);
            for (int i = 0; i < 2 * n; ++i) {
                X[i] = U(rng);
                Y[i] = U(rng);
            }
            const auto [Xb, Yb] = chart_from_cotangent(chart_to_cotangent(X, Y));
            CHECK((Xb - X).lpNorm<Eigen::Infinity>() < 1e-12);
            CHECK((Yb - Y).lpNorm<Eigen::Infinity>() < 1e-12);
        }
    }
}

TEST_CASE("chart symplecticity residual: correct chart vs corrupted chart") {
    for (int n : {1, 2})
        CHECK(chart_symplecticity_residual(n) <= 1e-10);
    // sign flip: residual jumps to order one
    const Mat bad = -omega_matrix(1);
    CHECK(chart_symplecticity_residual(1, &bad) >= 1.0);
}

TEST_CASE("graph points: identity map, outside support, isometry bound") {
    IntegratorConfig cfg;
    const FlowMap id = realize_time_one(zero_field(), cfg);
    const ChartPoint c = graph_point(id, v2(0.4, 0.4));
    CHECK(c.p.norm() == 0.0);
    CHECK((c.q - v2(0.4, 0.4)).norm() == 0.0);

    const TimeDepField H = suite_member("bump_unit");
    const FlowMap phi = realize_time_one(H, cfg);
    const ChartPoint outside = graph_point(phi, v2(1.4, 0.2));
    CHECK(outside.p.norm() == 0.0);

    std::mt19937 rng(59u);
    std::uniform_real_distribution<double> U(-0.9, 0.9);
    for (int s = 0; s < 20; ++s) {
        const Vec x = v2(U(rng), U(rng));
        const ChartPoint g = graph_point(phi, x);
        const double disp = (phi.forward(x) - x).norm();
        CHECK(g.p.norm() == doctest::Approx(disp).epsilon(1e-12));
    }
}

TEST_CASE("graphicality: identity and small maps pass, strong maps fold") {
    IntegratorConfig cfg;
    const GraphicalityReport id_rep =
        graphicality_report(realize_time_one(zero_field(), cfg), 8);
    CHECK(id_rep.is_graphical);
    CHECK(id_rep.min_abs_det == doctest::Approx(1.0));
    CHECK(id_rep.injectivity_collisions == 0);

    const TimeDepField base = graphical_base();
    for (double eps : {0.2, 0.05}) {
        const FlowMap phi = realize_time_one(scale(base, eps), cfg);
        CHECK(graphicality_report(phi, 12).is_graphical);
    }
}

TEST_CASE("plateau-height sweep locates the graphicality fold") {
    // Increasing the height drives the shell rotation angle through pi,
    // where det((Dphi+I)/2) crosses zero.
    IntegratorConfig cfg;
    const TimeDepField base = graphical_base();
    double last_mindet = 1.0;
    bool crossed = false;
    double at_height = 0.0;
    for (double height : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        cfg.steps = std::max(200, static_cast<int>(100 * height));
        const FlowMap phi = realize_time_one(scale(base, height), cfg);
        const GraphicalityReport rep = graphicality_report(phi, 16);
        if (rep.min_det < 0.0 || rep.min_abs_det < 1e-3) {
            crossed = true;
            at_height = height;
            break;
        }
        last_mindet = rep.min_abs_det;
    }
    CHECK(crossed);
    CHECK(at_height > 0.5);   // small heights stay graphical
    CHECK(last_mindet < 1.0); // the determinant was already sinking
}

TEST_CASE("section covector: identity, outside support, round trip") {
    IntegratorConfig cfg;
    const FlowMap id = realize_time_one(zero_field(), cfg);
    CHECK(section_covector(id, v2(0.3, -0.3)).norm() == doctest::Approx(0.0));

    const FlowMap phi = realize_time_one(scale(graphical_base(), 0.15), cfg);
    CHECK(section_covector(phi, v2(1.3, 0.0)).norm() == doctest::Approx(0.0));

    // alpha(midpoint(x)) equals the p-component of graph_point(phi, x).
    std::mt19937 rng(61u);
    std::uniform_real_distribution<double> U(-0.8, 0.8);
    for (int s = 0; s < 15; ++s) {
        const Vec x = v2(U(rng), U(rng));
        const ChartPoint g = graph_point(phi, x);
        const Covector alpha = section_covector(phi, g.q);
        CHECK((alpha - g.p).lpNorm<Eigen::Infinity>() < 1e-8);
    }
}

TEST_CASE("section is closed: finite-difference curl vanishes at probes") {
    IntegratorConfig cfg;
    const FlowMap phi = realize_time_one(scale(graphical_base(), 0.2), cfg);
    const SectionForm alpha = make_section(phi);
    std::mt19937 rng(67u);
    std::uniform_real_distribution<double> U(-0.7, 0.7);
    for (int s = 0; s < 6; ++s) {
        const Vec q = v2(U(rng), U(rng));
        const double h = 1e-4;
        Vec qe = q;
        qe[0] += h;
        const Covector apx = alpha(qe);
        qe[0] = q[0] - h;
        const Covector amx = alpha(qe);
        qe[0] = q[0];
        qe[1] += h;
        const Covector apy = alpha(qe);
        qe[1] = q[1] - h;
        const Covector amy = alpha(qe);
        const double curl = (apy[0] - amy[0]) / (2 * h) - (apx[1] - amx[1]) / (2 * h);
        CHECK(std::abs(curl) <= 1e-3);
    }
}

TEST_CASE("sup |alpha| shrinks monotonically down the epsilon schedule") {
    IntegratorConfig cfg;
    const TimeDepField base = graphical_base();
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
        const FlowMap phi = realize_time_one(scale(base, eps), cfg);
        double sup = 0.0;
        for (const Vec& q : uniform_grid(phi.support, 9))
            sup = std::max(sup, section_covector(phi, q).norm());
        CHECK(sup <= prev);
        prev = sup;
    }
    CHECK(prev < 0.05); // and it heads to zero
}

TEST_CASE("section solver reports near-non-graphical failures") {
    IntegratorConfig cfg;
    cfg.steps = 1200;
    // Strong map: far past the fold, the Newton solve cannot be expected to
    // converge everywhere.
    const FlowMap phi = realize_time_one(scale(graphical_base(), 12.0), cfg);
    bool threw = false;
    std::mt19937 rng(71u);
    std::uniform_real_distribution<double> U(-0.9, 0.9);
    for (int s = 0; s < 40 && !threw; ++s) {
        try {
            section_covector(phi, v2(U(rng), U(rng)));
        } catch (const newton_error& e) {
            threw = true;
            CHECK(e.residual >= 0.0);
        }
    }
    CHECK(threw);
}
