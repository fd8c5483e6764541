#include "calabi/experiments.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

namespace calabi {

namespace {

Vec random_point_in(const Box& box, std::mt19937& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Vec x(box.dim());
    for (int i = 0; i < box.dim(); ++i)
        x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * U(rng);
    return x;
}

TimeDepField zero_field() {
    TimeDepField z;
    Box b;
    b.lo = Vec::Constant(2, -1.0);
    b.hi = Vec::Constant(2, 1.0);
    z.support = b;
    z.autonomous = true;
    z.value = [](double, const Vec&) { return 0.0; };
    z.gradient = [](double, const Vec& x, Vec& g) {
        g.resize(x.size());
        g.setZero();
    };
    return z;
}

} // namespace

VerifyReport run_verify_suite(const LabConfig& cfg) {
    VerifyReport report;
    bool failed = false;

    auto check = [&](const std::string& name, double tol,
                     const std::function<double()>& measure) {
        CheckResult c;
        c.name = name;
        c.tolerance = tol;
        if (failed) {
            c.skipped = true;
        } else {
            c.measured = measure();
            c.pass = c.measured <= tol;
            if (!c.pass) failed = true;
        }
        report.checks.push_back(c);
    };

    std::vector<SuiteMember> suite;
    if (cfg.zero_fast_path) {
        suite.push_back({"zero", zero_field()});
    } else {
        suite = standard_suite();
    }

    IntegratorConfig integ;
    integ.scheme = cfg.scheme;
    integ.steps = cfg.steps;
    QuadratureConfig quad;
    quad.spatial_nodes_per_axis = cfg.quad;
    quad.time_nodes = cfg.time_nodes;

    std::vector<PrimitiveKind> kinds;
    if (cfg.lambda == "radial" || cfg.lambda == "both")
        kinds.push_back(PrimitiveKind::radial);
    if (cfg.lambda == "xdy" || cfg.lambda == "both")
        kinds.push_back(PrimitiveKind::xdy);

    const int n = cfg.dim_n;
    const int d = 2 * n;
    const Mat Om = omega_matrix(n);

    // 1. Chart symplecticity (a sign-flipped jbar is the corruption fixture).
    check("chart_symplecticity", 1e-10, [&] {
        if (cfg.corrupt_chart) {
            const Mat bad = -omega_matrix(n);
            return chart_symplecticity_residual(n, &bad);
        }
        return chart_symplecticity_residual(n);
    });

    // 2. Flow symplecticity: J^T Omega J = Omega at ~200 probes over the suite.
    check("flow_symplecticity", 5e-6, [&] {
        std::mt19937 rng(101u);
        double worst = 0.0;
        const int per_map = std::max(1, 200 / static_cast<int>(suite.size()));
        for (const SuiteMember& m : suite) {
            FlowMap phi = realize_time_one(m.field, integ);
            for (int i = 0; i < per_map; ++i) {
                const Vec x = random_point_in(m.field.support, rng);
                const Mat J = phi.jacobian(x);
                worst = std::max(worst, (J.transpose() * Om * J - Om).lpNorm<Eigen::Infinity>());
            }
        }
        return worst;
    });

    // 3. Two-formula agreement, both primitives against the spacetime formula
    //    and each other.
    check("two_formula_agreement", 1e-3, [&] {
        double worst = 0.0;
        for (const SuiteMember& m : suite) {
            const CalabiReport r = make_calabi_report(m.field, quad, integ);
            worst = std::max({worst, std::abs(r.cal_H - r.cal_f_radial),
                              std::abs(r.cal_H - r.cal_f_xdy),
                              std::abs(r.cal_f_radial - r.cal_f_xdy)});
        }
        return worst;
    });

    // 4. Homomorphism: Cal(concat) = Cal(H) + Cal(K) via both formulas.
    check("homomorphism", 1e-3, [&] {
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < suite.size() || (suite.size() == 1 && i == 0); i += 2) {
            const TimeDepField& A = suite[i].field;
            const TimeDepField& B = suite[(i + 1) % suite.size()].field;
            const TimeDepField C = concatenate(A, B);
            worst = std::max(worst, std::abs(cal_from_hamiltonian(C, quad) -
                                             cal_from_hamiltonian(A, quad) -
                                             cal_from_hamiltonian(B, quad)));
            worst = std::max(worst,
                             std::abs(cal_from_potential(C, PrimitiveKind::radial, quad, integ) -
                                      cal_from_potential(A, PrimitiveKind::radial, quad, integ) -
                                      cal_from_potential(B, PrimitiveKind::radial, quad, integ)));
            if (suite.size() == 1) break;
        }
        return worst;
    });

    // 5. df = phi^* lambda - lambda at 100 probes per map (FD of the
    //    potential vs the pullback through the flow Jacobian).
    check("pullback_potential_gradient", 1e-4, [&] {
        std::mt19937 rng(202u);
        double worst = 0.0;
        const int probes = 100;
        for (const SuiteMember& m : suite) {
            FlowMap phi = realize_time_one(m.field, integ);
            std::vector<OneForm> lams;
            for (PrimitiveKind kind : kinds) lams.push_back(liouville_form(kind));
            for (int i = 0; i < probes; ++i) {
                const Vec x = random_point_in(m.field.support, rng);
                FlowState st = phi.forward_and_jacobian(x);
                // FD gradients of both potentials from paired evaluations.
                Vec xe = x;
                Mat dfdx(d, 2);
                for (int c = 0; c < d; ++c) {
                    const double h = fd_step(x[c]);
                    xe[c] = x[c] + h;
                    auto [frp, fxp] = pullback_potential_pair(m.field, xe, integ);
                    xe[c] = x[c] - h;
                    auto [frm, fxm] = pullback_potential_pair(m.field, xe, integ);
                    xe[c] = x[c];
                    dfdx(c, 0) = (frp - frm) / (2.0 * h);
                    dfdx(c, 1) = (fxp - fxm) / (2.0 * h);
                }
                for (std::size_t kidx = 0; kidx < kinds.size(); ++kidx) {
                    const OneForm& lam = lams[kidx];
                    const int col = kinds[kidx] == PrimitiveKind::radial ? 0 : 1;
                    const Vec pullback = st.jac.transpose() * lam(st.z) - lam(x);
                    worst = std::max(worst, (dfdx.col(col) - pullback).lpNorm<Eigen::Infinity>());
                }
            }
        }
        return worst;
    });

    // 6. dR = sigma at random chart points.
    check("chart_correction_gradient", 1e-6, [&] {
        std::mt19937 rng(303u);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        double worst = 0.0;
        for (PrimitiveKind kind : kinds) {
            const OneForm lam = liouville_form(kind);
            for (int s = 0; s < 40; ++s) {
                ChartPoint c;
                c.q = Vec(d);
                c.p = Vec(d);
                for (int i = 0; i < d; ++i) {
                    c.q[i] = U(rng);
                    c.p[i] = U(rng);
                }
                const Vec sigma = sigma_covector(lam, c);
                ChartPoint ce = c;
                for (int i = 0; i < 2 * d; ++i) {
                    double& coord = i < d ? ce.q[i] : ce.p[i - d];
                    const double base = coord;
                    const double h = fd_step(base);
                    coord = base + h;
                    const double Rp = chart_correction(lam, ce);
                    coord = base - h;
                    const double Rm = chart_correction(lam, ce);
                    coord = base;
                    worst = std::max(worst, std::abs((Rp - Rm) / (2.0 * h) - sigma[i]));
                }
            }
        }
        return worst;
    });

    // 7. Path independence of the sigma line integral (closedness).
    check("chart_correction_path_independence", 1e-8, [&] {
        std::mt19937 rng(404u);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        double worst = 0.0;
        for (PrimitiveKind kind : kinds) {
            const OneForm lam = liouville_form(kind);
            for (int s = 0; s < 20; ++s) {
                ChartPoint a, b, via;
                a.q = Vec(d);
                a.p = Vec::Zero(d);
                b.p = Vec(d);
                via.p = Vec(d);
                for (int i = 0; i < d; ++i) {
                    a.q[i] = U(rng);
                    b.p[i] = U(rng);
                    via.p[i] = U(rng);
                }
                b.q = a.q;
                via.q = a.q;
                const double straight = sigma_line_integral(lam, a, b, 32);
                const double dogleg = sigma_line_integral(lam, a, via, 32) +
                                      sigma_line_integral(lam, via, b, 32);
                worst = std::max(worst, std::abs(straight - dogleg));
            }
        }
        return worst;
    });

    // 8. dS = -theta_can along the graph at interior probes.
    check("phase_gradient", 1e-3, [&] {
        double worst = 0.0;
        for (const SuiteMember& m : suite) {
            FlowMap phi = realize_time_one(m.field, integ);
            Box inner = m.field.support;
            const Vec margin = 0.2 * (inner.hi - inner.lo);
            inner.lo += margin;
            inner.hi -= margin;
            for (PrimitiveKind kind : kinds) {
                PhaseContext ctx = make_phase_context(phi, kind);
                worst = std::max(worst, phase_gradient_residual(ctx, uniform_grid(inner, 3)));
            }
        }
        return worst;
    });

    // 9. Bridge identity (n+1) Cal = I_S - I_R.
    check("bridge_identity", 1e-3, [&] {
        double worst = 0.0;
        for (const SuiteMember& m : suite) {
            const double calH = cal_from_hamiltonian(m.field, quad);
            FlowMap phi = realize_time_one(m.field, integ);
            for (PrimitiveKind kind : kinds) {
                PhaseContext ctx = make_phase_context(phi, kind);
                const PhaseIntegrals pi = phase_integrals(ctx, quad);
                worst = std::max(worst, std::abs((n + 1.0) * calH -
                                                 (pi.integral_S - pi.integral_R)));
            }
        }
        return worst;
    });

    // 10. Section exactness alpha = -d(S o alpha) on a graphical map.
    check("section_exactness", 1e-3, [&] {
        const TimeDepField base = cfg.zero_fast_path ? zero_field() : graphical_base();
        const TimeDepField He = scale(base, 0.1);
        FlowMap phi = realize_time_one(He, integ);
        PhaseContext ctx = make_phase_context(phi, PrimitiveKind::radial);
        const BoundReport b = phase_bound_report(ctx, 12);
        if (!b.bound_ok) return 1.0; // bound failure surfaces as a residual of 1
        return b.section_exactness_residual;
    });

    report.passed = !failed;
    return report;
}

std::string VerifyReport::to_json() const {
    nlohmann::json j;
    j["passed"] = passed;
    j["checks"] = nlohmann::json::array();
    for (const CheckResult& c : checks) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["tolerance"] = c.tolerance;
        cj["measured"] = c.measured;
        cj["pass"] = c.pass;
        cj["skipped"] = c.skipped;
        j["checks"].push_back(cj);
    }
    return j.dump(2);
}

} // namespace calabi
