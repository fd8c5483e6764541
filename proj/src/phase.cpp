#include "calabi/phase.hpp"

#include <cmath>

namespace calabi {

Vec sigma_covector(const OneForm& primitive, const ChartPoint& c) {
    // <sigma(q,p), (qdot, pdot)> =
    //   -p . qdot - lambda(X) . (qdot - Omega pdot / 2)
    //             + lambda(Y) . (qdot + Omega pdot / 2)
    // with (X, Y) = Psi^{-1}(q, p). Coefficients against qdot_i come from the
    // dotted terms; against pdot_i from the Omega-halves (Omega^T = -Omega).
    const int d = static_cast<int>(c.q.size());
    auto [X, Y] = chart_from_cotangent(c);
    const Vec lamX = primitive(X);
    const Vec lamY = primitive(Y);

    Vec out(2 * d);
    out.head(d) = -c.p - lamX + lamY;
    // pdot coefficient: (lamX + lamY)/2 . Omega pdot = -(Omega (lamX+lamY)/2) . pdot
    out.tail(d) = -apply_omega(0.5 * (lamX + lamY));
    return out;
}

double sigma_line_integral(const OneForm& primitive, const ChartPoint& a,
                           const ChartPoint& b, int nodes) {
    const Vec dq = b.q - a.q;
    const Vec dp = b.p - a.p;
    Rule1D rule = rule_1d(QuadratureRule::gauss_legendre, nodes, 0.0, 1.0);
    double s = 0.0;
    ChartPoint c;
    for (int i = 0; i < nodes; ++i) {
        const double t = rule.nodes[i];
        c.q = a.q + t * dq;
        c.p = a.p + t * dp;
        const Vec sig = sigma_covector(primitive, c);
        const int d = static_cast<int>(c.q.size());
        s += rule.weights[i] * (sig.head(d).dot(dq) + sig.tail(d).dot(dp));
    }
    return s;
}

double chart_correction(const OneForm& primitive, const ChartPoint& c, int nodes) {
    ChartPoint base{c.q, Vec::Zero(c.p.size())};
    return sigma_line_integral(primitive, base, c, nodes);
}

double PhaseContext::correction(const ChartPoint& c) const {
    return chart_correction(liouville_form(kind), c, path_nodes);
}

double PhaseContext::potential(const Vec& x) const {
    return pullback_potential(*phi.hamiltonian, kind, x, phi.config);
}

double PhaseContext::phase_and_graph(const Vec& x, ChartPoint* graph) const {
    // One augmented integration gives phi(x) and f(x) together.
    std::vector<PathIntegrand> integrands;
    const TimeDepField& H = *phi.hamiltonian;
    OneForm lambda = liouville_form(kind);
    integrands.push_back([&H, lambda](double t, const Vec& z) {
        static thread_local Vec g, X, c;
        H.grad_into(t, z, g);
        apply_omega(g, X);
        c.resize(z.size());
        lambda.eval_into(z, c);
        return c.dot(X) + H.value(t, z);
    });
    FlowState st = integrate_augmented(H, x, phi.config, phi.t_final, false, integrands);
    ChartPoint gp = chart_to_cotangent(st.z, x);
    const double S = correction(gp) + st.extras[0];
    if (graph != nullptr) *graph = gp;
    return S;
}

double PhaseContext::phase(const Vec& x) const { return phase_and_graph(x, nullptr); }

PhaseContext make_phase_context(const FlowMap& phi, PrimitiveKind kind, int path_nodes) {
    return PhaseContext{phi, kind, path_nodes};
}

double phase_gradient_residual(const PhaseContext& ctx, const std::vector<Vec>& probes) {
    double worst = 0.0;
    for (const Vec& x : probes) {
        const int d = static_cast<int>(x.size());
        FlowState st = ctx.phi.forward_and_jacobian(x);
        const Vec p = apply_omega(st.z - x);
        const Mat dq = 0.5 * (st.jac + Mat::Identity(d, d));
        Vec xe = x;
        for (int i = 0; i < d; ++i) {
            const double h = fd_step(x[i]);
            xe[i] = x[i] + h;
            const double Sp = ctx.phase(xe);
            xe[i] = x[i] - h;
            const double Sm = ctx.phase(xe);
            xe[i] = x[i];
            const double dS = (Sp - Sm) / (2.0 * h);
            // pullback of theta_can through x -> graph_point(phi, x) in
            // direction e_i is <p(x), dq(x) e_i>.
            worst = std::max(worst, std::abs(dS + p.dot(dq.col(i))));
        }
    }
    return worst;
}

PhaseIntegrals phase_integrals(const PhaseContext& ctx, const QuadratureConfig& q) {
    PhaseIntegrals out;
    const Box& box = ctx.phi.support;
    const int n = box.dim() / 2;
    const double norm = volume_normalization(n);
    double sum_S = 0.0, sum_R = 0.0;
    ChartPoint gp;
    for_each_node(box, q.rule, q.spatial_nodes_per_axis, [&](const Vec& x, double w) {
        const double S = ctx.phase_and_graph(x, &gp);
        const double R = ctx.correction(gp);
        sum_S += w * S;
        sum_R += w * R;
    });
    out.integral_S = norm * sum_S;
    out.integral_R = norm * sum_R;
    return out;
}

BoundReport phase_bound_report(const PhaseContext& ctx, int resolution,
                               const NewtonConfig& newton, int exactness_probes) {
    GraphicalityReport graph = graphicality_report(ctx.phi, resolution);
    if (!graph.is_graphical)
        throw std::logic_error(
            "phase_bound_report: map is not graphical at the probed resolution "
            "(min |det| = " + std::to_string(graph.min_abs_det) +
            ", collisions = " + std::to_string(graph.injectivity_collisions) + ")");

    BoundReport rep;
    rep.resolution = resolution;
    rep.diameter_A = ctx.phi.support.diameter();

    for (const Vec& x : uniform_grid(ctx.phi.support, resolution))
        rep.sup_S = std::max(rep.sup_S, std::abs(ctx.phase(x)));
    for (const Vec& q : uniform_grid(ctx.phi.support, resolution))
        rep.sup_alpha = std::max(rep.sup_alpha,
                                 section_covector(ctx.phi, q, newton).norm());

    rep.slack = 1e-6 + grid_spacing(ctx.phi.support, resolution) * 1e-3;
    rep.bound_ok = rep.sup_S <= (rep.diameter_A + 1.0) * rep.sup_alpha + rep.slack;

    // alpha = -d(S o alpha) at interior probes: T(q) = S(x(q)) with x(q) the
    // Newton preimage; compare the FD gradient of T against -alpha(q).
    auto T = [&](const Vec& q) {
        Vec x;
        section_covector(ctx.phi, q, newton, &x);
        return ctx.phase(x);
    };
    Box inner = ctx.phi.support;
    const Vec margin = 0.05 * (inner.hi - inner.lo);
    inner.lo += margin;
    inner.hi -= margin;
    double worst = 0.0;
    for (const Vec& q : uniform_grid(inner, exactness_probes)) {
        const Vec alpha = section_covector(ctx.phi, q, newton);
        Vec qe = q;
        for (int i = 0; i < q.size(); ++i) {
            const double h = 10.0 * fd_step(q[i]);
            qe[i] = q[i] + h;
            const double Tp = T(qe);
            qe[i] = q[i] - h;
            const double Tm = T(qe);
            qe[i] = q[i];
            worst = std::max(worst, std::abs((Tp - Tm) / (2.0 * h) + alpha[i]));
        }
    }
    rep.section_exactness_residual = worst;
    return rep;
}

} // namespace calabi
