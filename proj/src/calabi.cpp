#include "calabi/calabi.hpp"

#include <cmath>

namespace calabi {

double volume_normalization(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

double cal_from_hamiltonian(const TimeDepField& H, const QuadratureConfig& q) {
    const int n = H.support.dim() / 2;
    if (H.autonomous) {
        // Time integral of a constant-in-t integrand is exact.
        const double spatial = integrate_box(
            [&](const Vec& x) { return H.value(0.0, x); }, H.support, q.rule,
            q.spatial_nodes_per_axis);
        return volume_normalization(n) * spatial;
    }
    const double st = integrate_time(
        [&](double t) {
            return integrate_box([&](const Vec& x) { return H.value(t, x); },
                                 H.support, q.rule, q.spatial_nodes_per_axis);
        },
        q.rule, q.time_nodes, H.time_kinks);
    return volume_normalization(n) * st;
}

namespace {

PathIntegrand action_integrand(const TimeDepField& H, OneForm lambda) {
    return [H, lambda](double t, const Vec& z) {
        static thread_local Vec g, X, c;
        H.grad_into(t, z, g);
        apply_omega(g, X);
        c.resize(z.size());
        lambda.eval_into(z, c);
        return c.dot(X) + H.value(t, z);
    };
}

} // namespace

double pullback_potential(const TimeDepField& H, PrimitiveKind kind,
                          const Vec& x, const IntegratorConfig& cfg) {
    std::vector<PathIntegrand> integrands{action_integrand(H, liouville_form(kind))};
    FlowState st = integrate_augmented(H, x, cfg, 1.0, false, integrands);
    return st.extras[0];
}

std::pair<double, double> pullback_potential_pair(const TimeDepField& H, const Vec& x,
                                                  const IntegratorConfig& cfg,
                                                  Vec* endpoint) {
    std::vector<PathIntegrand> integrands{
        action_integrand(H, liouville_form(PrimitiveKind::radial)),
        action_integrand(H, liouville_form(PrimitiveKind::xdy))};
    FlowState st = integrate_augmented(H, x, cfg, 1.0, false, integrands);
    if (endpoint != nullptr) *endpoint = st.z;
    return {st.extras[0], st.extras[1]};
}

double cal_from_potential(const TimeDepField& H, PrimitiveKind kind,
                          const QuadratureConfig& q, const IntegratorConfig& cfg) {
    const int n = H.support.dim() / 2;
    const double integral = integrate_box(
        [&](const Vec& x) { return pullback_potential(H, kind, x, cfg); },
        H.support, q.rule, q.spatial_nodes_per_axis);
    return volume_normalization(n) / (n + 1.0) * integral;
}

L1InfEstimate l1inf_norm(const TimeDepField& H, int time_nodes, int spatial_resolution) {
    L1InfEstimate est;
    est.time_nodes = time_nodes;
    est.spatial_resolution = spatial_resolution;
    const std::vector<Vec> grid = uniform_grid(H.support, spatial_resolution);
    auto spatial_max = [&](double t) {
        double m = 0.0;
        for (const Vec& x : grid) m = std::max(m, std::abs(H.value(t, x)));
        return m;
    };
    if (H.autonomous) {
        est.value = spatial_max(0.0);
        return est;
    }
    est.value = integrate_time(spatial_max, QuadratureRule::gauss_legendre,
                               time_nodes, H.time_kinks);
    return est;
}

CalabiReport make_calabi_report(const TimeDepField& H, const QuadratureConfig& q,
                                const IntegratorConfig& cfg) {
    CalabiReport r;
    r.quad = q;
    r.integrator = cfg;
    r.cal_H = cal_from_hamiltonian(H, q);

    const int n = H.support.dim() / 2;
    double sum_radial = 0.0, sum_xdy = 0.0;
    for_each_node(H.support, q.rule, q.spatial_nodes_per_axis,
                  [&](const Vec& x, double w) {
                      auto [fr, fx] = pullback_potential_pair(H, x, cfg);
                      sum_radial += w * fr;
                      sum_xdy += w * fx;
                  });
    const double scale = volume_normalization(n) / (n + 1.0);
    r.cal_f_radial = scale * sum_radial;
    r.cal_f_xdy = scale * sum_xdy;
    r.discrepancy = std::max(std::abs(r.cal_H - r.cal_f_radial),
                             std::abs(r.cal_H - r.cal_f_xdy));
    return r;
}

} // namespace calabi
