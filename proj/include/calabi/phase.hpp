#ifndef CALABI_PHASE_HPP
#define CALABI_PHASE_HPP

#include "calabi/calabi.hpp"
#include "calabi/chart.hpp"

namespace calabi {

// The closed one-form sigma = -theta_can - (Psi^{-1})^* Lambda on T*Delta,
// whose primitive vanishing on the zero section is the chart correction R.
// Returned as a length-4n coefficient vector against (dq, dp).
Vec sigma_covector(const OneForm& primitive, const ChartPoint& c);

// Line integral of sigma along the straight segment a -> b (Gauss-Legendre
// with the given node count). sigma is closed, so polyline integrals from
// the zero section are path-independent; tests exercise this.
double sigma_line_integral(const OneForm& primitive, const ChartPoint& a,
                           const ChartPoint& b, int nodes);

// R(q, p): integral of sigma along the fiber segment s -> (q, s p). Vanishes
// on the zero section and satisfies dR = sigma; together these make
//   -theta_can = (Psi^{-1})^* Lambda + dR
// constructive (the chart domain is fiberwise star-shaped about the zero
// section, so the fiber contraction applies).
double chart_correction(const OneForm& primitive, const ChartPoint& c, int nodes = 16);

// Everything needed to evaluate the generalized phase function of L_phi,
//   S(x) = R(graph_point(phi, x)) + f_{lambda,phi}(x),
// which is compactly supported and satisfies dS = -theta_can restricted to
// the graph. Evaluation bundles phi(x) and f(x) into one augmented flow.
struct PhaseContext {
    FlowMap phi;
    PrimitiveKind kind = PrimitiveKind::radial;
    int path_nodes = 16;

    double phase(const Vec& x) const;            // S at graph_point(phi, x)
    double correction(const ChartPoint& c) const; // R
    double potential(const Vec& x) const;         // f
    // phase and the graph point from a single trajectory integration
    double phase_and_graph(const Vec& x, ChartPoint* graph) const;
};

PhaseContext make_phase_context(const FlowMap& phi, PrimitiveKind kind,
                                int path_nodes = 16);

// Max over probes and coordinate directions of the defect
//   | FD_v[S](x) + < p(x), (Dphi(x) + I)/2 v > |,
// i.e. how well dS matches -theta_can along the x-parameterization of the
// graph.
double phase_gradient_residual(const PhaseContext& ctx, const std::vector<Vec>& probes);

// Quadratures over the support box of S(graph_point(phi, .)) and
// R(graph_point(phi, .)) against (d lambda)^n. By construction
// (n+1) Cal(phi) = I_S - I_R; the bridge residual is checked downstream.
struct PhaseIntegrals {
    double integral_S = 0.0;
    double integral_R = 0.0;
};

PhaseIntegrals phase_integrals(const PhaseContext& ctx, const QuadratureConfig& q);

// The graphical-case bound max |S| <= (A + 1) max |alpha| with A the
// Euclidean diameter of the support box, plus the exactness check
// alpha = -d(S o alpha) by finite differences at interior probes.
struct BoundReport {
    double sup_S = 0.0;
    double sup_alpha = 0.0;
    double diameter_A = 0.0;
    bool bound_ok = false;
    double slack = 0.0;
    double section_exactness_residual = 0.0; // max FD defect of alpha + d(S o alpha)
    int resolution = 0;
};

// Throws std::logic_error if phi is not graphical at the probed resolution.
BoundReport phase_bound_report(const PhaseContext& ctx, int resolution,
                               const NewtonConfig& newton = {},
                               int exactness_probes = 4);

} // namespace calabi

#endif // CALABI_PHASE_HPP
