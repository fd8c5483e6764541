#ifndef CALABI_CHART_HPP
#define CALABI_CHART_HPP

#include "calabi/flow.hpp"

namespace calabi {

// A point (q, p) of T*Delta under the fixed linear chart
//   q = (X + Y)/2,   p = Jbar (X - Y),   Jbar = Omega = [[0, I], [-I, 0]].
// This linear map pulls the cotangent form -d theta_can back to
// omega oplus (-omega) on M x M, restricts to the zero-section inclusion on
// the diagonal, and is an isometry in p (so |p| = |phi(x) - x| on graphs).
struct ChartPoint {
    Vec q;
    Vec p;
};

ChartPoint chart_to_cotangent(const Vec& X, const Vec& Y);
std::pair<Vec, Vec> chart_from_cotangent(const ChartPoint& c);

// Max over random probes of || DPsi^T Omega_target DPsi - Omega_source ||_max
// with finite-difference DPsi. For the correct linear chart this is pure
// roundoff; a sign-flipped jbar (test fixture) drives it to order one.
// jbar defaults to the correct block matrix for half-dimension n.
double chart_symplecticity_residual(int n, const Mat* jbar = nullptr, int probes = 32);

// Psi(phi(x), x): parameterizes L_phi = Psi(Gamma_phi) by x.
ChartPoint graph_point(const FlowMap& phi, const Vec& x);

struct GraphicalityReport {
    bool is_graphical = false;
    double min_abs_det = 0.0;    // min over probes of |det((Dphi + I)/2)|
    double min_det = 0.0;        // signed min, diagnostic for fold location
    int injectivity_collisions = 0;
    int resolution = 0;
    double det_threshold = 1e-6;
};

// Probes det((Dphi + I)/2) on a uniform grid over the support box and tests
// injectivity of the midpoint map x -> (phi(x) + x)/2 by spatial hashing of
// its images. is_graphical requires min_abs_det above the threshold and no
// collisions at the probed resolution.
GraphicalityReport graphicality_report(const FlowMap& phi, int resolution);

struct NewtonConfig {
    double tol = 1e-10;
    int max_iter = 50;
};

// The section one-form alpha with L_phi = image(alpha): Newton-solves
// (phi(x) + x)/2 = q for x (Jacobian (Dphi + I)/2, damped step if the
// residual grows), then returns Jbar (phi(x) - x). Throws newton_error on
// non-convergence, which signals near-non-graphicality. If preimage is
// non-null the solved x is written there.
Covector section_covector(const FlowMap& phi, const Vec& q,
                          const NewtonConfig& cfg = {}, Vec* preimage = nullptr);

// alpha as a reusable object over its domain (the support box of phi).
struct SectionForm {
    FlowMap phi;
    NewtonConfig newton;
    Box domain;

    Covector operator()(const Vec& q) const { return section_covector(phi, q, newton); }
};

SectionForm make_section(const FlowMap& phi, const NewtonConfig& cfg = {});

} // namespace calabi

#endif // CALABI_CHART_HPP
