#ifndef CALABI_FLOW_HPP
#define CALABI_FLOW_HPP

#include "calabi/geometry.hpp"

#include <memory>

namespace calabi {

enum class Scheme { implicit_midpoint, rk4 };

struct IntegratorConfig {
    Scheme scheme = Scheme::implicit_midpoint;
    int steps = 200;            // uniform in t over the integration interval
    double newton_tol = 1e-12;
    int newton_max_iter = 25;
};

// Thrown when the implicit-midpoint Newton iteration fails to converge;
// carries the last residual norm.
struct newton_error : std::runtime_error {
    double residual;
    newton_error(const std::string& msg, double res)
        : std::runtime_error(msg), residual(res) {}
};

// Scalar integrand accumulated along the trajectory (one extra quadrature
// coordinate of the augmented ODE): da/dt = integrand(t, z(t)).
using PathIntegrand = std::function<double(double, const Vec&)>;

// Called at every accepted step endpoint (t, z(t)); used by experiment
// runners to monitor trajectories (e.g. subcube containment).
using StepObserver = std::function<void(double, const Vec&)>;

struct FlowState {
    Vec z;      // trajectory endpoint
    Mat jac;    // d z(t_final) / d x0, when requested
    Vec extras; // accumulated path integrals, one per integrand
};

// Core engine: integrates dz/dt = X_H(t, z) from x0 over [0, t_final],
// optionally carrying the variational equations dM/dt = DX_H(t, z) M (so the
// returned jac is the flow Jacobian) and any number of path integrands.
//
// The implicit-midpoint update for M is the Cayley-type solve
//   (I - h/2 A) M+ = (I + h/2 A) M,   A = Omega * Hess H at the midpoint,
// which is exactly symplectic for symmetric Hess regardless of step size.
//
// Equilibrium fast paths (exact, not approximations): points outside the
// support box never move, and for autonomous H a point with vanishing
// gradient and Hessian is a rest point with trivial linearization. Path
// integrands are still accumulated by time quadrature along the constant
// trajectory.
FlowState integrate_augmented(const TimeDepField& H, const Vec& x0,
                              const IntegratorConfig& cfg, double t_final,
                              bool with_jacobian,
                              const std::vector<PathIntegrand>& integrands = {},
                              const StepObserver& observer = nullptr);

// phi_H^{t_final}(x0).
Point integrate_flow(const TimeDepField& H, const Vec& x0,
                     const IntegratorConfig& cfg, double t_final);

// A realized diffeomorphism: forward map, Jacobian by variational equations,
// support box, and the provenance it was built from.
struct FlowMap {
    std::shared_ptr<const TimeDepField> hamiltonian;
    IntegratorConfig config;
    double t_final = 1.0;
    Box support;

    Point forward(const Vec& x) const;
    Mat jacobian(const Vec& x) const;
    FlowState forward_and_jacobian(const Vec& x) const;
};

// Time-one map of H.
FlowMap realize_time_one(const TimeDepField& H, const IntegratorConfig& cfg);
FlowMap realize(const TimeDepField& H, const IntegratorConfig& cfg, double t_final);

// Grid under-estimate of sup |phi(x) - x| over the support box, with the
// grid spacing attached. resolution = points per axis (>= 2), endpoints
// included, so refining res -> 2 res - 1 yields a nested grid.
struct C0Estimate {
    double value = 0.0;
    double spacing = 0.0;
    int resolution = 0;
};

C0Estimate c0_distance_to_identity(const FlowMap& phi, int resolution);

// Time-concatenation running K on [0,1/2] at double speed, then H on
// [1/2,1]: the time-one map is phi_H^1 o phi_K^1 and the time integral adds
// exactly, so the Calabi invariant is additive on the nose. The default
// variant has a t-kink at 1/2 (recorded in time_kinks); smooth = true
// applies the reparametrization t -> t - sin(2 pi t)/(2 pi) on each half so
// the concatenation is C-infinity in t.
TimeDepField concatenate(const TimeDepField& H, const TimeDepField& K,
                         bool smooth = false);

} // namespace calabi

#endif // CALABI_FLOW_HPP
