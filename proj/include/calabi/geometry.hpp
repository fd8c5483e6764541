#ifndef CALABI_GEOMETRY_HPP
#define CALABI_GEOMETRY_HPP

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

// Fixed-dimension symplectic linear algebra on R^{2n}, primitive one-forms,
// Hamiltonian vector fields, and smooth compactly supported field builders.
//
// Conventions (used everywhere downstream):
//   * coordinates are ordered (x_1,...,x_n, y_1,...,y_n);
//   * the symplectic form is omega(u,v) = sum_i (u_{x_i} v_{y_i} - u_{y_i} v_{x_i}),
//     i.e. the matrix Omega = [[0, I], [-I, 0]] acting as u^T Omega v;
//   * the Hamiltonian vector field satisfies omega(X_H, .) = dH, which in
//     coordinates reads X_H = Omega * grad H  (for n = 1: X = (H_y, -H_x)).

namespace calabi {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Points of R^{2n}, tangent vectors and covectors all live in coordinates as
// length-2n arrays; the aliases keep signatures readable.
using Point = Vec;
using Vector = Vec;
using Covector = Vec;

// The matrix of the standard symplectic form in block form [[0, I], [-I, 0]].
Mat omega_matrix(int n);

// omega(u, v) = sum_i (u_{x_i} v_{y_i} - u_{y_i} v_{x_i}).
// Throws std::invalid_argument on dimension mismatch or odd length.
double omega_pairing(const Vec& u, const Vec& v);

// w = Omega * u, i.e. (u_x, u_y) -> (u_y, -u_x). No allocation.
void apply_omega(const Vec& u, Vec& out);
Vec apply_omega(const Vec& u);

// Axis-aligned box in R^{2n}.
struct Box {
    Vec lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }
    double volume() const;
    double diameter() const { return (hi - lo).norm(); }
    bool contains(const Vec& x, double margin = 0.0) const;
    Vec center() const { return 0.5 * (lo + hi); }
    // Bounding box of two boxes.
    static Box hull(const Box& a, const Box& b);
};

// Uniform grid over a box, res points per axis including the endpoints
// (res >= 2). Nested under res -> 2*res - 1. Points enumerated in
// lexicographic order, so reductions over the grid are deterministic.
std::vector<Vec> uniform_grid(const Box& box, int res);
// Largest per-axis spacing of that grid.
double grid_spacing(const Box& box, int res);

enum class PrimitiveKind { radial, xdy, custom };

// A one-form on R^{2n}: covector-valued evaluator. Houses the primitive
// lambda (with d lambda = omega for the built-ins) and test fixtures.
struct OneForm {
    PrimitiveKind kind = PrimitiveKind::custom;
    std::function<void(const Vec&, Vec&)> eval_into;

    Covector operator()(const Vec& z) const {
        Vec c(z.size());
        eval_into(z, c);
        return c;
    }
};

// Built-in primitives of omega:
//   radial: lambda = 1/2 sum (x_i dy_i - y_i dx_i), coefficients -1/2 Omega z;
//   xdy:    lambda = sum x_i dy_i, coefficients (0, x).
OneForm liouville_form(PrimitiveKind kind);
// Covector of the chosen primitive at p.
Covector liouville(PrimitiveKind kind, const Vec& p);

// Smooth compactly supported scalar field with analytic gradient where
// available. value must be exactly zero outside the support box.
struct ScalarField {
    std::function<double(const Vec&)> value;
    std::function<void(const Vec&, Vec&)> gradient; // analytic; FD fallback if unset
    Box support;

    double operator()(const Vec& x) const { return value(x); }
    void grad_into(const Vec& x, Vec& g) const;
    Covector grad(const Vec& x) const;
};

// Time-dependent field on [0,1] x R^{2n}; vanishes outside [0,1] x support.
// time_kinks lists interior times where t-smoothness fails (concatenations);
// integrators and time quadratures split there.
struct TimeDepField {
    std::function<double(double, const Vec&)> value;
    std::function<void(double, const Vec&, Vec&)> gradient; // spatial gradient
    Box support;
    bool autonomous = false;
    std::vector<double> time_kinks;

    double operator()(double t, const Vec& x) const { return value(t, x); }
    void grad_into(double t, const Vec& x, Vec& g) const;
};

// Lift a static field to [0,1] (autonomous Hamiltonian).
TimeDepField autonomous(const ScalarField& f);
// f modulated by a smooth factor m(t); mdot unused but kept for provenance.
TimeDepField modulated(const ScalarField& f, std::function<double(double)> m);
// Pointwise scaling and sums (supports merged into the hull).
TimeDepField scale(const TimeDepField& h, double a);
ScalarField scale(const ScalarField& f, double a);
ScalarField add(const ScalarField& f, const ScalarField& g);

// X_H(t, .) at p: the unique X with omega(X, .) = d(H(t, .)); equals
// Omega * grad H. Zero outside the support box.
Vector hamiltonian_vector_field(const TimeDepField& H, double t, const Vec& p);
void hamiltonian_vector_field_into(const TimeDepField& H, double t, const Vec& p, Vec& X);

// ---- finite differences -------------------------------------------------

// Central-difference step: 1e-5 scaled by coordinate magnitude.
double fd_step(double coord);

// Central-difference gradient of a scalar function.
void fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, Vec& g);

// Symmetrized central-difference Hessian of H(t, .) built from its analytic
// spatial gradient. Used for the variational equations, where symmetry is
// what makes the midpoint Jacobian update exactly symplectic.
void fd_spatial_hessian(const TimeDepField& H, double t, const Vec& x, Mat& hess);

// Finite-difference exterior derivative of a one-form at z: the matrix
// A_ij = d_i a_j - d_j a_i, so that (d lambda)(u, v) = u^T A v.
Mat fd_exterior_derivative(const OneForm& form, const Vec& z);

// ---- bumps ---------------------------------------------------------------

// Thrown when the requested plateau fraction cannot be realized with the
// configured minimum transition width.
struct bump_infeasible : std::invalid_argument {
    double max_feasible_rho;
    bump_infeasible(const std::string& msg, double feasible)
        : std::invalid_argument(msg), max_feasible_rho(feasible) {}
};

// C-infinity transition s: R -> [0,1], s == 0 for u <= 0, s == 1 for u >= 1,
// built from exp(-1/u). s_prime is its derivative.
double smooth_step(double u);
double smooth_step_prime(double u);

// Smooth plateau bump: 0 <= F <= height, F == height on a centered sub-box
// of volume exactly rho * vol(box), F == 0 outside the box. The transition
// width per axis is w_j = L_j (1 - rho^(1/2n)) / 2; requesting a width below
// min_width throws bump_infeasible with the achievable maximum rho.
ScalarField plateau_bump(const Box& box, double rho, double height,
                         double min_width = 1e-4);

// Largest plateau fraction achievable on box with the given minimum width.
double max_feasible_rho(const Box& box, double min_width = 1e-4);

} // namespace calabi

#endif // CALABI_GEOMETRY_HPP
