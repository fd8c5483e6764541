#include "calabi/flow.hpp"
#include "calabi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace calabi {

namespace {

// Partition [0, t_final] into ~cfg.steps uniform steps, forcing every
// interior time kink of H onto a step boundary.
std::vector<double> time_partition(const TimeDepField& H, double t_final, int steps) {
    std::vector<double> cuts{0.0};
    for (double k : H.time_kinks)
        if (k > 0.0 && k < t_final) cuts.push_back(k);
    cuts.push_back(t_final);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> grid{0.0};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        const int m = std::max(1, static_cast<int>(std::ceil(steps * len / std::max(t_final, 1e-300))));
        for (int j = 1; j <= m; ++j) grid.push_back(cuts[i] + len * j / m);
    }
    return grid;
}

// True when the trajectory from x0 is a rest point with trivial
// linearization, exactly. Covers the complement of the support box (fields
// vanish identically there) and, for autonomous fields, interior plateaus.
bool is_trivial_rest_point(const TimeDepField& H, const Vec& x0) {
    if (!H.support.contains(x0)) return true;
    if (!H.autonomous) return false;
    static thread_local Vec g;
    H.grad_into(0.0, x0, g);
    if (g.lpNorm<Eigen::Infinity>() != 0.0) return false;
    static thread_local Mat hess;
    fd_spatial_hessian(H, 0.0, x0, hess);
    return hess.lpNorm<Eigen::Infinity>() == 0.0;
}

struct Workspace {
    Vec grad, xmid, xpred, g, rhs;
    Mat hess, A, J;
    Eigen::PartialPivLU<Mat> lu;
};

// One implicit-midpoint step t -> t + h. On return z is advanced; if M is
// non-null it is advanced by the Cayley update; extras accumulate their
// integrands at the converged midpoint.
void midpoint_step(const TimeDepField& H, double t, double h, Vec& z, Mat* M,
                   Vec* extras, const std::vector<PathIntegrand>& integrands,
                   const IntegratorConfig& cfg, Workspace& ws) {
    const int d = static_cast<int>(z.size());
    const double tm = t + 0.5 * h;

    // Predictor: explicit Euler.
    H.grad_into(tm, z, ws.grad);
    apply_omega(ws.grad, ws.rhs);
    ws.xpred = z + h * ws.rhs;

    double res = std::numeric_limits<double>::infinity();
    bool converged = false;
    // Fixed-point sweeps first (no Hessian); Newton afterwards if needed.
    for (int iter = 0; iter < cfg.newton_max_iter; ++iter) {
        ws.xmid = 0.5 * (z + ws.xpred);
        H.grad_into(tm, ws.xmid, ws.grad);
        apply_omega(ws.grad, ws.rhs); // X at midpoint
        ws.g = ws.xpred - z - h * ws.rhs;
        res = ws.g.lpNorm<Eigen::Infinity>();
        if (res <= cfg.newton_tol) {
            converged = true;
            break;
        }
        if (iter < 6) {
            ws.xpred = z + h * ws.rhs;
        } else {
            fd_spatial_hessian(H, tm, ws.xmid, ws.hess);
            ws.A.resize(d, d);
            // A = Omega * hess, in block rows.
            const int n = d / 2;
            ws.A.topRows(n) = ws.hess.bottomRows(n);
            ws.A.bottomRows(n) = -ws.hess.topRows(n);
            ws.J = Mat::Identity(d, d) - 0.5 * h * ws.A;
            ws.lu.compute(ws.J);
            ws.xpred -= ws.lu.solve(ws.g);
        }
    }
    if (!converged)
        throw newton_error("implicit midpoint: Newton failed to converge (residual " +
                               std::to_string(res) + ")",
                           res);

    ws.xmid = 0.5 * (z + ws.xpred);
    if (M != nullptr) {
        fd_spatial_hessian(H, tm, ws.xmid, ws.hess);
        const int n = d / 2;
        ws.A.resize(d, d);
        ws.A.topRows(n) = ws.hess.bottomRows(n);
        ws.A.bottomRows(n) = -ws.hess.topRows(n);
        ws.J = Mat::Identity(d, d) - 0.5 * h * ws.A;
        ws.lu.compute(ws.J);
        *M = ws.lu.solve((Mat::Identity(d, d) + 0.5 * h * ws.A) * (*M)).eval();
    }
    if (extras != nullptr)
        for (std::size_t j = 0; j < integrands.size(); ++j)
            (*extras)[static_cast<int>(j)] += h * integrands[j](tm, ws.xmid);
    z = ws.xpred;
}

// Classic RK4 on the joint system (z, M, extras).
void rk4_step(const TimeDepField& H, double t, double h, Vec& z, Mat* M,
              Vec* extras, const std::vector<PathIntegrand>& integrands,
              Workspace& ws) {
    const int d = static_cast<int>(z.size());
    const int n = d / 2;
    const int ne = extras ? static_cast<int>(integrands.size()) : 0;

    auto eval_rhs = [&](double tt, const Vec& zz, const Mat* MM, Vec& dz, Mat& dM, Vec& de) {
        H.grad_into(tt, zz, ws.grad);
        apply_omega(ws.grad, dz);
        if (MM != nullptr) {
            fd_spatial_hessian(H, tt, zz, ws.hess);
            ws.A.resize(d, d);
            ws.A.topRows(n) = ws.hess.bottomRows(n);
            ws.A.bottomRows(n) = -ws.hess.topRows(n);
            dM = ws.A * (*MM);
        }
        for (int j = 0; j < ne; ++j) de[j] = integrands[static_cast<std::size_t>(j)](tt, zz);
    };

    Vec k1z(d), k2z(d), k3z(d), k4z(d), zt(d);
    Mat k1M, k2M, k3M, k4M, Mt;
    Vec k1e(ne), k2e(ne), k3e(ne), k4e(ne);

    eval_rhs(t, z, M, k1z, k1M, k1e);
    zt = z + 0.5 * h * k1z;
    if (M) Mt = *M + 0.5 * h * k1M;
    eval_rhs(t + 0.5 * h, zt, M ? &Mt : nullptr, k2z, k2M, k2e);
    zt = z + 0.5 * h * k2z;
    if (M) Mt = *M + 0.5 * h * k2M;
    eval_rhs(t + 0.5 * h, zt, M ? &Mt : nullptr, k3z, k3M, k3e);
    zt = z + h * k3z;
    if (M) Mt = *M + h * k3M;
    eval_rhs(t + h, zt, M ? &Mt : nullptr, k4z, k4M, k4e);

    z += (h / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    if (M) *M += (h / 6.0) * (k1M + 2.0 * k2M + 2.0 * k3M + k4M);
    if (extras)
        for (int j = 0; j < ne; ++j)
            (*extras)[j] += (h / 6.0) * (k1e[j] + 2.0 * k2e[j] + 2.0 * k3e[j] + k4e[j]);
}

} // namespace

FlowState integrate_augmented(const TimeDepField& H, const Vec& x0,
                              const IntegratorConfig& cfg, double t_final,
                              bool with_jacobian,
                              const std::vector<PathIntegrand>& integrands,
                              const StepObserver& observer) {
    if (t_final < 0.0 || t_final > 1.0)
        throw std::invalid_argument("integrate_augmented: t_final must lie in [0,1]");
    if (cfg.steps < 1)
        throw std::invalid_argument("integrate_augmented: steps must be >= 1");

    const int d = static_cast<int>(x0.size());
    FlowState st;
    st.z = x0;
    if (with_jacobian) st.jac = Mat::Identity(d, d);
    st.extras = Vec::Zero(static_cast<int>(integrands.size()));

    if (t_final == 0.0) return st;

    if (is_trivial_rest_point(H, x0)) {
        // Constant trajectory: path integrals reduce to 1-D time quadrature.
        std::vector<double> kinks;
        for (double k : H.time_kinks)
            if (k < t_final) kinks.push_back(k / t_final);
        for (std::size_t j = 0; j < integrands.size(); ++j) {
            const auto& f = integrands[j];
            st.extras[static_cast<int>(j)] =
                t_final * integrate_time(
                              [&](double s) { return f(s * t_final, x0); },
                              QuadratureRule::gauss_legendre, 24, kinks);
        }
        return st;
    }

    Workspace ws;
    std::vector<double> grid = time_partition(H, t_final, cfg.steps);
    Mat* M = with_jacobian ? &st.jac : nullptr;
    Vec* extras = integrands.empty() ? nullptr : &st.extras;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double t = grid[i], h = grid[i + 1] - grid[i];
        if (cfg.scheme == Scheme::implicit_midpoint)
            midpoint_step(H, t, h, st.z, M, extras, integrands, cfg, ws);
        else
            rk4_step(H, t, h, st.z, M, extras, integrands, ws);
        if (observer) observer(grid[i + 1], st.z);
    }
    return st;
}

Point integrate_flow(const TimeDepField& H, const Vec& x0,
                     const IntegratorConfig& cfg, double t_final) {
    return integrate_augmented(H, x0, cfg, t_final, false).z;
}

Point FlowMap::forward(const Vec& x) const {
    return integrate_augmented(*hamiltonian, x, config, t_final, false).z;
}

Mat FlowMap::jacobian(const Vec& x) const {
    return integrate_augmented(*hamiltonian, x, config, t_final, true).jac;
}

FlowState FlowMap::forward_and_jacobian(const Vec& x) const {
    return integrate_augmented(*hamiltonian, x, config, t_final, true);
}

FlowMap realize(const TimeDepField& H, const IntegratorConfig& cfg, double t_final) {
    FlowMap phi;
    phi.hamiltonian = std::make_shared<TimeDepField>(H);
    phi.config = cfg;
    phi.t_final = t_final;
    phi.support = H.support;
    return phi;
}

FlowMap realize_time_one(const TimeDepField& H, const IntegratorConfig& cfg) {
    return realize(H, cfg, 1.0);
}

C0Estimate c0_distance_to_identity(const FlowMap& phi, int resolution) {
    if (resolution < 2)
        throw std::invalid_argument("c0_distance_to_identity: resolution must be >= 2");
    C0Estimate est;
    est.resolution = resolution;
    est.spacing = grid_spacing(phi.support, resolution);
    for (const Vec& x : uniform_grid(phi.support, resolution)) {
        const double disp = (phi.forward(x) - x).norm();
        est.value = std::max(est.value, disp);
    }
    return est;
}

TimeDepField concatenate(const TimeDepField& H, const TimeDepField& K, bool smooth) {
    TimeDepField c;
    c.support = Box::hull(H.support, K.support);
    c.autonomous = false;

    if (!smooth) {
        c.value = [H, K](double t, const Vec& x) {
            return t < 0.5 ? 2.0 * K.value(2.0 * t, x) : 2.0 * H.value(2.0 * t - 1.0, x);
        };
        c.gradient = [H, K](double t, const Vec& x, Vec& g) {
            if (t < 0.5) {
                K.grad_into(2.0 * t, x, g);
            } else {
                H.grad_into(2.0 * t - 1.0, x, g);
            }
            g *= 2.0;
        };
    } else {
        // psi(u) = u - sin(2 pi u)/(2 pi) fixes 0 and 1 with all derivatives
        // of psi' vanishing at the ends, so the concatenation is smooth in t.
        auto psi = [](double u) { return u - std::sin(2.0 * M_PI * u) / (2.0 * M_PI); };
        auto dpsi = [](double u) { return 1.0 - std::cos(2.0 * M_PI * u); };
        c.value = [H, K, psi, dpsi](double t, const Vec& x) {
            if (t < 0.5) {
                const double u = 2.0 * t;
                return 2.0 * dpsi(u) * K.value(psi(u), x);
            }
            const double u = 2.0 * t - 1.0;
            return 2.0 * dpsi(u) * H.value(psi(u), x);
        };
        c.gradient = [H, K, psi, dpsi](double t, const Vec& x, Vec& g) {
            if (t < 0.5) {
                const double u = 2.0 * t;
                K.grad_into(psi(u), x, g);
                g *= 2.0 * dpsi(u);
            } else {
                const double u = 2.0 * t - 1.0;
                H.grad_into(psi(u), x, g);
                g *= 2.0 * dpsi(u);
            }
        };
    }

    c.time_kinks.push_back(0.5);
    for (double k : K.time_kinks) c.time_kinks.push_back(0.5 * k);
    for (double k : H.time_kinks) c.time_kinks.push_back(0.5 + 0.5 * k);
    std::sort(c.time_kinks.begin(), c.time_kinks.end());
    return c;
}

} // namespace calabi
