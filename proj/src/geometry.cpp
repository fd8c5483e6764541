#include "calabi/geometry.hpp"

#include <cmath>

namespace calabi {

Mat omega_matrix(int n) {
    Mat omega = Mat::Zero(2 * n, 2 * n);
    omega.block(0, n, n, n) = Mat::Identity(n, n);
    omega.block(n, 0, n, n) = -Mat::Identity(n, n);
    return omega;
}

double omega_pairing(const Vec& u, const Vec& v) {
    if (u.size() != v.size())
        throw std::invalid_argument("omega_pairing: dimension mismatch");
    if (u.size() % 2 != 0 || u.size() == 0)
        throw std::invalid_argument("omega_pairing: length must be even and positive");
    const int n = static_cast<int>(u.size()) / 2;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        s += u[i] * v[n + i] - u[n + i] * v[i];
    return s;
}

void apply_omega(const Vec& u, Vec& out) {
    const int n = static_cast<int>(u.size()) / 2;
    out.resize(u.size());
    for (int i = 0; i < n; ++i) {
        out[i] = u[n + i];
        out[n + i] = -u[i];
    }
}

Vec apply_omega(const Vec& u) {
    Vec out(u.size());
    apply_omega(u, out);
    return out;
}

double Box::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
    return v;
}

bool Box::contains(const Vec& x, double margin) const {
    for (int i = 0; i < dim(); ++i)
        if (x[i] < lo[i] - margin || x[i] > hi[i] + margin) return false;
    return true;
}

Box Box::hull(const Box& a, const Box& b) {
    return Box{a.lo.cwiseMin(b.lo), a.hi.cwiseMax(b.hi)};
}

std::vector<Vec> uniform_grid(const Box& box, int res) {
    if (res < 2) throw std::invalid_argument("uniform_grid: res must be >= 2");
    const int d = box.dim();
    std::vector<Vec> pts;
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(res);
    pts.reserve(total);
    std::vector<int> idx(d, 0);
    Vec x(d);
    for (std::size_t k = 0; k < total; ++k) {
        for (int i = 0; i < d; ++i)
            x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * idx[i] / (res - 1);
        pts.push_back(x);
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[i] < res) break;
            idx[i] = 0;
        }
    }
    return pts;
}

double grid_spacing(const Box& box, int res) {
    double h = 0.0;
    for (int i = 0; i < box.dim(); ++i)
        h = std::max(h, (box.hi[i] - box.lo[i]) / (res - 1));
    return h;
}

OneForm liouville_form(PrimitiveKind kind) {
    OneForm form;
    form.kind = kind;
    switch (kind) {
        case PrimitiveKind::radial:
            // lambda = 1/2 sum (x_i dy_i - y_i dx_i): coefficients (-y/2, x/2).
            form.eval_into = [](const Vec& z, Vec& c) {
                const int n = static_cast<int>(z.size()) / 2;
                c.resize(z.size());
                for (int i = 0; i < n; ++i) {
                    c[i] = -0.5 * z[n + i];
                    c[n + i] = 0.5 * z[i];
                }
            };
            break;
        case PrimitiveKind::xdy:
            // lambda = sum x_i dy_i: coefficients (0, x).
            form.eval_into = [](const Vec& z, Vec& c) {
                const int n = static_cast<int>(z.size()) / 2;
                c.resize(z.size());
                for (int i = 0; i < n; ++i) {
                    c[i] = 0.0;
                    c[n + i] = z[i];
                }
            };
            break;
        case PrimitiveKind::custom:
            throw std::invalid_argument("liouville_form: custom kind has no built-in evaluator");
    }
    return form;
}

Covector liouville(PrimitiveKind kind, const Vec& p) {
    return liouville_form(kind)(p);
}

void ScalarField::grad_into(const Vec& x, Vec& g) const {
    if (gradient) {
        gradient(x, g);
    } else {
        fd_gradient(value, x, g);
    }
}

Covector ScalarField::grad(const Vec& x) const {
    Vec g(x.size());
    grad_into(x, g);
    return g;
}

void TimeDepField::grad_into(double t, const Vec& x, Vec& g) const {
    if (gradient) {
        gradient(t, x, g);
    } else {
        fd_gradient([&](const Vec& y) { return value(t, y); }, x, g);
    }
}

TimeDepField autonomous(const ScalarField& f) {
    TimeDepField h;
    h.value = [f](double, const Vec& x) { return f.value(x); };
    if (f.gradient)
        h.gradient = [f](double, const Vec& x, Vec& g) { f.gradient(x, g); };
    h.support = f.support;
    h.autonomous = true;
    return h;
}

TimeDepField modulated(const ScalarField& f, std::function<double(double)> m) {
    TimeDepField h;
    h.value = [f, m](double t, const Vec& x) { return m(t) * f.value(x); };
    if (f.gradient)
        h.gradient = [f, m](double t, const Vec& x, Vec& g) {
            f.gradient(x, g);
            g *= m(t);
        };
    h.support = f.support;
    h.autonomous = false;
    return h;
}

TimeDepField scale(const TimeDepField& h, double a) {
    TimeDepField s = h;
    auto v = h.value;
    s.value = [v, a](double t, const Vec& x) { return a * v(t, x); };
    if (h.gradient) {
        auto g0 = h.gradient;
        s.gradient = [g0, a](double t, const Vec& x, Vec& g) {
            g0(t, x, g);
            g *= a;
        };
    } else {
        s.gradient = nullptr;
    }
    return s;
}

ScalarField scale(const ScalarField& f, double a) {
    ScalarField s = f;
    auto v = f.value;
    s.value = [v, a](const Vec& x) { return a * v(x); };
    if (f.gradient) {
        auto g0 = f.gradient;
        s.gradient = [g0, a](const Vec& x, Vec& g) {
            g0(x, g);
            g *= a;
        };
    } else {
        s.gradient = nullptr;
    }
    return s;
}

ScalarField add(const ScalarField& f, const ScalarField& g) {
    ScalarField s;
    auto fv = f.value, gv = g.value;
    s.value = [fv, gv](const Vec& x) { return fv(x) + gv(x); };
    if (f.gradient && g.gradient) {
        auto fg = f.gradient, gg = g.gradient;
        s.gradient = [fg, gg](const Vec& x, Vec& out) {
            fg(x, out);
            Vec tmp(x.size());
            gg(x, tmp);
            out += tmp;
        };
    }
    s.support = Box::hull(f.support, g.support);
    return s;
}

Vector hamiltonian_vector_field(const TimeDepField& H, double t, const Vec& p) {
    Vec X(p.size());
    hamiltonian_vector_field_into(H, t, p, X);
    return X;
}

void hamiltonian_vector_field_into(const TimeDepField& H, double t, const Vec& p, Vec& X) {
    static thread_local Vec g;
    g.resize(p.size());
    H.grad_into(t, p, g);
    apply_omega(g, X);
}

double fd_step(double coord) {
    return 1e-5 * std::max(1.0, std::abs(coord));
}

void fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, Vec& g) {
    g.resize(x.size());
    Vec xe = x;
    for (int i = 0; i < x.size(); ++i) {
        const double h = fd_step(x[i]);
        xe[i] = x[i] + h;
        const double fp = f(xe);
        xe[i] = x[i] - h;
        const double fm = f(xe);
        xe[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
}

void fd_spatial_hessian(const TimeDepField& H, double t, const Vec& x, Mat& hess) {
    const int d = static_cast<int>(x.size());
    hess.resize(d, d);
    Vec xe = x, gp(d), gm(d);
    for (int i = 0; i < d; ++i) {
        const double h = fd_step(x[i]);
        xe[i] = x[i] + h;
        H.grad_into(t, xe, gp);
        xe[i] = x[i] - h;
        H.grad_into(t, xe, gm);
        xe[i] = x[i];
        hess.col(i) = (gp - gm) / (2.0 * h);
    }
    // Symmetrize: the exact Hessian is symmetric, and downstream symplecticity
    // of the variational update depends on it.
    hess = 0.5 * (hess + hess.transpose()).eval();
}

Mat fd_exterior_derivative(const OneForm& form, const Vec& z) {
    const int d = static_cast<int>(z.size());
    Mat jac(d, d); // jac(i, j) = d_i a_j
    Vec ze = z, cp(d), cm(d);
    for (int i = 0; i < d; ++i) {
        const double h = fd_step(z[i]);
        ze[i] = z[i] + h;
        form.eval_into(ze, cp);
        ze[i] = z[i] - h;
        form.eval_into(ze, cm);
        ze[i] = z[i];
        jac.row(i) = ((cp - cm) / (2.0 * h)).transpose();
    }
    return jac - jac.transpose();
}

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

double smooth_step_prime(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    // s = a/(a+b) with a = exp(-1/u), b = exp(-1/(1-u));
    // s' = (a' b - a b') / (a+b)^2, a' = a/u^2, b' = -b/(1-u)^2.
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    const double ap = a / (u * u);
    const double bp = -b / ((1.0 - u) * (1.0 - u));
    const double denom = (a + b) * (a + b);
    return (ap * b - a * bp) / denom;
}

namespace {

// 1-D plateau profile on [lo, hi] with transition width w: rises over
// [lo, lo+w], equals 1 on [lo+w, hi-w], falls over [hi-w, hi].
struct AxisProfile {
    double lo, hi, w;
    double eval(double x) const {
        if (x <= lo || x >= hi) return 0.0;
        return smooth_step((x - lo) / w) * smooth_step((hi - x) / w);
    }
    double deriv(double x) const {
        if (x <= lo || x >= hi) return 0.0;
        const double a = (x - lo) / w, b = (hi - x) / w;
        return (smooth_step_prime(a) * smooth_step(b) -
                smooth_step(a) * smooth_step_prime(b)) / w;
    }
};

} // namespace

double max_feasible_rho(const Box& box, double min_width) {
    double rho = 1.0;
    for (int i = 0; i < box.dim(); ++i) {
        const double L = box.hi[i] - box.lo[i];
        rho *= std::max(0.0, 1.0 - 2.0 * min_width / L);
    }
    return rho;
}

ScalarField plateau_bump(const Box& box, double rho, double height, double min_width) {
    const int d = box.dim();
    if (rho <= 0.0 || rho >= 1.0)
        throw std::invalid_argument("plateau_bump: rho must lie in (0,1)");
    if (height <= 0.0)
        throw std::invalid_argument("plateau_bump: height must be positive");
    for (int i = 0; i < d; ++i)
        if (!(box.hi[i] > box.lo[i]))
            throw std::invalid_argument("plateau_bump: degenerate box");

    const double rho_axis = std::pow(rho, 1.0 / d);
    std::vector<AxisProfile> axes(d);
    for (int i = 0; i < d; ++i) {
        const double L = box.hi[i] - box.lo[i];
        const double w = 0.5 * L * (1.0 - rho_axis);
        if (w < min_width) {
            const double feasible = max_feasible_rho(box, min_width);
            throw bump_infeasible(
                "plateau_bump: rho=" + std::to_string(rho) +
                    " needs transition width " + std::to_string(w) +
                    " below the configured minimum " + std::to_string(min_width) +
                    "; maximum feasible rho is " + std::to_string(feasible),
                feasible);
        }
        axes[i] = AxisProfile{box.lo[i], box.hi[i], w};
    }

    ScalarField f;
    f.support = box;
    f.value = [axes, height](const Vec& x) {
        double v = height;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            v *= axes[i].eval(x[static_cast<int>(i)]);
            if (v == 0.0) return 0.0;
        }
        return v;
    };
    f.gradient = [axes, height](const Vec& x, Vec& g) {
        const int d = static_cast<int>(axes.size());
        g.resize(d);
        // u_i and u'_i per axis; grad_j = height * u'_j * prod_{i != j} u_i.
        static thread_local std::vector<double> u, du;
        u.resize(d);
        du.resize(d);
        bool zero = false;
        for (int i = 0; i < d; ++i) {
            u[i] = axes[i].eval(x[i]);
            du[i] = axes[i].deriv(x[i]);
            if (u[i] == 0.0) zero = true;
        }
        if (zero) {
            // Outside or on the boundary: the product and all its partials vanish
            // except possibly where exactly one factor is zero with nonzero
            // slope, which cannot happen for this profile (flat at the edges).
            g.setZero();
            return;
        }
        double prod = height;
        for (int i = 0; i < d; ++i) prod *= u[i];
        for (int j = 0; j < d; ++j) g[j] = prod / u[j] * du[j];
    };
    return f;
}

} // namespace calabi
