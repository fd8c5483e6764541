#include "calabi/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace calabi {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1]. Newton on P_m from Chebyshev-like
// initial guesses; converges in a handful of iterations for any practical m.
Rule1D gauss_legendre_reference(int m) {
    Rule1D r;
    r.nodes.resize(m);
    r.weights.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_m and P'_m by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[m - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[i] = w;
        r.weights[m - 1 - i] = w;
    }
    if (m % 2 == 1) r.nodes[m / 2] = 0.0;
    return r;
}

const Rule1D& cached_gl(int m) {
    static std::map<int, Rule1D> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, gauss_legendre_reference(m)).first;
    return it->second;
}

} // namespace

Rule1D rule_1d(QuadratureRule rule, int m, double a, double b) {
    if (m < 1) throw std::invalid_argument("rule_1d: need at least one node");
    Rule1D out;
    out.nodes.resize(m);
    out.weights.resize(m);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    if (rule == QuadratureRule::gauss_legendre) {
        const Rule1D& ref = cached_gl(m);
        for (int i = 0; i < m; ++i) {
            out.nodes[i] = mid + half * ref.nodes[i];
            out.weights[i] = half * ref.weights[i];
        }
    } else {
        const double h = (b - a) / m;
        for (int i = 0; i < m; ++i) {
            out.nodes[i] = a + (i + 0.5) * h;
            out.weights[i] = h;
        }
    }
    return out;
}

void for_each_node(const Box& box, QuadratureRule rule, int m,
                   const std::function<void(const Vec&, double)>& visit) {
    const int d = box.dim();
    std::vector<Rule1D> axes(d);
    for (int i = 0; i < d; ++i) axes[i] = rule_1d(rule, m, box.lo[i], box.hi[i]);
    std::vector<int> idx(d, 0);
    Vec x(d);
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(m);
    for (std::size_t k = 0; k < total; ++k) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            x[i] = axes[i].nodes[idx[i]];
            w *= axes[i].weights[idx[i]];
        }
        visit(x, w);
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[i] < m) break;
            idx[i] = 0;
        }
    }
}

double integrate_box(const std::function<double(const Vec&)>& f,
                     const Box& box, QuadratureRule rule, int m) {
    double s = 0.0;
    for_each_node(box, rule, m, [&](const Vec& x, double w) { s += w * f(x); });
    return s;
}

double integrate_time(const std::function<double(double)>& f,
                      QuadratureRule rule, int m,
                      const std::vector<double>& kinks) {
    std::vector<double> cuts{0.0};
    for (double t : kinks)
        if (t > 0.0 && t < 1.0) cuts.push_back(t);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Rule1D r = rule_1d(rule, m, cuts[i], cuts[i + 1]);
        for (int j = 0; j < m; ++j) s += r.weights[j] * f(r.nodes[j]);
    }
    return s;
}

} // namespace calabi
