#include "calabi/chart.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

namespace calabi {

ChartPoint chart_to_cotangent(const Vec& X, const Vec& Y) {
    ChartPoint c;
    c.q = 0.5 * (X + Y);
    c.p = apply_omega(X - Y);
    return c;
}

std::pair<Vec, Vec> chart_from_cotangent(const ChartPoint& c) {
    // X - Y = Jbar^{-1} p = -Omega p  (Omega^2 = -I).
    Vec diff = -apply_omega(c.p);
    return {c.q + 0.5 * diff, c.q - 0.5 * diff};
}

double chart_symplecticity_residual(int n, const Mat* jbar, int probes) {
    const int d = 2 * n;
    Mat jb = jbar != nullptr ? *jbar : omega_matrix(n);

    // Chart as a plain map R^{4n} -> R^{4n}; first d entries X, last d Y.
    auto chart = [&](const Vec& w) {
        Vec out(2 * d);
        out.head(d) = 0.5 * (w.head(d) + w.tail(d));
        out.tail(d) = jb * (w.head(d) - w.tail(d));
        return out;
    };

    // Target: -d theta_can on (q, p) coordinates; source: omega oplus (-omega).
    Mat target = Mat::Zero(2 * d, 2 * d);
    target.block(0, d, d, d) = Mat::Identity(d, d);
    target.block(d, 0, d, d) = -Mat::Identity(d, d);
    Mat source = Mat::Zero(2 * d, 2 * d);
    source.block(0, 0, d, d) = omega_matrix(n);
    source.block(d, d, d, d) = -omega_matrix(n);

    std::mt19937 rng(20240517u);
    std::uniform_real_distribution<double> U(-2.0, 2.0);

    double worst = 0.0;
    Vec w(2 * d), we(2 * d);
    Mat dpsi(2 * d, 2 * d);
    for (int s = 0; s < probes; ++s) {
        for (int i = 0; i < 2 * d; ++i) w[i] = U(rng);
        for (int i = 0; i < 2 * d; ++i) {
            const double h = fd_step(w[i]);
            we = w;
            we[i] = w[i] + h;
            Vec fp = chart(we);
            we[i] = w[i] - h;
            Vec fm = chart(we);
            dpsi.col(i) = (fp - fm) / (2.0 * h);
        }
        const Mat res = dpsi.transpose() * target * dpsi - source;
        worst = std::max(worst, res.lpNorm<Eigen::Infinity>());
    }
    return worst;
}

ChartPoint graph_point(const FlowMap& phi, const Vec& x) {
    return chart_to_cotangent(phi.forward(x), x);
}

GraphicalityReport graphicality_report(const FlowMap& phi, int resolution) {
    if (resolution < 2)
        throw std::invalid_argument("graphicality_report: resolution must be >= 2");
    GraphicalityReport rep;
    rep.resolution = resolution;
    rep.min_abs_det = std::numeric_limits<double>::infinity();
    rep.min_det = std::numeric_limits<double>::infinity();

    const int d = phi.support.dim();
    const double spacing = grid_spacing(phi.support, resolution);
    const double tau = 0.25 * spacing; // collision radius for midpoint images

    struct CellHash {
        std::size_t operator()(const std::vector<long long>& c) const {
            std::size_t h = 1469598103934665603ull;
            for (long long v : c) {
                h ^= static_cast<std::size_t>(v);
                h *= 1099511628211ull;
            }
            return h;
        }
    };
    std::unordered_map<std::vector<long long>, std::vector<Vec>, CellHash> buckets;

    std::vector<long long> cell(d);
    for (const Vec& x : uniform_grid(phi.support, resolution)) {
        FlowState st = phi.forward_and_jacobian(x);
        const Mat half = 0.5 * (st.jac + Mat::Identity(d, d));
        const double det = half.determinant();
        rep.min_det = std::min(rep.min_det, det);
        rep.min_abs_det = std::min(rep.min_abs_det, std::abs(det));

        const Vec mid = 0.5 * (st.z + x);
        for (int i = 0; i < d; ++i)
            cell[i] = static_cast<long long>(std::floor(mid[i] / tau));
        // Check this and all neighboring cells for an image within tau.
        std::vector<long long> nb = cell;
        std::function<bool(int)> scan = [&](int axis) -> bool {
            if (axis == d) {
                auto it = buckets.find(nb);
                if (it != buckets.end())
                    for (const Vec& m : it->second)
                        if ((m - mid).lpNorm<Eigen::Infinity>() < tau) return true;
                return false;
            }
            for (long long off = -1; off <= 1; ++off) {
                nb[axis] = cell[axis] + off;
                if (scan(axis + 1)) return true;
            }
            nb[axis] = cell[axis];
            return false;
        };
        if (scan(0)) ++rep.injectivity_collisions;
        buckets[cell].push_back(mid);
    }

    rep.is_graphical =
        rep.min_abs_det > rep.det_threshold && rep.injectivity_collisions == 0;
    return rep;
}

Covector section_covector(const FlowMap& phi, const Vec& q,
                          const NewtonConfig& cfg, Vec* preimage) {
    const int d = static_cast<int>(q.size());
    Vec x = q;
    FlowState st = phi.forward_and_jacobian(x);
    Vec r = 0.5 * (st.z + x) - q;
    double rnorm = r.norm();
    for (int iter = 0; iter < cfg.max_iter && rnorm > cfg.tol; ++iter) {
        const Mat J = 0.5 * (st.jac + Mat::Identity(d, d));
        const Vec dx = J.partialPivLu().solve(r);
        double damp = 1.0;
        Vec x_new;
        FlowState st_new;
        double rnorm_new = std::numeric_limits<double>::infinity();
        for (int back = 0; back < 8; ++back) {
            x_new = x - damp * dx;
            st_new = phi.forward_and_jacobian(x_new);
            rnorm_new = (0.5 * (st_new.z + x_new) - q).norm();
            if (rnorm_new < rnorm) break;
            damp *= 0.5;
        }
        if (rnorm_new >= rnorm)
            throw newton_error(
                "section_covector: Newton stalled (residual " + std::to_string(rnorm) +
                    "), map is likely not graphical near this point",
                rnorm);
        x = x_new;
        st = st_new;
        r = 0.5 * (st.z + x) - q;
        rnorm = r.norm();
    }
    if (rnorm > cfg.tol)
        throw newton_error("section_covector: Newton did not reach tolerance (residual " +
                               std::to_string(rnorm) + ")",
                           rnorm);
    if (preimage != nullptr) *preimage = x;
    return apply_omega(st.z - x);
}

SectionForm make_section(const FlowMap& phi, const NewtonConfig& cfg) {
    return SectionForm{phi, cfg, phi.support};
}

} // namespace calabi
