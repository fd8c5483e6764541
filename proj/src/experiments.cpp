#include "calabi/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace calabi {

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

Scheme parse_scheme(const std::string& s) {
    if (s == "implicit_midpoint") return Scheme::implicit_midpoint;
    if (s == "rk4") return Scheme::rk4;
    throw std::invalid_argument("unknown scheme '" + s + "' (implicit_midpoint | rk4)");
}

const char* scheme_name(Scheme s) {
    return s == Scheme::implicit_midpoint ? "implicit_midpoint" : "rk4";
}

bool parse_bool(const std::string& s) {
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no") return false;
    throw std::invalid_argument("bad boolean value '" + s + "'");
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Max of the transition-profile derivative, computed once; pins the speed
// bound sup |grad F| = height * smax / width for grid fields.
double smooth_step_prime_max() {
    static const double smax = [] {
        double m = 0.0;
        for (int i = 0; i <= 2000; ++i)
            m = std::max(m, smooth_step_prime(i / 2000.0));
        return m;
    }();
    return smax;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

void LabConfig::set_key(const std::string& key, const std::string& value) {
    if (key == "dim") dim_n = std::stoi(value);
    else if (key == "lambda") {
        if (value != "radial" && value != "xdy" && value != "both")
            throw std::invalid_argument("lambda must be radial | xdy | both");
        lambda = value;
    }
    else if (key == "scheme") scheme = parse_scheme(value);
    else if (key == "steps") steps = std::stoi(value);
    else if (key == "quad") quad = std::stoi(value);
    else if (key == "time_nodes") time_nodes = std::stoi(value);
    else if (key == "grid_res") grid_res = std::stoi(value);
    else if (key == "delta") delta = std::stod(value);
    else if (key == "kmin") kmin = std::stoi(value);
    else if (key == "kmax") kmax = std::stoi(value);
    else if (key == "grid_height") grid_height = std::stod(value);
    else if (key == "grid_eta") grid_eta = std::stod(value);
    else if (key == "grid_quad_per_subcell") grid_quad_per_subcell = std::stoi(value);
    else if (key == "grid_fpot_per_subcell") grid_fpot_per_subcell = std::stoi(value);
    else if (key == "grid_scheme") grid_scheme = parse_scheme(value);
    else if (key == "grid_graph_res") grid_graph_res = std::stoi(value);
    else if (key == "eps") eps = parse_list(value);
    else if (key == "base") base = value;
    else if (key == "seq_graph_res") seq_graph_res = std::stoi(value);
    else if (key == "min_width") min_width = std::stod(value);
    else if (key == "out") out = value;
    else if (key == "svg") svg = parse_bool(value);
    else if (key == "corrupt_chart") corrupt_chart = parse_bool(value);
    else if (key == "zero_fast_path") zero_fast_path = parse_bool(value);
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

std::string LabConfig::echo() const {
    std::ostringstream os;
    os << "dim = " << dim_n << "\n";
    os << "lambda = " << lambda << "\n";
    os << "scheme = " << scheme_name(scheme) << "\n";
    os << "steps = " << steps << "\n";
    os << "quad = " << quad << "\n";
    os << "time_nodes = " << time_nodes << "\n";
    os << "grid_res = " << grid_res << "\n";
    os << "delta = " << fmt(delta) << "\n";
    os << "kmin = " << kmin << "\n";
    os << "kmax = " << kmax << "\n";
    os << "grid_height = " << fmt(grid_height) << "\n";
    os << "grid_eta = " << fmt(grid_eta) << "\n";
    os << "grid_quad_per_subcell = " << grid_quad_per_subcell << "\n";
    os << "grid_fpot_per_subcell = " << grid_fpot_per_subcell << "\n";
    os << "grid_scheme = " << scheme_name(grid_scheme) << "\n";
    os << "grid_graph_res = " << grid_graph_res << "\n";
    os << "eps = ";
    for (std::size_t i = 0; i < eps.size(); ++i) os << (i ? "," : "") << fmt(eps[i]);
    os << "\n";
    os << "base = " << base << "\n";
    os << "seq_graph_res = " << seq_graph_res << "\n";
    os << "min_width = " << fmt(min_width) << "\n";
    os << "out = " << out << "\n";
    os << "svg = " << (svg ? 1 : 0) << "\n";
    os << "corrupt_chart = " << (corrupt_chart ? 1 : 0) << "\n";
    os << "zero_fast_path = " << (zero_fast_path ? 1 : 0) << "\n";
    return os.str();
}

LabConfig load_config_file(const std::string& path, LabConfig cfg) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        cfg.set_key(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

GridExample make_grid_example(int n, double delta, int k, double height,
                              double min_width) {
    if (delta <= 0.0) throw std::invalid_argument("make_grid_example: delta must be > 0");
    if (k < 1) throw std::invalid_argument("make_grid_example: k must be >= 1");
    GridExample g;
    g.k = k;
    g.delta = delta;
    g.cell = delta / k;

    const int d = 2 * n;
    // Target plateau fraction 1 - 1/k, clamped to the width-feasible maximum
    // (and to a sane floor for k = 1 where the target degenerates to 0).
    g.rho_target = std::max(1.0 - 1.0 / k, 0.2);
    const double rho_axis = std::pow(g.rho_target, 1.0 / d);
    double w = 0.5 * g.cell * (1.0 - rho_axis);
    if (w < min_width) {
        w = min_width;
        g.rho_achieved = std::pow(std::max(0.0, 1.0 - 2.0 * w / g.cell), d);
        if (g.rho_achieved <= 0.0)
            throw bump_infeasible("make_grid_example: subcell too small for the "
                                  "configured minimum transition width",
                                  0.0);
    } else {
        g.rho_achieved = g.rho_target;
    }
    g.width = w;
    g.max_speed = height * smooth_step_prime_max() / w;

    Box cell_box;
    cell_box.lo = Vec::Zero(d);
    cell_box.hi = Vec::Constant(d, g.cell);
    // Build with the achieved fraction; plateau_bump rederives the same width.
    g.subcell_template = plateau_bump(cell_box, g.rho_achieved, height, 0.0);

    Box support;
    support.lo = Vec::Zero(d);
    support.hi = Vec::Constant(d, delta);

    const ScalarField tmpl = g.subcell_template;
    const double cell = g.cell;
    const int kk = k;

    TimeDepField H;
    H.support = support;
    H.autonomous = true;
    H.value = [tmpl, cell, kk, d](double, const Vec& x) -> double {
        static thread_local Vec local;
        local.resize(d);
        for (int i = 0; i < d; ++i) {
            if (x[i] <= 0.0 || x[i] >= cell * kk) return 0.0;
            long idx = static_cast<long>(std::floor(x[i] / cell));
            if (idx >= kk) idx = kk - 1;
            local[i] = x[i] - idx * cell;
        }
        return tmpl.value(local);
    };
    H.gradient = [tmpl, cell, kk, d](double, const Vec& x, Vec& gr) {
        static thread_local Vec local;
        local.resize(d);
        gr.resize(d);
        for (int i = 0; i < d; ++i) {
            if (x[i] <= 0.0 || x[i] >= cell * kk) {
                gr.setZero();
                return;
            }
            long idx = static_cast<long>(std::floor(x[i] / cell));
            if (idx >= kk) idx = kk - 1;
            local[i] = x[i] - idx * cell;
        }
        tmpl.gradient(local, gr);
    };
    g.field = H;
    return g;
}

int grid_steps(const GridExample& g, double eta, int floor_steps) {
    const double needed = eta * g.max_speed / g.width;
    return std::max(floor_steps, static_cast<int>(std::ceil(needed)));
}

ExperimentRecord run_grid_example(double delta, int k, const LabConfig& cfg) {
    const double t0 = now_ms();
    ExperimentRecord rec;
    rec.family = "grid";
    rec.param = k;

    const int n = cfg.dim_n;
    const int d = 2 * n;
    GridExample g = make_grid_example(n, delta, k, cfg.grid_height, cfg.min_width);
    rec.rho_target = g.rho_target;
    rec.rho_achieved = g.rho_achieved;
    if (g.rho_achieved < g.rho_target)
        rec.notes += "rho clamped to width-feasible maximum; ";

    IntegratorConfig integ;
    integ.scheme = cfg.grid_scheme;
    integ.steps = grid_steps(g, cfg.grid_eta, cfg.steps);
    rec.steps_used = integ.steps;

    // cal_H: per-subcell composite quadrature. All subcells are translates of
    // one template, so the composite sum is k^{2n} times the template panel.
    const double panel = integrate_box([&](const Vec& x) { return g.subcell_template.value(x); },
                                       g.subcell_template.support,
                                       QuadratureRule::gauss_legendre,
                                       cfg.grid_quad_per_subcell);
    const double cells = std::pow(static_cast<double>(k), d);
    rec.cal_H = volume_normalization(n) * cells * panel;

    // L^(1,infty): spatial grid scaled so plateau interiors are sampled.
    rec.l1inf = l1inf_norm(g.field, cfg.time_nodes, 8 * k + 1).value;

    FlowMap phi = realize_time_one(g.field, integ);

    // C0 distance and subcube containment from one probe sweep.
    {
        const int res = cfg.grid_res;
        rec.c0_resolution = res;
        rec.c0_spacing = grid_spacing(phi.support, res);
        const double slack = 1e-7 * std::max(1.0, delta);
        double worst = 0.0;
        int violations = 0;
        for (const Vec& x : uniform_grid(phi.support, res)) {
            // Initial subcell bounds (boundary probes never move: F = 0 there).
            Vec lo(d), hi(d);
            for (int i = 0; i < d; ++i) {
                long idx = static_cast<long>(std::floor(x[i] / g.cell));
                idx = std::min<long>(std::max<long>(idx, 0), k - 1);
                lo[i] = idx * g.cell;
                hi[i] = (idx + 1) * g.cell;
            }
            double excursion = 0.0;
            StepObserver watch = [&](double, const Vec& z) {
                for (int i = 0; i < d; ++i) {
                    excursion = std::max(excursion, lo[i] - z[i]);
                    excursion = std::max(excursion, z[i] - hi[i]);
                }
            };
            FlowState st = integrate_augmented(g.field, x, integ, 1.0, false, {}, watch);
            if (excursion > slack) ++violations;
            worst = std::max(worst, (st.z - x).norm());
        }
        rec.c0_dist = worst;
        rec.containment_violations = violations;
        if (violations > 0)
            rec.notes += std::to_string(violations) + " trajectories left their subcube; ";
    }

    // Potential-formula Calabi (both primitives) and the bridge integrals,
    // on a per-subcell composite rule. f is not translation invariant (the
    // primitive is position dependent), so every subcell is visited.
    {
        const int m = cfg.grid_fpot_per_subcell;
        double sum_fr = 0.0, sum_fx = 0.0, sum_S = 0.0, sum_R = 0.0;
        const OneForm lam_r = liouville_form(PrimitiveKind::radial);
        std::vector<long> idx(d, 0);
        Box cell_box;
        cell_box.lo = Vec::Zero(d);
        cell_box.hi = Vec::Zero(d);
        Vec endpoint(d);
        const long total_cells = static_cast<long>(cells);
        for (long c = 0; c < total_cells; ++c) {
            for (int i = 0; i < d; ++i) {
                cell_box.lo[i] = idx[i] * g.cell;
                cell_box.hi[i] = (idx[i] + 1) * g.cell;
            }
            for_each_node(cell_box, QuadratureRule::gauss_legendre, m,
                          [&](const Vec& x, double w) {
                              auto [fr, fx] = pullback_potential_pair(g.field, x, integ, &endpoint);
                              sum_fr += w * fr;
                              sum_fx += w * fx;
                              const ChartPoint gp = chart_to_cotangent(endpoint, x);
                              const double R = chart_correction(lam_r, gp);
                              sum_S += w * (R + fr);
                              sum_R += w * R;
                          });
            for (int i = d - 1; i >= 0; --i) {
                if (++idx[i] < k) break;
                idx[i] = 0;
            }
        }
        const double norm = volume_normalization(n);
        rec.cal_f_radial = norm / (n + 1.0) * sum_fr;
        rec.cal_f_xdy = norm / (n + 1.0) * sum_fx;
        rec.res_bridge = std::abs((n + 1.0) * rec.cal_H - norm * (sum_S - sum_R));
    }

    // Graphicality probed on a single subcell; the field is a lattice of
    // translates, so every subcell carries the same local map.
    {
        Box first_cell;
        first_cell.lo = Vec::Zero(d);
        first_cell.hi = Vec::Constant(d, g.cell);
        FlowMap local = phi;
        local.support = first_cell;
        GraphicalityReport rep = graphicality_report(local, cfg.grid_graph_res);
        rec.graphical = rep.is_graphical;
        rec.min_abs_det = rep.min_abs_det;
        if (!rep.is_graphical)
            rec.notes += "non-graphical (min|det| " + fmt(rep.min_abs_det) + "); ";
    }

    if (rec.graphical) {
        PhaseContext ctx = make_phase_context(phi, PrimitiveKind::radial);
        BoundReport b = phase_bound_report(ctx, std::min(cfg.grid_res, 24));
        rec.sup_S = b.sup_S;
        rec.sup_alpha = b.sup_alpha;
        rec.bound_ok = b.bound_ok;
        rec.res_dS = b.section_exactness_residual;
    } else {
        rec.sup_S = 0.0;
        rec.sup_alpha = 0.0;
        rec.bound_ok = false;
        rec.res_dS = 0.0;
        rec.notes += "phase bounds skipped (graphical maps only); ";
    }

    rec.wall_ms = now_ms() - t0;
    return rec;
}

std::vector<ExperimentRecord> run_graphical_sequence(const TimeDepField& base,
                                                     const std::vector<double>& eps,
                                                     const LabConfig& cfg) {
    std::vector<ExperimentRecord> records;
    IntegratorConfig integ;
    integ.scheme = cfg.scheme;
    integ.steps = cfg.steps;
    QuadratureConfig quad;
    quad.spatial_nodes_per_axis = cfg.quad;
    quad.time_nodes = cfg.time_nodes;

    const int n = cfg.dim_n;

    for (double e : eps) {
        const double t0 = now_ms();
        ExperimentRecord rec;
        rec.family = "seq";
        rec.param = e;
        rec.steps_used = integ.steps;

        TimeDepField He = scale(base, e);
        FlowMap phi = realize_time_one(He, integ);

        rec.cal_H = cal_from_hamiltonian(He, quad);
        rec.l1inf = l1inf_norm(He, cfg.time_nodes, 64).value;

        C0Estimate c0 = c0_distance_to_identity(phi, cfg.grid_res);
        rec.c0_dist = c0.value;
        rec.c0_resolution = c0.resolution;
        rec.c0_spacing = c0.spacing;

        GraphicalityReport graph = graphicality_report(phi, cfg.seq_graph_res);
        rec.graphical = graph.is_graphical;
        rec.min_abs_det = graph.min_abs_det;

        // Potential formula (both primitives) plus bridge integrals in one
        // quadrature sweep.
        {
            const OneForm lam_r = liouville_form(PrimitiveKind::radial);
            double sum_fr = 0.0, sum_fx = 0.0, sum_S = 0.0, sum_R = 0.0;
            Vec endpoint;
            for_each_node(He.support, quad.rule, quad.spatial_nodes_per_axis,
                          [&](const Vec& x, double w) {
                              auto [fr, fx] = pullback_potential_pair(He, x, integ, &endpoint);
                              sum_fr += w * fr;
                              sum_fx += w * fx;
                              const ChartPoint gp = chart_to_cotangent(endpoint, x);
                              const double R = chart_correction(lam_r, gp);
                              sum_S += w * (R + fr);
                              sum_R += w * R;
                          });
            const double norm = volume_normalization(n);
            rec.cal_f_radial = norm / (n + 1.0) * sum_fr;
            rec.cal_f_xdy = norm / (n + 1.0) * sum_fx;
            rec.res_bridge = std::abs((n + 1.0) * rec.cal_H - norm * (sum_S - sum_R));
        }

        PhaseContext ctx = make_phase_context(phi, PrimitiveKind::radial);

        // dS residual at a few interior probes.
        {
            Box inner = He.support;
            const Vec margin = 0.2 * (inner.hi - inner.lo);
            inner.lo += margin;
            inner.hi -= margin;
            rec.res_dS = phase_gradient_residual(ctx, uniform_grid(inner, 3));
        }

        if (rec.graphical) {
            BoundReport b = phase_bound_report(ctx, cfg.seq_graph_res);
            rec.sup_S = b.sup_S;
            rec.sup_alpha = b.sup_alpha;
            rec.bound_ok = b.bound_ok;
        } else {
            rec.notes += "non-graphical member: bound checks skipped; ";
        }

        rec.wall_ms = now_ms() - t0;
        records.push_back(rec);
    }
    return records;
}

// ---- report emission -------------------------------------------------------

const char* kCsvHeader =
    "family,param,cal_H,cal_f_radial,cal_f_xdy,c0_dist,l1inf,sup_S,sup_alpha,"
    "bound_ok,res_dS,res_bridge,wall_ms";

std::string to_csv(const std::vector<ExperimentRecord>& records) {
    std::string out = kCsvHeader;
    out += "\n";
    for (const ExperimentRecord& r : records) {
        out += r.family;
        out += ",";
        out += fmt(r.param) + "," + fmt(r.cal_H) + "," + fmt(r.cal_f_radial) + "," +
               fmt(r.cal_f_xdy) + "," + fmt(r.c0_dist) + "," + fmt(r.l1inf) + "," +
               fmt(r.sup_S) + "," + fmt(r.sup_alpha) + "," +
               (r.bound_ok ? "1" : "0") + "," + fmt(r.res_dS) + "," +
               fmt(r.res_bridge) + "," + fmt(r.wall_ms) + "\n";
    }
    return out;
}

std::string record_diagnostics_json(const std::vector<ExperimentRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ExperimentRecord& r : records) {
        nlohmann::json j;
        j["family"] = r.family;
        j["param"] = r.param;
        j["cal_H"] = r.cal_H;
        j["cal_f_radial"] = r.cal_f_radial;
        j["cal_f_xdy"] = r.cal_f_xdy;
        j["c0_dist"] = r.c0_dist;
        j["l1inf"] = r.l1inf;
        j["sup_S"] = r.sup_S;
        j["sup_alpha"] = r.sup_alpha;
        j["bound_ok"] = r.bound_ok;
        j["res_dS"] = r.res_dS;
        j["res_bridge"] = r.res_bridge;
        j["wall_ms"] = r.wall_ms;
        j["c0_resolution"] = r.c0_resolution;
        j["c0_spacing"] = r.c0_spacing;
        j["steps_used"] = r.steps_used;
        j["rho_target"] = r.rho_target;
        j["rho_achieved"] = r.rho_achieved;
        j["graphical"] = r.graphical;
        j["min_abs_det"] = r.min_abs_det;
        j["containment_violations"] = r.containment_violations;
        j["notes"] = r.notes;
        arr.push_back(j);
    }
    return arr.dump(2);
}

std::string to_svg(const std::vector<ExperimentRecord>& records,
                   const std::string& title) {
    const int W = 720, Hgt = 440;
    const int ml = 70, mr = 30, mt = 50, mb = 50;
    const int pw = W - ml - mr, ph = Hgt - mt - mb;

    double xmin = 0.0, xmax = 1.0, max_cal = 0.0, max_c0 = 0.0;
    if (!records.empty()) {
        xmin = xmax = records.front().param;
        for (const auto& r : records) {
            xmin = std::min(xmin, r.param);
            xmax = std::max(xmax, r.param);
            max_cal = std::max(max_cal, std::abs(r.cal_H));
            max_c0 = std::max(max_c0, std::abs(r.c0_dist));
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (max_cal == 0.0) max_cal = 1.0;
    if (max_c0 == 0.0) max_c0 = 1.0;

    auto px = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
    auto py = [&](double v, double vmax) { return mt + ph * (1.0 - v / vmax); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
       << "\" height=\"" << Hgt << "\" viewBox=\"0 0 " << W << " " << Hgt << "\">\n";
    os << "<desc>" << title << "</desc>\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << Hgt
       << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
       << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

    auto series = [&](double ExperimentRecord::* field, double vmax,
                      const char* color, const char* name, int legend_row) {
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& r : records)
            os << px(r.param) << "," << py(r.*field, vmax) << " ";
        os << "\"/>\n";
        for (const auto& r : records)
            os << "<circle cx=\"" << px(r.param) << "\" cy=\"" << py(r.*field, vmax)
               << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        os << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 18 + 18 * legend_row
           << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
           << name << " (max " << fmt(vmax) << ")</text>\n";
    };
    series(&ExperimentRecord::cal_H, max_cal, "#1f77b4", "cal_H", 0);
    series(&ExperimentRecord::c0_dist, max_c0, "#d62728", "c0_dist", 1);

    os << "<text x=\"" << W / 2 << "\" y=\"" << Hgt - 14
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">parameter</text>\n";
    // Axis ticks at the data points.
    for (const auto& r : records) {
        os << "<line x1=\"" << px(r.param) << "\" y1=\"" << mt + ph << "\" x2=\""
           << px(r.param) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << px(r.param) << "\" y=\"" << mt + ph + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << fmt(r.param) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string emit_report(const std::vector<ExperimentRecord>& records,
                        const LabConfig& cfg, const std::string& name) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out);

    const std::string csv_path = (fs::path(cfg.out) / (name + ".csv")).string();
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("emit_report: cannot write " + csv_path);
        f << to_csv(records);
    }
    {
        std::ofstream f((fs::path(cfg.out) / (name + ".json")).string());
        f << record_diagnostics_json(records) << "\n";
    }
    {
        std::ofstream f((fs::path(cfg.out) / "run_config.txt").string());
        f << cfg.echo();
    }
    if (cfg.svg) {
        std::ofstream f((fs::path(cfg.out) / (name + ".svg")).string());
        f << to_svg(records, name);
    }
    return csv_path;
}

} // namespace calabi
