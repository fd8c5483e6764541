// calabi-lab command line: verification suite, Calabi reports, and the two
// headline experiments (the shrinking-grid family and the graphical
// epsilon-family).

#include "calabi/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace calabi;

int cmd_verify(const LabConfig& cfg) {
    const VerifyReport rep = run_verify_suite(cfg);
    for (const CheckResult& c : rep.checks) {
        if (c.skipped)
            std::printf("SKIP %-36s (earlier failure)\n", c.name.c_str());
        else
            std::printf("%s %-36s measured %.3e  tolerance %.1e\n",
                        c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                        c.tolerance);
    }
    std::filesystem::create_directories(cfg.out);
    std::ofstream((std::filesystem::path(cfg.out) / "verify.json").string())
        << rep.to_json() << "\n";
    std::printf("%s\n", rep.passed ? "verification suite passed" : "verification suite FAILED");
    return rep.passed ? 0 : 1;
}

int cmd_cal(const LabConfig& cfg, const std::string& spec) {
    const TimeDepField H = parse_hamiltonian_spec(spec);
    QuadratureConfig quad;
    quad.spatial_nodes_per_axis = cfg.quad;
    quad.time_nodes = cfg.time_nodes;
    IntegratorConfig integ;
    integ.scheme = cfg.scheme;
    integ.steps = cfg.steps;

    const CalabiReport r = make_calabi_report(H, quad, integ);
    std::printf("hamiltonian   %s\n", spec.c_str());
    std::printf("cal_H         %.12g\n", r.cal_H);
    std::printf("cal_f_radial  %.12g\n", r.cal_f_radial);
    std::printf("cal_f_xdy     %.12g\n", r.cal_f_xdy);
    std::printf("discrepancy   %.3e\n", r.discrepancy);
    std::printf("quad          %d nodes/axis, %d time nodes\n",
                quad.spatial_nodes_per_axis, quad.time_nodes);
    std::printf("integrator    %s, %d steps\n",
                integ.scheme == Scheme::implicit_midpoint ? "implicit_midpoint" : "rk4",
                integ.steps);
    return 0;
}

int cmd_grid(const LabConfig& cfg) {
    std::vector<ExperimentRecord> records;
    for (int k = cfg.kmin; k <= cfg.kmax; ++k) {
        ExperimentRecord rec = run_grid_example(cfg.delta, k, cfg);
        std::printf("grid k=%d  cal_H %.6g  c0 %.6g  l1inf %.4g  steps %d  %s\n",
                    k, rec.cal_H, rec.c0_dist, rec.l1inf, rec.steps_used,
                    rec.notes.c_str());
        records.push_back(rec);
    }
    const std::string path = emit_report(records, cfg, "grid");
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

int cmd_seq(const LabConfig& cfg) {
    const TimeDepField base = parse_hamiltonian_spec(cfg.base);
    const std::vector<ExperimentRecord> records =
        run_graphical_sequence(base, cfg.eps, cfg);
    for (const ExperimentRecord& r : records)
        std::printf("seq eps=%g  cal_H %.6g  c0 %.6g  sup_S %.4g  sup_alpha %.4g  "
                    "bound_ok %d  %s\n",
                    r.param, r.cal_H, r.c0_dist, r.sup_S, r.sup_alpha,
                    r.bound_ok ? 1 : 0, r.notes.c_str());
    const std::string path = emit_report(records, cfg, "seq");
    std::printf("wrote %s\n", path.c_str());
    // A non-graphical member is an invariant failure for this experiment.
    for (const ExperimentRecord& r : records)
        if (!r.graphical) return 1;
    return 0;
}

int cmd_chart_check(const LabConfig& cfg) {
    double residual;
    if (cfg.corrupt_chart) {
        const Mat bad = -omega_matrix(cfg.dim_n);
        residual = chart_symplecticity_residual(cfg.dim_n, &bad);
    } else {
        residual = chart_symplecticity_residual(cfg.dim_n);
    }
    std::printf("chart symplecticity residual %.3e (tolerance 1e-10)\n", residual);
    return residual <= 1e-10 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"calabi-lab: Calabi invariants of compactly supported "
                 "Hamiltonian diffeomorphisms of R^2n"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "flat key = value config file");

    // Global overrides; applied on top of the config file when present.
    std::vector<std::pair<std::string, std::string>> overrides;
    auto track = [&](const std::string& key) {
        return [&overrides, key](const std::string& v) {
            overrides.emplace_back(key, v);
        };
    };
    app.add_option_function<std::string>("--dim", track("dim"), "half-dimension n");
    app.add_option_function<std::string>("--lambda", track("lambda"),
                                         "primitive: radial | xdy | both");
    app.add_option_function<std::string>("--steps", track("steps"), "integrator steps");
    app.add_option_function<std::string>("--scheme", track("scheme"),
                                         "implicit_midpoint | rk4");
    app.add_option_function<std::string>("--quad", track("quad"),
                                         "spatial quadrature nodes per axis");
    app.add_option_function<std::string>("--grid-res", track("grid_res"),
                                         "probe grid resolution per axis");
    app.add_option_function<std::string>("--out", track("out"), "output directory");
    app.add_flag_callback("--svg", [&overrides] { overrides.emplace_back("svg", "1"); },
                          "emit SVG plots");

    CLI::App* verify = app.add_subcommand("verify", "run every invariant check");
    verify->add_flag_callback("--corrupt-chart",
                              [&overrides] { overrides.emplace_back("corrupt_chart", "1"); },
                              "test fixture: sign-flipped chart");
    verify->add_flag_callback("--zero",
                              [&overrides] { overrides.emplace_back("zero_fast_path", "1"); },
                              "fast path: verify on the zero Hamiltonian");

    CLI::App* cal = app.add_subcommand("cal", "Calabi invariant of one Hamiltonian");
    std::string spec;
    cal->add_option("--hamiltonian", spec,
                    "suite member name or bump,height=..,rho=..,cx=..,cy=..,hx=..,hy=..")
        ->required();

    CLI::App* grid = app.add_subcommand("grid", "shrinking-grid counterexample sweep");
    grid->add_option_function<std::string>("--delta", track("delta"), "cube side");
    grid->add_option_function<std::string>("--kmin", track("kmin"), "first subdivision");
    grid->add_option_function<std::string>("--kmax", track("kmax"), "last subdivision");
    grid->add_option_function<std::string>("--grid-eta", track("grid_eta"),
                                           "step-resolution safety factor");
    grid->add_option_function<std::string>("--grid-scheme", track("grid_scheme"),
                                           "integrator for grid trajectories");

    CLI::App* seq = app.add_subcommand("seq", "graphical epsilon-family sweep");
    seq->add_option_function<std::string>("--eps", track("eps"),
                                          "comma-separated epsilon schedule");
    seq->add_option_function<std::string>("--base", track("base"),
                                          "base Hamiltonian (suite name or bump spec)");

    CLI::App* chart = app.add_subcommand("chart-check", "chart symplecticity residual");
    chart->add_flag_callback("--corrupt",
                             [&overrides] { overrides.emplace_back("corrupt_chart", "1"); },
                             "test fixture: sign-flipped chart");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        LabConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        for (const auto& [key, value] : overrides) cfg.set_key(key, value);

        if (verify->parsed()) return cmd_verify(cfg);
        if (cal->parsed()) return cmd_cal(cfg, spec);
        if (grid->parsed()) return cmd_grid(cfg);
        if (seq->parsed()) return cmd_seq(cfg);
        if (chart->parsed()) return cmd_chart_check(cfg);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
