#ifndef CALABI_EXPERIMENTS_HPP
#define CALABI_EXPERIMENTS_HPP

#include "calabi/phase.hpp"
#include "calabi/suite.hpp"

#include <iosfwd>

namespace calabi {

// Experiment configuration; parseable from a flat "key = value" file with
// '#' comments and overridable by same-named CLI flags. Echoed verbatim into
// every output directory for reproducibility.
struct LabConfig {
    int dim_n = 1;
    std::string lambda = "both"; // radial | xdy | both
    Scheme scheme = Scheme::implicit_midpoint;
    int steps = 200;
    int quad = 64;       // spatial Gauss-Legendre nodes per axis
    int time_nodes = 32;
    int grid_res = 48;   // c0 / sup probe resolution per axis

    double delta = 0.5;
    int kmin = 2;
    int kmax = 8;
    double grid_height = 1.0;
    double grid_eta = 6.0;          // step policy: h * max|X| <= width / eta
    int grid_quad_per_subcell = 16; // cal_H nodes per subcell per axis
    int grid_fpot_per_subcell = 4;  // potential-formula nodes per subcell per axis
    Scheme grid_scheme = Scheme::rk4; // grid trajectories (cost; cross-checked)
    int grid_graph_res = 10;

    std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    std::string base = "gentle"; // seq base Hamiltonian (suite name or bump spec)
    int seq_graph_res = 16;

    double min_width = 1e-4; // bump feasibility floor
    std::string out = "out";
    bool svg = false;
    bool corrupt_chart = false; // verify fixture: sign-flipped chart
    bool zero_fast_path = false; // verify on the zero Hamiltonian only

    void set_key(const std::string& key, const std::string& value);
    std::string echo() const; // canonical key = value listing
};

LabConfig load_config_file(const std::string& path, LabConfig base = {});

// One row of a sequence experiment. The fixed CSV schema covers the fields
// up to wall_ms; the rest are diagnostics emitted to the JSON sidecar.
struct ExperimentRecord {
    std::string family;
    double param = 0.0;
    double cal_H = 0.0;
    double cal_f_radial = 0.0;
    double cal_f_xdy = 0.0;
    double c0_dist = 0.0;
    double l1inf = 0.0;
    double sup_S = 0.0;
    double sup_alpha = 0.0;
    bool bound_ok = false;
    double res_dS = 0.0;
    double res_bridge = 0.0;
    double wall_ms = 0.0;

    int c0_resolution = 0;
    double c0_spacing = 0.0;
    int steps_used = 0;
    double rho_target = 0.0;
    double rho_achieved = 0.0;
    bool graphical = false;
    double min_abs_det = 0.0;
    int containment_violations = 0;
    std::string notes;
};

// The Example-1.4 field: [0, delta]^{2n} divided into k^{2n} equal subcells,
// one plateau bump per subcell (all translates of a single template).
struct GridExample {
    TimeDepField field;
    ScalarField subcell_template; // on [0, cell]^{2n}
    int k = 1;
    double delta = 0.0;
    double cell = 0.0;   // delta / k
    double width = 0.0;  // transition width per axis
    double rho_target = 0.0;
    double rho_achieved = 0.0;
    double max_speed = 0.0; // sup |grad F| = height * max s' / width
};

GridExample make_grid_example(int n, double delta, int k, double height,
                              double min_width);

// Steps needed so a single step moves at most width/eta at top speed.
int grid_steps(const GridExample& g, double eta, int floor_steps);

ExperimentRecord run_grid_example(double delta, int k, const LabConfig& cfg);

std::vector<ExperimentRecord> run_graphical_sequence(const TimeDepField& base,
                                                     const std::vector<double>& eps,
                                                     const LabConfig& cfg);

// ---- verification suite ---------------------------------------------------

struct CheckResult {
    std::string name;
    double tolerance = 0.0;
    double measured = 0.0;
    bool pass = false;
    bool skipped = false;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed = false;
    std::string to_json() const;
};

// Runs every invariant with its acceptance threshold: chart symplecticity,
// flow symplecticity, two-formula Calabi agreement, homomorphism additivity,
// the df / dR / dS oracles, the bridge identity, and the section-exactness
// residual. On the first failure the remaining checks are reported skipped.
VerifyReport run_verify_suite(const LabConfig& cfg);

// ---- report emission -------------------------------------------------------

extern const char* kCsvHeader;

std::string to_csv(const std::vector<ExperimentRecord>& records);
std::string record_diagnostics_json(const std::vector<ExperimentRecord>& records);
std::string to_svg(const std::vector<ExperimentRecord>& records,
                   const std::string& title);

// Writes <name>.csv (fixed schema), <name>.json (full records), optionally
// <name>.svg, and run_config.txt into out_dir. Returns the CSV path.
std::string emit_report(const std::vector<ExperimentRecord>& records,
                        const LabConfig& cfg, const std::string& name);

} // namespace calabi

#endif // CALABI_EXPERIMENTS_HPP
