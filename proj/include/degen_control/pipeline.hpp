#pragma once

#include "degen_control/bounds.hpp"
#include "degen_control/evolution.hpp"
#include "degen_control/moment.hpp"
#include "degen_control/params.hpp"
#include "degen_control/spectrum.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace degen_control {

    inline constexpr int report_schema_version = 1;

    enum ExitCode : int {
        exit_ok = 0,
        exit_config = 2,
        exit_special_function = 3,
        exit_family = 4,
        exit_terminal = 5,
    };

    // Failure codes of the verify subcommand, one per suite.
    enum SuiteCode : int {
        suite_orthonormality = 11,
        suite_hardy_poincare = 12,
        suite_bessel = 13,
        suite_lambda = 14,
        suite_multiplier = 15,
    };

    class ConfigError : public std::invalid_argument {
    public:
        using std::invalid_argument::invalid_argument;
    };

    struct RunConfig {
        double alpha = 0.0;
        double beta = 0.0;
        double mu = 0.0;
        double T = 1.0;
        int modes = 8;
        int monitor_modes = 0;   // 0 means 2 * modes
        double delta_param = 0.5;
        int time_samples = 2048;
        int quad_panels = 16;
        int quad_order = 64;
        // "mode:k", "first" (normalized first mode) or a comma separated list
        std::string initial_state = "mode:1";
        double terminal_tol = 1e-6;
        double gram_tol = 1e-6;
        double c_cal = 1.0;
        std::string precision = "auto";
        int threads = 1;
        std::string report_path = "report.json";
        std::string control_path = "control.csv";
        std::string psi_path;    // empty: no dump

        int monitored() const { return monitor_modes > 0 ? monitor_modes : 2 * modes; }
    };

    // Sets one key; throws ConfigError on unknown keys or bad values.
    void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

    // Flat key=value file, '#' starts a comment.
    RunConfig load_config(const std::string& path, RunConfig base = {});
    RunConfig parse_config(const std::string& text, RunConfig base = {});

    // Range checks independent of the parameter admissibility test.
    void validate(const RunConfig& cfg);

    State initial_state(const RunConfig& cfg, const ProblemParams& p, const std::vector<Mode>& modes);

    struct RunResult {
        int exit_code = exit_ok;
        std::string message;
        std::string report_json;  // serialized report
        ControlSignal control;
        BiorthogonalFamily family;
        std::vector<Mode> modes;
        State terminal;
    };

    // Whole pipeline without touching the filesystem.
    RunResult run_pipeline(const RunConfig& cfg);

    // run_pipeline plus the report, control and optional psi files.
    RunResult run_and_write(const RunConfig& cfg);

    void write_control_csv(const std::string& path, const ControlSignal& f);
    void write_psi_csv(const std::string& path, const BiorthogonalFamily& fam);

    struct SuiteResult {
        std::string name;
        int code = 0;
        bool pass = false;
        double worst = 0.0;
        std::string detail;
    };

    SuiteResult orthonormality_suite(const ProblemParams& p, int K, const QuadratureRule& rule);
    SuiteResult hardy_poincare_suite(const ProblemParams& p, const QuadratureRule& rule);
    SuiteResult bessel_suite(double nu);
    SuiteResult lambda_suite(const ProblemParams& p, const std::vector<Mode>& modes);
    SuiteResult multiplier_suite(const ProblemParams& p, const std::vector<Mode>& modes, double delta_param);

    struct VerifyResult {
        int exit_code = exit_ok;
        std::vector<SuiteResult> suites;
        std::string report_json;
    };

    VerifyResult run_verify(const RunConfig& cfg);

}
