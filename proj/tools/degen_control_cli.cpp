#include "degen_control/pipeline.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

using namespace degen_control;

namespace {

    // Flags are collected as strings and applied after the config file so a
    // flag always wins over a file entry.
    struct Overrides {
        std::map<std::string, std::string> values;

        void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help)
        {
            app->add_option_function<std::string>(
                flag, [this, key](const std::string& v) { values[key] = v; }, help);
        }
    };

    void add_common(CLI::App* app, std::string& config_path, Overrides& ov)
    {
        app->add_option("-c,--config", config_path, "key=value configuration file");
        ov.add(app, "--alpha", "alpha", "degeneracy exponent");
        ov.add(app, "--beta", "beta", "drift exponent");
        ov.add(app, "--mu", "mu", "potential coefficient");
        ov.add(app, "--T", "T", "control horizon");
        ov.add(app, "--modes", "modes", "controlled modes K");
        ov.add(app, "--monitor-modes", "monitor_modes", "modes simulated (default 2K)");
        ov.add(app, "--delta", "delta", "multiplier parameter in (0,1)");
        ov.add(app, "--samples", "samples", "time intervals N");
        ov.add(app, "--quad-panels", "quad_panels", "spatial quadrature panels");
        ov.add(app, "--quad-order", "quad_order", "Gauss points per panel");
        ov.add(app, "--u0", "u0", "initial state: mode:k, first, or a comma list");
        ov.add(app, "--terminal-tol", "terminal_tol", "terminal coefficient tolerance");
        ov.add(app, "--gram-tol", "gram_tol", "biorthogonality tolerance");
        ov.add(app, "--c-cal", "c_cal", "upper bound constant");
        ov.add(app, "--precision", "precision", "auto, standard or extended");
        ov.add(app, "--threads", "threads", "worker cap (fallback: DEGEN_CONTROL_THREADS)");
        ov.add(app, "--out", "out", "report path");
        ov.add(app, "--control-out", "control_out", "control CSV path");
        ov.add(app, "--psi-out", "psi_out", "optional psi CSV path");
    }

    RunConfig resolve(const std::string& config_path, const Overrides& ov)
    {
        RunConfig cfg;
        if (const char* env = std::getenv("DEGEN_CONTROL_THREADS")) apply_setting(cfg, "threads", env);
        if (!config_path.empty()) cfg = load_config(config_path, cfg);
        for (const auto& [k, v] : ov.values) apply_setting(cfg, k, v);
        return cfg;
    }

}

int main(int argc, char** argv)
{
    CLI::App app{"Boundary null control of a degenerate singular heat equation"};
    app.require_subcommand(1);

    std::string run_config, verify_config;
    Overrides run_ov, verify_ov;
    CLI::App* run = app.add_subcommand("run", "synthesize a control, simulate it and write the report");
    add_common(run, run_config, run_ov);
    CLI::App* verify = app.add_subcommand("verify", "run the property suites only");
    add_common(verify, verify_config, verify_ov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    try {
        if (run->parsed()) {
            RunConfig cfg = resolve(run_config, run_ov);
            RunResult r = run_and_write(cfg);
            std::cerr << "degen_control run: " << r.message << " (exit " << r.exit_code << ")\n";
            return r.exit_code;
        }
        RunConfig cfg = resolve(verify_config, verify_ov);
        VerifyResult v = run_verify(cfg);
        std::cout << v.report_json << '\n';
        for (const SuiteResult& s : v.suites)
            std::cerr << (s.pass ? "pass " : "FAIL ") << s.name << " worst=" << s.worst
                      << (s.detail.empty() ? "" : " at " + s.detail) << '\n';
        return v.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "degen_control: " << e.what() << '\n';
        return exit_config;
    }
}
