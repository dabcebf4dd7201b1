#include "degen_control/pipeline.hpp"

#include "degen_control/bessel.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace degen_control {

    using nlohmann::json;

    namespace {

        std::string trim(const std::string& s)
        {
            auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos) return "";
            auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        double to_real(const std::string& key, const std::string& v)
        {
            try {
                std::size_t used = 0;
                double d = std::stod(v, &used);
                if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
                return d;
            } catch (const std::exception&) {
                throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
            }
        }

        int to_int(const std::string& key, const std::string& v)
        {
            try {
                std::size_t used = 0;
                long n = std::stol(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
                return static_cast<int>(n);
            } catch (const std::exception&) {
                throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
            }
        }

        Precision precision_of(const std::string& s)
        {
            if (s == "auto") return Precision::automatic;
            if (s == "standard") return Precision::standard;
            if (s == "extended") return Precision::extended;
            throw ConfigError("config: precision must be auto, standard or extended");
        }

        double seconds_since(std::chrono::steady_clock::time_point t0)
        {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }

        json params_json(const ProblemParams& p)
        {
            return {{"alpha", p.alpha}, {"beta", p.beta},   {"mu", p.mu},       {"T", p.horizon_T},
                    {"kappa", p.kappa}, {"nu", p.nu},       {"gamma", p.gamma}, {"mu_crit", p.mu_crit}};
        }

        json proof_json(const ProofReport& r)
        {
            json items = json::array();
            for (const ProofItem& it : r.items)
                items.push_back({{"name", it.name}, {"pass", it.pass}, {"worst", it.worst}, {"witness", it.witness}});
            return {{"all_pass", r.all_pass()}, {"items", items}};
        }

        std::vector<Mode> head(const std::vector<Mode>& modes, int K)
        {
            return {modes.begin(), modes.begin() + std::min<std::size_t>(K, modes.size())};
        }

    }

    void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value)
    {
        std::string key = trim(raw_key), v = trim(raw_value);
        if (key == "alpha") cfg.alpha = to_real(key, v);
        else if (key == "beta") cfg.beta = to_real(key, v);
        else if (key == "mu") cfg.mu = to_real(key, v);
        else if (key == "T") cfg.T = to_real(key, v);
        else if (key == "modes") cfg.modes = to_int(key, v);
        else if (key == "monitor_modes") cfg.monitor_modes = to_int(key, v);
        else if (key == "delta") cfg.delta_param = to_real(key, v);
        else if (key == "samples") cfg.time_samples = to_int(key, v);
        else if (key == "quad_panels") cfg.quad_panels = to_int(key, v);
        else if (key == "quad_order") cfg.quad_order = to_int(key, v);
        else if (key == "u0") cfg.initial_state = v;
        else if (key == "terminal_tol") cfg.terminal_tol = to_real(key, v);
        else if (key == "gram_tol") cfg.gram_tol = to_real(key, v);
        else if (key == "c_cal") cfg.c_cal = to_real(key, v);
        else if (key == "precision") { precision_of(v); cfg.precision = v; }
        else if (key == "threads") cfg.threads = to_int(key, v);
        else if (key == "out") cfg.report_path = v;
        else if (key == "control_out") cfg.control_path = v;
        else if (key == "psi_out") cfg.psi_path = v;
        else throw ConfigError("config: unknown key '" + key + "'");
    }

    RunConfig parse_config(const std::string& text, RunConfig cfg)
    {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        }
        return cfg;
    }

    RunConfig load_config(const std::string& path, RunConfig base)
    {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot read '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_config(ss.str(), base);
    }

    void validate(const RunConfig& cfg)
    {
        if (cfg.modes < 1) throw ConfigError("config: modes must be at least 1");
        if (cfg.monitored() < cfg.modes) throw ConfigError("config: monitor_modes must be at least modes");
        if (cfg.time_samples < 64) throw ConfigError("config: samples must be at least 64");
        if (!(cfg.delta_param > 0.0 && cfg.delta_param < 1.0)) throw ConfigError("config: delta must lie in (0,1)");
        if (cfg.quad_panels < 1 || cfg.quad_order < 2) throw ConfigError("config: bad quadrature layout");
        if (!(cfg.terminal_tol > 0.0) || !(cfg.gram_tol > 0.0)) throw ConfigError("config: tolerances must be positive");
        if (!(cfg.c_cal > 0.0)) throw ConfigError("config: c_cal must be positive");
        if (cfg.threads < 1) throw ConfigError("config: threads must be at least 1");
        precision_of(cfg.precision);
    }

    State initial_state(const RunConfig& cfg, const ProblemParams& p, const std::vector<Mode>& modes)
    {
        const std::string& s = cfg.initial_state;
        State u;
        if (s == "first") {
            u = first_mode_state(p, head(modes, cfg.modes));
        } else if (s.rfind("mode:", 0) == 0) {
            int k = to_int("u0", s.substr(5));
            if (k < 1 || k > cfg.modes) throw ConfigError("config: u0 mode index outside 1..modes");
            u.coefficients.assign(k, 0.0);
            u.coefficients[k - 1] = 1.0;
        } else {
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ',')) u.coefficients.push_back(to_real("u0", trim(item)));
            if (u.coefficients.empty()) throw ConfigError("config: empty u0");
            if (u.truncation() > cfg.modes) throw ConfigError("config: u0 has more coefficients than modes");
        }
        return u;
    }

    RunResult run_pipeline(const RunConfig& cfg)
    {
        RunResult res;
        json rep;
        rep["schema_version"] = report_schema_version;
        auto fail = [&](int code, const std::string& msg) {
            res.exit_code = code;
            res.message = msg;
            rep["exit_code"] = code;
            rep["status"] = msg;
            res.report_json = rep.dump(2);
            return res;
        };

        const auto t_start = std::chrono::steady_clock::now();
        ProblemParams p;
        try {
            validate(cfg);
            p = derive(cfg.alpha, cfg.beta, cfg.mu, cfg.T);
        } catch (const std::invalid_argument& e) {
            return fail(exit_config, e.what());
        }
        rep["params"] = params_json(p);
        rep["config"] = {{"modes", cfg.modes},
                         {"monitor_modes", cfg.monitored()},
                         {"delta", cfg.delta_param},
                         {"samples", cfg.time_samples},
                         {"quad_panels", cfg.quad_panels},
                         {"quad_order", cfg.quad_order},
                         {"u0", cfg.initial_state},
                         {"terminal_tol", cfg.terminal_tol},
                         {"gram_tol", cfg.gram_tol},
                         {"c_cal", cfg.c_cal},
                         {"precision", cfg.precision},
                         {"threads", cfg.threads}};
        json timings;

        auto t0 = std::chrono::steady_clock::now();
        State u0;
        try {
            QuadratureRule rule = make_rule(p.kappa, cfg.quad_panels, cfg.quad_order);
            res.modes = compute_modes(p, cfg.monitored(), rule);
            u0 = initial_state(cfg, p, res.modes);
        } catch (const BesselError& e) {
            return fail(exit_special_function, e.what());
        } catch (const std::invalid_argument& e) {
            return fail(exit_config, e.what());
        }
        timings["spectrum"] = seconds_since(t0);
        json eig = json::array();
        for (const Mode& m : res.modes)
            eig.push_back({{"k", m.index}, {"zero", m.zero}, {"lambda", m.lambda}, {"gen_deriv", m.gen_deriv}});
        rep["eigenvalues"] = eig;

        const std::vector<Mode> controlled = head(res.modes, cfg.modes);
        t0 = std::chrono::steady_clock::now();
        try {
            FamilyOptions opts;
            opts.threads = cfg.threads;
            opts.precision = precision_of(cfg.precision);
            res.family = biorthogonal_family(p, controlled, cfg.T, cfg.delta_param, cfg.time_samples, opts);
        } catch (const FamilyError& e) {
            return fail(exit_family, e.what());
        } catch (const BesselError& e) {
            return fail(exit_special_function, e.what());
        }
        timings["family"] = seconds_since(t0);
        const BiorthogonalFamily& fam = res.family;
        json sup = json::array();
        for (int k = 0; k < fam.size(); ++k) sup.push_back(fam.psi_sup(k));
        rep["family"] = {{"gram_max_deviation", fam.gram_max_deviation},
                         {"gram", fam.gram},
                         {"extended_precision", fam.extended},
                         {"cancellation_log", fam.cancellation_log},
                         {"truncation_radius", fam.truncation_radius},
                         {"imag_residue", fam.imag_residue},
                         {"psi_sup", sup}};

        t0 = std::chrono::steady_clock::now();
        res.control = synthesize_control(u0, fam, controlled);
        timings["control"] = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        res.terminal = controlled_evolve(u0, res.modes, res.control, cfg.T);
        timings["simulate"] = seconds_since(t0);
        double terminal_max = 0.0;
        json term = json::array();
        for (double c : res.terminal.coefficients) {
            term.push_back(std::fabs(c));
            terminal_max = std::max(terminal_max, std::fabs(c));
        }
        if (!std::isfinite(terminal_max)) terminal_max = HUGE_VAL;
        rep["terminal"] = {{"abs_coefficients", term}, {"max", terminal_max}, {"tol", cfg.terminal_tol}};

        t0 = std::chrono::steady_clock::now();
        CostReport cost = cost_report(p, cfg.delta_param, cfg.c_cal, res.control);
        double u0_norm = u0.norm();
        double c_fit = calibrate_upper_constant(p, cfg.delta_param, res.control, u0_norm);
        rep["cost"] = {{"upper_value", cost.upper_value},
                       {"lower_value", cost.lower_value},
                       {"lower_constant", 1.0},
                       {"achieved_L2", cost.achieved_L2},
                       {"achieved_sup", cost.achieved_sup},
                       {"c_cal", cost.c_cal},
                       {"c_cal_fitted", c_fit},
                       {"u0_norm", u0_norm},
                       {"delta", cost.delta_param}};

        // the chain is stated for the normalized first mode, whatever u0 is
        ControlSignal f_first = synthesize_control(first_mode_state(p, controlled), fam, controlled);
        ProofReport chain = verify_proof_chain(p, fam, controlled, f_first);
        rep["proof_chain"] = proof_json(chain);
        timings["bounds"] = seconds_since(t0);
        timings["total"] = seconds_since(t_start);
        rep["timings_s"] = timings;

        bool gram_ok = fam.gram_max_deviation <= cfg.gram_tol;
        bool terminal_ok = terminal_max <= cfg.terminal_tol;
        rep["checks"] = {{"gram", gram_ok}, {"terminal", terminal_ok}, {"proof_chain", chain.all_pass()}};
        if (!gram_ok) return fail(exit_family, "gram matrix deviates from the identity beyond gram_tol");
        if (!terminal_ok) return fail(exit_terminal, "terminal coefficients exceed terminal_tol");
        if (!chain.all_pass()) {
            std::string which;
            for (const ProofItem& it : chain.items)
                if (!it.pass) which += (which.empty() ? "" : ", ") + it.name + " at " + it.witness;
            return fail(exit_terminal, "proof chain failed: " + which);
        }
        return fail(exit_ok, "ok");
    }

    void write_control_csv(const std::string& path, const ControlSignal& f)
    {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << "t,f\n" << std::setprecision(17);
        for (int i = 0; i <= f.intervals(); ++i) out << f.time(i) << ',' << f.samples[i] << '\n';
    }

    void write_psi_csv(const std::string& path, const BiorthogonalFamily& fam)
    {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        std::vector<std::vector<double>> cols;
        out << "t";
        for (int k = 0; k < fam.size(); ++k) {
            out << ",psi_" << k + 1;
            std::vector<double> col(fam.times.size());
            for (std::size_t i = 0; i < col.size(); ++i)
                col[i] = fam.shape[k][i] * std::exp(fam.log_scale[k]);
            cols.push_back(std::move(col));
        }
        out << '\n' << std::setprecision(17);
        for (std::size_t i = 0; i < fam.times.size(); ++i) {
            out << fam.times[i];
            for (const auto& c : cols) out << ',' << c[i];
            out << '\n';
        }
    }

    RunResult run_and_write(const RunConfig& cfg)
    {
        RunResult res = run_pipeline(cfg);
        std::ofstream rep(cfg.report_path);
        if (rep) rep << res.report_json << '\n';
        if (!res.control.samples.empty()) write_control_csv(cfg.control_path, res.control);
        if (!cfg.psi_path.empty() && res.family.size() > 0) write_psi_csv(cfg.psi_path, res.family);
        return res;
    }

    SuiteResult orthonormality_suite(const ProblemParams& p, int K, const QuadratureRule& rule)
    {
        SuiteResult r{"orthonormality", suite_orthonormality, false, 0.0, ""};
        std::vector<Mode> modes = compute_modes(p, K, rule);
        for (int i = 0; i < K; ++i) {
            for (int j = i; j < K; ++j) {
                double g = inner_product_beta(
                    p, [&](double x) { return eigenfunction_eval(p, modes[i], x); },
                    [&](double x) { return eigenfunction_eval(p, modes[j], x); }, rule);
                double dev = std::fabs(g - (i == j ? 1.0 : 0.0));
                if (dev > r.worst) {
                    r.worst = dev;
                    r.detail = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
                }
            }
        }
        r.pass = r.worst <= 1e-7;
        return r;
    }

    SuiteResult hardy_poincare_suite(const ProblemParams& p, const QuadratureRule& rule)
    {
        SuiteResult r{"hardy_poincare", suite_hardy_poincare, false, -HUGE_VAL, ""};
        std::vector<TestFunction> family = bump_family(10);
        for (std::size_t n = 0; n < family.size(); ++n) {
            auto [hl, hr] = hardy_check(p, family[n], rule);
            auto [pl, pr] = poincare_check(p, family[n], rule);
            if (hl - hr > r.worst) { r.worst = hl - hr; r.detail = "hardy, bump " + std::to_string(n); }
            if (pl - pr > r.worst) { r.worst = pl - pr; r.detail = "poincare, bump " + std::to_string(n); }
        }
        r.pass = r.worst <= 1e-10;
        return r;
    }

    SuiteResult bessel_suite(double nu)
    {
        SuiteResult r{"bessel", suite_bessel, true, 0.0, ""};
        auto flag = [&](bool ok, const std::string& what) {
            if (!ok && r.pass) { r.pass = false; r.detail = what; }
        };
        std::vector<double> orders{0.0, 0.25, 0.5, 1.0, 2.0};
        if (std::find(orders.begin(), orders.end(), nu) == orders.end()) orders.push_back(nu);
        for (double v : orders) {
            const std::vector<double>& j = zeros(v, 40).zeros;
            std::string tag = " (nu=" + std::to_string(v) + ")";
            double shift = v <= 0.5 ? 0.25 : 0.125;
            for (int k = 1; k <= 40; ++k) flag(j[k - 1] >= (k - shift) * M_PI, "zero lower bound" + tag);
            for (int k = 0; k + 2 < 40; ++k) {
                double change = (j[k + 2] - j[k + 1]) - (j[k + 1] - j[k]);
                if (std::fabs(v - 0.5) < 1e-12) flag(std::fabs(change) < 1e-10, "constant spacing" + tag);
                else if (v > 0.5) flag(change < 0.0, "decreasing spacing" + tag);
                else flag(change > 0.0, "increasing spacing" + tag);
            }
            auto gap = [&](int k) {
                return std::fabs(std::sqrt(j[k - 1]) * std::fabs(eval_J_prime(v, j[k - 1])) - std::sqrt(2.0 / M_PI));
            };
            // at order 1/2 both gaps vanish identically
            flag(gap(40) < gap(10) || std::max(gap(40), gap(10)) < 1e-13, "amplitude gap" + tag);
        }
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> on(0.0, 5.0), ox(1e-3, 50.0);
        for (int i = 0; i < 200; ++i) {
            double v = on(rng), x = ox(rng);
            double res = std::fabs(x * eval_J_prime(v, x) - v * eval_J(v, x) + x * eval_J(v + 1.0, x));
            r.worst = std::max(r.worst, res);
            flag(res <= 1e-10, "recurrence residual");
        }
        for (int i = 0; i <= 600; ++i) {
            double x = 0.1 + (60.0 - 0.1) * i / 600.0;
            double amp = std::sqrt(2.0 / (M_PI * x));
            flag(std::fabs(eval_J(0.5, x) - amp * std::sin(x)) <= 1e-11, "half-integer closed form");
            flag(std::fabs(eval_J(1.5, x) - amp * (std::sin(x) / x - std::cos(x))) <= 1e-11,
                 "half-integer closed form");
        }
        return r;
    }

    SuiteResult lambda_suite(const ProblemParams& p, const std::vector<Mode>& modes)
    {
        SuiteResult r{"lambda_product", suite_lambda, false, 0.0, ""};
        const double l1 = modes.at(0).lambda;
        const cplx pts[] = {{0.5 * l1, 0.0}, {-5.0 * l1, 0.0}, {l1, 2.0 * l1}, {3.0 * l1, -4.0 * l1}};
        for (cplx z : pts) {
            cplx exact = lambda_eval(p, z);
            double err = std::abs(lambda_product(p, z, 4000, true) - exact) / std::abs(exact);
            if (err > r.worst) {
                std::ostringstream os;
                os << "z=" << z;
                r.worst = err;
                r.detail = os.str();
            }
        }
        r.pass = r.worst <= 1e-8;
        return r;
    }

    SuiteResult multiplier_suite(const ProblemParams& p, const std::vector<Mode>& modes, double delta_param)
    {
        Multiplier m = make_multiplier(p, delta_param);
        ProofItem lo = check_multiplier_lower(m, modes), up = check_multiplier_upper(m);
        SuiteResult r{"multiplier", suite_multiplier, lo.pass && up.pass, std::max(lo.worst, up.worst), ""};
        r.detail = lo.pass ? up.witness : lo.witness;
        return r;
    }

    VerifyResult run_verify(const RunConfig& cfg)
    {
        VerifyResult out;
        json rep;
        rep["schema_version"] = report_schema_version;
        ProblemParams p;
        try {
            validate(cfg);
            p = derive(cfg.alpha, cfg.beta, cfg.mu, cfg.T);
        } catch (const std::invalid_argument& e) {
            out.exit_code = exit_config;
            rep["exit_code"] = out.exit_code;
            rep["status"] = e.what();
            out.report_json = rep.dump(2);
            return out;
        }
        rep["params"] = params_json(p);
        try {
            QuadratureRule rule = make_rule(p.kappa, cfg.quad_panels, cfg.quad_order);
            std::vector<Mode> modes = compute_modes(p, std::max(3, cfg.modes), rule);
            out.suites.push_back(orthonormality_suite(p, 12, rule));
            out.suites.push_back(hardy_poincare_suite(p, rule));
            out.suites.push_back(bessel_suite(p.nu));
            out.suites.push_back(lambda_suite(p, modes));
            out.suites.push_back(multiplier_suite(p, modes, cfg.delta_param));
        } catch (const BesselError& e) {
            out.exit_code = exit_special_function;
            rep["exit_code"] = out.exit_code;
            rep["status"] = e.what();
            out.report_json = rep.dump(2);
            return out;
        }
        json suites = json::array();
        for (const SuiteResult& s : out.suites) {
            suites.push_back({{"name", s.name}, {"pass", s.pass}, {"worst", s.worst}, {"detail", s.detail}});
            if (!s.pass && out.exit_code == exit_ok) out.exit_code = s.code;
        }
        rep["suites"] = suites;
        rep["exit_code"] = out.exit_code;
        rep["status"] = out.exit_code == exit_ok ? "ok" : "suite failure";
        out.report_json = rep.dump(2);
        return out;
    }

}
