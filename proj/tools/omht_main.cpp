#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omht/csl.hpp"
#include "omht/csv_io.hpp"
#include "omht/inference.hpp"
#include "omht/linear_dynamics.hpp"
#include "omht/optomech.hpp"
#include "omht/scenario.hpp"
#include "omht/validation.hpp"

namespace {

struct CommonOpts {
    std::string out;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string grid;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out, "output CSV path (metadata sidecar goes next to it)");
    cmd->add_option("--seed", o.seed, "override the PRNG seed recorded in the metadata");
    cmd->add_option("--threads", o.threads, "worker threads for the sweep")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--grid", o.grid, "time grid override: t_min,t_max,points,log|lin");
}

omht::TimeGrid parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() != 4) {
        throw std::invalid_argument("--grid expects t_min,t_max,points,log|lin");
    }
    omht::TimeGrid g;
    g.t_min = std::stod(parts[0]);
    g.t_max = std::stod(parts[1]);
    g.points = std::stoi(parts[2]);
    if (parts[3] == "log") {
        g.log_spacing = true;
    } else if (parts[3] == "lin") {
        g.log_spacing = false;
    } else {
        throw std::invalid_argument("--grid spacing must be 'log' or 'lin'");
    }
    return g;
}

void print_config_diagnostics(const omht::ScenarioConfig& cfg) {
    const double alpha = omht::cavity_amplitude(cfg.system);
    const double n_th = omht::thermal_occupation(cfg.system.T_bath, cfg.system.omega_m);
    const double delta = cfg.resolve_delta();
    std::printf("[%s] alpha = %.6e, intracavity photons alpha^2 = %.6e\n",
                cfg.label.c_str(), alpha, alpha * alpha);
    std::printf("[%s] n_th = %.6e, delta = %.6e s^-1, n_csl = %.6e\n", cfg.label.c_str(),
                n_th, delta, omht::csl_occupation(n_th, delta, cfg.system.gamma_m));
}

int run_and_emit(std::vector<omht::ScenarioConfig> cfgs, const CommonOpts& o,
                 const std::string& default_out) {
    for (omht::ScenarioConfig& c : cfgs) {
        if (o.seed) c.seed = *o.seed;
        if (!o.grid.empty()) c.grid = parse_grid(o.grid);
        print_config_diagnostics(c);
    }
    const std::string out = o.out.empty() ? default_out : o.out;
    const omht::SweepResult result = omht::run_configs(cfgs, o.threads);
    omht::emit_csv(result, out);
    omht::emit_metadata(cfgs, result, out, o.threads);
    std::size_t flagged = 0;
    for (const omht::SweepRow& r : result.rows) {
        if (!r.diagnostics.empty()) ++flagged;
    }
    std::printf("wrote %zu rows to %s (+ %s.meta.json)\n", result.rows.size(), out.c_str(),
                out.c_str());
    if (flagged > 0) {
        std::printf("note: %zu rows carry diagnostics flags (see metadata sidecar)\n",
                    flagged);
    }
    return 0;
}

int do_validate(int fock_pairs, int fock_cutoff) {
    bool all_ok = true;
    auto report = [&](const char* kind, const std::string& name, bool ok, double worst,
                      double tol, const std::string& detail) {
        all_ok = all_ok && ok;
        std::printf("[%s] %-24s %s  worst %.3e (tol %.1e)  %s\n", kind, name.c_str(),
                    ok ? "PASS" : "FAIL", worst, tol, detail.c_str());
    };

    for (const omht::validation::GateResult& g :
         omht::validation::run_fidelity_gates(fock_pairs, fock_cutoff)) {
        report("gate", g.name, g.passed, g.worst, g.tolerance, g.detail);
    }

    const omht::SystemParams sys = omht::SystemParams::defaults();
    const auto a = omht::drift_matrix(sys);
    const auto sig_in =
        omht::input_covariance(omht::InputNoiseSpec::thermal(100.0, 100.0), sys.kappa);
    const auto d = omht::diffusion_matrix(sys, 1e6, sig_in);
    {
        const Eigen::MatrixXd ss = omht::lyapunov_steady_state(a, d);
        const double resid = (a * ss + ss * a.transpose() + d).norm();
        report("check", "lyapunov-residual", resid <= 1e-10 * d.norm(), resid,
               1e-10 * d.norm(), "steady state under thermal input");
    }
    {
        const double t = 1e-2;
        const Eigen::MatrixXd s0 = omht::initial_state(sys, 1e6);
        const Eigen::MatrixXd direct = omht::propagate_covariance(a, d, s0, {t}).back();
        const Eigen::MatrixXd half = omht::propagate_covariance(a, d, s0, {t / 2}).back();
        const Eigen::MatrixXd composed =
            omht::propagate_covariance(a, d, half, {t / 2}).back();
        const double dev = (direct - composed).cwiseAbs().maxCoeff() /
                           std::max(1.0, direct.cwiseAbs().maxCoeff());
        report("check", "midpoint-composition", dev <= 1e-9, dev, 1e-9,
               "t = 1e-2 s, relative");
    }
    {
        omht::TestConfig tc;
        tc.N = 100;
        tc.alpha = 0.05;
        tc.V0 = 2.0;
        tc.V1 = 2.0;
        const double p_err = omht::error_probability(tc).p_err;
        const double dev1 = std::abs(p_err - 0.5);
        const double dev2 = std::abs(omht::classical_bound(1.0, 100) - 0.5);
        report("check", "degenerate-limits", dev1 <= 1e-12 && dev2 <= 1e-12,
               std::max(dev1, dev2), 1e-12, "V1 = V0 and F = 1");
    }
    {
        std::vector<omht::ScenarioConfig> cfgs = omht::preset("fig2");
        for (omht::ScenarioConfig& c : cfgs) c.grid.points = 120;
        bool ok = true;
        double worst = std::numeric_limits<double>::infinity();
        long points = 0;
        for (const omht::ScenarioConfig& c : cfgs) {
            const omht::validation::PhysicalityScan scan =
                omht::validation::physicality_scan(c);
            ok = ok && scan.all_physical;
            worst = std::min(worst, scan.worst_margin);
            points += scan.points_checked;
        }
        report("check", "state-physicality", ok, worst, 0.0,
               "fig2 arms on a 120-point grid, margin above threshold");
    }

    std::printf("validate: %s\n", all_ok ? "ALL PASS" : "FAILURES PRESENT");
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-cavity optomechanical sweeps: collapse-noise hypothesis testing"};
    app.require_subcommand(1);

    CLI::App* cmd_run = app.add_subcommand("run", "run a sweep described by a JSON config");
    std::string config_path;
    cmd_run->add_option("config", config_path, "JSON config file")->required();
    CommonOpts run_opts;
    add_common(cmd_run, run_opts);

    CLI::App* cmd_preset = app.add_subcommand("preset", "run a named built-in sweep");
    std::string preset_name;
    cmd_preset
        ->add_option("name", preset_name, "one of: fig2 fig3 fig4 fig5 fig6 fig7 fig8")
        ->required()
        ->check(CLI::IsMember(omht::preset_names()));
    CommonOpts preset_opts;
    add_common(cmd_preset, preset_opts);

    CLI::App* cmd_rate = app.add_subcommand("csl-rate", "collapse-induced heating rate");
    omht::CslParams csl = omht::CslParams::defaults();
    double omega_m = omht::SystemParams::defaults().omega_m;
    double gamma_m = omht::SystemParams::defaults().gamma_m;
    bool angular = false;
    cmd_rate->add_option("--gamma-csl", csl.gamma_csl, "collapse rate parameter, m^3 Hz");
    cmd_rate->add_option("--r-c", csl.r_C, "correlation length, m");
    cmd_rate->add_option("--radius", csl.R_sphere, "sphere radius, m");
    cmd_rate->add_option("--mass", csl.m, "sphere mass, kg");
    cmd_rate->add_option("--omega-m", omega_m, "mechanical frequency, rad/s");
    cmd_rate->add_option("--gamma-m", gamma_m, "mechanical damping, rad/s (diagnostics)");
    cmd_rate->add_flag("--angular-prefactor", angular,
                       "use omega in rad/s in the prefactor instead of omega/2pi");

    CLI::App* cmd_validate =
        app.add_subcommand("validate", "run the oracle gates and numeric self-checks");
    int fock_pairs = 50, fock_cutoff = 40;
    cmd_validate->add_option("--pairs", fock_pairs, "random CM pairs for the Fock gate")
        ->check(CLI::PositiveNumber);
    cmd_validate->add_option("--cutoff", fock_cutoff, "Fock-space cutoff per mode")
        ->check(CLI::Range(4, 80));

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            const omht::ScenarioConfig cfg = omht::config_from_json_file(config_path);
            return run_and_emit({cfg}, run_opts, cfg.label + ".csv");
        }
        if (cmd_preset->parsed()) {
            return run_and_emit(omht::preset(preset_name), preset_opts,
                                preset_name + ".csv");
        }
        if (cmd_rate->parsed()) {
            const auto start = std::chrono::steady_clock::now();
            omht::CslOptions opts;
            opts.prefactor = angular ? omht::PrefactorFrequency::Angular
                                     : omht::PrefactorFrequency::Cycles;
            const double delta = omht::csl_delta(csl, omega_m, opts);
            const double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
            const double n_th = omht::thermal_occupation(1e-3, omega_m);
            std::printf("Delta = %.8e s^-1  (%.2f ms)\n", delta, ms);
            std::printf("n_th = %.6e, n_csl = %.6e\n", n_th,
                        omht::csl_occupation(n_th, delta, gamma_m));
            return 0;
        }
        if (cmd_validate->parsed()) {
            return do_validate(fock_pairs, fock_cutoff);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
