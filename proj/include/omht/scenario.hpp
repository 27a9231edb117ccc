#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omht/csl.hpp"
#include "omht/inference.hpp"
#include "omht/optomech.hpp"

namespace omht {

struct TimeGrid {
    double t_min = 1e-9;
    double t_max = 0.0;  // 0 means "resolve to 20 / gamma_m"
    int points = 400;
    bool log_spacing = true;

    std::vector<double> times(double gamma_m) const;
    void validate() const;
};

// One sweep definition: which probe light, which quadrature is tested, the
// time grid, and optional axes over squeezing angle, heating rate, photon
// number and sample size. Empty axes fall back to the scalar defaults.
struct ScenarioConfig {
    std::string label = "scenario";
    SystemParams system;
    std::optional<CslParams> csl;        // used when no explicit rate is given
    CslOptions csl_options;
    std::optional<double> delta_override;  // heating rate, s^-1
    InputNoiseSpec input_noise = InputNoiseSpec::thermal(100.0, 100.0);
    int N = 100;
    double alpha = 0.05;
    QuadratureSelector selector = QuadratureSelector::x_out1;
    TimeGrid grid;
    struct Sweep {
        std::vector<double> phi;
        std::vector<double> delta;
        std::vector<double> n;
        std::vector<int> N;
    } sweep;
    std::uint64_t seed = 0;

    double resolve_delta() const;  // sweep-independent default heating rate
    void validate() const;
};

struct SweepRow {
    double t = 0.0;
    QuadratureSelector selector = QuadratureSelector::x_out1;
    double phi = 0.0;       // NaN for inputs that carry no squeezing angle
    double delta = 0.0;     // heating rate under H1, s^-1
    double n1 = 0.0;
    double n2 = 0.0;
    int N = 0;
    double alpha = 0.0;
    double V0 = 0.0;
    double V1 = 0.0;
    double F = 0.0;         // output-state fidelity of the thermal-probe arms
    double C = 0.0;         // classical bound from F
    double Perr = 0.0;      // analytic mean error probability
    double Q_pct = 0.0;     // advantage in percent
    std::string diagnostics;  // empty, or a flag such as "degenerate: V1 == V0"
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

// Runs the full discrimination pipeline on every sweep combination and grid
// time: evolve both hypothesis arms from their own relaxed initial states,
// read off the tested variance, evaluate the analytic error probability, and
// bound any classical strategy through the fidelity of thermal-probe arms
// with the same per-mode photon numbers.
SweepResult run_scenario(const ScenarioConfig& cfg, int threads = 1);

// Named preset sweeps (fig2..fig8). Most map to a single config; the
// four-protocol comparison returns one config per protocol.
std::vector<ScenarioConfig> preset(const std::string& name);
std::vector<std::string> preset_names();

SweepResult run_configs(const std::vector<ScenarioConfig>& cfgs, int threads = 1);

}  // namespace omht
