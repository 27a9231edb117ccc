#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "omht/csv_io.hpp"
#include "omht/errors.hpp"
#include "omht/scenario.hpp"

namespace omht {

using nlohmann::json;

namespace {

// Unknown keys are hard errors: a silently ignored typo in a physics config
// is worse than a failed run.
void check_keys(const json& j, const char* section,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
        throw std::invalid_argument(std::string("config: section '") + section +
                                    "' must be a JSON object");
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (!ok.count(item.key())) {
            throw std::invalid_argument(std::string("config: unknown key '") + item.key() +
                                        "' in section '" + section + "'");
        }
    }
}

double need_number(const json& j, const char* section, const char* key) {
    if (!j.at(key).is_number()) {
        throw std::invalid_argument(std::string("config: '") + section + "." + key +
                                    "' must be a number");
    }
    return j.at(key).get<double>();
}

void parse_system(const json& j, SystemParams& p) {
    check_keys(j, "system",
               {"omega_m", "gamma_m", "T_bath", "omega_c", "kappa", "delta", "P_pump", "m",
                "L", "R_sphere"});
    if (j.contains("omega_m")) p.omega_m = need_number(j, "system", "omega_m");
    if (j.contains("gamma_m")) p.gamma_m = need_number(j, "system", "gamma_m");
    if (j.contains("T_bath")) p.T_bath = need_number(j, "system", "T_bath");
    if (j.contains("omega_c")) p.omega_c = need_number(j, "system", "omega_c");
    if (j.contains("kappa")) p.kappa = need_number(j, "system", "kappa");
    if (j.contains("delta")) p.delta = need_number(j, "system", "delta");
    if (j.contains("P_pump")) p.P_pump = need_number(j, "system", "P_pump");
    if (j.contains("m")) p.m = need_number(j, "system", "m");
    if (j.contains("L")) p.L = need_number(j, "system", "L");
    if (j.contains("R_sphere")) p.R_sphere = need_number(j, "system", "R_sphere");
}

void parse_csl(const json& j, ScenarioConfig& cfg) {
    check_keys(j, "csl",
               {"gamma_csl", "r_C", "R_sphere", "m", "prefactor_frequency", "rel_tol"});
    CslParams c = CslParams::defaults();
    c.R_sphere = cfg.system.R_sphere;
    c.m = cfg.system.m;
    if (j.contains("gamma_csl")) c.gamma_csl = need_number(j, "csl", "gamma_csl");
    if (j.contains("r_C")) c.r_C = need_number(j, "csl", "r_C");
    if (j.contains("R_sphere")) c.R_sphere = need_number(j, "csl", "R_sphere");
    if (j.contains("m")) c.m = need_number(j, "csl", "m");
    if (j.contains("prefactor_frequency")) {
        const std::string s = j.at("prefactor_frequency").get<std::string>();
        if (s == "cycles") {
            cfg.csl_options.prefactor = PrefactorFrequency::Cycles;
        } else if (s == "angular") {
            cfg.csl_options.prefactor = PrefactorFrequency::Angular;
        } else {
            throw std::invalid_argument(
                "config: csl.prefactor_frequency must be 'cycles' or 'angular'");
        }
    }
    if (j.contains("rel_tol")) cfg.csl_options.rel_tol = need_number(j, "csl", "rel_tol");
    cfg.csl = c;
}

void parse_input_noise(const json& j, InputNoiseSpec& spec) {
    check_keys(j, "input_noise", {"kind", "n1", "n2", "n", "r", "phi"});
    const std::string kind = j.value("kind", std::string("thermal"));
    if (kind == "vacuum") {
        spec = InputNoiseSpec::vacuum();
        if (j.size() > 1) {
            throw std::invalid_argument("config: vacuum input takes no extra keys");
        }
        return;
    }
    if (kind == "thermal") {
        double n1 = 100.0, n2 = 100.0;
        if (j.contains("n")) n1 = n2 = need_number(j, "input_noise", "n");
        if (j.contains("n1")) n1 = need_number(j, "input_noise", "n1");
        if (j.contains("n2")) n2 = need_number(j, "input_noise", "n2");
        if (j.contains("r") || j.contains("phi")) {
            throw std::invalid_argument("config: thermal input takes no squeezing keys");
        }
        spec = InputNoiseSpec::thermal(n1, n2);
        return;
    }
    if (kind == "tms") {
        if (j.contains("n1") || j.contains("n2")) {
            throw std::invalid_argument("config: tms input uses 'n' (photons per mode), not n1/n2");
        }
        if (j.contains("n") && j.contains("r")) {
            throw std::invalid_argument("config: give either tms 'n' or 'r', not both");
        }
        double r = photon_to_squeezing(100.0);
        if (j.contains("n")) r = photon_to_squeezing(need_number(j, "input_noise", "n"));
        if (j.contains("r")) r = need_number(j, "input_noise", "r");
        const double phi = j.contains("phi") ? need_number(j, "input_noise", "phi") : 0.0;
        spec = InputNoiseSpec::two_mode_squeezed(r, phi);
        return;
    }
    throw std::invalid_argument("config: input_noise.kind must be vacuum, thermal or tms");
}

void parse_test(const json& j, ScenarioConfig& cfg) {
    check_keys(j, "test", {"N", "alpha", "selector"});
    if (j.contains("N")) cfg.N = j.at("N").get<int>();
    if (j.contains("alpha")) cfg.alpha = need_number(j, "test", "alpha");
    if (j.contains("selector")) {
        cfg.selector = selector_from_name(j.at("selector").get<std::string>());
    }
}

void parse_grid(const json& j, TimeGrid& g) {
    check_keys(j, "time_grid", {"t_min", "t_max", "points", "spacing"});
    if (j.contains("t_min")) g.t_min = need_number(j, "time_grid", "t_min");
    if (j.contains("t_max")) g.t_max = need_number(j, "time_grid", "t_max");
    if (j.contains("points")) g.points = j.at("points").get<int>();
    if (j.contains("spacing")) {
        const std::string s = j.at("spacing").get<std::string>();
        if (s == "log") {
            g.log_spacing = true;
        } else if (s == "lin") {
            g.log_spacing = false;
        } else {
            throw std::invalid_argument("config: time_grid.spacing must be 'log' or 'lin'");
        }
    }
}

void parse_sweep(const json& j, ScenarioConfig::Sweep& s) {
    check_keys(j, "sweep", {"phi", "delta", "n", "N"});
    if (j.contains("phi")) s.phi = j.at("phi").get<std::vector<double>>();
    if (j.contains("delta")) s.delta = j.at("delta").get<std::vector<double>>();
    if (j.contains("n")) s.n = j.at("n").get<std::vector<double>>();
    if (j.contains("N")) s.N = j.at("N").get<std::vector<int>>();
}

}  // namespace

ScenarioConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    check_keys(j, "<root>",
               {"label", "system", "csl", "delta_override", "input_noise", "test",
                "time_grid", "sweep", "seed"});
    ScenarioConfig cfg;
    if (j.contains("label")) cfg.label = j.at("label").get<std::string>();
    if (j.contains("system")) parse_system(j.at("system"), cfg.system);
    if (j.contains("csl")) parse_csl(j.at("csl"), cfg);
    if (j.contains("delta_override")) {
        cfg.delta_override = need_number(j, "<root>", "delta_override");
    }
    if (j.contains("input_noise")) parse_input_noise(j.at("input_noise"), cfg.input_noise);
    if (j.contains("test")) parse_test(j.at("test"), cfg);
    if (j.contains("time_grid")) parse_grid(j.at("time_grid"), cfg.grid);
    if (j.contains("sweep")) parse_sweep(j.at("sweep"), cfg.sweep);
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.validate();
    return cfg;
}

ScenarioConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("config: cannot open '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

std::string config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["label"] = cfg.label;
    j["system"] = {
        {"omega_m", cfg.system.omega_m}, {"gamma_m", cfg.system.gamma_m},
        {"T_bath", cfg.system.T_bath},   {"omega_c", cfg.system.omega_c},
        {"kappa", cfg.system.kappa},     {"delta", cfg.system.delta},
        {"P_pump", cfg.system.P_pump},   {"m", cfg.system.m},
        {"L", cfg.system.L},             {"R_sphere", cfg.system.R_sphere},
    };
    if (cfg.csl) {
        j["csl"] = {
            {"gamma_csl", cfg.csl->gamma_csl},
            {"r_C", cfg.csl->r_C},
            {"R_sphere", cfg.csl->R_sphere},
            {"m", cfg.csl->m},
            {"prefactor_frequency",
             cfg.csl_options.prefactor == PrefactorFrequency::Cycles ? "cycles" : "angular"},
            {"rel_tol", cfg.csl_options.rel_tol},
        };
    }
    if (cfg.delta_override) j["delta_override"] = *cfg.delta_override;
    json noise;
    switch (cfg.input_noise.kind) {
        case NoiseKind::Vacuum:
            noise["kind"] = "vacuum";
            break;
        case NoiseKind::Thermal:
            noise["kind"] = "thermal";
            noise["n1"] = cfg.input_noise.n1;
            noise["n2"] = cfg.input_noise.n2;
            break;
        case NoiseKind::TwoModeSqueezed:
            noise["kind"] = "tms";
            noise["r"] = cfg.input_noise.r;
            noise["phi"] = cfg.input_noise.phi;
            break;
    }
    j["input_noise"] = noise;
    j["test"] = {{"N", cfg.N}, {"alpha", cfg.alpha}, {"selector", selector_name(cfg.selector)}};
    j["time_grid"] = {{"t_min", cfg.grid.t_min},
                      {"t_max", cfg.grid.t_max},
                      {"points", cfg.grid.points},
                      {"spacing", cfg.grid.log_spacing ? "log" : "lin"}};
    json sweep = json::object();
    if (!cfg.sweep.phi.empty()) sweep["phi"] = cfg.sweep.phi;
    if (!cfg.sweep.delta.empty()) sweep["delta"] = cfg.sweep.delta;
    if (!cfg.sweep.n.empty()) sweep["n"] = cfg.sweep.n;
    if (!cfg.sweep.N.empty()) sweep["N"] = cfg.sweep.N;
    if (!sweep.empty()) j["sweep"] = sweep;
    j["seed"] = cfg.seed;
    return j.dump(2);
}

}  // namespace omht
