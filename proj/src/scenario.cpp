#include "omht/scenario.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "omht/linear_dynamics.hpp"

namespace omht {

void TimeGrid::validate() const {
    if (!(t_min > 0.0)) {
        throw std::invalid_argument("TimeGrid: t_min must be positive");
    }
    if (points < 1) {
        throw std::invalid_argument("TimeGrid: points must be >= 1");
    }
    if (t_max != 0.0 && !(t_max > t_min)) {
        throw std::invalid_argument("TimeGrid: t_max must exceed t_min");
    }
}

std::vector<double> TimeGrid::times(double gamma_m) const {
    validate();
    const double hi = t_max > 0.0 ? t_max : 20.0 / gamma_m;
    if (!(hi > t_min)) {
        throw std::invalid_argument("TimeGrid: resolved t_max must exceed t_min");
    }
    std::vector<double> out(static_cast<std::size_t>(points));
    if (points == 1) {
        out[0] = t_min;
        return out;
    }
    for (int i = 0; i < points; ++i) {
        const double f = double(i) / double(points - 1);
        out[std::size_t(i)] = log_spacing
                                  ? t_min * std::pow(hi / t_min, f)
                                  : t_min + (hi - t_min) * f;
    }
    // guard against rounding making the last two points equal
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (!(out[i] > out[i - 1])) {
            throw std::invalid_argument("TimeGrid: grid is not strictly increasing");
        }
    }
    return out;
}

double ScenarioConfig::resolve_delta() const {
    if (delta_override) return *delta_override;
    if (csl) return csl_delta(*csl, system.omega_m, csl_options);
    return 1e6;  // default heating rate
}

void ScenarioConfig::validate() const {
    system.validate();
    input_noise.validate();
    grid.validate();
    if (N < 2) throw std::invalid_argument("ScenarioConfig: N must be >= 2");
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument("ScenarioConfig: alpha must be in (0, 1)");
    }
    for (double d : sweep.delta) {
        if (d < 0.0) throw std::invalid_argument("ScenarioConfig: sweep delta must be >= 0");
    }
    for (double n : sweep.n) {
        if (n < 0.0) throw std::invalid_argument("ScenarioConfig: sweep n must be >= 0");
    }
    if (input_noise.kind == NoiseKind::Vacuum && !sweep.n.empty()) {
        throw std::invalid_argument(
            "ScenarioConfig: a photon-number sweep needs a thermal or tms input");
    }
    for (int nn : sweep.N) {
        if (nn < 2) throw std::invalid_argument("ScenarioConfig: sweep N must be >= 2");
    }
    if (csl) csl->validate();
    if (delta_override && (*delta_override < 0.0 || !std::isfinite(*delta_override))) {
        throw std::invalid_argument("ScenarioConfig: delta_override must be >= 0");
    }
}

namespace {

struct Combo {
    double phi;
    double delta;
    double n;        // photons per input mode
    int N;
};

struct ArmTrajectory {
    // sigma(t) = steady + E(t) (sigma0 - steady) E(t)^T with E = exp(A t);
    // storing the pieces lets every grid point reuse one exponential.
    Matrix6d steady;
    Matrix6d offset;  // sigma0 - steady
};

ArmTrajectory make_arm(const Matrix6d& a, const Matrix6d& d, const Matrix6d& sigma0) {
    ArmTrajectory arm;
    arm.steady = lyapunov_steady_state(a, d);
    arm.offset = sigma0 - arm.steady;
    return arm;
}

Matrix6d eval_arm(const ArmTrajectory& arm, const Matrix6d& e) {
    Matrix6d s = arm.steady + e * arm.offset * e.transpose();
    return (s + s.transpose()) / 2.0;
}

struct ComboData {
    Combo combo;
    ArmTrajectory h0, h1;          // probe-light arms, hypothesis off/on
    ArmTrajectory th0, th1;        // thermal-matched arms for the classical bound
    bool probe_is_thermal = false; // then th arms coincide with h arms
    double n1 = 0.0, n2 = 0.0;
};

}  // namespace

SweepResult run_scenario(const ScenarioConfig& cfg, int threads) {
    cfg.validate();
    const Matrix6d a = drift_matrix(cfg.system);
    {
        const double max_re = max_eigenvalue_real_part(a);
        if (max_re >= -1e-12) {
            throw StabilityError("run_scenario: drift matrix is not Hurwitz "
                                 "(max eigenvalue real part " + std::to_string(max_re) + ")",
                                 max_re);
        }
    }
    const std::vector<double> grid = cfg.grid.times(cfg.system.gamma_m);
    const double base_delta = cfg.resolve_delta();

    const std::vector<double> phis =
        cfg.sweep.phi.empty() ? std::vector<double>{cfg.input_noise.phi} : cfg.sweep.phi;
    const std::vector<double> deltas =
        cfg.sweep.delta.empty() ? std::vector<double>{base_delta} : cfg.sweep.delta;
    std::vector<double> ns = cfg.sweep.n;
    if (ns.empty()) {
        ns.push_back(cfg.input_noise.kind == NoiseKind::TwoModeSqueezed
                         ? (std::cosh(2.0 * cfg.input_noise.r) - 1.0) / 2.0
                         : cfg.input_noise.n1);
    }
    const std::vector<int> sample_sizes =
        cfg.sweep.N.empty() ? std::vector<int>{cfg.N} : cfg.sweep.N;

    // combo order fixes the row order: N-major, then n, delta, phi, then time
    std::vector<ComboData> combos;
    for (int nn : sample_sizes) {
        for (double n : ns) {
            for (double delta : deltas) {
                for (double phi : phis) {
                    ComboData cd;
                    cd.combo = Combo{phi, delta, n, nn};
                    InputNoiseSpec probe = cfg.input_noise;
                    if (probe.kind == NoiseKind::TwoModeSqueezed) {
                        probe.r = photon_to_squeezing(n);
                        probe.phi = phi;
                        cd.n1 = cd.n2 = n;
                    } else {
                        probe.n1 = probe.n2 = n;
                        cd.n1 = cd.n2 = n;
                        cd.probe_is_thermal = true;
                    }
                    const Matrix4d sig_in = input_covariance(probe, cfg.system.kappa);
                    const Matrix6d d0 = diffusion_matrix(cfg.system, 0.0, sig_in);
                    const Matrix6d d1 = diffusion_matrix(cfg.system, delta, sig_in);
                    const Matrix6d s00 = initial_state(cfg.system, 0.0);
                    const Matrix6d s01 = initial_state(cfg.system, delta);
                    cd.h0 = make_arm(a, d0, s00);
                    cd.h1 = make_arm(a, d1, s01);
                    if (cd.probe_is_thermal) {
                        cd.th0 = cd.h0;
                        cd.th1 = cd.h1;
                    } else {
                        const Matrix4d sig_th = input_covariance(
                            InputNoiseSpec::thermal(cd.n1, cd.n2), cfg.system.kappa);
                        cd.th0 = make_arm(a, diffusion_matrix(cfg.system, 0.0, sig_th), s00);
                        cd.th1 = make_arm(a, diffusion_matrix(cfg.system, delta, sig_th), s01);
                    }
                    combos.push_back(std::move(cd));
                }
            }
        }
    }

    SweepResult result;
    result.rows.resize(combos.size() * grid.size());

    auto fill_point_impl = [&](std::size_t ci, std::size_t ti) {
        const ComboData& cd = combos[ci];
        const double t = grid[ti];
        const Matrix6d e = matrix_exponential(a, t);
        const Matrix6d s0 = eval_arm(cd.h0, e);
        const Matrix6d s1 = eval_arm(cd.h1, e);

        SweepRow row;
        row.t = t;
        row.selector = cfg.selector;
        row.phi = cd.probe_is_thermal ? std::nan("") : cd.combo.phi;
        row.delta = cd.combo.delta;
        row.n1 = cd.n1;
        row.n2 = cd.n2;
        row.N = cd.combo.N;
        row.alpha = cfg.alpha;
        row.V0 = output_variance(s0, cfg.selector, cfg.system.kappa);
        row.V1 = output_variance(s1, cfg.selector, cfg.system.kappa);

        TestConfig tc;
        tc.N = cd.combo.N;
        tc.alpha = cfg.alpha;
        tc.selector = cfg.selector;
        tc.V0 = row.V0;
        tc.V1 = row.V1;
        row.Perr = error_probability(tc).p_err;

        const Matrix6d th0 = cd.probe_is_thermal ? s0 : eval_arm(cd.th0, e);
        const Matrix6d th1 = cd.probe_is_thermal ? s1 : eval_arm(cd.th1, e);
        row.F = gaussian_fidelity(output_two_mode_cm(th0, cfg.system.kappa),
                                  output_two_mode_cm(th1, cfg.system.kappa));
        row.C = classical_bound(row.F, cd.combo.N);
        row.Q_pct = quantum_advantage(row.C, row.Perr);
        if (std::abs(row.V1 - row.V0) <= 1e-14 * std::max(row.V0, row.V1)) {
            row.diagnostics = "degenerate: V1 == V0";
        }
        result.rows[ci * grid.size() + ti] = std::move(row);
    };
    auto fill_point = [&](std::size_t ci, std::size_t ti) {
        try {
            fill_point_impl(ci, ti);
        } catch (const StabilityError&) {
            throw;
        } catch (const std::exception& e) {
            throw NumericalError("run_scenario: combo " + std::to_string(ci) + ", t=" +
                                 std::to_string(grid[ti]) + ": " + e.what());
        }
    };

    const std::size_t total = combos.size() * grid.size();
    const int nw = std::max(1, std::min<int>(threads, int(total)));
    if (nw == 1) {
        for (std::size_t idx = 0; idx < total; ++idx) {
            fill_point(idx / grid.size(), idx % grid.size());
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::mutex err_mutex;
        std::exception_ptr first_error;
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(nw));
        for (int w = 0; w < nw; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t idx = next.fetch_add(1);
                    if (idx >= total) return;
                    try {
                        fill_point(idx / grid.size(), idx % grid.size());
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(err_mutex);
                        if (!first_error) first_error = std::current_exception();
                        next.store(total);
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    return result;
}

SweepResult run_configs(const std::vector<ScenarioConfig>& cfgs, int threads) {
    SweepResult all;
    for (const auto& cfg : cfgs) {
        SweepResult part = run_scenario(cfg, threads);
        all.rows.insert(all.rows.end(), part.rows.begin(), part.rows.end());
    }
    return all;
}

std::vector<std::string> preset_names() {
    return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
}

std::vector<ScenarioConfig> preset(const std::string& name) {
    const double pi = constants::pi;
    ScenarioConfig base;
    base.label = name;
    base.delta_override = 1e6;
    base.N = 100;
    base.alpha = 0.05;

    if (name == "fig2") {
        // classical baseline: thermal probes, local quadrature, photon sweep
        base.input_noise = InputNoiseSpec::thermal(100.0, 100.0);
        base.selector = QuadratureSelector::x_out1;
        base.sweep.n = {10.0, 100.0};
        return {base};
    }
    if (name == "fig3") {
        // entangled probes on the summed quadrature, squeezing-angle sweep
        base.input_noise = InputNoiseSpec::two_mode_squeezed(photon_to_squeezing(100.0), pi);
        base.selector = QuadratureSelector::q_plus;
        base.sweep.phi = {pi / 2.0, 5.0 * pi / 6.0, pi};
        return {base};
    }
    if (name == "fig4") {
        // control: wrong squeezing angle, no advantage expected
        base.input_noise = InputNoiseSpec::two_mode_squeezed(photon_to_squeezing(100.0), 0.0);
        base.selector = QuadratureSelector::q_plus;
        return {base};
    }
    if (name == "fig5") {
        // control: entangled probes but a local measurement
        base.input_noise = InputNoiseSpec::two_mode_squeezed(photon_to_squeezing(100.0), pi);
        base.selector = QuadratureSelector::x_out1;
        return {base};
    }
    if (name == "fig6") {
        // control: thermal probes on the summed quadrature
        base.input_noise = InputNoiseSpec::thermal(100.0, 100.0);
        base.selector = QuadratureSelector::q_plus;
        return {base};
    }
    if (name == "fig7") {
        // all four probe/measurement combinations side by side
        std::vector<ScenarioConfig> out;
        ScenarioConfig c = base;
        c.input_noise = InputNoiseSpec::thermal(100.0, 100.0);
        c.selector = QuadratureSelector::x_out1;
        out.push_back(c);
        c.input_noise = InputNoiseSpec::two_mode_squeezed(photon_to_squeezing(100.0), pi);
        c.selector = QuadratureSelector::q_plus;
        out.push_back(c);
        c.input_noise = InputNoiseSpec::two_mode_squeezed(photon_to_squeezing(100.0), pi);
        c.selector = QuadratureSelector::x_out1;
        out.push_back(c);
        c.input_noise = InputNoiseSpec::thermal(100.0, 100.0);
        c.selector = QuadratureSelector::q_plus;
        out.push_back(c);
        return out;
    }
    if (name == "fig8") {
        // heating-rate sweep at small sample size
        base.input_noise = InputNoiseSpec::two_mode_squeezed(photon_to_squeezing(100.0), pi);
        base.selector = QuadratureSelector::q_plus;
        base.N = 10;
        base.sweep.delta = {1e4, 1e6, 1e7};
        return {base};
    }
    throw std::invalid_argument("preset: unknown preset '" + name + "'");
}

}  // namespace omht
