#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "omht/constants.hpp"
#include "omht/linear_dynamics.hpp"
#include "omht/montecarlo.hpp"
#include "omht/symplectic.hpp"
#include "omht/validation.hpp"

namespace omht::validation {

Eigen::MatrixXd rk4_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d,
                             const Eigen::MatrixXd& sigma0, double t_end, int steps) {
    if (a.rows() != a.cols() || a.rows() != d.rows() || d.rows() != d.cols() ||
        sigma0.rows() != a.rows() || sigma0.rows() != sigma0.cols()) {
        throw std::invalid_argument("rk4_lyapunov: dimension mismatch");
    }
    if (steps < 1 || !(t_end >= 0.0)) {
        throw std::invalid_argument("rk4_lyapunov: need steps >= 1 and t_end >= 0");
    }
    const double h = t_end / steps;
    auto rhs = [&](const Eigen::MatrixXd& s) {
        return Eigen::MatrixXd(a * s + s * a.transpose() + d);
    };
    Eigen::MatrixXd s = sigma0;
    for (int i = 0; i < steps; ++i) {
        const Eigen::MatrixXd k1 = rhs(s);
        const Eigen::MatrixXd k2 = rhs(s + 0.5 * h * k1);
        const Eigen::MatrixXd k3 = rhs(s + 0.5 * h * k2);
        const Eigen::MatrixXd k4 = rhs(s + h * k3);
        s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return 0.5 * (s + s.transpose()).eval();
}

PhysicalityScan physicality_scan(const ScenarioConfig& cfg) {
    cfg.validate();
    using Matrix6d = Eigen::Matrix<double, 6, 6>;
    const Matrix6d a = drift_matrix(cfg.system);
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

    PhysicalityScan scan{true, std::numeric_limits<double>::infinity(), 0};
    auto check = [&](const Matrix6d& sigma) {
        const PhysicalityReport rep = check_physicality(sigma);
        scan.all_physical = scan.all_physical && rep.physical;
        scan.worst_margin = std::min(scan.worst_margin, rep.min_eigenvalue - rep.threshold);
        ++scan.points_checked;
    };

    for (double n : ns) {
        for (double delta : deltas) {
            for (double phi : phis) {
                InputNoiseSpec probe = cfg.input_noise;
                if (probe.kind == NoiseKind::TwoModeSqueezed) {
                    probe.r = photon_to_squeezing(n);
                    probe.phi = phi;
                } else if (probe.kind == NoiseKind::Thermal) {
                    probe.n1 = probe.n2 = n;
                }
                std::vector<Eigen::Matrix4d> inputs;
                inputs.push_back(input_covariance(probe, cfg.system.kappa));
                if (probe.kind == NoiseKind::TwoModeSqueezed) {
                    inputs.push_back(input_covariance(InputNoiseSpec::thermal(n, n),
                                                      cfg.system.kappa));
                }
                const Matrix6d s00 = initial_state(cfg.system, 0.0);
                const Matrix6d s01 = initial_state(cfg.system, delta);
                for (const Eigen::Matrix4d& sig_in : inputs) {
                    for (int hyp = 0; hyp < 2; ++hyp) {
                        const Matrix6d d =
                            diffusion_matrix(cfg.system, hyp ? delta : 0.0, sig_in);
                        const std::vector<Eigen::MatrixXd> traj =
                            propagate_covariance(a, d, hyp ? s01 : s00, grid);
                        for (const Eigen::MatrixXd& sigma : traj) check(sigma);
                    }
                }
            }
        }
    }
    return scan;
}

// For a homogeneous sphere the mass-density gradient is rho_0 * delta(|r|-R)
// times the inward normal, which collapses the double volume integral of the
// smeared correlator onto the product of two sphere surfaces. Pairs of points
// are sampled uniformly on the surface; each contributes
//   exp(-|R u - R v|^2 / (4 r_C^2)) / (2 sqrt(pi) r_C)^3 * (u . v).
McEstimate csl_delta_mc(const CslParams& csl, double omega_m, CslOptions opts,
                        long samples, std::uint64_t seed) {
    csl.validate();
    if (samples < 2) {
        throw std::invalid_argument("csl_delta_mc: need at least 2 samples");
    }
    if (!(omega_m > 0.0)) {
        throw std::invalid_argument("csl_delta_mc: omega_m must be positive");
    }
    const double r = csl.R_sphere;
    const double rc = csl.r_C;
    const double rho0 = 3.0 * csl.m / (4.0 * constants::pi * r * r * r);
    const double kernel_norm =
        std::pow(2.0 * std::sqrt(constants::pi) * rc, -3.0);
    const double area = 4.0 * constants::pi * r * r;

    const CounterRng rng = CounterRng::keyed(seed, 0);
    auto unit_vector = [&](std::uint64_t base, double out[3]) {
        double norm2 = 0.0;
        for (int j = 0; j < 3; ++j) {
            out[j] = rng.normal(base + std::uint64_t(j));
            norm2 += out[j] * out[j];
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (int j = 0; j < 3; ++j) out[j] *= inv;
    };

    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < samples; ++i) {
        double u[3], v[3];
        unit_vector(6 * std::uint64_t(i), u);
        unit_vector(6 * std::uint64_t(i) + 3, v);
        double dist2 = 0.0, dot = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double diff = r * (u[j] - v[j]);
            dist2 += diff * diff;
            dot += u[j] * v[j];
        }
        const double w = std::exp(-dist2 / (4.0 * rc * rc)) * kernel_norm * dot;
        sum += w;
        sumsq += w * w;
    }
    const double n = double(samples);
    const double mean = sum / n;
    const double var = (sumsq - sum * sum / n) / (n - 1.0);

    const double omega_eff =
        (opts.prefactor == PrefactorFrequency::Cycles) ? omega_m / (2.0 * constants::pi)
                                                       : omega_m;
    const double pref = constants::hbar * csl.gamma_csl /
                        (3.0 * csl.m * omega_eff * constants::amu * constants::amu);
    const double scale = pref * area * area * rho0 * rho0;
    McEstimate est;
    est.value = scale * mean;
    est.std_error = scale * std::sqrt(var / n);
    est.samples = samples;
    return est;
}

}  // namespace omht::validation
