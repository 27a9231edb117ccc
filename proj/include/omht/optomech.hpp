#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "omht/constants.hpp"
#include "omht/linear_dynamics.hpp"

namespace omht {

using Matrix4d = Eigen::Matrix4d;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// Two optical cavities sharing one mechanical oscillator. All rates and
// frequencies are angular (rad/s) unless noted otherwise.
struct SystemParams {
    double omega_m = 2.0 * constants::pi * 2.75e5;  // mechanical frequency
    double gamma_m = 2.0 * constants::pi * 2.75e5 / 1e5;  // damping, quality factor 1e5
    double T_bath = 1e-3;                           // bath temperature, K
    double omega_c = 2.0 * constants::pi * 9.4e5 * constants::c_light;  // 1064 nm cavity
    double kappa = 5e7;                             // cavity linewidth
    double delta = 2e8;                             // cavity-pump detuning (4 kappa)
    double P_pump = 4e-3;                           // input power, W
    double m = 1.5e-10;                             // oscillator mass, kg (150 ng)
    double L = 25e-3;                               // cavity length, m
    double R_sphere = 1e-6;                         // oscillator radius, m

    static SystemParams defaults() { return SystemParams{}; }

    void validate() const {
        auto pos = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw std::invalid_argument(std::string("SystemParams: ") + name +
                                            " must be positive and finite");
            }
        };
        pos(omega_m, "omega_m");
        pos(gamma_m, "gamma_m");
        pos(T_bath, "T_bath");
        pos(omega_c, "omega_c");
        pos(kappa, "kappa");
        pos(delta, "delta");
        if (P_pump < 0.0 || !std::isfinite(P_pump)) {
            throw std::invalid_argument("SystemParams: P_pump must be non-negative");
        }
        pos(m, "m");
        pos(L, "L");
        pos(R_sphere, "R_sphere");
    }
};

struct DerivedCoupling {
    double epsilon;  // drive amplitude sqrt(2 kappa P / (hbar omega_c)), s^-1
    double chi;      // frequency pull per unit displacement omega_c / L, rad/(s m)
    double g;        // single-photon optomechanical rate chi * sqrt(hbar/(m omega_m)), rad/s
};

inline DerivedCoupling derived_coupling(const SystemParams& p) {
    p.validate();
    DerivedCoupling d;
    d.epsilon = std::sqrt(2.0 * p.kappa * p.P_pump / (constants::hbar * p.omega_c));
    d.chi = p.omega_c / p.L;
    d.g = d.chi * std::sqrt(constants::hbar / (p.m * p.omega_m));
    return d;
}

// Steady amplitude of the driven cavity, a_ss = eps / (kappa + i delta), with
// the phase convention that makes it real. The small optomechanical shift of
// the detuning is neglected; the drift matrix below uses the bare delta.
inline double cavity_amplitude(const SystemParams& p) {
    const DerivedCoupling d = derived_coupling(p);
    return d.epsilon / std::sqrt(p.kappa * p.kappa + p.delta * p.delta);
}

// Mean thermal occupation of the mechanical bath. The default is the
// high-temperature form k_B T / (hbar omega), consistent with the white-noise
// Brownian correlator used in the diffusion matrix; the exact Bose factor is
// available for diagnostics.
inline double thermal_occupation(double T, double omega, bool exact_bose = false) {
    if (!(T >= 0.0) || !(omega > 0.0)) {
        throw std::invalid_argument("thermal_occupation: need T >= 0 and omega > 0");
    }
    if (T == 0.0) return 0.0;
    const double x = constants::hbar * omega / (constants::k_B * T);
    if (exact_bose) return 1.0 / std::expm1(x);
    return 1.0 / x;
}

// Linearized drift of the quadrature vector (Q, P, X1, Y1, X2, Y2).
// The second cavity couples to nothing above: it can only pick up
// correlations through its input light.
inline Matrix6d drift_matrix(const SystemParams& p) {
    p.validate();
    const double coupling = std::sqrt(2.0) * cavity_amplitude(p) * derived_coupling(p).g;
    Matrix6d a = Matrix6d::Zero();
    a(0, 1) = p.omega_m;
    a(1, 0) = -p.omega_m;
    a(1, 1) = -p.gamma_m;
    a(1, 2) = coupling;
    a(2, 2) = -p.kappa;
    a(2, 3) = p.delta;
    a(3, 0) = coupling;
    a(3, 2) = -p.delta;
    a(3, 3) = -p.kappa;
    a(4, 4) = -p.kappa;
    a(4, 5) = p.delta;
    a(5, 4) = -p.delta;
    a(5, 5) = -p.kappa;
    return a;
}

enum class NoiseKind { Vacuum, Thermal, TwoModeSqueezed };

struct InputNoiseSpec {
    NoiseKind kind = NoiseKind::Vacuum;
    double n1 = 0.0;   // mean photons, thermal mode 1
    double n2 = 0.0;   // mean photons, thermal mode 2
    double r = 0.0;    // squeezing parameter
    double phi = 0.0;  // squeezing angle, rad

    static InputNoiseSpec vacuum() { return InputNoiseSpec{}; }
    static InputNoiseSpec thermal(double n1, double n2) {
        InputNoiseSpec s;
        s.kind = NoiseKind::Thermal;
        s.n1 = n1;
        s.n2 = n2;
        return s;
    }
    static InputNoiseSpec two_mode_squeezed(double r, double phi) {
        InputNoiseSpec s;
        s.kind = NoiseKind::TwoModeSqueezed;
        s.r = r;
        s.phi = phi;
        return s;
    }

    void validate() const {
        if (n1 < 0.0 || n2 < 0.0) {
            throw std::invalid_argument("InputNoiseSpec: photon numbers must be >= 0");
        }
        if (r < 0.0) {
            throw std::invalid_argument("InputNoiseSpec: squeezing parameter must be >= 0");
        }
        if (!std::isfinite(phi)) {
            throw std::invalid_argument("InputNoiseSpec: phi must be finite");
        }
    }
};

// Inverse of cosh(2r) = 2n + 1 for a two-mode squeezed input whose reduced
// single-mode states carry n mean photons each.
inline double photon_to_squeezing(double n) {
    if (n < 0.0 || !std::isfinite(n)) {
        throw std::invalid_argument("photon_to_squeezing: n must be >= 0");
    }
    return 0.5 * std::acosh(2.0 * n + 1.0);
}

// 4x4 input-light block of the diffusion matrix, ordering (X1, Y1, X2, Y2).
inline Matrix4d input_covariance(const InputNoiseSpec& spec, double kappa) {
    spec.validate();
    if (!(kappa > 0.0)) {
        throw std::invalid_argument("input_covariance: kappa must be positive");
    }
    Matrix4d s = Matrix4d::Zero();
    switch (spec.kind) {
        case NoiseKind::Vacuum:
            s = kappa * Matrix4d::Identity();
            break;
        case NoiseKind::Thermal:
            s.diagonal() << 2.0 * kappa * (spec.n1 + 0.5), 2.0 * kappa * (spec.n1 + 0.5),
                2.0 * kappa * (spec.n2 + 0.5), 2.0 * kappa * (spec.n2 + 0.5);
            break;
        case NoiseKind::TwoModeSqueezed: {
            const double ch = std::cosh(2.0 * spec.r);
            const double sh = std::sinh(2.0 * spec.r);
            Eigen::Matrix2d rphi;
            rphi << std::cos(spec.phi), std::sin(spec.phi),
                    std::sin(spec.phi), -std::cos(spec.phi);
            s.topLeftCorner<2, 2>() = ch * Eigen::Matrix2d::Identity();
            s.bottomRightCorner<2, 2>() = ch * Eigen::Matrix2d::Identity();
            s.topRightCorner<2, 2>() = sh * rphi;
            s.bottomLeftCorner<2, 2>() = sh * rphi;
            s *= kappa;
            break;
        }
    }
    return s;
}

// Block-diagonal diffusion matrix: mechanical Brownian heating plus an extra
// momentum diffusion delta_csl, then the input-light block.
inline Matrix6d diffusion_matrix(const SystemParams& p, double delta_csl,
                                 const Matrix4d& sigma_in) {
    p.validate();
    if (delta_csl < 0.0 || !std::isfinite(delta_csl)) {
        throw std::invalid_argument("diffusion_matrix: delta_csl must be >= 0");
    }
    if ((sigma_in - sigma_in.transpose()).lpNorm<Eigen::Infinity>() >
        1e-9 * std::max(1.0, sigma_in.lpNorm<Eigen::Infinity>())) {
        throw std::invalid_argument("diffusion_matrix: sigma_in must be symmetric");
    }
    Matrix6d d = Matrix6d::Zero();
    d(1, 1) = 2.0 * p.gamma_m * thermal_occupation(p.T_bath, p.omega_m) + delta_csl;
    d.bottomRightCorner<4, 4>() = sigma_in;
    return d;
}

// Pre-measurement state: the full system relaxed under vacuum input light and
// the same extra diffusion as the subsequent evolution (a collapse-type
// heating channel cannot be switched off during preparation). The second
// cavity block comes out as the vacuum I/2 automatically since nothing
// couples to it.
inline Matrix6d initial_state(const SystemParams& p, double delta_csl) {
    const Matrix6d a = drift_matrix(p);
    const Matrix6d d = diffusion_matrix(p, delta_csl, input_covariance(InputNoiseSpec::vacuum(), p.kappa));
    return lyapunov_steady_state(a, d);
}

enum class QuadratureSelector {
    x_out1,
    y_out1,
    x_out2,
    y_out2,
    q_plus,
    q_minus,
    p_plus,
    p_minus,
};

inline const char* selector_name(QuadratureSelector s) {
    switch (s) {
        case QuadratureSelector::x_out1: return "x_out1";
        case QuadratureSelector::y_out1: return "y_out1";
        case QuadratureSelector::x_out2: return "x_out2";
        case QuadratureSelector::y_out2: return "y_out2";
        case QuadratureSelector::q_plus: return "q_plus";
        case QuadratureSelector::q_minus: return "q_minus";
        case QuadratureSelector::p_plus: return "p_plus";
        case QuadratureSelector::p_minus: return "p_minus";
    }
    throw std::invalid_argument("selector_name: unknown selector");
}

inline QuadratureSelector selector_from_name(const std::string& name) {
    for (auto s : {QuadratureSelector::x_out1, QuadratureSelector::y_out1,
                   QuadratureSelector::x_out2, QuadratureSelector::y_out2,
                   QuadratureSelector::q_plus, QuadratureSelector::q_minus,
                   QuadratureSelector::p_plus, QuadratureSelector::p_minus}) {
        if (name == selector_name(s)) return s;
    }
    throw std::invalid_argument("selector_from_name: unknown selector '" + name + "'");
}

// Variance of a single measured output quadrature. Local quadratures scale as
// 2 kappa times the intracavity variance; the balanced combinations
// q+- = (x_out1 +- x_out2)/sqrt(2) and p+- likewise pick up the cross term.
inline double output_variance(const Matrix6d& sigma, QuadratureSelector sel, double kappa) {
    if (!(kappa > 0.0)) {
        throw std::invalid_argument("output_variance: kappa must be positive");
    }
    switch (sel) {
        case QuadratureSelector::x_out1: return 2.0 * kappa * sigma(2, 2);
        case QuadratureSelector::y_out1: return 2.0 * kappa * sigma(3, 3);
        case QuadratureSelector::x_out2: return 2.0 * kappa * sigma(4, 4);
        case QuadratureSelector::y_out2: return 2.0 * kappa * sigma(5, 5);
        case QuadratureSelector::q_plus:
            return kappa * (sigma(2, 2) + sigma(4, 4) + 2.0 * sigma(2, 4));
        case QuadratureSelector::q_minus:
            return kappa * (sigma(2, 2) + sigma(4, 4) - 2.0 * sigma(2, 4));
        case QuadratureSelector::p_plus:
            return kappa * (sigma(3, 3) + sigma(5, 5) + 2.0 * sigma(3, 5));
        case QuadratureSelector::p_minus:
            return kappa * (sigma(3, 3) + sigma(5, 5) - 2.0 * sigma(3, 5));
    }
    throw std::invalid_argument("output_variance: unknown selector");
}

// Covariance of the two measured output modes (x_out1, y_out1, x_out2, y_out2),
// consistent with the single-quadrature variances above.
inline Matrix4d output_two_mode_cm(const Matrix6d& sigma, double kappa) {
    if (!(kappa > 0.0)) {
        throw std::invalid_argument("output_two_mode_cm: kappa must be positive");
    }
    return 2.0 * kappa * sigma.bottomRightCorner<4, 4>();
}

}  // namespace omht
