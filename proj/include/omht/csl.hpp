#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "omht/constants.hpp"
#include "omht/quadrature.hpp"

namespace omht {

// Collapse-noise parameters for a homogeneous sphere of radius R_sphere and
// total mass m. gamma_csl is the collapse rate (m^3 Hz), r_C the localization
// length (m).
struct CslParams {
    double gamma_csl = 1e-28;
    double r_C = 100e-9;
    double R_sphere = 1e-6;
    double m = 1.5e-10;

    static CslParams defaults() { return CslParams{}; }

    void validate() const {
        auto pos = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw std::invalid_argument(std::string("CslParams: ") + name +
                                            " must be positive and finite");
            }
        };
        // gamma_csl = 0 is a legal switched-off collapse rate; the geometry
        // and mass must still be strictly positive.
        if (!(gamma_csl >= 0.0) || !std::isfinite(gamma_csl)) {
            throw std::invalid_argument(
                "CslParams: gamma_csl must be nonnegative and finite");
        }
        pos(r_C, "r_C");
        pos(R_sphere, "R_sphere");
        pos(m, "m");
    }
};

// Frequency convention for the 1/omega prefactor of the heating rate. The
// quoted reference rate (~1.4e6 s^-1 for the default sphere) corresponds to
// counting the mechanical frequency in cycles per second there; "Angular"
// uses omega in rad/s directly and comes out 2 pi smaller.
enum class PrefactorFrequency { Cycles, Angular };

struct CslOptions {
    PrefactorFrequency prefactor = PrefactorFrequency::Cycles;
    double rel_tol = 1e-8;
};

// Fourier transform of the homogeneous-sphere mass density,
// rho~(k) = 3m (sin kR - kR cos kR)/(kR)^3, with rho~(0) = m.
inline double sphere_form_factor(double k, double R, double m) {
    if (k < 0.0 || !(R > 0.0)) {
        throw std::invalid_argument("sphere_form_factor: need k >= 0 and R > 0");
    }
    const double u = k * R;
    if (u < 1e-1) {
        // series for 3(sin u - u cos u)/u^3. The closed form cancels to
        // u^3/3 and loses ~3 eps/u^2 relative accuracy, so below u = 0.1 the
        // series is the more accurate branch (truncation ~ u^8/1.3e6 < 1e-14).
        const double u2 = u * u;
        return m * (1.0 - u2 / 10.0 + u2 * u2 / 280.0 - u2 * u2 * u2 / 15120.0);
    }
    return 3.0 * m * (std::sin(u) - u * std::cos(u)) / (u * u * u);
}

// Extra momentum-diffusion rate induced by the collapse noise on the
// oscillator, evaluated through the Fourier reduction of the double
// real-space integral:
//   Delta = hbar gamma / (3 m omega m0^2) * (1/2 pi^2)
//           * Int_0^inf dk k^4 e^{-k^2 r_C^2} |rho~(k)|^2.
// The Gaussian smearing kernel transforms to e^{-k^2 r_C^2}, the density
// gradients contribute k^2 and the angular average gives the 1/2 pi^2 measure.
inline double csl_delta(const CslParams& csl, double omega_m, CslOptions opts = {}) {
    csl.validate();
    if (!(omega_m > 0.0)) {
        throw std::invalid_argument("csl_delta: omega_m must be positive");
    }
    if (csl.gamma_csl == 0.0) return 0.0;
    const double omega_eff = (opts.prefactor == PrefactorFrequency::Cycles)
                                 ? omega_m / (2.0 * constants::pi)
                                 : omega_m;
    const double pref = constants::hbar * csl.gamma_csl /
                        (3.0 * csl.m * omega_eff * constants::amu * constants::amu);
    // k^4 |rho~|^2 only oscillates without decaying, so the integrable support
    // is set entirely by the Gaussian: e^{-k^2 r_C^2} is ~1e-1086 at k_max.
    // Integrating further (say to 50/R when R << r_C) would put the whole
    // support between two quadrature nodes of the seed panel and return zero.
    const double k_max = 50.0 / csl.r_C;
    const double integral = integrate_adaptive(
        [&](double k) {
            const double rho = sphere_form_factor(k, csl.R_sphere, csl.m);
            const double k2 = k * k;
            return k2 * k2 * std::exp(-k2 * csl.r_C * csl.r_C) * rho * rho;
        },
        0.0, k_max, opts.rel_tol);
    return pref * integral / (2.0 * constants::pi * constants::pi);
}

// Effective oscillator occupation once the collapse heating is folded into
// the thermal equilibrium: n = n_th + Delta / (2 gamma_m).
inline double csl_occupation(double n_th, double delta, double gamma_m) {
    if (n_th < 0.0 || delta < 0.0) {
        throw std::invalid_argument("csl_occupation: n_th and delta must be >= 0");
    }
    if (!(gamma_m > 0.0)) {
        throw std::invalid_argument("csl_occupation: gamma_m must be positive");
    }
    return n_th + delta / (2.0 * gamma_m);
}

}  // namespace omht
