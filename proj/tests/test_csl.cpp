#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "omht/csl.hpp"
#include "omht/optomech.hpp"
#include "omht/validation.hpp"

using namespace omht;

TEST_CASE("sphere form factor: limits, continuity, reference point") {
    const double R = 1e-6, m = 1.5e-10;
    CHECK(sphere_form_factor(0.0, R, m) == m);

    // series and closed form must agree across the switch at kR = 1e-1; the
    // offsets are small enough that the genuine slope contributes ~4e-15
    const double k_switch = 1e-1 / R;
    const double below = sphere_form_factor(k_switch * (1.0 - 1e-12), R, m);
    const double above = sphere_form_factor(k_switch * (1.0 + 1e-12), R, m);
    CHECK(std::abs(below - above) < 1e-12 * m);

    // kR = 1: 3 m (sin 1 - cos 1)
    CHECK(sphere_form_factor(1.0 / R, R, m) ==
          doctest::Approx(3.0 * m * (std::sin(1.0) - std::cos(1.0))).epsilon(1e-14));

    // envelope decay: |rho~(k)| <= 3 m (1 + kR) / (kR)^3
    for (double u : {5.0, 50.0, 500.0}) {
        CHECK(std::abs(sphere_form_factor(u / R, R, m)) <= 3.0 * m * (1.0 + u) / (u * u * u));
    }

    CHECK_THROWS_AS(sphere_form_factor(-1.0, R, m), std::invalid_argument);
    CHECK_THROWS_AS(sphere_form_factor(1.0, 0.0, m), std::invalid_argument);
}

TEST_CASE("collapse heating rate for the default oscillator") {
    const SystemParams p = SystemParams::defaults();
    const CslParams csl;  // gamma = 1e-28 s^-1, r_C = 100 nm

    CslOptions cycles;  // default prefactor convention
    const double d_cyc = csl_delta(csl, p.omega_m, cycles);
    CHECK(d_cyc == doctest::Approx(1376794.315686505).epsilon(1e-6));

    CslOptions angular;
    angular.prefactor = PrefactorFrequency::Angular;
    const double d_ang = csl_delta(csl, p.omega_m, angular);
    CHECK(d_ang == doctest::Approx(219123.6209623307).epsilon(1e-6));

    // the two conventions differ exactly by the 2 pi in the prefactor
    CHECK(d_cyc / d_ang == doctest::Approx(2.0 * constants::pi).epsilon(1e-12));

    // only the default convention lands in the window around 1e6 s^-1
    CHECK(std::log10(d_cyc) > 5.5);
    CHECK(std::log10(d_cyc) < 6.5);
    CHECK(std::log10(d_ang) < 5.5);
}

TEST_CASE("heating rate scales linearly in the collapse rate and the mass") {
    const SystemParams p = SystemParams::defaults();
    CslParams csl;
    const double base = csl_delta(csl, p.omega_m);

    csl.gamma_csl *= 2.0;
    CHECK(csl_delta(csl, p.omega_m) == doctest::Approx(2.0 * base).epsilon(1e-12));
    csl.gamma_csl /= 2.0;

    // prefactor carries 1/m, the squared form factor m^2
    csl.m *= 2.0;
    CHECK(csl_delta(csl, p.omega_m) == doctest::Approx(2.0 * base).epsilon(1e-12));
    csl.m /= 2.0;

    csl.gamma_csl = 0.0;
    CHECK(csl_delta(csl, p.omega_m) == 0.0);
}

TEST_CASE("a metre-scale correlation length suppresses the heating entirely") {
    const SystemParams p = SystemParams::defaults();
    CslParams csl;
    const double base = csl_delta(csl, p.omega_m);
    csl.r_C = 1.0;
    const double wide = csl_delta(csl, p.omega_m);
    // the smearing Gaussian confines the support to k < ~8 where the form
    // factor is flat; the value collapses by twenty orders of magnitude
    CHECK(wide == doctest::Approx(2.350178715e-26).epsilon(1e-6));
    CHECK(wide > 0.0);
    CHECK(wide < 1e-6 * base);
}

TEST_CASE("heating rate is stable against the quadrature tolerance") {
    const SystemParams p = SystemParams::defaults();
    const CslParams csl;
    CslOptions loose, tight;
    loose.rel_tol = 1e-6;
    tight.rel_tol = 1e-10;
    const double dl = csl_delta(csl, p.omega_m, loose);
    const double dt = csl_delta(csl, p.omega_m, tight);
    CHECK(std::abs(dl - dt) <= 1e-7 * std::abs(dt));
}

TEST_CASE("Fourier evaluation matches a direct Monte Carlo of the double integral") {
    // At the default mass the MC variance is hopeless; a lighter, smaller
    // sphere keeps the kernel well sampled while leaving every code path hit.
    const SystemParams p = SystemParams::defaults();
    CslParams csl;
    csl.m = 1e-18;
    csl.R_sphere = 60e-9;
    const double fourier = csl_delta(csl, p.omega_m);
    CHECK(fourier == doctest::Approx(13.0807888865).epsilon(1e-6));

    const auto mc = validation::csl_delta_mc(csl, p.omega_m, CslOptions{}, 400000, 12345);
    REQUIRE(mc.std_error > 0.0);
    CHECK(mc.std_error < 0.05 * fourier);
    CHECK(std::abs(mc.value - fourier) <= 3.0 * mc.std_error);
}

TEST_CASE("effective occupation folds the heating into the thermal bath") {
    const SystemParams p = SystemParams::defaults();
    const double n_th = thermal_occupation(p.T_bath, p.omega_m);
    CHECK(csl_occupation(n_th, 1e6, p.gamma_m) ==
          doctest::Approx(29013.0319044759).epsilon(1e-10));
    CHECK(csl_occupation(n_th, 0.0, p.gamma_m) == n_th);
    CHECK_THROWS_AS(csl_occupation(-1.0, 1e6, p.gamma_m), std::invalid_argument);
    CHECK_THROWS_AS(csl_occupation(n_th, -1.0, p.gamma_m), std::invalid_argument);
    CHECK_THROWS_AS(csl_occupation(n_th, 1e6, 0.0), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    CslParams csl;
    csl.r_C = 0.0;
    CHECK_THROWS_AS(csl.validate(), std::invalid_argument);
    csl = CslParams{};
    csl.gamma_csl = -1e-30;
    CHECK_THROWS_AS(csl.validate(), std::invalid_argument);
    csl = CslParams{};
    CHECK_THROWS_AS(csl_delta(csl, 0.0), std::invalid_argument);
}

TEST_CASE("quadrature utility on closed-form integrals") {
    // int_0^inf k^4 e^{-k^2} dk = 3 sqrt(pi) / 8 (truncated at k = 12)
    const double quartic = integrate_adaptive(
        [](double k) { return k * k * k * k * std::exp(-k * k); }, 0.0, 12.0, 1e-12);
    CHECK(quartic == doctest::Approx(3.0 * std::sqrt(constants::pi) / 8.0).epsilon(1e-12));

    const double unit = integrate_adaptive([](double x) { return 3.0 * x * x; }, 0.0, 1.0, 1e-13);
    CHECK(unit == doctest::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 1.0, 1.0, 1e-8),
                    std::invalid_argument);
    // an interior singularity cannot reach 1e-12 in five bisections: the
    // refinement budget must fail loudly, not return the bad estimate
    CHECK_THROWS_AS(integrate_adaptive(
                        [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3) + 1e-300); },
                        0.0, 1.0, 1e-12, 5),
                    NumericalError);
}
