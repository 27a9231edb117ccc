#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "omht/errors.hpp"
#include "omht/special.hpp"

using namespace omht;

// Reference values below were frozen from a 30-digit arbitrary-precision
// evaluation of the regularized incomplete gamma functions.

TEST_CASE("regularized gamma agrees with high-precision references") {
    CHECK(regularized_gamma_upper(5.5, 3.2) ==
          doctest::Approx(0.84538753683801946158).epsilon(1e-14));
    CHECK(regularized_gamma_lower(3.0, 2.5) ==
          doctest::Approx(0.45618688411667048200).epsilon(1e-14));
    CHECK(regularized_gamma_upper(0.5, 2.0) ==
          doctest::Approx(0.04550026389635841440).epsilon(1e-14));
}

TEST_CASE("closed forms: exponential tail and unit mass") {
    // a = 1 reduces to exp(-x)
    CHECK(regularized_gamma_upper(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
    for (double x : {0.3, 1.0, 7.5}) {
        CHECK(regularized_gamma_upper(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-14));
    }
    for (double a : {0.5, 1.0, 4.0, 49.5}) {
        CHECK(regularized_gamma_lower(a, 0.0) == 0.0);
        CHECK(regularized_gamma_upper(a, 0.0) == 1.0);
        CHECK(regularized_gamma_lower(a, 1e6) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("lower and upper halves sum to one across the split point") {
    for (double a : {0.4, 1.0, 3.7, 50.0}) {
        for (double x : {0.1, 0.9, 1.1, 4.2, 40.0, 120.0}) {
            const double sum = regularized_gamma_lower(a, x) + regularized_gamma_upper(a, x);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("chi-squared cdf basics") {
    CHECK(chi2_cdf(-1.0, 5) == 0.0);
    CHECK(chi2_cdf(0.0, 5) == 0.0);
    // dof = 2 is the exponential distribution with mean 2
    for (double x : {0.5, 2.0, 9.0}) {
        CHECK(chi2_cdf(x, 2) == doctest::Approx(1.0 - std::exp(-x / 2.0)).epsilon(1e-14));
    }
    // monotone in x
    double prev = 0.0;
    for (double x = 0.0; x <= 30.0; x += 0.5) {
        const double c = chi2_cdf(x, 7);
        CHECK(c >= prev);
        prev = c;
    }
    CHECK_THROWS_AS(chi2_cdf(1.0, 0), std::invalid_argument);
}

TEST_CASE("chi-squared quantile matches references and inverts the cdf") {
    CHECK(chi2_quantile(0.5, 1) ==
          doctest::Approx(0.45493642311957275194).epsilon(1e-12));
    CHECK(chi2_quantile(0.95, 99) ==
          doctest::Approx(123.22522145336180636).epsilon(1e-12));
    // dof = 2: quantile(p) = -2 log(1-p)
    CHECK(chi2_quantile(1.0 - std::exp(-1.0), 2) == doctest::Approx(2.0).epsilon(1e-13));

    for (int dof : {1, 2, 3, 10, 99, 400}) {
        for (double p : {1e-6, 0.01, 0.3, 0.5, 0.95, 0.999, 1.0 - 1e-9}) {
            const double x = chi2_quantile(p, dof);
            CHECK(chi2_cdf(x, dof) == doctest::Approx(p).epsilon(1e-11));
        }
        // strictly increasing in p
        CHECK(chi2_quantile(0.2, dof) < chi2_quantile(0.8, dof));
    }
}

TEST_CASE("chi-squared pdf integrates to the cdf increment") {
    // Simpson on a fine grid; the pdf is smooth away from zero.
    const int dof = 5;
    const double a = 1.0, b = 6.0;
    const int n = 2000;
    const double h = (b - a) / n;
    double acc = chi2_pdf(a, dof) + chi2_pdf(b, dof);
    for (int i = 1; i < n; ++i) acc += chi2_pdf(a + i * h, dof) * (i % 2 ? 4.0 : 2.0);
    acc *= h / 3.0;
    CHECK(acc == doctest::Approx(chi2_cdf(b, dof) - chi2_cdf(a, dof)).epsilon(1e-10));
}

TEST_CASE("domain errors are rejected") {
    CHECK_THROWS_AS(regularized_gamma_upper(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(regularized_gamma_upper(-2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(regularized_gamma_upper(1.0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(regularized_gamma_lower(1.0, NAN), std::invalid_argument);
    CHECK_THROWS_AS(chi2_quantile(0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(chi2_quantile(1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(chi2_quantile(-0.2, 5), std::invalid_argument);
    CHECK_THROWS_AS(chi2_quantile(0.5, 0), std::invalid_argument);
}
