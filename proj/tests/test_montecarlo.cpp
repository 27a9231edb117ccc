#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "omht/montecarlo.hpp"

using namespace omht;

TEST_CASE("counter generator reproduces the splitmix64 reference sequence") {
    // with key 0, bits(k) equals the (k+1)-th output of splitmix64 seeded
    // with 0; the first three are published test vectors
    const CounterRng rng{0};
    CHECK(rng.bits(0) == 0xE220A8397B1DCDAFull);
    CHECK(rng.bits(1) == 0x6E789E6AA1B965F4ull);
    CHECK(rng.bits(2) == 0x06C45D188009454Full);
}

TEST_CASE("keyed streams are deterministic and separated") {
    const auto a = CounterRng::keyed(42, 0);
    const auto a2 = CounterRng::keyed(42, 0);
    const auto b = CounterRng::keyed(42, 1);
    const auto c = CounterRng::keyed(43, 0);
    CHECK(a.key == a2.key);
    CHECK(a.key != b.key);
    CHECK(a.key != c.key);
    CHECK(a.bits(7) == a2.bits(7));
    CHECK(a.bits(7) != b.bits(7));
}

TEST_CASE("uniform draws live in (0, 1] with the right mean") {
    const auto rng = CounterRng::keyed(1, 0);
    const int n = 100000;
    double lo = 1.0, hi = 0.0, sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform(std::uint64_t(i));
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi <= 1.0);
    const double se = 1.0 / std::sqrt(12.0 * n);
    CHECK(std::abs(sum / n - 0.5) < 4.0 * se);
}

TEST_CASE("normal draws have standard moments and no serial correlation") {
    const auto rng = CounterRng::keyed(2, 0);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0, lag = 0.0;
    double prev = rng.normal(0);
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(std::uint64_t(i));
        sum += x;
        sumsq += x * x;
        if (i > 0) lag += x * prev;
        prev = x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(lag / (n - 1)) < 4.0 / std::sqrt(double(n)));
}

TEST_CASE("outcome sampling is reproducible and correctly scaled") {
    const auto x = sample_outcomes(4.0, 50000, 99, 3);
    const auto y = sample_outcomes(4.0, 50000, 99, 3);
    CHECK(x == y);
    const auto z = sample_outcomes(4.0, 50000, 99, 4);
    CHECK(x != z);

    double sum = 0.0, sumsq = 0.0;
    for (double v : x) {
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / double(x.size());
    const double var = sumsq / double(x.size()) - mean * mean;
    CHECK(std::abs(var - 4.0) < 4.0 * 4.0 * std::sqrt(2.0 / double(x.size())));

    CHECK_THROWS_AS(sample_outcomes(0.0, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(sample_outcomes(1.0, 0, 0), std::invalid_argument);
}

TEST_CASE("empirical rates are independent of the worker count") {
    McRun run;
    run.trials = 20000;
    run.seed = 7;
    run.cfg.N = 25;
    run.cfg.alpha = 0.05;
    run.cfg.V0 = 1.0;
    run.cfg.V1 = 1.7;
    const auto one = empirical_error_rates(run, 1);
    const auto three = empirical_error_rates(run, 3);
    const auto eight = empirical_error_rates(run, 8);
    CHECK(one.type_i == three.type_i);
    CHECK(one.type_ii == three.type_ii);
    CHECK(one.type_i == eight.type_i);
    CHECK(one.type_ii == eight.type_ii);

    McRun other = run;
    other.seed = 8;
    CHECK(empirical_error_rates(other, 1).type_i != one.type_i);
}

TEST_CASE("simulated error rates match the analytic curves across a grid") {
    for (int N : {10, 100}) {
        for (double alpha : {0.01, 0.05}) {
            for (double ratio : {1.0, 2.0, 10.0}) {
                McRun run;
                run.trials = 30000;
                run.seed = 1000 + N + int(100 * alpha) + int(ratio);
                run.cfg.N = N;
                run.cfg.alpha = alpha;
                run.cfg.V0 = 1.0;
                run.cfg.V1 = ratio;
                const auto emp = empirical_error_rates(run, 1);
                const auto ana = error_probability(run.cfg);

                const auto se = [&](double p) {
                    return std::sqrt(std::max(p * (1.0 - p), 1e-12) / double(run.trials));
                };
                INFO("N=", N, " alpha=", alpha, " ratio=", ratio);
                CHECK(std::abs(emp.type_i - ana.type_i) <= 4.0 * se(ana.type_i));
                CHECK(std::abs(emp.type_ii - ana.type_ii) <= 4.0 * se(ana.type_ii));
                const double se_p = 0.5 * std::sqrt(se(ana.type_i) * se(ana.type_i) +
                                                    se(ana.type_ii) * se(ana.type_ii));
                CHECK(std::abs(emp.p_err - ana.p_err) <= 4.0 * se_p);
            }
        }
    }
}

TEST_CASE("run validation") {
    McRun run;
    run.trials = 0;
    CHECK_THROWS_AS(empirical_error_rates(run), std::invalid_argument);
    run.trials = 10;
    run.cfg.alpha = 2.0;
    CHECK_THROWS_AS(empirical_error_rates(run), std::invalid_argument);
}
