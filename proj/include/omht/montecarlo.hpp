#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "omht/constants.hpp"
#include "omht/inference.hpp"

namespace omht {

// Counter-based PRNG: the splitmix64 output function evaluated at arbitrary
// offsets from a keyed origin. Every draw is a pure function of (key, counter),
// so any partitioning of work across threads reproduces the same stream.
struct CounterRng {
    std::uint64_t key = 0;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static CounterRng keyed(std::uint64_t seed, std::uint64_t stream) {
        return CounterRng{mix(seed ^ mix(stream))};
    }

    std::uint64_t bits(std::uint64_t counter) const {
        return mix(key + counter * 0x9E3779B97F4A7C15ULL);
    }

    // Uniform in (0, 1]: 53 random bits shifted into the mantissa, plus one ulp
    // so the logarithm below never sees zero.
    double uniform(std::uint64_t counter) const {
        return double((bits(counter) >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; draws 2k and 2k+1 come from the same
    // uniform pair (cosine and sine branch), preserving random access.
    double normal(std::uint64_t index) const {
        const std::uint64_t pair = index >> 1;
        const double u1 = uniform(2 * pair);
        const double u2 = uniform(2 * pair + 1);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * constants::pi * u2;
        return (index & 1) ? radius * std::sin(angle) : radius * std::cos(angle);
    }
};

// N i.i.d. zero-mean normal outcomes with variance V, reproducible from
// (seed, stream) alone.
inline std::vector<double> sample_outcomes(double variance, int n, std::uint64_t seed,
                                           std::uint64_t stream = 0) {
    if (!(variance > 0.0)) {
        throw std::invalid_argument("sample_outcomes: variance must be positive");
    }
    if (n < 1) {
        throw std::invalid_argument("sample_outcomes: n must be >= 1");
    }
    const CounterRng rng = CounterRng::keyed(seed, stream);
    const double sd = std::sqrt(variance);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[std::size_t(i)] = sd * rng.normal(std::uint64_t(i));
    }
    return out;
}

struct McRun {
    long trials = 100000;
    std::uint64_t seed = 0;
    TestConfig cfg;  // V0, V1, N, alpha as in the analytic test

    void validate() const {
        if (trials < 1) throw std::invalid_argument("McRun: trials must be >= 1");
        cfg.validate();
    }
};

struct EmpiricalRates {
    double type_i, type_ii, p_err;
    double se_type_i, se_type_ii, se_p_err;  // binomial standard errors
    long trials;
};

namespace detail {

// Unbiased sample variance of one simulated trial. Stream ids separate the
// two hypothesis arms so that both arms are independent for every trial.
inline double trial_sample_variance(double variance, int n, std::uint64_t seed,
                                    std::uint64_t stream) {
    const CounterRng rng = CounterRng::keyed(seed, stream);
    const double sd = std::sqrt(variance);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sd * rng.normal(std::uint64_t(i));
        sum += x;
        sumsq += x * x;
    }
    return (sumsq - sum * sum / n) / (n - 1);
}

}  // namespace detail

// Runs the chi-squared test on synthetic data for both hypotheses and counts
// empirical error rates. Results are independent of the thread count: every
// trial's draws are a pure function of (seed, arm, trial index).
inline EmpiricalRates empirical_error_rates(const McRun& run, int threads = 1) {
    run.validate();
    const double quantile = chi2_quantile(1.0 - run.cfg.alpha, run.cfg.N - 1);
    const long trials = run.trials;

    auto count_range = [&](long lo, long hi, long& reject0, long& accept1) {
        long r0 = 0, a1 = 0;
        for (long t = lo; t < hi; ++t) {
            const double s2_h0 = detail::trial_sample_variance(
                run.cfg.V0, run.cfg.N, run.seed, 2 * std::uint64_t(t));
            if ((run.cfg.N - 1) * s2_h0 / run.cfg.V0 > quantile) ++r0;
            const double s2_h1 = detail::trial_sample_variance(
                run.cfg.V1, run.cfg.N, run.seed, 2 * std::uint64_t(t) + 1);
            if (!((run.cfg.N - 1) * s2_h1 / run.cfg.V0 > quantile)) ++a1;
        }
        reject0 = r0;
        accept1 = a1;
    };

    long reject_h0 = 0, accept_h1 = 0;
    if (threads <= 1) {
        count_range(0, trials, reject_h0, accept_h1);
    } else {
        const int nw = std::min<long>(threads, trials);
        std::vector<long> r0(static_cast<std::size_t>(nw));
        std::vector<long> a1(static_cast<std::size_t>(nw));
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(nw));
        for (int w = 0; w < nw; ++w) {
            const long lo = trials * w / nw;
            const long hi = trials * (w + 1) / nw;
            pool.emplace_back([&, w, lo, hi] { count_range(lo, hi, r0[std::size_t(w)], a1[std::size_t(w)]); });
        }
        for (auto& th : pool) th.join();
        for (int w = 0; w < nw; ++w) {
            reject_h0 += r0[std::size_t(w)];
            accept_h1 += a1[std::size_t(w)];
        }
    }

    EmpiricalRates out;
    out.trials = trials;
    out.type_i = double(reject_h0) / double(trials);
    out.type_ii = double(accept_h1) / double(trials);
    out.p_err = 0.5 * (out.type_i + out.type_ii);
    auto se = [trials](double p) { return std::sqrt(std::max(p * (1.0 - p), 1e-12) / double(trials)); };
    out.se_type_i = se(out.type_i);
    out.se_type_ii = se(out.type_ii);
    out.se_p_err = 0.5 * std::sqrt(out.se_type_i * out.se_type_i + out.se_type_ii * out.se_type_ii);
    return out;
}

}  // namespace omht
