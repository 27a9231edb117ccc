#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "omht/errors.hpp"
#include "omht/inference.hpp"
#include "omht/validation.hpp"

using namespace omht;

namespace {

Eigen::Matrix4d two_mode_thermal(double n1, double n2) {
    Eigen::Matrix4d v = Eigen::Matrix4d::Identity();
    v(0, 0) = v(1, 1) = n1 + 0.5;
    v(2, 2) = v(3, 3) = n2 + 0.5;
    return v;
}

double thermal_pair_fidelity(double n, double m) {
    const double root = std::sqrt((n + 1.0) * (m + 1.0)) - std::sqrt(n * m);
    return 1.0 / (root * root);
}

}  // namespace

TEST_CASE("random low-occupancy states are physical and reproducible") {
    for (std::uint64_t seed : {0u, 7u, 123u}) {
        const Eigen::Matrix4d v = validation::random_low_occupancy_cm(seed);
        const Eigen::Matrix4d again = validation::random_low_occupancy_cm(seed);
        CHECK((v - again).lpNorm<Eigen::Infinity>() == 0.0);
        CHECK((v - v.transpose()).lpNorm<Eigen::Infinity>() < 1e-14);
        CHECK(bool(check_physicality(v)));
        // mean total photon number tr(V)/2 - 1 stays well below one
        CHECK(0.5 * v.trace() - 1.0 < 1.0);
    }
    const Eigen::Matrix4d a = validation::random_low_occupancy_cm(1);
    const Eigen::Matrix4d b = validation::random_low_occupancy_cm(2);
    CHECK((a - b).lpNorm<Eigen::Infinity>() > 1e-6);
}

TEST_CASE("Fock-basis fidelity reproduces the thermal closed form") {
    const Eigen::Matrix4d va = two_mode_thermal(0.4, 0.9);
    const Eigen::Matrix4d vb = two_mode_thermal(0.2, 1.1);
    const double expect = thermal_pair_fidelity(0.4, 0.2) * thermal_pair_fidelity(0.9, 1.1);
    const double got = validation::fock_fidelity(va, vb, 30);
    CHECK(got == doctest::Approx(expect).epsilon(1e-7));
}

TEST_CASE("Fock-basis fidelity of a state with itself is one") {
    const Eigen::Matrix4d v = validation::random_low_occupancy_cm(42);
    CHECK(validation::fock_fidelity(v, v, 28) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("Fock-basis and covariance-based fidelity agree on random pairs") {
    for (std::uint64_t seed : {11u, 12u}) {
        const Eigen::Matrix4d va = validation::random_low_occupancy_cm(2 * seed);
        const Eigen::Matrix4d vb = validation::random_low_occupancy_cm(2 * seed + 1);
        const double fock = validation::fock_fidelity(va, vb, 36);
        const double gauss = gaussian_fidelity(va, vb);
        CHECK(std::abs(fock - gauss) < 1e-6);
    }
}

TEST_CASE("truncation that cannot hold the state fails loudly") {
    // a 30-photon thermal mode does not fit below a 6-photon cutoff: the
    // covariance reconstruction check must reject the run rather than return
    // a silently wrong number
    const Eigen::Matrix4d hot = two_mode_thermal(30.0, 0.1);
    CHECK_THROWS_AS(validation::fock_fidelity(hot, hot, 6), NumericalError);
}

TEST_CASE("pre-flight gates pass on a reduced budget") {
    const auto gates = validation::run_fidelity_gates(8, 26);
    REQUIRE(gates.size() == 3);
    for (const auto& g : gates) {
        INFO(g.name, ": ", g.detail);
        CHECK(g.passed);
        CHECK(g.worst <= g.tolerance);
    }
}
