#include <cmath>
#include <exception>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omht/inference.hpp"
#include "omht/validation.hpp"

namespace omht::validation {

namespace {

Eigen::Matrix4d two_mode_thermal(double n1, double n2) {
    Eigen::Vector4d d;
    d << n1 + 0.5, n1 + 0.5, n2 + 0.5, n2 + 0.5;
    return d.asDiagonal();
}

double thermal_fidelity_1mode(double n, double np) {
    const double root = std::sqrt((n + 1.0) * (np + 1.0)) - std::sqrt(n * np);
    return 1.0 / (root * root);
}

}  // namespace

std::vector<GateResult> run_fidelity_gates(int fock_pairs, int fock_cutoff) {
    std::vector<GateResult> gates;
    const double occupations[] = {0.0, 0.5, 1.0, 5.0};

    {
        GateResult g{"thermal-closed-form", false, 0.0, 1e-10, ""};
        try {
            int count = 0;
            for (double a1 : occupations)
                for (double a2 : occupations)
                    for (double b1 : occupations)
                        for (double b2 : occupations) {
                            const double got = gaussian_fidelity(two_mode_thermal(a1, a2),
                                                                 two_mode_thermal(b1, b2));
                            const double want = thermal_fidelity_1mode(a1, b1) *
                                                thermal_fidelity_1mode(a2, b2);
                            g.worst = std::max(g.worst, std::abs(got - want));
                            ++count;
                        }
            g.passed = g.worst <= g.tolerance;
            g.detail = std::to_string(count) + " occupation combinations";
        } catch (const std::exception& e) {
            g.passed = false;
            g.detail = e.what();
        }
        gates.push_back(g);
    }

    std::vector<Eigen::Matrix4d> states;
    {
        GateResult g{"fock-basis-agreement", false, 0.0, 1e-4, ""};
        try {
            for (int i = 0; i < fock_pairs; ++i) {
                const Eigen::Matrix4d va = random_low_occupancy_cm(2 * std::uint64_t(i));
                const Eigen::Matrix4d vb = random_low_occupancy_cm(2 * std::uint64_t(i) + 1);
                states.push_back(va);
                states.push_back(vb);
                const double via_fock = fock_fidelity(va, vb, fock_cutoff);
                const double via_cm = gaussian_fidelity(va, vb);
                g.worst = std::max(g.worst, std::abs(via_fock - via_cm));
            }
            g.passed = g.worst <= g.tolerance;
            g.detail = std::to_string(fock_pairs) + " random pairs, cutoff " +
                       std::to_string(fock_cutoff);
        } catch (const std::exception& e) {
            g.passed = false;
            g.detail = e.what();
        }
        gates.push_back(g);
    }

    {
        GateResult g{"unit-self-fidelity", false, 0.0, 1e-12, ""};
        try {
            for (double a1 : occupations)
                for (double a2 : occupations) states.push_back(two_mode_thermal(a1, a2));
            for (const Eigen::Matrix4d& v : states) {
                g.worst = std::max(g.worst, std::abs(gaussian_fidelity(v, v) - 1.0));
            }
            g.passed = g.worst <= g.tolerance;
            g.detail = std::to_string(states.size()) + " states";
        } catch (const std::exception& e) {
            g.passed = false;
            g.detail = e.what();
        }
        gates.push_back(g);
    }

    return gates;
}

}  // namespace omht::validation
