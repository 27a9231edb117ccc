#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "omht/csl.hpp"
#include "omht/optomech.hpp"
#include "omht/scenario.hpp"

// Independent reference implementations used by the test suite and the
// `validate` CLI subcommand. Nothing here is on the production code path.
namespace omht::validation {

// Uhlmann fidelity (squared convention) of two zero-mean two-mode Gaussian
// states computed the hard way: build each density matrix in a truncated Fock
// basis through its Williamson normal form and a Bloch-Messiah decomposition
// of the symplectic, then take the trace norm of sqrt(rho_a) sqrt(rho_b)
// via the thermal eigenbasis. Self-validates by reconstructing each input
// covariance matrix from the built state; throws NumericalError if the
// reconstruction drifts beyond recon_tol (truncation too tight).
double fock_fidelity(const Eigen::Matrix4d& va, const Eigen::Matrix4d& vb,
                     int cutoff = 40, double weight_tol = 1e-12,
                     double recon_tol = 1e-6);

// Random physical low-occupancy two-mode covariance matrix (mean photon
// number below ~0.4 per mode), deterministic in the seed.
Eigen::Matrix4d random_low_occupancy_cm(std::uint64_t seed);

// Classic fixed-step RK4 for d(sigma)/dt = A sigma + sigma A^T + D.
Eigen::MatrixXd rk4_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d,
                             const Eigen::MatrixXd& sigma0, double t_end, int steps);

// Monte Carlo evaluation of the collapse heating rate directly from the
// real-space double integral. For a homogeneous sphere the density gradient
// is a surface delta, so the estimate samples pairs of points on the sphere.
struct McEstimate {
    double value;
    double std_error;
    long samples;
};
McEstimate csl_delta_mc(const CslParams& csl, double omega_m, CslOptions opts,
                        long samples, std::uint64_t seed);

// Recomputes every covariance trajectory a config's sweep will touch (both
// hypothesis arms plus the thermal-matched arms) and checks the 6x6 state at
// every grid point. margin = min eigenvalue of sigma + (i/2) Omega minus the
// acceptance threshold; negative margin means an unphysical state.
struct PhysicalityScan {
    bool all_physical;
    double worst_margin;
    long points_checked;
};
PhysicalityScan physicality_scan(const ScenarioConfig& cfg);

// Pre-flight oracle gates run by `validate` before any sweep: closed-form
// thermal fidelity, Fock-basis agreement on random states, unit self-fidelity.
struct GateResult {
    std::string name;
    bool passed;
    double worst;      // worst observed deviation
    double tolerance;
    std::string detail;
};
std::vector<GateResult> run_fidelity_gates(int fock_pairs = 50, int fock_cutoff = 40);

}  // namespace omht::validation
