#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "omht/errors.hpp"
#include "omht/optomech.hpp"
#include "omht/special.hpp"
#include "omht/symplectic.hpp"

namespace omht {

// One-tail chi-squared variance test: H0 says the measured quadrature has
// variance V0, H1 says V1 (> V0 whenever the extra diffusion is on), and the
// statistic T = (N-1) s^2 / V0 is chi-squared with N-1 dof under H0.
struct TestConfig {
    int N = 100;
    double alpha = 0.05;
    QuadratureSelector selector = QuadratureSelector::x_out1;
    double V0 = 1.0;
    double V1 = 1.0;

    void validate() const {
        if (N < 2) throw std::invalid_argument("TestConfig: N must be >= 2");
        if (!(alpha > 0.0) || !(alpha < 1.0)) {
            throw std::invalid_argument("TestConfig: alpha must be in (0, 1)");
        }
        if (!(V0 > 0.0) || !(V1 > 0.0)) {
            throw std::invalid_argument("TestConfig: variances must be positive");
        }
    }
};

enum class Decision { AcceptH0, RejectH0 };

struct HypothesisOutcome {
    Decision decision;
    double t_star;
    double quantile;
};

inline HypothesisOutcome decide(double t_star, const TestConfig& cfg) {
    cfg.validate();
    const double q = chi2_quantile(1.0 - cfg.alpha, cfg.N - 1);
    return HypothesisOutcome{t_star > q ? Decision::RejectH0 : Decision::AcceptH0, t_star, q};
}

struct ErrorRates {
    double type_i;   // reject H0 when H0 true; equals alpha by construction
    double type_ii;  // accept H0 when H1 true
    double p_err;    // equal-prior mean of the two
};

inline ErrorRates error_probability(const TestConfig& cfg) {
    cfg.validate();
    const double q = chi2_quantile(1.0 - cfg.alpha, cfg.N - 1);
    const double a = 0.5 * (cfg.N - 1);
    ErrorRates r;
    r.type_i = regularized_gamma_upper(a, 0.5 * q);
    r.type_ii = 1.0 - regularized_gamma_upper(a, 0.5 * q * cfg.V0 / cfg.V1);
    r.p_err = 0.5 * (r.type_i + r.type_ii);
    return r;
}

// Uhlmann fidelity between two zero-mean Gaussian states, returned in the
// squared convention F = (tr sqrt(sqrt(rho) rho' sqrt(rho)))^2, so that two
// identical states give 1 and N probe uses compound as F^N.
//
// Uses the auxiliary-matrix construction for multimode Gaussian states
// (vacuum covariance I/2):
//   V_aux = Omega^T (Va+Vb)^{-1} (Omega/4 + Vb Omega Va)
//   sqrtF^4 = det[2 (sqrt(I + (V_aux Omega)^{-2}/4) + I) V_aux] * det[(Va+Vb)^{-1}]
// The matrix square root is taken over the complexification; for physical
// inputs the result is real up to roundoff, which is checked.
template <class DerivedA, class DerivedB>
double gaussian_fidelity(const Eigen::MatrixBase<DerivedA>& va_expr,
                         const Eigen::MatrixBase<DerivedB>& vb_expr) {
    const Eigen::MatrixXd va = va_expr.template cast<double>();
    const Eigen::MatrixXd vb = vb_expr.template cast<double>();
    const Eigen::Index n = va.rows();
    if (va.cols() != n || vb.rows() != n || vb.cols() != n || n % 2 != 0 || n == 0) {
        throw std::invalid_argument("gaussian_fidelity: need equal-sized even-dimensional CMs");
    }
    for (const auto* v : {&va, &vb}) {
        const auto rep = check_physicality(*v);
        if (!rep.physical) {
            throw std::invalid_argument(
                "gaussian_fidelity: unphysical covariance matrix (min eigenvalue of "
                "sigma + i Omega/2 is " + std::to_string(rep.min_eigenvalue) + ")");
        }
    }
    const Eigen::MatrixXd omega = symplectic_form<double>(int(n / 2));
    const Eigen::MatrixXd sum_inv = (va + vb).inverse();
    const Eigen::MatrixXd v_aux =
        omega.transpose() * sum_inv * (0.25 * omega + vb * omega * va);

    const Eigen::MatrixXd m = v_aux * omega;
    const Eigen::FullPivLU<Eigen::MatrixXd> m2_lu(m * m);
    if (!m2_lu.isInvertible()) {
        throw NumericalError("gaussian_fidelity: singular auxiliary matrix");
    }
    const Eigen::MatrixXd g =
        Eigen::MatrixXd::Identity(n, n) + 0.25 * m2_lu.inverse();

    // det(sqrt(G) + I) = prod_i (sqrt(lambda_i) + 1): evaluating through the
    // eigenvalues sidesteps the matrix square root, which breaks down when G
    // has zero eigenvalues (identical pure states).
    const Eigen::EigenSolver<Eigen::MatrixXd> es(g);
    if (es.info() != Eigen::Success) {
        throw NumericalError("gaussian_fidelity: eigensolver failed");
    }
    std::complex<double> det_root_plus_one(1.0, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::complex<double> lambda = es.eigenvalues()(i);
        // flush eigenvalue noise around zero so sqrt stays on the real axis
        if (std::abs(lambda) < 1e-13) lambda = 0.0;
        det_root_plus_one *= std::sqrt(lambda) + 1.0;
    }
    if (std::abs(det_root_plus_one.imag()) >
        1e-8 * std::max(1.0, std::abs(det_root_plus_one.real()))) {
        throw NumericalError("gaussian_fidelity: determinant came out complex");
    }

    const double det_p = std::pow(2.0, double(n)) * det_root_plus_one.real() *
                         v_aux.determinant();
    const double f4 = sum_inv.determinant() * det_p;
    if (!(f4 > -1e-12)) {
        throw NumericalError("gaussian_fidelity: negative fidelity^4 = " + std::to_string(f4));
    }
    const double sqrt_f = std::pow(std::max(f4, 0.0), 0.25);
    return sqrt_f * sqrt_f;
}

// Fidelity-based lower bound on the mean error probability of any
// classical-probe strategy with N uses: C = (1 - sqrt(1 - F^N)) / 2.
inline double classical_bound(double fidelity, long n_uses) {
    if (!(fidelity >= 0.0) || !(fidelity <= 1.0 + 1e-12)) {
        throw std::invalid_argument("classical_bound: fidelity must be in [0, 1]");
    }
    if (n_uses < 1) {
        throw std::invalid_argument("classical_bound: N must be >= 1");
    }
    const double fn = std::pow(std::min(fidelity, 1.0), double(n_uses));
    return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - fn)));
}

// Signed advantage of the quantum protocol over the classical bound, in
// percent: Q = 100 (C - P_err)/(C + P_err). Positive means the protocol beats
// every classical strategy.
inline double quantum_advantage(double classical, double p_err) {
    if (classical < 0.0 || p_err < 0.0) {
        throw std::invalid_argument("quantum_advantage: inputs must be non-negative");
    }
    if (classical + p_err <= 0.0) {
        throw std::invalid_argument("quantum_advantage: C + P_err must be positive");
    }
    return 100.0 * (classical - p_err) / (classical + p_err);
}

}  // namespace omht
