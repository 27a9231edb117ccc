#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

#include "omht/errors.hpp"

namespace omht {

// Quadrature ordering is mode-interleaved: (x_1, p_1, x_2, p_2, ...).
// With [x, p] = i the symplectic form is a block diagonal of [[0,1],[-1,0]].
template <class Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> symplectic_form(int n_modes) {
    if (n_modes < 1) {
        throw std::invalid_argument("symplectic_form: n_modes must be >= 1");
    }
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> omega =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * n_modes, 2 * n_modes);
    for (int m = 0; m < n_modes; ++m) {
        omega(2 * m, 2 * m + 1) = Scalar(1);
        omega(2 * m + 1, 2 * m) = Scalar(-1);
    }
    return omega;
}

struct PhysicalityReport {
    bool physical = false;
    double min_eigenvalue = 0.0;  // smallest eigenvalue of sigma + (i/2) Omega
    double threshold = 0.0;       // acceptance threshold actually applied
    explicit operator bool() const { return physical; }
};

// A covariance matrix is a bona fide quantum state iff sigma + (i/2) Omega >= 0.
// The tolerance is scaled by max(1, ||sigma||) so that hot states (entries ~1e10)
// are not rejected on floating-point noise alone; for order-one matrices this
// reduces to the plain absolute tolerance.
template <class Derived>
PhysicalityReport check_physicality(const Eigen::MatrixBase<Derived>& sigma,
                                    double tolerance = 1e-9) {
    const Eigen::Index n = sigma.rows();
    if (n != sigma.cols() || n % 2 != 0 || n == 0) {
        throw std::invalid_argument("check_physicality: need a square even-dimensional matrix");
    }
    const double asym = double((sigma - sigma.transpose()).template lpNorm<Eigen::Infinity>());
    const double scale = std::max(1.0, double(sigma.template lpNorm<Eigen::Infinity>()));
    if (asym > 1e-9 * scale) {
        throw std::invalid_argument("check_physicality: matrix is not symmetric (|A - A^T| = " +
                                    std::to_string(asym) + ")");
    }
    using Cplx = std::complex<double>;
    Eigen::MatrixXcd herm(n, n);
    const auto omega = symplectic_form<double>(int(n / 2));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            herm(i, j) = Cplx(double(sigma(i, j)), 0.5 * omega(i, j));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    PhysicalityReport rep;
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    rep.threshold = -tolerance * scale;
    rep.physical = rep.min_eigenvalue >= rep.threshold;
    return rep;
}

}  // namespace omht
