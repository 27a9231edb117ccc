#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "omht/errors.hpp"
#include "omht/montecarlo.hpp"
#include "omht/symplectic.hpp"
#include "omht/validation.hpp"

// Truncated-Fock-basis construction of a two-mode Gaussian state:
//   V  --Williamson-->  S, (nu1, nu2)
//   S  --Bloch-Messiah-->  O1 * Z * O2   (passive, squeeze, passive)
// then each factor is lifted to the corresponding unitary on the truncated
// Fock space and applied to the thermal eigenbasis. Both passives conserve
// total photon number, so they are built and applied per photon-number
// sector instead of as dense (cutoff+1)^2-dimensional matrices.

namespace omht::validation {

namespace {

using cd = std::complex<double>;
using Eigen::Matrix2cd;
using Eigen::Matrix4d;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector4d;
using Eigen::VectorXcd;

Matrix4d omega4() { return symplectic_form<double>(2); }

// Permutation (x1, p1, x2, p2) -> (x1, x2, p1, p2).
Matrix4d xxpp_permutation() {
    Matrix4d t = Matrix4d::Zero();
    t(0, 0) = 1.0;
    t(1, 2) = 1.0;
    t(2, 1) = 1.0;
    t(3, 3) = 1.0;
    return t;
}

void require_close(double deviation, double tol, const char* what) {
    if (!(deviation <= tol)) {
        throw NumericalError(std::string("fock_fidelity: ") + what + " residual " +
                             std::to_string(deviation) + " exceeds " + std::to_string(tol));
    }
}

struct WilliamsonResult {
    Matrix4d s;
    Vector2d nu;
};

WilliamsonResult williamson(const Matrix4d& v) {
    const Eigen::LLT<Matrix4d> llt(v);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("fock_fidelity: covariance matrix is not positive definite");
    }
    const Matrix4d l = llt.matrixL();
    const Matrix4d w = omega4();
    const Matrix4d k = l.transpose() * w * l;

    Eigen::RealSchur<Matrix4d> schur(k);
    Matrix4d t = schur.matrixT();
    Matrix4d q = schur.matrixU();
    for (int i = 0; i < 4; i += 2) {
        if (t(i, i + 1) < 0.0) {
            q.col(i).swap(q.col(i + 1));
            t.col(i).swap(t.col(i + 1));
            t.row(i).swap(t.row(i + 1));
        }
    }
    Vector2d nu;
    nu(0) = 0.5 * (t(0, 1) - t(1, 0));
    nu(1) = 0.5 * (t(2, 3) - t(3, 2));
    if (!(nu(0) > 0.49 && nu(1) > 0.49)) {
        throw NumericalError("fock_fidelity: symplectic eigenvalue below the vacuum floor");
    }
    Vector4d d;
    d << nu(0), nu(0), nu(1), nu(1);
    const Matrix4d s = l * q * d.cwiseSqrt().cwiseInverse().asDiagonal();

    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    require_close((s * d.asDiagonal() * s.transpose() - v).cwiseAbs().maxCoeff(),
                  1e-10 * scale, "Williamson reconstruction");
    require_close((s * w * s.transpose() - w).cwiseAbs().maxCoeff(), 1e-9,
                  "Williamson symplecticity");
    return {s, nu};
}

struct BlochMessiah {
    Matrix4d o1;
    Matrix4d o2;
    double r1;  // Z = diag(e^r1, e^-r1, e^r2, e^-r2)
    double r2;
};

BlochMessiah bloch_messiah(const Matrix4d& s) {
    const Matrix4d w = omega4();
    const Matrix4d m = 0.5 * (s * s.transpose() + (s * s.transpose()).transpose());
    const Eigen::SelfAdjointEigenSolver<Matrix4d> es(m);
    if (es.info() != Eigen::Success) {
        throw NumericalError("fock_fidelity: eigensolver failed on S S^T");
    }
    const Vector4d p_vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix4d vecs = es.eigenvectors();

    std::vector<Vector4d> cols;
    std::vector<double> zs;
    auto gram_schmidt = [&cols](Vector4d v) {
        for (const Vector4d& c : cols) v -= c.dot(v) * c;
        return v;
    };
    // Eigenvalues come out ascending; walk them from the top. Each eigenvector
    // v with p > 1 pairs with -Omega v at eigenvalue 1/p. Near-degenerate
    // eigenspaces are handled by orthogonalizing against the columns already
    // chosen and skipping directions that are spanned.
    for (int i = 3; i >= 0 && cols.size() < 4; --i) {
        if (p_vals(i) < 1.0 + 1e-9) break;
        Vector4d v = gram_schmidt(vecs.col(i));
        const double norm = v.norm();
        if (norm < 1e-8) continue;
        v /= norm;
        cols.push_back(v);
        cols.push_back(-w * v);
        zs.push_back(p_vals(i));
    }
    while (cols.size() < 4) {
        for (int trial = 0; trial < 4; ++trial) {
            Vector4d v = gram_schmidt(Vector4d::Unit(trial));
            const double norm = v.norm();
            if (norm > 1e-6) {
                v /= norm;
                cols.push_back(v);
                cols.push_back(-w * v);
                zs.push_back(1.0);
                break;
            }
        }
    }

    Matrix4d o1;
    for (int i = 0; i < 4; ++i) o1.col(i) = cols[std::size_t(i)];
    Vector4d z;
    z << zs[0], 1.0 / zs[0], zs[1], 1.0 / zs[1];
    const Matrix4d o2 = z.cwiseInverse().asDiagonal() * o1.transpose() * s;

    require_close((o1 * o1.transpose() - Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-9,
                  "O1 orthogonality");
    require_close((o1 * w * o1.transpose() - w).cwiseAbs().maxCoeff(), 1e-9,
                  "O1 symplecticity");
    require_close((o2 * o2.transpose() - Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-9,
                  "O2 orthogonality");
    require_close((o2 * w * o2.transpose() - w).cwiseAbs().maxCoeff(), 1e-9,
                  "O2 symplecticity");
    require_close((o1 * z.asDiagonal() * o2 - s).cwiseAbs().maxCoeff(), 1e-9,
                  "Bloch-Messiah reconstruction");
    return {o1, o2, std::log(zs[0]), std::log(zs[1])};
}

// An orthogonal symplectic acts on annihilation operators as a 2x2 unitary.
Matrix2cd passive_to_u(const Matrix4d& o) {
    const Matrix4d t = xxpp_permutation();
    const Matrix4d op = t * o * t.transpose();
    const Matrix2cd u =
        op.block<2, 2>(0, 0).cast<cd>() + cd(0.0, 1.0) * op.block<2, 2>(2, 0).cast<cd>();
    require_close((op.block<2, 2>(0, 2) + op.block<2, 2>(2, 0)).cwiseAbs().maxCoeff(), 1e-9,
                  "passive block antisymmetry");
    require_close((op.block<2, 2>(2, 2) - op.block<2, 2>(0, 0)).cwiseAbs().maxCoeff(), 1e-9,
                  "passive block equality");
    require_close((u * u.adjoint() - Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-9,
                  "passive unitarity");
    return u;
}

// U = exp(-i sum_jk h_jk a_j^dag a_k) with h = i log(u), built sector by
// sector: total photon number n is conserved, and within sector n the basis
// {|m, n-m>} is capped by the per-mode cutoff on both ends.
struct SectorUnitaries {
    int cutoff;
    std::vector<MatrixXcd> blocks;  // blocks[n], n = k1 + k2

    int lo(int n) const { return std::max(0, n - cutoff); }
    int hi(int n) const { return std::min(n, cutoff); }
};

SectorUnitaries sector_passive(const Matrix2cd& u, int cutoff) {
    const Eigen::ComplexEigenSolver<Matrix2cd> ces(u);
    if (ces.info() != Eigen::Success) {
        throw NumericalError("fock_fidelity: eigensolver failed on 2x2 unitary");
    }
    Eigen::Vector2cd log_ev;
    log_ev(0) = cd(0.0, 1.0) * std::log(ces.eigenvalues()(0));
    log_ev(1) = cd(0.0, 1.0) * std::log(ces.eigenvalues()(1));
    Matrix2cd h = ces.eigenvectors() * log_ev.asDiagonal() * ces.eigenvectors().inverse();
    h = 0.5 * (h + h.adjoint()).eval();

    SectorUnitaries su{cutoff, {}};
    su.blocks.reserve(std::size_t(2 * cutoff + 1));
    for (int n = 0; n <= 2 * cutoff; ++n) {
        const int lo = su.lo(n), hi = su.hi(n);
        const int dim = hi - lo + 1;
        MatrixXcd hn = MatrixXcd::Zero(dim, dim);
        for (int m = lo; m <= hi; ++m) {
            hn(m - lo, m - lo) = h(0, 0).real() * m + h(1, 1).real() * (n - m);
            if (m < hi) {
                const double c = std::sqrt(double(m + 1) * double(n - m));
                hn(m + 1 - lo, m - lo) = h(0, 1) * c;
                hn(m - lo, m + 1 - lo) = h(1, 0) * c;
            }
        }
        const Eigen::SelfAdjointEigenSolver<MatrixXcd> hes(hn);
        if (hes.info() != Eigen::Success) {
            throw NumericalError("fock_fidelity: sector eigensolver failed");
        }
        VectorXcd phases(dim);
        for (int i = 0; i < dim; ++i) {
            phases(i) = std::exp(cd(0.0, -hes.eigenvalues()(i)));
        }
        su.blocks.push_back(hes.eigenvectors() * phases.asDiagonal() *
                            hes.eigenvectors().adjoint());
    }
    return su;
}

// exp((r/2)(a^dag a^dag - a a)) on the truncated single-mode space; satisfies
// U^dag x U = e^r x.
MatrixXd squeezer_matrix(double r, int cutoff) {
    const int d1 = cutoff + 1;
    MatrixXd a = MatrixXd::Zero(d1, d1);
    for (int k = 1; k <= cutoff; ++k) a(k - 1, k) = std::sqrt(double(k));
    const MatrixXd adag = a.transpose();
    const MatrixXd arg = 0.5 * r * (adag * adag - a * a);
    return arg.exp();
}

// Full-space index of |k1, k2>.
inline int fock_index(int k1, int k2, int d1) { return k1 * d1 + k2; }

void apply_passive_dense(const SectorUnitaries& su, VectorXcd& v) {
    const int d1 = su.cutoff + 1;
    VectorXcd out = VectorXcd::Zero(v.size());
    for (int n = 0; n <= 2 * su.cutoff; ++n) {
        const int lo = su.lo(n), hi = su.hi(n);
        const int dim = hi - lo + 1;
        VectorXcd local(dim);
        for (int m = lo; m <= hi; ++m) local(m - lo) = v(fock_index(m, n - m, d1));
        local = (su.blocks[std::size_t(n)] * local).eval();
        for (int m = lo; m <= hi; ++m) out(fock_index(m, n - m, d1)) = local(m - lo);
    }
    v.swap(out);
}

VectorXcd passive_times_unit(const SectorUnitaries& su, int k1, int k2) {
    const int d1 = su.cutoff + 1;
    VectorXcd v = VectorXcd::Zero(d1 * d1);
    const int n = k1 + k2;
    const int lo = su.lo(n), hi = su.hi(n);
    const auto col = su.blocks[std::size_t(n)].col(k1 - lo);
    for (int m = lo; m <= hi; ++m) v(fock_index(m, n - m, d1)) = col(m - lo);
    return v;
}

void apply_squeezers(const MatrixXd& s1, const MatrixXd& s2, VectorXcd& v) {
    const int d1 = int(s1.rows());
    using RowMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<RowMat> vm(v.data(), d1, d1);
    vm = (s1.cast<cd>() * vm * s2.transpose().cast<cd>()).eval();
}

// Quadrature ladder action: quad 0..3 = (x1, p1, x2, p2), xpxp ordering.
VectorXcd apply_quadrature(const VectorXcd& v, int quad, int cutoff) {
    const int d1 = cutoff + 1;
    const int mode = quad / 2;
    const bool momentum = (quad % 2) == 1;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    VectorXcd out = VectorXcd::Zero(v.size());
    for (int k1 = 0; k1 <= cutoff; ++k1) {
        for (int k2 = 0; k2 <= cutoff; ++k2) {
            const cd amp = v(fock_index(k1, k2, d1));
            if (amp == cd(0.0, 0.0)) continue;
            const int k = (mode == 0) ? k1 : k2;
            // annihilation: sqrt(k) |k-1>, creation: sqrt(k+1) |k+1>
            if (k > 0) {
                const int idx = (mode == 0) ? fock_index(k1 - 1, k2, d1)
                                            : fock_index(k1, k2 - 1, d1);
                const cd term = amp * std::sqrt(double(k)) * inv_sqrt2;
                out(idx) += momentum ? cd(0.0, -1.0) * term : term;
            }
            if (k < cutoff) {
                const int idx = (mode == 0) ? fock_index(k1 + 1, k2, d1)
                                            : fock_index(k1, k2 + 1, d1);
                const cd term = amp * std::sqrt(double(k + 1)) * inv_sqrt2;
                out(idx) += momentum ? cd(0.0, 1.0) * term : term;
            }
        }
    }
    return out;
}

struct FockState {
    MatrixXcd cols;      // one eigenvector of rho per column
    Eigen::VectorXd w;   // matching eigenvalues (thermal weights)
    double recon_err;    // max |reconstructed CM - input CM|
};

std::vector<double> thermal_weights(double nbar, int d1) {
    std::vector<double> w(std::size_t(d1), 0.0);
    if (nbar <= 1e-14) {
        w[0] = 1.0;
        return w;
    }
    const double ratio = nbar / (nbar + 1.0);
    double cur = 1.0 / (nbar + 1.0);
    for (int k = 0; k < d1; ++k) {
        w[std::size_t(k)] = cur;
        cur *= ratio;
    }
    return w;
}

FockState build_fock_state(const Matrix4d& v, int cutoff, double weight_tol) {
    const WilliamsonResult wr = williamson(v);
    const BlochMessiah bm = bloch_messiah(wr.s);
    const SectorUnitaries su1 = sector_passive(passive_to_u(bm.o1), cutoff);
    const SectorUnitaries su2 = sector_passive(passive_to_u(bm.o2), cutoff);
    const MatrixXd sq1 = squeezer_matrix(bm.r1, cutoff);
    const MatrixXd sq2 = squeezer_matrix(bm.r2, cutoff);

    const int d1 = cutoff + 1;
    const std::vector<double> w1 = thermal_weights(wr.nu(0) - 0.5, d1);
    const std::vector<double> w2 = thermal_weights(wr.nu(1) - 0.5, d1);

    std::vector<std::pair<int, int>> kept;
    std::vector<double> weights;
    for (int k1 = 0; k1 < d1; ++k1) {
        for (int k2 = 0; k2 < d1; ++k2) {
            const double w = w1[std::size_t(k1)] * w2[std::size_t(k2)];
            if (w > weight_tol) {
                kept.emplace_back(k1, k2);
                weights.push_back(w);
            }
        }
    }

    FockState state;
    state.cols.resize(d1 * d1, Eigen::Index(kept.size()));
    state.w.resize(Eigen::Index(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c) {
        VectorXcd vec = passive_times_unit(su2, kept[c].first, kept[c].second);
        apply_squeezers(sq1, sq2, vec);
        apply_passive_dense(su1, vec);
        state.cols.col(Eigen::Index(c)) = vec;
        state.w(Eigen::Index(c)) = weights[c];
    }

    // Self-validation: rebuild the covariance matrix from the constructed
    // state. Truncation or a convention slip shows up here immediately.
    Matrix4d cm = Matrix4d::Zero();
    for (Eigen::Index c = 0; c < state.cols.cols(); ++c) {
        VectorXcd quad_vecs[4];
        for (int q = 0; q < 4; ++q) {
            quad_vecs[q] = apply_quadrature(state.cols.col(c), q, cutoff);
        }
        for (int i = 0; i < 4; ++i) {
            for (int j = i; j < 4; ++j) {
                cm(i, j) += state.w(c) * quad_vecs[i].dot(quad_vecs[j]).real();
            }
        }
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < i; ++j) cm(i, j) = cm(j, i);
    }
    state.recon_err = (cm - v).cwiseAbs().maxCoeff();
    return state;
}

}  // namespace

double fock_fidelity(const Matrix4d& va, const Matrix4d& vb, int cutoff,
                     double weight_tol, double recon_tol) {
    if (cutoff < 4) {
        throw std::invalid_argument("fock_fidelity: cutoff must be at least 4");
    }
    const FockState sa = build_fock_state(va, cutoff, weight_tol);
    const FockState sb = build_fock_state(vb, cutoff, weight_tol);
    if (sa.recon_err > recon_tol || sb.recon_err > recon_tol) {
        throw NumericalError(
            "fock_fidelity: covariance reconstruction error " +
            std::to_string(std::max(sa.recon_err, sb.recon_err)) +
            " exceeds " + std::to_string(recon_tol) + "; raise the cutoff");
    }
    // sqrt(F) = || sqrt(rho_a) sqrt(rho_b) ||_1 evaluated in the two thermal
    // eigenbases: the trace norm of sqrt(w_a)_i <a_i|b_j> sqrt(w_b)_j.
    MatrixXcd cross = sa.cols.adjoint() * sb.cols;
    cross = sa.w.cwiseSqrt().asDiagonal() * cross * sb.w.cwiseSqrt().asDiagonal();
    const Eigen::JacobiSVD<MatrixXcd> svd(cross);
    const double root_f = svd.singularValues().sum();
    return root_f * root_f;
}

Eigen::Matrix4d random_low_occupancy_cm(std::uint64_t seed) {
    const CounterRng gauss = CounterRng::keyed(seed, 101);
    const CounterRng flat = CounterRng::keyed(seed, 202);
    std::uint64_t gctr = 0, fctr = 0;

    const Matrix4d t = xxpp_permutation();
    auto random_passive = [&]() {
        Matrix2cd z;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                z(i, j) = cd(gauss.normal(gctr), gauss.normal(gctr + 1));
                gctr += 2;
            }
        }
        const Eigen::HouseholderQR<Matrix2cd> qr(z);
        const Matrix2cd q = qr.householderQ();
        const Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
        Eigen::Vector2cd phase;
        for (int i = 0; i < 2; ++i) {
            const cd rii = r(i, i);
            phase(i) = (std::abs(rii) > 0.0) ? rii / std::abs(rii) : cd(1.0, 0.0);
        }
        const Matrix2cd u = q * phase.asDiagonal();
        Matrix4d op;
        op.block<2, 2>(0, 0) = u.real();
        op.block<2, 2>(0, 2) = -u.imag();
        op.block<2, 2>(2, 0) = u.imag();
        op.block<2, 2>(2, 2) = u.real();
        return Matrix4d(t.transpose() * op * t);
    };

    const Matrix4d oa = random_passive();
    const Matrix4d ob = random_passive();
    const double r1 = 0.03 + 0.27 * flat.uniform(fctr++);
    const double r2 = 0.03 + 0.27 * flat.uniform(fctr++);
    Vector4d z;
    z << std::exp(r1), std::exp(-r1), std::exp(r2), std::exp(-r2);
    const Matrix4d s = oa * z.asDiagonal() * ob;
    Vector4d nus;
    const double nu1 = 0.5 + 0.3 * flat.uniform(fctr++);
    const double nu2 = 0.5 + 0.3 * flat.uniform(fctr++);
    nus << nu1, nu1, nu2, nu2;
    const Matrix4d v = s * nus.asDiagonal() * s.transpose();
    return 0.5 * (v + v.transpose());
}

}  // namespace omht::validation
