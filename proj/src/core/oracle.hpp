// Exact model-implied quantities for time-varying VAR processes: finite
// covariance sections, analytic banded inverse-covariance blocks, local
// spectral precision matrices and their Fourier coefficients in rescaled
// time, partial spectral coherences, and dense finite-section checks of the
// operator identities behind the graph semantics.
//
// Everything here is brute-force-verifiable linear algebra on small sections
// (np <= 4000); it exists to validate the estimation pipeline, not to scale.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "core/model.hpp"

namespace tvgm {

// Dense covariance of the stacked vector (X_1, ..., X_n), time-major blocks:
// block (t, tau) = Cov[X_t, X_tau] sits at rows (t-1)p..tp-1.
struct CovarianceSection {
  int n = 0, p = 0;
  Eigen::MatrixXd C;  // np x np, symmetric positive definite

  Eigen::Block<const Eigen::MatrixXd> block(int t, int tau) const {
    return C.block((t - 1) * p, (tau - 1) * p, p, p);
  }
};

// Dense inverse-covariance section, same block layout.
struct PrecisionSection {
  int n = 0, p = 0;
  bool analytic = false;  // true: banded formula; false: brute-force inverse
  Eigen::MatrixXd D;

  Eigen::Block<const Eigen::MatrixXd> block(int t, int tau) const {
    return D.block((t - 1) * p, (tau - 1) * p, p, p);
  }
};

// Exact second moments of the simulated process (burn-in included through the
// u=0 stationary initialization): V_t = A(u_t) V_{t-1} A(u_t)' + Sigma with
// V_0 the u=0 stationary variance; Cov[X_t, X_tau] = prod A * V_tau for
// t >= tau. Higher orders go through the companion embedding. Guarded to
// np <= 4000; throws std::invalid_argument beyond or for unstable models.
CovarianceSection covariance_section(const TvVarModel& model, int n);

// One p x p block D_{t,tau} of the banded inverse-covariance operator of the
// bi-infinite process (u clamped off the window):
//   D_{t,tau} = sum_s Atil_{s-t}(s)' Sigma^{-1} Atil_{s-tau}(s),
// with Atil_0 = I, Atil_l = -A_l for 1 <= l <= d, zero otherwise. The sum is
// finite (s from max(t,tau) to min(t,tau)+d) and the block vanishes for
// |t - tau| > d.
Eigen::MatrixXd precision_entries_tvvar(const TvVarModel& model, int t, int tau, int n);

// Assembles the analytic banded section from precision_entries_tvvar.
PrecisionSection precision_section_analytic(const TvVarModel& model, int n);

// Dense inverse of the covariance section via symmetric (LLT) factorization.
// Throws std::runtime_error with a condition estimate when numerically
// singular.
PrecisionSection precision_section_bruteforce(const CovarianceSection& cov);

// Max over nodes a of the l1 distance between row (t, a) of the two sections.
double boundary_error(const PrecisionSection& analytic, const PrecisionSection& brute, int t);

// Local spectral precision at rescaled time u and frequency omega:
//   Gamma(u; omega) = Phi(u, omega)^* Sigma^{-1} Phi(u, omega),
//   Phi(u, omega)   = I - sum_j A_j(u) e^{+i j omega}.
// Hermitian positive definite whenever Phi is invertible. The +ij omega phase
// matches the finite-n transform convention used in spectral.hpp (J_k carries
// e^{+it omega_k}); the conjugate convention would flip the off-diagonal
// phases of every dual-frequency prediction.
Eigen::MatrixXcd local_spectral_precision(const TvVarModel& model, double u, double omega);

// r-th Fourier coefficient of u -> Gamma(u; omega) in rescaled time,
//   K_r(omega) = int_0^1 e^{+2 pi i r u} Gamma(u; omega) du,
// by composite trapezoid quadrature (quadrature_points >= 64 subintervals).
// Satisfies K_r^{(a,b)} = conj(K_{-r}^{(b,a)}).
Eigen::MatrixXcd fourier_coeff_K(const TvVarModel& model, int r, double omega,
                                 int quadrature_points = 512);

// Partial spectral coherence curve of one node pair.
struct CoherenceCurve {
  int a = 0, b = 0;  // 1-based labels, metadata only
  std::vector<double> omega;
  std::vector<std::complex<double>> R;  // |R| <= 1 on the grid
};

// R_{a,b}(omega) = -Gamma^{(a,b)} / sqrt(Gamma^{(a,a)} Gamma^{(b,b)}) from a
// grid of 2x2 restrictions [[G_aa, G_ab], [G_ba, G_bb]] of a stationary
// spectral precision. Throws on nonpositive diagonals; asserts |R| <= 1.
CoherenceCurve partial_coherence_stationary_pair(
    const std::vector<double>& omega_grid,
    const std::vector<Eigen::Matrix2cd>& gamma_blocks, int a = 1, int b = 2);

// Finite-section operator-identity report. All three families are exact
// Schur-complement identities of the dense section, checked on interior
// indices t in [n/4, 3n/4]:
//   pair_inverse:  2x2 residual covariance of (X_t^(a), X_tau^(b)) given all
//                  other coordinates vs inverse of the matching 2x2 precision
//                  submatrix;
//   block_inverse: residual covariance of series pair {a,b} given the other
//                  series vs inverse of [[D_aa, D_ab], [D_ba, D_bb]] (its
//                  off-diagonal block is also reported separately, since a
//                  zero block is the conditional-noncorrelation signature);
//   nodewise_operator: regression coefficient block B_{b->a} of series a on
//                  the others vs -D_aa^{-1} D_ab.
struct IdentityReport {
  struct Entry {
    std::string name;   // pair_inverse | block_inverse | block_offdiag | nodewise_operator
    int a = 0, b = 0;   // node labels (1-based)
    int t = 0, tau = 0; // time labels where applicable, 0 otherwise
    double max_abs_err = 0.0;
  };
  std::vector<Entry> entries;

  // Largest error among entries whose name matches (all entries if empty).
  double worst(const std::string& name = std::string()) const;
};

IdentityReport identity_checks(const CovarianceSection& cov);

// Extreme eigenvalues (min, max) of the covariance section — finite-n proxies
// for the operator spectral bounds.
std::pair<double, double> assumption_bounds(const CovarianceSection& cov);

// Pass/fail verification table over the oracle checks for one model: the
// three operator-identity families, interior agreement of the analytic and
// brute-force precision sections, covariance positive definiteness, and the
// spectral symmetry invariants (Gamma Hermitian, Fourier-coefficient
// conjugate symmetry, dual-frequency Hermitian structure).
struct VerifyReport {
  struct Row {
    std::string name;
    int a = 0, b = 0, t = 0, tau = 0;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
  };
  std::vector<Row> rows;

  int failures() const;
  std::string to_csv() const;  // header name,a,b,t,tau,error,tolerance,pass
};

VerifyReport verify_model(const TvVarModel& model, int n);

}  // namespace tvgm
