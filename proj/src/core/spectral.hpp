// Finite-n Fourier machinery: the scaled DFT panel, the dual-frequency
// precision matrix K_n (inverse covariance of the stacked DFT vector), and
// its model-implied prediction through the rescaled-time Fourier
// coefficients of the local spectral precision.
//
// Sign convention, fixed across the project: the DFT carries e^{+it omega_k}
// phases,
//   J_k^{(a)} = n^{-1/2} sum_{t=1..n} X_t^{(a)} e^{+i t omega_k},
//   omega_k = 2 pi k / n,  k = 1..n.
// A conventional e^{-it omega} transform is the conjugate / index-reversed
// panel (J'_k = conj(J_k) = J_{n-k} for real input); mixing the two silently
// transposes the off-diagonal block structure of K_n, so every model-implied
// formula in oracle.hpp uses the matching e^{+i...} phases.
#pragma once

#include <Eigen/Dense>

#include <string>

#include "core/model.hpp"
#include "core/oracle.hpp"

namespace tvgm {

// DFT values on the full Fourier grid. Row k-1 holds frequency omega_k.
// For real input, J_{n-k} = conj(J_k) for 1 <= k <= n-1 and J_n is real.
struct DftPanel {
  int n = 0, p = 0;
  Eigen::MatrixXcd J;  // n x p, J(k-1, a-1) = J_k^{(a)}

  std::complex<double> at(int k, int a) const { return J(k - 1, a - 1); }
  double omega(int k) const { return 2.0 * M_PI * k / n; }
};

// O(n log n) transform of a real panel; matches the direct sum to rounding.
DftPanel dft(const TimeSeriesPanel& panel);

// Reduces k modulo n into {1..n} (the DFT grid is periodic).
int wrap_index(long k, int n);

// Shifts r = k1 - k2 by +-n into (-n/2, n/2]; |r| = n/2 stays unshifted.
int wrapped_offset(int k1, int k2, int n);

// K_n = F* C_n^{-1} F where F is the block DFT matrix matching the J
// convention above. Stored frequency-major: entry ((k1-1)p + a, (k2-1)p + b)
// is [K_n(omega_k1, omega_k2)]_{a,b}. Hermitian positive definite; the p x p
// block at (k1, k2) is the adjoint of the block at (k2, k1).
struct DualFrequencyPrecision {
  int n = 0, p = 0;
  Eigen::MatrixXcd K;  // np x np

  Eigen::Block<const Eigen::MatrixXcd> block(int k1, int k2) const {
    return K.block((k1 - 1) * p, (k2 - 1) * p, p, p);
  }
};

// Dense construction from the covariance section (np <= 4000 guard applies
// upstream). Uses the brute-force inverse; equals (F* C_n F)^{-1}.
DualFrequencyPrecision dual_frequency_precision(const CovarianceSection& cov);

// Model-implied value of the (k1, k2) block for large n:
//   K_{r'}(omega_k2) with r' = wrapped_offset(k1, k2, n),
// accurate to O(1/n) for smooth coefficient trajectories.
Eigen::MatrixXcd predicted_block(const TvVarModel& model, int n, int k1, int k2,
                                 int quadrature_points = 512);

// CSV export (columns k1,k2,a,b,re,im) for heatmap rendering.
void write_kn_csv(const DualFrequencyPrecision& kn, const std::string& path);

}  // namespace tvgm
