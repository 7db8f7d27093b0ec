// Time-varying VAR model specification and simulation.
//
// A TvVarModel is a finite-order vector autoregression whose transition
// matrices A_j vary smoothly with rescaled time u = (t-1)/(n-1) in [0,1]:
//
//   X_t = sum_{j=1..d} A_j(u_t) X_{t-j} + eps_t,   eps_t ~ N(0, Sigma) i.i.d.
//
// Each matrix entry is a scalar trajectory on [0,1] (constant, logistic
// transition, or a linearly interpolated table).
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tvgm {

// Rescaled-time argument used everywhere a lattice index t meets a trajectory:
// u = (t-1)/(n-1), clamped to [0,1] so that indices off the observation window
// (burn-in, bi-infinite lattice extensions) freeze the boundary coefficients.
inline double rescaled_time(long t, int n) {
  if (n <= 1) return 0.0;
  double u = static_cast<double>(t - 1) / static_cast<double>(n - 1);
  if (u < 0.0) return 0.0;
  if (u > 1.0) return 1.0;
  return u;
}

// Scalar coefficient trajectory on rescaled time u in [0,1].
class CoefficientFunction {
 public:
  enum class Kind { kConstant, kLogistic, kTable };

  CoefficientFunction() = default;

  static CoefficientFunction constant(double value);
  // Smooth transition lo -> hi: lo + (hi-lo) * e^{-5+10u} / (1 + e^{-5+10u}).
  static CoefficientFunction logistic(double lo, double hi);
  // Piecewise-linear interpolation through (u, value) knots; clamps outside.
  static CoefficientFunction table(std::vector<std::pair<double, double>> knots);

  // Evaluate at u in [0,1]; throws std::domain_error outside.
  double eval(double u) const;

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  // True when the trajectory is constant on an equispaced u-grid (structural
  // constancy check used by graph reading).
  bool is_constant(int grid_points = 101, double tol = 1e-12) const;

 private:
  Kind kind_ = Kind::kConstant;
  double value_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<std::pair<double, double>> knots_;
};

// Simulated observation panel: n rows (time), p columns (nodes).
struct TimeSeriesPanel {
  Eigen::MatrixXd data;   // n x p
  std::uint64_t seed = 0; // provenance

  int n() const { return static_cast<int>(data.rows()); }
  int p() const { return static_cast<int>(data.cols()); }
};

// Stability summary over a u-grid of the companion matrix.
struct StabilityReport {
  double sup_norm = 0.0;    // sup_u ||companion(u)||_2
  double sup_radius = 0.0;  // sup_u spectral radius of companion(u)
  // Sufficient condition (uniform contraction); builtin examples may fail this
  // while still having sup_radius < 1.
  bool sufficient() const { return sup_norm < 1.0; }
  bool stable() const { return sup_radius < 1.0; }
};

class TvVarModel {
 public:
  TvVarModel() = default;
  // Creates a zero model of dimension p, order d, innovation covariance sigma.
  TvVarModel(int p, int d, Eigen::MatrixXd sigma);

  int p() const { return p_; }
  int d() const { return d_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }

  // Entry (row, col) of A_j; indices 0-based, 1 <= j <= d.
  void set_entry(int j, int row, int col, CoefficientFunction f);
  const CoefficientFunction& entry(int j, int row, int col) const;

  // A_j(u) evaluated entrywise; throws on j out of [1,d] or u outside [0,1].
  Eigen::MatrixXd eval_transition(int j, double u) const;

  // Companion-form transition of dimension (p*d) x (p*d).
  Eigen::MatrixXd companion(double u) const;

  bool sigma_is_diagonal(double tol = 0.0) const;

 private:
  int p_ = 0, d_ = 0;
  Eigen::MatrixXd sigma_;
  std::vector<std::vector<CoefficientFunction>> coeff_;  // [j-1][row*p + col]
};

// Free-function spelling of the entrywise transition evaluation.
Eigen::MatrixXd eval_transition(const TvVarModel& model, int j, double u);

// Sup of companion spectral norm / radius over an equispaced u-grid.
StabilityReport stability_check(const TvVarModel& model, int grid_points = 101);

// Simulates n observations after a burn-in run (burn_in steps from zero
// initial values with the u=0 coefficients). Deterministic given seed.
// Throws std::invalid_argument for n < d or a model whose spectral radius
// reaches 1; when only the sufficient norm condition fails a warning is
// emitted once to stderr unless strict is set (then it throws too).
TimeSeriesPanel simulate(const TvVarModel& model, int n, int burn_in,
                         std::uint64_t seed, bool strict = false);

// The 4-node order-1 example system: two logistic diagonal entries moving
// -0.8 -> 0.8, all remaining nonzero entries 0.4, Sigma = I.
TvVarModel builtin_small_system();

// The 10-node order-1 system: diagonal 0.5 except node 5 whose self-trajectory
// decays 0.7 -> -0.7, two hub columns with 0.3 off-diagonals, Sigma = I.
TvVarModel builtin_large_system();

// Looks up a builtin by name ("small" or "large"); throws on unknown names.
TvVarModel builtin_model(const std::string& name);

}  // namespace tvgm
