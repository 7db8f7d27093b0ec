// Node-wise frequency-domain regressions with a complex l1 penalty.
//
// For node a and center frequency omega_k the response collects the DFT of
// node a over a window of 2M+1 frequencies around k, and each row's
// regressors are the DFTs of all nodes at offsets -nu..nu around that row's
// frequency, excluding only node a at offset 0. The fitted objective is
//
//   (1/(2M+1)) ||Y - X beta||^2 + lambda sum_j |beta_j|,
//
// a lasso over complex coefficients (equivalently a group lasso over
// real/imaginary pairs), solved by cyclic coordinate descent with a complex
// soft-threshold update. lambda is chosen per problem by cross-validation
// over contiguous frequency folds (neighboring DFT rows are near-replicates,
// so random folds would leak).
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

#include "core/spectral.hpp"

namespace tvgm {

struct EstimationConfig {
  int M = 0;                     // window half-width; 0 -> ceil(sqrt(n))
  int nu = 1;                    // regressor offset bandwidth
  int lambda_grid_len = 50;      // log-spaced path length
  double lambda_min_ratio = 1e-3;  // grid floor relative to lambda_max
  int folds = 5;                 // contiguous CV folds
  int stride = 1;                // fit every stride-th frequency
  double tol = 1e-6;             // KKT tolerance
  int max_iter = 10000;          // coordinate-descent sweep cap
  bool shared_lambda = false;    // one lambda across all problems (default: per problem)
  bool half_grid = false;        // fit only k <= ceil(n/2); mirror fits are conjugates

  int resolve_M(int n) const;
  // Center frequencies 1, 1+stride, ... (restricted to the half grid when
  // half_grid is set).
  std::vector<int> frequency_grid(int n) const;
  void validate(int n) const;  // throws std::invalid_argument on bad combinations
};

// One assembled regression problem.
struct NodewiseProblem {
  int a = 0, k = 0;   // target node (1-based), center frequency index
  int M = 0, nu = 0;
  int n = 0, p = 0;
  Eigen::VectorXcd Y;  // 2M+1 responses, row j at frequency wrap(k - M + j)
  Eigen::MatrixXcd X;  // (2M+1) x ((2nu+1)p - 1)
  // column_map[c] = (node b, offset r), columns ordered r-major then node,
  // with (a, 0) skipped.
  std::vector<std::pair<int, int>> column_map;

  int rows() const { return static_cast<int>(Y.size()); }
  int cols() const { return static_cast<int>(X.cols()); }
};

NodewiseProblem assemble_problem(const DftPanel& dft, int a, int k, int M, int nu);

// Smallest lambda whose solution is identically zero:
// max_j (2/(2M+1)) |X_j^* Y|. Returns 0 for a zero response.
double lambda_max(const NodewiseProblem& problem);

// Log-spaced descending grid from lmax down to min_ratio * lmax.
std::vector<double> lambda_grid(double lmax, int length = 50, double min_ratio = 1e-3);

struct LassoResult {
  Eigen::VectorXcd beta;
  int iterations = 0;      // completed sweeps
  double kkt = 0.0;        // final stationarity residual
  bool converged = false;
};

// Cyclic coordinate descent for the objective above. Each coordinate update
// is the complex soft-threshold
//   beta_j <- S(X_j^* r_{-j}, lambda (2M+1) / 2) / ||X_j||^2,
//   S(z, t) = z * max(1 - t/|z|, 0),
// identical to the 2-dimensional group-lasso update on (Re, Im). Converges
// when the stationarity residual clears tol, verified on a freshly
// recomputed gradient (the internal target is tol/2, so an independent
// residual check still passes at tol). A numerical fixed point short of the
// tolerance or the sweep cap ends with converged = false and the final
// residual recorded.
LassoResult complex_group_lasso(const NodewiseProblem& problem, double lambda,
                                double tol = 1e-6, int max_iter = 10000);

double lasso_objective(const NodewiseProblem& problem, const Eigen::VectorXcd& beta,
                       double lambda);

// Max stationarity violation: for active j the modulus of
// (2/N) X_j^*(X beta - Y) + lambda beta_j/|beta_j|, for inactive j the excess
// of |(2/N) X_j^*(X beta - Y)| over lambda.
double kkt_residual(const NodewiseProblem& problem, const Eigen::VectorXcd& beta,
                    double lambda);

struct CvResult {
  double lambda = 0.0;                 // argmin of the mean held-out error
  int index = 0;                       // its position in the grid
  std::vector<double> mean_cv_error;   // per grid point
};

// K-fold cross-validation over contiguous row blocks with warm starts along
// the descending grid. Requires 2M+1 >= 2*folds.
CvResult cross_validate(const NodewiseProblem& problem, const std::vector<double>& grid,
                        int folds, double tol = 1e-6, int max_iter = 10000);

struct NodewiseFit {
  int a = 0, k = 0;
  Eigen::VectorXcd beta;   // indexed by the node's column map
  double lambda = 0.0;     // selected penalty
  double delta = 0.0;      // mean squared residual modulus at lambda
  int iterations = 0;
  bool ok = true;          // false when the solver failed; recorded, not fatal
};

struct NodewiseFitSet {
  int n = 0, p = 0, M = 0, nu = 0, stride = 1;
  std::vector<int> k_grid;  // fitted center frequencies
  // column_maps[a-1] lists (b, r) for the columns of node a's problems.
  std::vector<std::vector<std::pair<int, int>>> column_maps;
  std::vector<NodewiseFit> fits;  // one per (a, k), a-major then k

  const NodewiseFit* find(int a, int k) const;
};

// Cross-validates and fits one problem per (a, k) on the stride-subsampled
// frequency grid. Per-fit failures are recorded in the result, not thrown.
NodewiseFitSet fit_all(const DftPanel& dft, const EstimationConfig& config);

}  // namespace tvgm
