#include "core/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tvgm {

namespace {

// Coordinate descent on the Gram form of the objective
//   (1/N) (beta^H G beta - 2 Re(c^H beta) + const) + lambda ||beta||_1,
// where G = X^H X and c = X^H Y of the training rows and N is the training row
// count. Maintains the negative gradient g = c - G beta across updates, so a
// sweep costs O(q^2) and the stationarity check O(q). The maintained gradient
// drifts over many sweeps, so it is recomputed exactly before any convergence
// claim; the solver targets half the caller's tolerance so that an
// independent residual check still clears the full tolerance.
LassoResult gram_lasso(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& c, int N,
                       double lambda, double tol, int max_iter,
                       const Eigen::VectorXcd* warm) {
  const int q = static_cast<int>(c.size());
  LassoResult result;
  result.beta = warm ? *warm : Eigen::VectorXcd::Zero(q);
  for (int j = 0; j < q; ++j)
    if (G(j, j).real() <= 0.0) result.beta(j) = 0.0;
  Eigen::VectorXcd g = c - G * result.beta;

  auto stationarity = [&]() {
    double kkt = 0.0;
    for (int j = 0; j < q; ++j) {
      std::complex<double> grad = -2.0 / N * g(j);
      double mag = std::abs(result.beta(j));
      if (mag > 0.0)
        kkt = std::max(kkt, std::abs(grad + lambda * result.beta(j) / mag));
      else
        kkt = std::max(kkt, std::max(0.0, std::abs(grad) - lambda));
    }
    return kkt;
  };

  const double threshold = lambda * N / 2.0;
  const double target = 0.5 * tol;
  for (int sweep = 1; sweep <= max_iter; ++sweep) {
    bool moved = false;
    for (int j = 0; j < q; ++j) {
      double gjj = G(j, j).real();
      if (gjj <= 0.0) continue;
      std::complex<double> z = g(j) + gjj * result.beta(j);
      double zmag = std::abs(z);
      std::complex<double> next =
          (zmag <= threshold) ? std::complex<double>(0.0)
                              : z * ((1.0 - threshold / zmag) / gjj);
      std::complex<double> delta = next - result.beta(j);
      if (delta != std::complex<double>(0.0)) {
        result.beta(j) = next;
        g.noalias() -= G.col(j) * delta;
        moved = true;
      }
    }
    result.iterations = sweep;

    if (sweep % 200 == 0) g = c - G * result.beta;  // cure incremental drift
    result.kkt = stationarity();
    if (result.kkt <= target || !moved) {
      g = c - G * result.beta;
      result.kkt = stationarity();
      if (result.kkt <= target) {
        result.converged = true;
        break;
      }
      if (!moved) break;  // numerical fixed point short of the tolerance
    }
  }
  return result;
}

}  // namespace

int EstimationConfig::resolve_M(int n) const {
  if (M > 0) return M;
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
}

std::vector<int> EstimationConfig::frequency_grid(int n) const {
  int k_max = half_grid ? (n + 1) / 2 : n;
  std::vector<int> grid;
  for (int k = 1; k <= k_max; k += stride) grid.push_back(k);
  return grid;
}

void EstimationConfig::validate(int n) const {
  if (n < 4) throw std::invalid_argument("estimation needs n >= 4");
  if (M < 0) throw std::invalid_argument("window half-width must be nonnegative");
  if (nu < 0) throw std::invalid_argument("offset bandwidth must be nonnegative");
  if (stride < 1) throw std::invalid_argument("stride must be at least 1");
  if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (lambda_grid_len < 2) throw std::invalid_argument("penalty grid needs at least 2 points");
  if (!(lambda_min_ratio > 0.0) || lambda_min_ratio > 1.0)
    throw std::invalid_argument("penalty floor ratio must lie in (0, 1]");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("iteration cap must be positive");
  int m = resolve_M(n);
  if (2 * m + 1 > n)
    throw std::invalid_argument("frequency window 2M+1 exceeds the grid size n");
  if (2 * nu + 1 > n)
    throw std::invalid_argument("offset bandwidth exceeds the grid size");
  if (2 * m + 1 < 2 * folds)
    throw std::invalid_argument("window too small: cross-validation needs 2M+1 >= 2*folds");
}

NodewiseProblem assemble_problem(const DftPanel& dft, int a, int k, int M, int nu) {
  const int n = dft.n, p = dft.p;
  if (a < 1 || a > p) throw std::invalid_argument("node index out of range");
  if (k < 1 || k > n) throw std::invalid_argument("frequency index out of range");
  if (M < 1 || nu < 0) throw std::invalid_argument("invalid window parameters");
  if (2 * M + 1 > n) throw std::invalid_argument("frequency window 2M+1 exceeds the grid size n");
  if (2 * nu + 1 > n) throw std::invalid_argument("offset bandwidth exceeds the grid size");

  NodewiseProblem prob;
  prob.a = a;
  prob.k = k;
  prob.M = M;
  prob.nu = nu;
  prob.n = n;
  prob.p = p;
  const int rows = 2 * M + 1;
  for (int r = -nu; r <= nu; ++r)
    for (int b = 1; b <= p; ++b)
      if (!(b == a && r == 0)) prob.column_map.emplace_back(b, r);
  const int cols = static_cast<int>(prob.column_map.size());

  prob.Y.resize(rows);
  prob.X.resize(rows, cols);
  for (int j = 0; j < rows; ++j) {
    int f = wrap_index(k - M + j, n);
    prob.Y(j) = dft.J(f - 1, a - 1);
    for (int c = 0; c < cols; ++c) {
      auto [b, r] = prob.column_map[c];
      prob.X(j, c) = dft.J(wrap_index(f + r, n) - 1, b - 1);
    }
  }
  return prob;
}

double lambda_max(const NodewiseProblem& problem) {
  const int N = problem.rows();
  double lmax = 0.0;
  for (int j = 0; j < problem.cols(); ++j)
    lmax = std::max(lmax, 2.0 / N * std::abs(problem.X.col(j).dot(problem.Y)));
  return lmax;
}

std::vector<double> lambda_grid(double lmax, int length, double min_ratio) {
  if (length < 1) throw std::invalid_argument("penalty grid needs at least one point");
  if (!(min_ratio > 0.0) || min_ratio > 1.0)
    throw std::invalid_argument("penalty floor ratio must lie in (0, 1]");
  std::vector<double> grid(length);
  if (length == 1) {
    grid[0] = lmax;
    return grid;
  }
  for (int i = 0; i < length; ++i)
    grid[i] = lmax * std::pow(min_ratio, static_cast<double>(i) / (length - 1));
  return grid;
}

LassoResult complex_group_lasso(const NodewiseProblem& problem, double lambda, double tol,
                                int max_iter) {
  Eigen::MatrixXcd G = problem.X.adjoint() * problem.X;
  Eigen::VectorXcd c = problem.X.adjoint() * problem.Y;
  return gram_lasso(G, c, problem.rows(), lambda, tol, max_iter, nullptr);
}

double lasso_objective(const NodewiseProblem& problem, const Eigen::VectorXcd& beta,
                       double lambda) {
  return (problem.Y - problem.X * beta).squaredNorm() / problem.rows() +
         lambda * beta.cwiseAbs().sum();
}

double kkt_residual(const NodewiseProblem& problem, const Eigen::VectorXcd& beta,
                    double lambda) {
  const int N = problem.rows();
  Eigen::VectorXcd residual = problem.X * beta - problem.Y;
  double worst = 0.0;
  for (int j = 0; j < problem.cols(); ++j) {
    std::complex<double> grad = 2.0 / N * problem.X.col(j).dot(residual);
    double mag = std::abs(beta(j));
    if (mag > 0.0)
      worst = std::max(worst, std::abs(grad + lambda * beta(j) / mag));
    else
      worst = std::max(worst, std::max(0.0, std::abs(grad) - lambda));
  }
  return worst;
}

CvResult cross_validate(const NodewiseProblem& problem, const std::vector<double>& grid,
                        int folds, double tol, int max_iter) {
  const int N = problem.rows(), q = problem.cols();
  if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (N < 2 * folds)
    throw std::invalid_argument("cross-validation needs at least two rows per fold");
  if (grid.empty()) throw std::invalid_argument("empty penalty grid");

  Eigen::MatrixXcd G = problem.X.adjoint() * problem.X;
  Eigen::VectorXcd c = problem.X.adjoint() * problem.Y;

  CvResult result;
  result.mean_cv_error.assign(grid.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    int start = static_cast<int>(static_cast<long>(f) * N / folds);
    int stop = static_cast<int>(static_cast<long>(f + 1) * N / folds);
    int held = stop - start;
    Eigen::MatrixXcd Xf = problem.X.middleRows(start, held);
    Eigen::VectorXcd Yf = problem.Y.segment(start, held);
    Eigen::MatrixXcd Gf = G - Xf.adjoint() * Xf;
    Eigen::VectorXcd cf = c - Xf.adjoint() * Yf;

    Eigen::VectorXcd warm = Eigen::VectorXcd::Zero(q);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto fit = gram_lasso(Gf, cf, N - held, grid[i], tol, max_iter, &warm);
      warm = fit.beta;
      result.mean_cv_error[i] += (Yf - Xf * fit.beta).squaredNorm() / N;
    }
  }

  result.index = static_cast<int>(
      std::min_element(result.mean_cv_error.begin(), result.mean_cv_error.end()) -
      result.mean_cv_error.begin());
  result.lambda = grid[result.index];
  return result;
}

const NodewiseFit* NodewiseFitSet::find(int a, int k) const {
  for (const auto& fit : fits)
    if (fit.a == a && fit.k == k) return &fit;
  return nullptr;
}

NodewiseFitSet fit_all(const DftPanel& dft, const EstimationConfig& config) {
  const int n = dft.n, p = dft.p;
  config.validate(n);
  const int M = config.resolve_M(n), nu = config.nu;

  NodewiseFitSet set;
  set.n = n;
  set.p = p;
  set.M = M;
  set.nu = nu;
  set.stride = config.stride;
  set.k_grid = config.frequency_grid(n);
  set.column_maps.resize(p);
  for (int a = 1; a <= p; ++a)
    for (int r = -nu; r <= nu; ++r)
      for (int b = 1; b <= p; ++b)
        if (!(b == a && r == 0)) set.column_maps[a - 1].emplace_back(b, r);

  // A shared penalty is chosen on one common grid (anchored at the largest
  // ceiling across problems) by summing the cross-validation errors.
  std::vector<double> shared_grid;
  if (config.shared_lambda) {
    double overall_max = 0.0;
    for (int a = 1; a <= p; ++a)
      for (int k : set.k_grid)
        overall_max = std::max(overall_max, lambda_max(assemble_problem(dft, a, k, M, nu)));
    shared_grid = lambda_grid(overall_max, config.lambda_grid_len, config.lambda_min_ratio);
    std::vector<double> total(shared_grid.size(), 0.0);
    for (int a = 1; a <= p; ++a)
      for (int k : set.k_grid) {
        auto prob = assemble_problem(dft, a, k, M, nu);
        auto cv = cross_validate(prob, shared_grid, config.folds, config.tol, config.max_iter);
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += cv.mean_cv_error[i];
      }
    int best = static_cast<int>(std::min_element(total.begin(), total.end()) - total.begin());
    shared_grid = {shared_grid[best]};
  }

  for (int a = 1; a <= p; ++a)
    for (int k : set.k_grid) {
      NodewiseFit fit;
      fit.a = a;
      fit.k = k;
      try {
        auto prob = assemble_problem(dft, a, k, M, nu);
        double lambda;
        if (config.shared_lambda) {
          lambda = shared_grid.front();
        } else {
          auto grid = lambda_grid(lambda_max(prob), config.lambda_grid_len,
                                  config.lambda_min_ratio);
          lambda = cross_validate(prob, grid, config.folds, config.tol, config.max_iter).lambda;
        }
        auto solved = complex_group_lasso(prob, lambda, config.tol, config.max_iter);
        fit.beta = solved.beta;
        fit.lambda = lambda;
        fit.delta = (prob.Y - prob.X * solved.beta).squaredNorm() / prob.rows();
        fit.iterations = solved.iterations;
        fit.ok = solved.converged;
      } catch (const std::exception&) {
        fit.beta = Eigen::VectorXcd::Zero(static_cast<int>(set.column_maps[a - 1].size()));
        fit.ok = false;
      }
      set.fits.push_back(std::move(fit));
    }
  return set;
}

}  // namespace tvgm
