// Test-side reference optimizer for the complex lasso
//   f(b) = (1/N) ||Y - X b||^2 + lambda sum_j |b_j|.
// Accelerated proximal gradient (fixed 1/L step, momentum restart) run to a
// tight stationarity residual. Shares no code with the production
// coordinate-descent path, so agreement certifies both.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace reference {

// Max violation of the subgradient stationarity conditions at beta, with
// grad = G beta - c the smooth-part gradient.
inline double stationarity(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& c,
                           const Eigen::VectorXcd& beta, double lambda) {
  const Eigen::VectorXcd grad = G * beta - c;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double mag = std::abs(beta(j));
    const double v = mag > 0.0
                         ? std::abs(grad(j) + lambda * beta(j) / mag)
                         : std::max(std::abs(grad(j)) - lambda, 0.0);
    worst = std::max(worst, v);
  }
  return worst;
}

struct Solution {
  Eigen::VectorXcd beta;
  int iterations = 0;
  double kkt = 0.0;
};

inline Solution fista(const Eigen::MatrixXcd& X, const Eigen::VectorXcd& Y,
                      double lambda, double kkt_tol = 1e-9,
                      int max_iter = 200000) {
  const double N = static_cast<double>(X.rows());
  const Eigen::MatrixXcd G = (2.0 / N) * (X.adjoint() * X);
  const Eigen::VectorXcd c = (2.0 / N) * (X.adjoint() * Y);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(G);
  const double L = std::max(eig.eigenvalues().maxCoeff(), 1e-12);
  const double step = 1.0 / L;

  Eigen::VectorXcd beta = Eigen::VectorXcd::Zero(X.cols());
  Eigen::VectorXcd z = beta;
  double t = 1.0;
  Solution out;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXcd w = z - step * (G * z - c);
    Eigen::VectorXcd next(w.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      const double mag = std::abs(w(j));
      next(j) = mag > step * lambda
                    ? w(j) * (1.0 - step * lambda / mag)
                    : std::complex<double>(0.0, 0.0);
    }
    if ((z - next).dot(next - beta).real() > 0.0) {
      t = 1.0;  // momentum points uphill: restart
      z = next;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      z = next + ((t - 1.0) / t_next) * (next - beta);
      t = t_next;
    }
    beta = std::move(next);
    if (it % 100 == 0) {
      out.kkt = stationarity(G, c, beta, lambda);
      if (out.kkt <= kkt_tol) {
        out.iterations = it;
        out.beta = beta;
        return out;
      }
    }
  }
  out.iterations = max_iter;
  out.kkt = stationarity(G, c, beta, lambda);
  out.beta = beta;
  return out;
}

}  // namespace reference
