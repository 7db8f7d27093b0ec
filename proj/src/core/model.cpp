#include "core/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <random>

namespace tvgm {

// --- CoefficientFunction -------------------------------------------------

CoefficientFunction CoefficientFunction::constant(double value) {
  CoefficientFunction f;
  f.kind_ = Kind::kConstant;
  f.value_ = value;
  return f;
}

CoefficientFunction CoefficientFunction::logistic(double lo, double hi) {
  CoefficientFunction f;
  f.kind_ = Kind::kLogistic;
  f.lo_ = lo;
  f.hi_ = hi;
  return f;
}

CoefficientFunction CoefficientFunction::table(
    std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw std::invalid_argument("table trajectory needs at least one knot");
  std::sort(knots.begin(), knots.end());
  CoefficientFunction f;
  f.kind_ = Kind::kTable;
  f.knots_ = std::move(knots);
  return f;
}

double CoefficientFunction::eval(double u) const {
  if (u < 0.0 || u > 1.0)
    throw std::domain_error("coefficient trajectory evaluated outside [0,1]");
  switch (kind_) {
    case Kind::kConstant:
      return value_;
    case Kind::kLogistic: {
      double s = std::exp(-5.0 + 10.0 * u);
      return lo_ + (hi_ - lo_) * s / (1.0 + s);
    }
    case Kind::kTable: {
      if (u <= knots_.front().first) return knots_.front().second;
      if (u >= knots_.back().first) return knots_.back().second;
      auto it = std::upper_bound(knots_.begin(), knots_.end(),
                                 std::make_pair(u, std::numeric_limits<double>::max()));
      auto hi = *it;
      auto lo = *(it - 1);
      double w = (u - lo.first) / (hi.first - lo.first);
      return lo.second + w * (hi.second - lo.second);
    }
  }
  return 0.0;  // unreachable
}

bool CoefficientFunction::is_constant(int grid_points, double tol) const {
  if (kind_ == Kind::kConstant) return true;
  double ref = eval(0.0);
  for (int g = 1; g < grid_points; ++g) {
    double u = static_cast<double>(g) / (grid_points - 1);
    if (std::abs(eval(u) - ref) > tol) return false;
  }
  return true;
}

// --- TvVarModel ------------------------------------------------------------

TvVarModel::TvVarModel(int p, int d, Eigen::MatrixXd sigma)
    : p_(p), d_(d), sigma_(std::move(sigma)) {
  if (p <= 0 || d <= 0) throw std::invalid_argument("model needs p >= 1 and d >= 1");
  if (sigma_.rows() != p || sigma_.cols() != p)
    throw std::invalid_argument("sigma must be p x p");
  if (!sigma_.isApprox(sigma_.transpose(), 1e-12))
    throw std::invalid_argument("sigma must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("sigma must be positive definite");
  coeff_.assign(d, std::vector<CoefficientFunction>(static_cast<std::size_t>(p) * p));
}

void TvVarModel::set_entry(int j, int row, int col, CoefficientFunction f) {
  if (j < 1 || j > d_) throw std::invalid_argument("lag index out of range");
  if (row < 0 || row >= p_ || col < 0 || col >= p_)
    throw std::invalid_argument("entry index out of range");
  coeff_[j - 1][static_cast<std::size_t>(row) * p_ + col] = std::move(f);
}

const CoefficientFunction& TvVarModel::entry(int j, int row, int col) const {
  if (j < 1 || j > d_) throw std::invalid_argument("lag index out of range");
  if (row < 0 || row >= p_ || col < 0 || col >= p_)
    throw std::invalid_argument("entry index out of range");
  return coeff_[j - 1][static_cast<std::size_t>(row) * p_ + col];
}

Eigen::MatrixXd TvVarModel::eval_transition(int j, double u) const {
  if (j < 1 || j > d_) throw std::invalid_argument("lag index out of range");
  Eigen::MatrixXd A(p_, p_);
  for (int r = 0; r < p_; ++r)
    for (int c = 0; c < p_; ++c)
      A(r, c) = coeff_[j - 1][static_cast<std::size_t>(r) * p_ + c].eval(u);
  return A;
}

Eigen::MatrixXd TvVarModel::companion(double u) const {
  int pd = p_ * d_;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(pd, pd);
  for (int j = 1; j <= d_; ++j)
    C.block(0, (j - 1) * p_, p_, p_) = eval_transition(j, u);
  if (d_ > 1)
    C.block(p_, 0, pd - p_, pd - p_).setIdentity();
  return C;
}

bool TvVarModel::sigma_is_diagonal(double tol) const {
  for (int r = 0; r < p_; ++r)
    for (int c = 0; c < p_; ++c)
      if (r != c && std::abs(sigma_(r, c)) > tol) return false;
  return true;
}

Eigen::MatrixXd eval_transition(const TvVarModel& model, int j, double u) {
  return model.eval_transition(j, u);
}

// --- stability --------------------------------------------------------------

StabilityReport stability_check(const TvVarModel& model, int grid_points) {
  StabilityReport rep;
  for (int g = 0; g < grid_points; ++g) {
    double u = grid_points > 1 ? static_cast<double>(g) / (grid_points - 1) : 0.0;
    Eigen::MatrixXd C = model.companion(u);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
    rep.sup_norm = std::max(rep.sup_norm, svd.singularValues()(0));
    Eigen::EigenSolver<Eigen::MatrixXd> eig(C, /*computeEigenvectors=*/false);
    rep.sup_radius = std::max(rep.sup_radius, eig.eigenvalues().cwiseAbs().maxCoeff());
  }
  return rep;
}

// --- simulation --------------------------------------------------------------

TimeSeriesPanel simulate(const TvVarModel& model, int n, int burn_in,
                         std::uint64_t seed, bool strict) {
  const int p = model.p(), d = model.d();
  if (n < d || n < 2) throw std::invalid_argument("simulation length too short");
  if (burn_in < 0) throw std::invalid_argument("burn-in must be nonnegative");

  StabilityReport stab = stability_check(model);
  if (!stab.stable())
    throw std::invalid_argument("model spectral radius reaches 1; recursion diverges");
  if (!stab.sufficient()) {
    if (strict)
      throw std::invalid_argument("model fails the sufficient stability norm condition");
    static std::once_flag warned;
    std::call_once(warned, [&] {
      std::fprintf(stderr,
                   "tvgm: warning: sufficient stability condition fails "
                   "(sup companion norm %.3f >= 1); proceeding, spectral radius %.3f < 1\n",
                   stab.sup_norm, stab.sup_radius);
    });
  }

  Eigen::LLT<Eigen::MatrixXd> llt(model.sigma());
  Eigen::MatrixXd L = llt.matrixL();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&]() {
    Eigen::VectorXd z(p);
    for (int a = 0; a < p; ++a) z[a] = gauss(rng);
    return (L * z).eval();
  };

  // History ring: hist[0] = X_{t-1}, ..., hist[d-1] = X_{t-d}.
  std::vector<Eigen::VectorXd> hist(d, Eigen::VectorXd::Zero(p));
  auto step = [&](double u) {
    Eigen::VectorXd x = draw();
    for (int j = 1; j <= d; ++j) x += model.eval_transition(j, u) * hist[j - 1];
    for (int j = d - 1; j > 0; --j) hist[j] = hist[j - 1];
    hist[0] = x;
    return x;
  };

  // Burn-in from zeros with the boundary (u = 0) coefficients, then discard.
  for (int t = 0; t < burn_in; ++t) step(0.0);

  TimeSeriesPanel panel;
  panel.seed = seed;
  panel.data.resize(n, p);
  for (int t = 1; t <= n; ++t) panel.data.row(t - 1) = step(rescaled_time(t, n)).transpose();
  return panel;
}

// --- builtin systems --------------------------------------------------------

TvVarModel builtin_small_system() {
  TvVarModel m(4, 1, Eigen::MatrixXd::Identity(4, 4));
  auto c = [](double v) { return CoefficientFunction::constant(v); };
  m.set_entry(1, 0, 0, CoefficientFunction::logistic(-0.8, 0.8));
  m.set_entry(1, 0, 2, c(0.4));
  m.set_entry(1, 1, 0, c(0.4));
  m.set_entry(1, 1, 1, c(0.4));
  m.set_entry(1, 1, 3, c(0.4));
  m.set_entry(1, 2, 2, CoefficientFunction::logistic(-0.8, 0.8));
  m.set_entry(1, 3, 1, c(0.4));
  m.set_entry(1, 3, 3, c(0.4));
  return m;
}

TvVarModel builtin_large_system() {
  TvVarModel m(10, 1, Eigen::MatrixXd::Identity(10, 10));
  auto c = [](double v) { return CoefficientFunction::constant(v); };
  for (int j = 0; j < 10; ++j)
    if (j != 4) m.set_entry(1, j, j, c(0.5));
  m.set_entry(1, 4, 4, CoefficientFunction::logistic(0.7, -0.7));
  m.set_entry(1, 8, 0, c(0.3));
  m.set_entry(1, 9, 0, c(0.3));
  for (int r : {2, 3, 5, 6}) m.set_entry(1, r, 4, c(0.3));
  return m;
}

TvVarModel builtin_model(const std::string& name) {
  if (name == "small") return builtin_small_system();
  if (name == "large") return builtin_large_system();
  throw std::invalid_argument("unknown builtin model: " + name);
}

}  // namespace tvgm
