// Spectral module: scaled DFT panel, index wrapping, the dual-frequency
// precision matrix, and its model-implied block predictions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "core/model.hpp"
#include "core/oracle.hpp"
#include "core/spectral.hpp"

using namespace tvgm;
using std::complex;

namespace {

const double kPi = 3.14159265358979323846;

TimeSeriesPanel random_panel(int n, int p, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  TimeSeriesPanel panel;
  panel.data = Eigen::MatrixXd::NullaryExpr(n, p, [&](Eigen::Index, Eigen::Index) {
    return gauss(gen);
  });
  return panel;
}

// Quadratic-time reference transform; the production path must match it.
Eigen::MatrixXcd direct_dft(const Eigen::MatrixXd& data) {
  const int n = static_cast<int>(data.rows()), p = static_cast<int>(data.cols());
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, p);
  for (int k = 1; k <= n; ++k)
    for (int a = 0; a < p; ++a) {
      complex<double> acc = 0.0;
      for (int t = 1; t <= n; ++t)
        acc += data(t - 1, a) * std::polar(1.0, 2.0 * kPi * k * t / n);
      J(k - 1, a) = acc / std::sqrt(static_cast<double>(n));
    }
  return J;
}

TvVarModel scalar_ar1(double a) {
  TvVarModel m(1, 1, Eigen::MatrixXd::Identity(1, 1));
  m.set_entry(1, 0, 0, CoefficientFunction::constant(a));
  return m;
}

}  // namespace

TEST_CASE("fast transform matches the direct sum") {
  for (int n : {5, 16, 31, 64}) {
    auto panel = random_panel(n, 3, 1234 + n);
    auto fast = dft(panel);
    REQUIRE(fast.n == n);
    REQUIRE(fast.p == 3);
    CHECK((fast.J - direct_dft(panel.data)).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("transform of real input is conjugate symmetric") {
  auto panel = random_panel(24, 2, 77);
  auto J = dft(panel);
  for (int k = 1; k < 24; ++k)
    for (int a = 1; a <= 2; ++a)
      CHECK(std::abs(J.at(24 - k, a) - std::conj(J.at(k, a))) < 1e-12);
  // The k = n value is the scaled sample sum, hence real.
  CHECK(std::abs(J.at(24, 1).imag()) < 1e-12);
  CHECK(J.at(24, 1).real() ==
        doctest::Approx(panel.data.col(0).sum() / std::sqrt(24.0)).epsilon(1e-12));
}

TEST_CASE("transform is unitary") {
  auto panel = random_panel(40, 2, 5);
  auto J = dft(panel);
  for (int a = 0; a < 2; ++a)
    CHECK(J.J.col(a).squaredNorm() ==
          doctest::Approx(panel.data.col(a).squaredNorm()).epsilon(1e-12));
}

TEST_CASE("pure cosine concentrates at its own frequency") {
  const int n = 32, m = 5;
  TimeSeriesPanel panel;
  panel.data.resize(n, 1);
  for (int t = 1; t <= n; ++t) panel.data(t - 1, 0) = std::cos(2.0 * kPi * m * t / n);
  auto J = dft(panel);
  CHECK(std::abs(J.at(m, 1)) == doctest::Approx(std::sqrt(n) / 2.0).epsilon(1e-10));
  CHECK(std::abs(J.at(n - m, 1)) == doctest::Approx(std::sqrt(n) / 2.0).epsilon(1e-10));
  for (int k = 1; k <= n; ++k)
    if (k != m && k != n - m) CHECK(std::abs(J.at(k, 1)) < 1e-10);
}

TEST_CASE("index wrapping") {
  CHECK(wrap_index(1, 8) == 1);
  CHECK(wrap_index(8, 8) == 8);
  CHECK(wrap_index(0, 8) == 8);
  CHECK(wrap_index(9, 8) == 1);
  CHECK(wrap_index(-1, 8) == 7);
  CHECK(wrap_index(17, 8) == 1);
  CHECK(wrap_index(-15, 8) == 1);

  CHECK(wrapped_offset(1, 1, 8) == 0);
  CHECK(wrapped_offset(3, 1, 8) == 2);
  CHECK(wrapped_offset(1, 3, 8) == -2);
  CHECK(wrapped_offset(7, 1, 8) == -2);  // 6 wraps to -2
  CHECK(wrapped_offset(1, 7, 8) == 2);
  CHECK(wrapped_offset(8, 1, 8) == -1);
  // Half offsets stay where the raw difference puts them.
  CHECK(wrapped_offset(5, 1, 8) == 4);
  CHECK(wrapped_offset(1, 5, 8) == -4);
  // Odd n has no half offset.
  CHECK(wrapped_offset(5, 1, 7) == -3);
  CHECK(wrapped_offset(1, 5, 7) == 3);
}

TEST_CASE("dual-frequency precision of white noise is diagonal") {
  TvVarModel wn(2, 1, Eigen::MatrixXd::Identity(2, 2) * 4.0);
  auto kn = dual_frequency_precision(covariance_section(wn, 16));
  REQUIRE(kn.n == 16);
  REQUIRE(kn.p == 2);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Identity(32, 32) * 0.25;
  CHECK((kn.K - expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dual-frequency precision is Hermitian with adjoint-linked blocks") {
  auto kn = dual_frequency_precision(covariance_section(builtin_small_system(), 24));
  CHECK((kn.K - kn.K.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  for (int k1 : {1, 5, 13})
    for (int k2 : {2, 24}) {
      Eigen::MatrixXcd a = kn.block(k1, k2);
      Eigen::MatrixXcd b = kn.block(k2, k1);
      CHECK((a - b.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("stationary diagonal blocks follow the inverse spectral density") {
  const int n = 64;
  auto m = scalar_ar1(0.5);
  auto kn = dual_frequency_precision(covariance_section(m, n));
  double worst_diag = 0.0, worst_off = 0.0;
  for (int k1 = 1; k1 <= n; ++k1) {
    double w = 2.0 * kPi * k1 / n;
    worst_diag = std::max(worst_diag,
                          std::abs(kn.block(k1, k1)(0, 0) - (1.25 - std::cos(w))));
    for (int k2 = 1; k2 <= n; ++k2)
      if (k2 != k1) worst_off = std::max(worst_off, std::abs(kn.block(k1, k2)(0, 0)));
  }
  CHECK(worst_diag < 5.0 / n);
  CHECK(worst_off < 0.05);
}

TEST_CASE("leakage off the diagonal decays as n grows") {
  auto m = scalar_ar1(0.5);
  auto off_max = [&](int n) {
    auto kn = dual_frequency_precision(covariance_section(m, n));
    double worst = 0.0;
    for (int k1 = 1; k1 <= n; ++k1)
      for (int k2 = 1; k2 <= n; ++k2)
        if (k1 != k2) worst = std::max(worst, std::abs(kn.block(k1, k2)(0, 0)));
    return worst;
  };
  double e64 = off_max(64), e128 = off_max(128);
  CHECK(e128 < 0.7 * e64);
}

TEST_CASE("predicted blocks reduce to the Fourier coefficients") {
  auto m = builtin_small_system();
  const int n = 32;
  for (auto [k1, k2] : {std::pair{3, 3}, {7, 5}, {2, 31}, {16, 32}}) {
    auto pred = predicted_block(m, n, k1, k2, 128);
    auto direct = fourier_coeff_K(m, wrapped_offset(k1, k2, n), 2.0 * kPi * k2 / n, 128);
    CHECK((pred - direct).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK_THROWS_AS(predicted_block(m, n, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(predicted_block(m, n, 1, 33), std::invalid_argument);
}

TEST_CASE("predicted blocks approximate the nonstationary dual-frequency matrix") {
  // Time-varying scalar model: the off-diagonal mass is genuine (smooth
  // coefficient path), and the finite-n matrix approaches the prediction.
  TvVarModel m(1, 1, Eigen::MatrixXd::Identity(1, 1));
  m.set_entry(1, 0, 0, CoefficientFunction::logistic(0.2, 0.7));
  auto worst_err = [&](int n) {
    auto kn = dual_frequency_precision(covariance_section(m, n));
    double worst = 0.0;
    for (auto [k1, k2] : {std::pair{1, 1}, {n / 4, n / 4}, {n / 4 + 1, n / 4},
                          {n / 2, n / 2 - 3}, {n, 1}, {3, n}}) {
      auto pred = predicted_block(m, n, k1, k2, 256);
      worst = std::max(worst, (kn.block(k1, k2) - pred).cwiseAbs().maxCoeff());
    }
    return worst;
  };
  double e64 = worst_err(64), e128 = worst_err(128);
  CHECK(e64 < 0.25);
  CHECK(e128 < 0.75 * e64);

  // Nonzero offsets genuinely carry mass here (nonstationarity is visible).
  auto kn = dual_frequency_precision(covariance_section(m, 64));
  CHECK(std::abs(kn.block(17, 16)(0, 0)) > 1e-3);
}

TEST_CASE("predicted blocks track the four-node system") {
  auto m = builtin_small_system();
  const int n = 64;
  auto kn = dual_frequency_precision(covariance_section(m, n));
  double worst = 0.0;
  for (auto [k1, k2] : {std::pair{5, 5}, {9, 8}, {20, 22}, {40, 40}, {64, 2}})
    worst = std::max(worst,
                     (kn.block(k1, k2) - predicted_block(m, n, k1, k2, 256)).cwiseAbs().maxCoeff());
  CHECK(worst < 0.5);
}

TEST_CASE("dual-frequency CSV export") {
  TvVarModel wn(1, 1, Eigen::MatrixXd::Identity(1, 1));
  auto kn = dual_frequency_precision(covariance_section(wn, 4));
  std::string path = "kn_test_tmp.csv";
  write_kn_csv(kn, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == "k1,k2,a,b,re,im");
  int rows = 0;
  double diag_re = 0.0;
  while (std::getline(in, line)) {
    ++rows;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    int k1, k2, a, b;
    double re, im;
    fields >> k1 >> k2 >> a >> b >> re >> im;
    if (k1 == 2 && k2 == 2 && a == 1 && b == 1) diag_re = re;
  }
  CHECK(rows == 16);
  CHECK(diag_re == doctest::Approx(1.0).epsilon(1e-10));
  in.close();
  std::remove(path.c_str());

  CHECK_THROWS_AS(write_kn_csv(kn, "/nonexistent_dir_zz/kn.csv"), std::runtime_error);
}
