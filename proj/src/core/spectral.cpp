#include "core/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <stdexcept>

namespace tvgm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

DftPanel dft(const TimeSeriesPanel& panel) {
  const int n = panel.n(), p = panel.p();
  if (n < 1 || p < 1) throw std::invalid_argument("transform needs a nonempty panel");

  DftPanel out;
  out.n = n;
  out.p = p;
  out.J.resize(n, p);

  // FFTW's backward transform computes Y[k] = sum_j X[j] e^{+2 pi i j k / n}
  // over j = 0..n-1. Placing x_t at position t (and x_n at position 0, since
  // e^{+ i t omega_k} is n-periodic in t) makes Y[k] the unnormalized value at
  // omega_k for k = 1..n-1, and Y[0] the one at omega_n.
  fftw_complex* in = fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_complex* raw = fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_plan plan = fftw_plan_dft_1d(n, in, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int a = 0; a < p; ++a) {
    for (int t = 1; t <= n; ++t) {
      in[t % n][0] = panel.data(t - 1, a);
      in[t % n][1] = 0.0;
    }
    fftw_execute(plan);
    for (int k = 1; k <= n; ++k)
      out.J(k - 1, a) = scale * std::complex<double>(raw[k % n][0], raw[k % n][1]);
  }
  fftw_destroy_plan(plan);
  fftw_free(in);
  fftw_free(raw);
  return out;
}

int wrap_index(long k, int n) {
  long m = k % n;
  if (m <= 0) m += n;
  return static_cast<int>(m);
}

int wrapped_offset(int k1, int k2, int n) {
  int r = k1 - k2;
  if (2 * std::abs(r) == n) return r;  // half offset: leave the raw difference
  while (2 * r > n) r -= n;
  while (2 * r <= -n) r += n;
  return r;
}

DualFrequencyPrecision dual_frequency_precision(const CovarianceSection& cov) {
  const int n = cov.n, p = cov.p, np = n * p;
  auto prec = precision_section_bruteforce(cov);

  // Block DFT matrix matching the e^{+ i t omega_k} panel convention: row
  // block k applies the scaled phases to every node in turn. Unitary, so
  // K = U C^{-1} U^*.
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(np, np);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 1; k <= n; ++k)
    for (int t = 1; t <= n; ++t) {
      std::complex<double> phase = std::polar(scale, kTwoPi * k * t / n);
      for (int a = 0; a < p; ++a) U((k - 1) * p + a, (t - 1) * p + a) = phase;
    }

  DualFrequencyPrecision out;
  out.n = n;
  out.p = p;
  out.K = U * prec.D.cast<std::complex<double>>() * U.adjoint();
  return out;
}

Eigen::MatrixXcd predicted_block(const TvVarModel& model, int n, int k1, int k2,
                                 int quadrature_points) {
  if (k1 < 1 || k1 > n || k2 < 1 || k2 > n)
    throw std::invalid_argument("frequency indices must lie in 1..n");
  return fourier_coeff_K(model, wrapped_offset(k1, k2, n), kTwoPi * k2 / n, quadrature_points);
}

void write_kn_csv(const DualFrequencyPrecision& kn, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "k1,k2,a,b,re,im\n";
  out.precision(17);
  for (int k1 = 1; k1 <= kn.n; ++k1)
    for (int k2 = 1; k2 <= kn.n; ++k2)
      for (int a = 1; a <= kn.p; ++a)
        for (int b = 1; b <= kn.p; ++b) {
          std::complex<double> v = kn.block(k1, k2)(a - 1, b - 1);
          out << k1 << ',' << k2 << ',' << a << ',' << b << ',' << v.real() << ','
              << v.imag() << '\n';
        }
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace tvgm
