// Oscillator eigenfunctions in xi and adaptive quadrature of their matrix
// elements.  psi_n(xi) = (2 pi eta^2)^(-1/4) (2^n n!)^(-1/2) H_n(u) e^(-u^2/2),
// u = xi / (sqrt(2) eta).
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

/// Adaptive Gauss-Kronrod over [-L, L] split into panels of width <= 1, so
/// the tolerance stays meaningful where the integrand nearly cancels.
template <class F>
double paneled_integral(F&& f, double L) {
  using boost::math::quadrature::gauss_kronrod;
  const int panels = static_cast<int>(std::ceil(2.0 * L));
  const double w = 2.0 * L / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k)
    total += gauss_kronrod<double, 31>::integrate(f, -L + k * w, -L + (k + 1) * w, 8, 1e-14);
  return total;
}

/// Normalized Hermite functions of u, orders 0..nmax, by the stable three-term recurrence.
inline std::vector<double> hermite_functions(int nmax, double u) {
  std::vector<double> h(static_cast<std::size_t>(nmax) + 1);
  h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u);
  if (nmax >= 1) h[1] = std::sqrt(2.0) * u * h[0];
  for (int n = 1; n < nmax; ++n)
    h[n + 1] = std::sqrt(2.0 / (n + 1)) * u * h[n] - std::sqrt(double(n) / (n + 1)) * h[n - 1];
  return h;
}

/// <m| e^{i xi} |n> by adaptive Gauss-Kronrod over u.
inline std::complex<double> quadrature_F(int m, int n, double eta) {
  const int top = std::max(m, n);
  const double k = std::numbers::sqrt2 * eta;
  const double L = std::sqrt(2.0 * top + 1.0) + 12.0;
  auto part = [&](bool imag) {
    return paneled_integral(
        [&](double u) {
          const auto h = hermite_functions(top, u);
          const double w = h[m] * h[n];
          return w * (imag ? std::sin(k * u) : std::cos(k * u));
        },
        L);
  };
  return {part(false), part(true)};
}

/// <xi^2> of sum_n c_n psi_n by quadrature of |Psi(xi)|^2 xi^2.
inline double quadrature_xi2(const std::vector<std::complex<double>>& c, double eta) {
  const int top = static_cast<int>(c.size()) - 1;
  const double L = std::sqrt(2.0 * top + 1.0) + 12.0;
  const double val = paneled_integral(
      [&](double u) {
        const auto h = hermite_functions(top, u);
        std::complex<double> psi = 0.0;
        for (int n = 0; n <= top; ++n) psi += c[n] * h[n];
        return std::norm(psi) * u * u;
      },
      L);
  return 2.0 * eta * eta * val;  // xi^2 = 2 eta^2 u^2; the u-measure is already normalized
}

}  // namespace oracle
