#include "ionchaos/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ionchaos {

namespace {

constexpr double z_limit = 700.0;
constexpr double big = 1e250;

void check_args(int n, double z) {
  if (n < 0) throw std::domain_error("bessel_j: order must be >= 0");
  if (!std::isfinite(z) || std::abs(z) >= z_limit)
    throw std::domain_error("bessel_j: |z| must be < 700, got " + std::to_string(z));
}

}  // namespace

std::vector<double> bessel_j_sequence(int nmax, double z) {
  check_args(nmax, z);
  std::vector<double> J(static_cast<std::size_t>(nmax) + 1, 0.0);
  const double x = std::abs(z);
  if (x == 0.0) {
    J[0] = 1.0;
    return J;
  }
  // Start well above both the order and the turning point n ~ x.
  const double top = std::max(static_cast<double>(nmax), x);
  int m = static_cast<int>(top + 30.0 + 2.0 * std::sqrt(60.0 * top));
  m += m % 2;

  double jp1 = 0.0, j = 1e-300, norm_sum = 0.0;
  for (int k = m; k > 0; --k) {
    // j holds J_k and jp1 holds J_{k+1} (unnormalized); step down to J_{k-1}
    const double jm1 = 2.0 * k / x * j - jp1;
    jp1 = j;
    j = jm1;
    if (std::abs(j) > big) {
      j /= big;
      jp1 /= big;
      norm_sum /= big;
      for (int i = k; i <= nmax; ++i) J[static_cast<std::size_t>(i)] /= big;
    }
    const int order = k - 1;
    if (order <= nmax) J[static_cast<std::size_t>(order)] = j;
    if (order > 0 && order % 2 == 0) norm_sum += 2.0 * j;
  }
  norm_sum += j;  // J_0 term
  for (auto& v : J) v /= norm_sum;
  if (z < 0.0)
    for (int k = 1; k <= nmax; k += 2) J[static_cast<std::size_t>(k)] = -J[static_cast<std::size_t>(k)];
  return J;
}

double bessel_j(int n, double z) {
  check_args(n, z);
  return bessel_j_sequence(n, z)[static_cast<std::size_t>(n)];
}

double bessel_j_prime(int n, double z) {
  check_args(n, z);
  const auto J = bessel_j_sequence(n + 1, z);
  if (n == 0) return -J[1];
  return 0.5 * (J[static_cast<std::size_t>(n - 1)] - J[static_cast<std::size_t>(n + 1)]);
}

}  // namespace ionchaos
