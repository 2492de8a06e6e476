#include "nlz/polyroots.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlz {

namespace {

std::vector<double> strip_leading(const std::vector<double>& coeffs) {
  std::vector<double> c = coeffs;
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  return c;
}

std::complex<double> poly_derivative_eval(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * z + std::complex<double>(double(k) * c[k], 0.0);
  return acc;
}

std::complex<double> newton_polish(const std::vector<double>& c, std::complex<double> z) {
  for (int it = 0; it < 8; ++it) {
    const std::complex<double> p = poly_eval(c, z);
    const std::complex<double> dp = poly_derivative_eval(c, z);
    if (std::abs(dp) == 0.0) break;  // multiple root; eigenvalue estimate stands
    const std::complex<double> step = p / dp;
    z -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

}  // namespace

std::complex<double> poly_eval(const std::vector<double>& coeffs, std::complex<double> z) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
  return acc;
}

double poly_residual(const std::vector<double>& coeffs, std::complex<double> z) {
  double scale = 1.0;
  std::complex<double> zk{1.0, 0.0};
  for (double c : coeffs) {
    scale = std::max(scale, std::abs(c) * std::abs(zk));
    zk *= z;
  }
  return std::abs(poly_eval(coeffs, z)) / scale;
}

std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs) {
  const std::vector<double> c = strip_leading(coeffs);
  const std::size_t n = c.size() - 1;
  if (n == 0) throw std::invalid_argument("poly_roots: constant polynomial");
  if (n == 1) return {std::complex<double>(-c[0] / c[1], 0.0)};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(long(n), long(n));
  for (std::size_t i = 0; i + 1 < n; ++i) companion(long(i) + 1, long(i)) = 1.0;
  for (std::size_t i = 0; i < n; ++i) companion(long(i), long(n) - 1) = -c[i] / c[n];

  const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots;
  roots.reserve(n);
  for (long i = 0; i < long(n); ++i) roots.push_back(newton_polish(c, solver.eigenvalues()(i)));
  std::sort(roots.begin(), roots.end(), [](auto lhs, auto rhs) {
    return lhs.real() != rhs.real() ? lhs.real() < rhs.real() : lhs.imag() < rhs.imag();
  });
  return roots;
}

std::vector<double> real_roots(const std::vector<double>& coeffs, double imag_tol) {
  std::vector<double> out;
  for (const auto& z : poly_roots(coeffs)) {
    if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z.real()))) out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nlz
