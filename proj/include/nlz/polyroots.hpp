// Real-coefficient polynomial roots via companion-matrix eigenvalues with
// Newton polishing. Degrees used here are small (<= 4).
#pragma once

#include <complex>
#include <vector>

namespace nlz {

// coeffs ascending: p(x) = coeffs[0] + coeffs[1]*x + ... + coeffs[n]*x^n.
// Leading zero coefficients are stripped. Throws std::invalid_argument on a
// constant polynomial.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs);

// p(z) and backward error |p(z)| / max(1, max_k |coeffs[k] z^k|).
std::complex<double> poly_eval(const std::vector<double>& coeffs, std::complex<double> z);
double poly_residual(const std::vector<double>& coeffs, std::complex<double> z);

// Real roots only, filtered by |Im z| <= tol * max(1, |Re z|).
std::vector<double> real_roots(const std::vector<double>& coeffs, double imag_tol = 1e-9);

}  // namespace nlz
