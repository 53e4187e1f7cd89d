#pragma once

#include <complex>
#include <vector>

namespace cacc {

// Real polynomial in s, coefficients ascending: c[0] + c[1]*s + c[2]*s^2 ...
using Poly = std::vector<double>;

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, double k);

// Drops exactly-zero highest-degree coefficients; always keeps one.
Poly poly_trim(Poly a);

std::complex<double> poly_eval(const Poly& a, std::complex<double> s);

}  // namespace cacc
