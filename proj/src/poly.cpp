#include "cacc/poly.hpp"

#include <algorithm>

namespace cacc {

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {0.0};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

Poly poly_scale(const Poly& a, double k) {
  Poly out = a;
  for (double& c : out) c *= k;
  return out;
}

Poly poly_trim(Poly a) {
  while (a.size() > 1 && a.back() == 0.0) a.pop_back();
  if (a.empty()) a.push_back(0.0);
  return a;
}

std::complex<double> poly_eval(const Poly& a, std::complex<double> s) {
  std::complex<double> acc{0.0, 0.0};
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    acc = acc * s + *it;
  }
  return acc;
}

}  // namespace cacc
