#pragma once

#include <cmath>
#include <random>

#include "numrange/matcore.hpp"
#include "numrange/rangegeo.hpp"

namespace testutil {

using numrange::Complex;
using numrange::ComplexMatrix;
using numrange::Vector;

inline constexpr double kPi = 3.14159265358979323846;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t d, double scale = 1.0) {
  std::normal_distribution<double> g;
  ComplexMatrix a(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) = scale * Complex(g(rng), g(rng));
  return a;
}

inline Vector random_unit(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g;
  Vector x(d);
  for (auto& z : x) z = Complex(g(rng), g(rng));
  return numrange::normalized(x);
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

/// Random unitary from QR of a Gaussian matrix (Gram-Schmidt).
inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t d) {
  std::vector<Vector> cols;
  while (cols.size() < d) {
    Vector v = random_unit(rng, d);
    for (const auto& c : cols) {
      const Complex p = numrange::dot(c, v);
      for (std::size_t i = 0; i < d; ++i) v[i] -= p * c[i];
    }
    if (numrange::norm(v) > 1e-6) cols.push_back(numrange::normalized(v));
  }
  ComplexMatrix u(d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) u(i, j) = cols[j][i];
  return u;
}

/// Subspace distance: || P_a - P_b ||_F.
inline double subspace_gap(const numrange::OrthonormalBasis& a, const numrange::OrthonormalBasis& b) {
  return (a.projector() - b.projector()).frobenius_norm();
}

inline numrange::OrthonormalBasis basis_of(std::size_t d, std::vector<Vector> cols) {
  for (auto& c : cols) c = numrange::normalized(c);
  return numrange::OrthonormalBasis(d, std::move(cols));
}

/// Brute-force support value: max over random unit vectors of <f_A(x), e^{it}>.
inline double sampled_support(const ComplexMatrix& a, double theta, int n, std::mt19937_64& rng) {
  double best = -1e300;
  for (int k = 0; k < n; ++k) {
    const auto x = random_unit(rng, a.dim());
    best = std::max(best, numrange::inner(numrange::f_eval(a, x), std::polar(1.0, theta)));
  }
  return best;
}

}  // namespace testutil
