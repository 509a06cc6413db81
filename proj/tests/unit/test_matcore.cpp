#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "numrange/matcore.hpp"

using namespace numrange;
using testutil::kPi;
using testutil::max_abs_diff;

namespace {

const Complex I(0.0, 1.0);

ComplexMatrix nilpotent2() { return {{0.0, 2.0}, {0.0, 0.0}}; }
ComplexMatrix circle_point() { return {{0.0, 2.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 2.0}}; }

bool same_multiset(std::vector<Complex> a, std::vector<Complex> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& z : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](Complex x, Complex y) {
      return std::abs(x - z) < std::abs(y - z);
    });
    if (std::abs(*it - z) > tol) return false;
    b.erase(it);
  }
  return true;
}

}  // namespace

TEST_CASE("hermitian parts of the basic fixtures") {
  CHECK(max_abs_diff(re_part(nilpotent2()), ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}) == 0.0);
  CHECK(max_abs_diff(im_part(nilpotent2()), ComplexMatrix{{0.0, -I}, {I, 0.0}}) == 0.0);
  CHECK(max_abs_diff(re_part(circle_point()),
                     ComplexMatrix{{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 2.0}}) == 0.0);
  CHECK(max_abs_diff(im_part(circle_point()),
                     ComplexMatrix{{0.0, -I, 0.0}, {I, 0.0, 0.0}, {0.0, 0.0, 0.0}}) == 0.0);

  const ComplexMatrix h{{1.0, Complex(2.0, -1.0)}, {Complex(2.0, 1.0), -3.0}};
  CHECK(max_abs_diff(re_part(h), h) == 0.0);
  CHECK(im_part(h).matrix().frobenius_norm() == 0.0);
}

TEST_CASE("re + i im reconstructs A") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = testutil::random_matrix(rng, 2 + trial % 5);
    const ComplexMatrix back = re_part(a).matrix() + I * im_part(a).matrix();
    CHECK((back - a).frobenius_norm() <= 1e-14 * a.frobenius_norm());
  }
}

TEST_CASE("rotate and rotate_prime") {
  CHECK(max_abs_diff(rotate(nilpotent2(), 0.0), re_part(nilpotent2())) == 0.0);
  CHECK(max_abs_diff(rotate(nilpotent2(), kPi / 2), im_part(nilpotent2())) < 1e-15);
  const Complex w(0.5, -std::sqrt(3.0) / 2);
  const ComplexMatrix expect{{0.0, w, 0.0}, {std::conj(w), 0.0, 0.0}, {0.0, 0.0, 1.0}};
  CHECK(max_abs_diff(rotate(circle_point(), kPi / 3), expect) < 1e-15);
  CHECK(max_abs_diff(rotate_prime(circle_point(), 0.0), im_part(circle_point())) == 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = testutil::random_matrix(rng, 3);
    const double t = ang(rng), h = 1e-6;
    const ComplexMatrix fd = (1.0 / h) * (rotate(a, t + h).matrix() - rotate(a, t).matrix());
    CHECK(max_abs_diff(fd, rotate_prime(a, t)) < 1e-5);
    CHECK(max_abs_diff(rotate(a, t + 2 * kPi), rotate(a, t)) < 1e-13);
  }
}

TEST_CASE("f_eval examples and the radial identities") {
  const ComplexMatrix d01{{0.0, 0.0}, {0.0, 1.0}};
  CHECK(std::abs(f_eval(d01, Vector{0.0, 1.0}) - 1.0) < 1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(f_eval(nilpotent2(), Vector{r, r}) - 1.0) < 1e-15);
  CHECK(std::abs(f_eval(circle_point(), Vector{0.0, 0.0, 1.0}) - 2.0) < 1e-15);
  CHECK_THROWS_AS(f_eval(d01, Vector{1.0, 1.0}), std::invalid_argument);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + trial % 6;
    const auto a = testutil::random_matrix(rng, d);
    const auto x = testutil::random_unit(rng, d);
    const double t = ang(rng);
    const Complex fx = f_eval(a, x);
    CHECK(std::abs(inner(fx, std::polar(1.0, t)) - quadratic_form(rotate(a, t), x)) <= 1e-12);
    const Complex rebuilt =
        std::polar(1.0, t) * Complex(quadratic_form(rotate(a, t), x), quadratic_form(rotate_prime(a, t), x));
    CHECK(std::abs(fx - rebuilt) <= 1e-12);
  }
}

TEST_CASE("eig_hermitian examples") {
  const std::vector<Complex> d312{3.0, 1.0, 2.0};
  auto sd = eig_hermitian(ComplexMatrix::diagonal(d312));
  CHECK(sd.eigenvalues == std::vector<double>{1.0, 2.0, 3.0});

  sd = eig_hermitian(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
  CHECK(sd.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(sd.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-15));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(dot(sd.eigenvectors[0], Vector{r, -r})) - 1.0) < 1e-14);
  CHECK(std::abs(std::abs(dot(sd.eigenvectors[1], Vector{r, r})) - 1.0) < 1e-14);

  sd = eig_hermitian(rotate(circle_point(), kPi / 3));
  CHECK(sd.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(sd.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sd.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(eig_hermitian(nilpotent2()), std::invalid_argument);
}

TEST_CASE("eig_hermitian residual, orthogonality and determinism") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + trial % 8;
    const auto h = re_part(testutil::random_matrix(rng, d));
    const auto sd = eig_hermitian(h);
    const double hn = h.matrix().frobenius_norm();
    for (std::size_t k = 0; k < d; ++k) {
      auto hv = h.matrix().apply(sd.eigenvectors[k]);
      for (std::size_t i = 0; i < d; ++i) hv[i] -= sd.eigenvalues[k] * sd.eigenvectors[k][i];
      CHECK(norm(hv) <= 1e-12 * hn);
      if (k > 0) CHECK(sd.eigenvalues[k - 1] <= sd.eigenvalues[k]);
      for (std::size_t l = 0; l < d; ++l)
        CHECK(std::abs(dot(sd.eigenvectors[k], sd.eigenvectors[l]) - (k == l ? 1.0 : 0.0)) <= 1e-12);
    }
    const auto again = eig_hermitian(h);
    CHECK(again.eigenvalues == sd.eigenvalues);
    CHECK(again.eigenvectors == sd.eigenvectors);
  }
}

TEST_CASE("eig_hermitian on repeated eigenvalues") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = testutil::random_unitary(rng, 4);
    const std::vector<Complex> diag{2.0, 2.0, -1.0, 2.0};
    const auto h = u * ComplexMatrix::diagonal(diag) * u.adjoint();
    const auto sd = eig_hermitian(HermitianMatrix::symmetrize(h));
    CHECK(sd.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-13));
    for (int k = 1; k < 4; ++k) CHECK(sd.eigenvalues[k] == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("compress") {
  const auto q3 = OrthonormalBasis::standard(3);
  std::mt19937_64 rng(1);
  const auto b = testutil::random_matrix(rng, 3);
  CHECK(max_abs_diff(compress(b, q3), b) < 1e-15);

  const ComplexMatrix disk_eig{{0.0, 2.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
  const auto q = testutil::basis_of(3, {{1.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
  CHECK(compress(im_part(disk_eig), q).matrix().frobenius_norm() < 1e-15);

  const std::vector<Complex> d123{1.0, 2.0, 3.0};
  const auto q13 = testutil::basis_of(3, {{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}});
  const std::vector<Complex> d13{1.0, 3.0};
  CHECK(max_abs_diff(compress(ComplexMatrix::diagonal(d123), q13), ComplexMatrix::diagonal(d13)) == 0.0);

  CHECK_THROWS_AS(OrthonormalBasis(3, {{1.0, 1.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("cubic and quadratic roots") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Complex> r{{g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}};
    if (trial % 5 == 1) r[1] = r[0];
    if (trial % 5 == 2) r[1] = r[2] = r[0];
    const Complex c2 = -(r[0] + r[1] + r[2]);
    const Complex c1 = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
    const Complex c0 = -r[0] * r[1] * r[2];
    const auto got = cubic_roots(c2, c1, c0);
    // A triple root is only determined to about cbrt(eps).
    const double tol = trial % 5 == 2 ? 1e-4 : (trial % 5 == 1 ? 1e-6 : 1e-9);
    CHECK(same_multiset(got, r, tol * (1.0 + std::abs(r[0]))));
  }
  const auto [p, q] = quadratic_roots(Complex(-3.0, 0.0), Complex(2.0, 0.0));
  CHECK(same_multiset({p, q}, {1.0, 2.0}, 1e-14));
}

TEST_CASE("schur3 examples") {
  const ComplexMatrix upper{{1.0, 2.0, Complex(0.0, 3.0)}, {0.0, Complex(0.5, 1.0), 4.0}, {0.0, 0.0, -2.0}};
  auto s = schur3(upper);
  CHECK(same_multiset({s.triangular(0, 0), s.triangular(1, 1), s.triangular(2, 2)},
                      {1.0, Complex(0.5, 1.0), -2.0}, 1e-12));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(std::abs(s.triangular(i, j)) - std::abs(upper(i, j))) < 1e-12);

  const std::vector<Complex> d{0.0, 1.0, I};
  s = schur3(ComplexMatrix::diagonal(d));
  CHECK(same_multiset({s.triangular(0, 0), s.triangular(1, 1), s.triangular(2, 2)}, d, 1e-12));
  CHECK(std::abs(s.triangular(0, 1)) + std::abs(s.triangular(0, 2)) + std::abs(s.triangular(1, 2)) < 1e-12);

  s = schur3(circle_point());
  CHECK(same_multiset({s.triangular(0, 0), s.triangular(1, 1), s.triangular(2, 2)}, {0.0, 0.0, 2.0}, 1e-12));
}

TEST_CASE("schur3 invariants on random and defective matrices") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 600; ++trial) {
    ComplexMatrix a = testutil::random_matrix(rng, 3);
    if (trial % 3 == 1) {
      // Unitarily disguised Jordan-type blocks with repeated eigenvalues.
      const auto u = testutil::random_unitary(rng, 3);
      ComplexMatrix t{{0.7, 1.0, 0.3}, {0.0, 0.7, 1.0}, {0.0, 0.0, 0.7}};
      if (trial % 2) t(2, 2) = -1.0;
      a = u * t * u.adjoint();
    }
    const auto s = schur3(a);
    const auto& u = s.unitary;
    CHECK(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(3)) <= 1e-12);
    CHECK((u.adjoint() * a * u - s.triangular).frobenius_norm() <= 1e-10 * a.frobenius_norm());
    for (int i = 1; i < 3; ++i)
      for (int j = 0; j < i; ++j) CHECK(s.triangular(i, j) == Complex{});
    // Diagonal against the characteristic polynomial.
    const Complex tr = a.trace();
    const Complex m2 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0) +
                       a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    const Complex det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                        a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                        a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    for (int k = 0; k < 3; ++k) {
      const Complex z = s.triangular(k, k);
      const Complex p = ((z - tr) * z + m2) * z - det;
      CHECK(std::abs(p) <= 1e-8 * std::pow(1.0 + a.frobenius_norm(), 3));
    }
  }
}

TEST_CASE("unitary_with_first_column and smallest_singular_vector") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = testutil::random_unit(rng, 3);
    const auto u = unitary_with_first_column(v);
    CHECK(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(3)) < 1e-13);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(u(i, 0) - v[i]) < 1e-13);
  }
  const ComplexMatrix m{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 2.0}};
  const auto x = smallest_singular_vector(m);
  CHECK(std::abs(std::abs(x[1]) - 1.0) < 1e-14);
}
