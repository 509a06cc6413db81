#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "numrange/errors.hpp"
#include "numrange/extremal.hpp"

using namespace numrange;
using testutil::kPi;

namespace {

const Complex I(0.0, 1.0);
const double kR = 1.0 / std::sqrt(2.0);

ComplexMatrix nilpotent2() { return {{0.0, 2.0}, {0.0, 0.0}}; }
ComplexMatrix circle_point() { return {{0.0, 2.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 2.0}}; }
ComplexMatrix disk_eig_boundary() { return {{0.0, 2.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}}; }
ComplexMatrix diag(std::vector<Complex> d) { return ComplexMatrix::diagonal(d); }

// Tangent points from (2,0) to the unit circle, by elementary geometry.
const Point kTangentUp(0.5, std::sqrt(3.0) / 2), kTangentDown(0.5, -std::sqrt(3.0) / 2);

double near_any(Point p, const std::vector<Point>& set) {
  double d = 1e300;
  for (const auto& q : set) d = std::min(d, std::abs(p - q));
  return d;
}

}  // namespace

TEST_CASE("max_eigenspace examples") {
  auto q = max_eigenspace(circle_point(), 0.0);
  CHECK(q.size() == 1);
  CHECK(testutil::subspace_gap(q, testutil::basis_of(3, {{0.0, 0.0, 1.0}})) < 1e-12);

  q = max_eigenspace(disk_eig_boundary(), 0.0);
  CHECK(q.size() == 2);
  CHECK(testutil::subspace_gap(q, testutil::basis_of(3, {{1.0, 1.0, 0.0}, {0.0, 0.0, 1.0}})) < 1e-12);

  q = max_eigenspace(diag({0.0, 1.0}), 0.0);
  CHECK(testutil::subspace_gap(q, testutil::basis_of(2, {{0.0, 1.0}})) < 1e-14);
}

TEST_CASE("face examples") {
  auto f = face(circle_point(), kPi / 3);
  CHECK(f.support == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(f.p_plus - kTangentUp) < 1e-12);
  CHECK(std::abs(f.p_minus - 2.0) < 1e-12);
  CHECK(std::abs(f.deriv_plus) < 1e-12);
  CHECK(f.deriv_minus == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-12));

  f = face(disk_eig_boundary(), 0.0);
  CHECK(std::abs(f.p_plus - 1.0) < 1e-12);
  CHECK(std::abs(f.p_minus - 1.0) < 1e-12);
  CHECK(f.basis_plus.size() == 2);
  CHECK(testutil::subspace_gap(f.basis_plus, f.basis_m) < 1e-12);

  f = face(diag({0.0, 1.0}), 0.0);
  CHECK(std::abs(f.p_plus - 1.0) < 1e-15);
  CHECK(f.length() == 0.0);
}

TEST_CASE("face invariants on random matrices") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + trial % 4;
    const auto a = testutil::random_matrix(rng, d);
    const double scale = 1.0 + a.frobenius_norm();
    const SupportFunction h(a, 1024);
    for (int j = 0; j < 8; ++j) {
      const double t = ang(rng);
      const auto f = face(a, t);
      const Point u = std::polar(1.0, t);
      CHECK(std::abs(inner(f.p_plus, u) - f.support) <= 1e-10);
      CHECK(std::abs(inner(f.p_minus, u) - f.support) <= 1e-10);
      CHECK(f.deriv_plus >= f.deriv_minus);
      CHECK(h.contains(f.p_plus));
      CHECK(h.contains(f.p_minus));
      // Pre-image property along random combinations of basis_+.
      for (int k = 0; k < 5; ++k) {
        const auto c = testutil::random_unit(rng, f.basis_plus.size());
        CHECK(std::abs(f_eval(a, f.basis_plus.lift(c)) - f.p_plus) <= 1e-8 * scale);
      }
      // Face chart: h(g(alpha)) = alpha on the face.
      const Point mid = 0.5 * (f.p_plus + f.p_minus);
      const double g = inner(mid, I * u);
      CHECK(std::abs(u * Point(f.support, g) - mid) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("one-sided derivative of the support function") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = testutil::random_matrix(rng, 2 + trial % 4);
    for (int j = 0; j < 32; ++j) {
      const double t = ang(rng), h = 1e-5;
      const auto f = face(a, t);
      const double up = (support_value(a, t + h).support - f.support) / h;
      const double down = (f.support - support_value(a, t - h).support) / h;
      CHECK(std::abs(up - f.deriv_plus) <= 1e-4 * (1.0 + a.frobenius_norm()));
      CHECK(std::abs(down - f.deriv_minus) <= 1e-4 * (1.0 + a.frobenius_norm()));
    }
  }
}

TEST_CASE("eigencurve_derivatives examples") {
  auto e = eigencurve_derivatives(diag({0.0, 1.0}), kPi / 4);
  REQUIRE(e.size() == 2);
  CHECK(std::abs(e[0].value) < 1e-15);
  CHECK(std::abs(e[0].derivative) < 1e-15);
  CHECK(e[1].value == doctest::Approx(kR).epsilon(1e-14));
  CHECK(e[1].derivative == doctest::Approx(-kR).epsilon(1e-14));

  for (double t : {0.0, 1.0, -2.0}) {
    e = eigencurve_derivatives(nilpotent2(), t);
    CHECK(e.back().value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(e.back().derivative) < 1e-14);
  }

  e = eigencurve_derivatives(disk_eig_boundary(), 0.0);
  REQUIRE(e.size() == 3);
  CHECK(e[1].multiplicity == 2);
  CHECK(e[2].multiplicity == 2);
  CHECK(std::abs(e[1].derivative) < 1e-14);
  CHECK(std::abs(e[2].derivative) < 1e-14);
}

TEST_CASE("simple eigenvalue derivatives match finite differences") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = testutil::random_matrix(rng, 4);
    const double t = 0.1 * trial, h = 1e-6;
    const auto e = eigencurve_derivatives(a, t);
    const auto fwd = eig_hermitian(rotate(a, t + h)).eigenvalues;
    const auto bwd = eig_hermitian(rotate(a, t - h)).eigenvalues;
    for (std::size_t k = 0; k < e.size(); ++k)
      CHECK(std::abs((fwd[k] - bwd[k]) / (2 * h) - e[k].derivative) < 1e-5);
  }
}

TEST_CASE("flat_portions examples") {
  auto f = flat_portions(circle_point());
  REQUIRE(f.size() == 2);
  CHECK(f[0].theta == doctest::Approx(-kPi / 3).epsilon(1e-10));
  CHECK(f[1].theta == doctest::Approx(kPi / 3).epsilon(1e-10));
  CHECK(near_any(f[0].endpoint_minus, {kTangentDown, 2.0}) < 1e-9);
  CHECK(near_any(f[0].endpoint_plus, {kTangentDown, 2.0}) < 1e-9);
  CHECK(near_any(f[1].endpoint_minus, {kTangentUp, 2.0}) < 1e-9);
  CHECK(near_any(f[1].endpoint_plus, {kTangentUp, 2.0}) < 1e-9);
  CHECK(f[1].length == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));

  CHECK(flat_portions(nilpotent2()).empty());
  CHECK(flat_portions(diag({0.0, 1.0, I})).size() == 3);
  CHECK_THROWS_AS(flat_portions(nilpotent2(), 32), std::invalid_argument);
}

TEST_CASE("extreme_points of the circle-plus-point fixture") {
  const auto reps = extreme_points(circle_point());
  int non_exposed = 0;
  bool saw_vertex = false;
  for (const auto& r : reps) {
    CHECK_FALSE(r.multiply_generated);
    if (r.kind == ExtremePointReport::Kind::non_exposed) {
      ++non_exposed;
      CHECK(near_any(r.point, {kTangentUp, kTangentDown}) < 1e-6);
    }
    if (std::abs(r.point - 2.0) < 1e-9) {
      saw_vertex = true;
      CHECK(r.kind == ExtremePointReport::Kind::exposed);
      CHECK(r.normal_arc.length() == doctest::Approx(2 * kPi / 3).epsilon(1e-6));
    } else if (r.kind == ExtremePointReport::Kind::exposed) {
      CHECK(std::abs(std::abs(r.point) - 1.0) < 1e-9);
    }
  }
  CHECK(non_exposed == 2);
  CHECK(saw_vertex);
}

TEST_CASE("extreme_points: multiply generated and normal fixtures") {
  auto reps = extreme_points(disk_eig_boundary());
  bool found = false;
  for (const auto& r : reps) {
    if (std::abs(r.point - 1.0) < 1e-9) {
      found = true;
      CHECK(r.kind == ExtremePointReport::Kind::exposed);
      CHECK(r.multiply_generated);
      CHECK(r.preimage.size() == 2);
    } else {
      CHECK_FALSE(r.multiply_generated);
    }
  }
  CHECK(found);

  reps = extreme_points(diag({0.0, 1.0, I}));
  REQUIRE(reps.size() == 3);
  for (const auto& r : reps) {
    CHECK(near_any(r.point, {0.0, 1.0, I}) < 1e-12);
    CHECK(r.kind == ExtremePointReport::Kind::exposed);
    CHECK_FALSE(r.multiply_generated);
    CHECK(r.normal_arc.length() > 1.0);
  }
}

TEST_CASE("normal matrices: extreme points are eigenvalues with their eigenspaces") {
  std::mt19937_64 rng(47);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Complex> ev{{g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}};
    if (trial % 2) ev[3] = ev[0];
    const auto u = testutil::random_unitary(rng, 4);
    const auto a = u * diag(ev) * u.adjoint();
    for (const auto& r : extreme_points(a, 512)) {
      CHECK(near_any(r.point, ev) < 1e-9);
      CHECK(r.kind == ExtremePointReport::Kind::exposed);
      const std::size_t mult = static_cast<std::size_t>(
          std::count_if(ev.begin(), ev.end(), [&](Complex z) { return std::abs(z - r.point) < 1e-9; }));
      CHECK(r.preimage.size() == mult);
    }
  }
}

TEST_CASE("boundary vertices lie on extreme points or flat portions") {
  std::mt19937_64 rng(53);
  std::vector<ComplexMatrix> fixtures{circle_point(), disk_eig_boundary(), diag({0.0, 1.0, I})};
  for (int k = 0; k < 3; ++k) fixtures.push_back(testutil::random_matrix(rng, 3));
  for (const auto& a : fixtures) {
    const auto reps = extreme_points(a, 256);
    const auto flats = flat_portions(a, 256);
    const auto poly = boundary_polygon(a, 256);
    for (const auto& v : poly.vertices()) {
      double d = 1e300;
      for (const auto& r : reps) d = std::min(d, std::abs(v - r.point));
      for (const auto& f : flats) {
        const Point e = f.endpoint_plus - f.endpoint_minus;
        const double s = std::clamp(inner(v - f.endpoint_minus, e) / std::norm(e), 0.0, 1.0);
        d = std::min(d, std::abs(v - (f.endpoint_minus + s * e)));
      }
      CHECK(d <= 1e-7);
    }
  }
}

TEST_CASE("preimage examples") {
  auto q = preimage(circle_point(), 2.0);
  CHECK(testutil::subspace_gap(q, testutil::basis_of(3, {{0.0, 0.0, 1.0}})) < 1e-12);

  q = preimage(disk_eig_boundary(), 1.0);
  CHECK(q.size() == 2);
  CHECK(testutil::subspace_gap(q, testutil::basis_of(3, {{1.0, 1.0, 0.0}, {0.0, 0.0, 1.0}})) < 1e-12);

  q = preimage(nilpotent2(), I);
  CHECK(q.size() == 1);
  CHECK(testutil::subspace_gap(q, testutil::basis_of(2, {{1.0, I}})) < 1e-12);

  CHECK(preimage(circle_point(), kTangentUp).size() == 1);
  CHECK(preimage(nilpotent2(), 1.0).size() == 1);
}

TEST_CASE("preimage rejects points that are not extreme") {
  CHECK_THROWS_AS(preimage(nilpotent2(), 0.0), PreconditionError);
  CHECK_THROWS_AS(preimage(nilpotent2(), 1.5), PreconditionError);
  const Point mid = 0.5 * (kTangentUp + 2.0);
  try {
    preimage(circle_point(), mid);
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("flat boundary portion") != std::string::npos);
  }
}

TEST_CASE("preimage reproduces the point on random boundaries") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testutil::random_matrix(rng, 2 + trial % 3);
    const auto f = face(a, ang(rng));
    const auto q = preimage(a, f.p_plus);
    for (int k = 0; k < 5; ++k) {
      const auto c = testutil::random_unit(rng, q.size());
      CHECK(std::abs(f_eval(a, q.lift(c)) - f.p_plus) <= 1e-7 * (1.0 + a.frobenius_norm()));
    }
  }
}
