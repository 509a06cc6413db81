// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "numrange/birth.hpp"
#include "numrange/errors.hpp"
#include "numrange/extremal.hpp"
#include "numrange/kipp3.hpp"
#include "numrange/maxent.hpp"
#include "numrange/oracle.hpp"
#include "numrange/rangegeo.hpp"

using namespace numrange;

namespace {

constexpr double kPi = 3.14159265358979323846;
const Complex I(0.0, 1.0);

struct Outcome {
  bool ok = true;
  std::string detail;
};

char buf[512];

template <class... T>
std::string fmt(const char* f, T... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ComplexMatrix fixture(double a) { return {{0.0, 2.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, a}}; }

Vector unit_vector(SplitMix64& rng, std::size_t d) {
  Vector x(d);
  for (auto& z : x) z = rng.complex_normal();
  return normalized(x);
}

ComplexMatrix random_unitary(SplitMix64& rng, std::size_t d) {
  std::vector<Vector> cols;
  while (cols.size() < d) {
    Vector v = unit_vector(rng, d);
    for (const auto& c : cols) {
      const Complex p = dot(c, v);
      for (std::size_t i = 0; i < d; ++i) v[i] -= p * c[i];
    }
    if (norm(v) > 1e-6) cols.push_back(normalized(v));
  }
  ComplexMatrix u(d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) u(i, j) = cols[j][i];
  return u;
}

double spectral_norm(const ComplexMatrix& e) {
  return std::sqrt(std::max(0.0, eig_hermitian(HermitianMatrix::symmetrize(e.adjoint() * e)).eigenvalues.back()));
}

// 1. Radial coordinate and decomposition identities of f_A.
Outcome identities() {
  double worst_rad = 0.0, worst_dec = 0.0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const std::size_t d = 1 + k % 6;
    const auto a = seeded_matrix(d, 1000 + k);
    SplitMix64 rng(77, k);
    const auto x = unit_vector(rng, d);
    const double theta = 2 * kPi * rng.uniform() - kPi;
    const Complex fa = f_eval(a, x);
    const Complex fr = f_eval(rotate(a, theta), x), fp = f_eval(rotate_prime(a, theta), x);
    worst_rad = std::max(worst_rad, std::abs(inner(fa, std::polar(1.0, theta)) - fr.real()));
    worst_dec = std::max(worst_dec, std::abs(fa - std::polar(1.0, theta) * (fr + I * fp)));
  }
  return {worst_rad <= 1e-12 && worst_dec <= 1e-12,
          fmt("max errors %.2e (radial), %.2e (decomposition), tol 1e-12", worst_rad, worst_dec)};
}

// 2. Sampled hull inside W(A); close to it for d <= 3.
Outcome sandwich() {
  int unsound = 0;
  double worst_gap = 0.0, worst_margin = -1e300;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const std::size_t d = 2 + k % 4;
    auto a = seeded_matrix(d, 5000 + k);
    a *= 1.0 / a.frobenius_norm();
    const auto cloud = sample_range(a, 100000, k);
    const auto h = hull(cloud);
    const SupportFunction sf(a);
    for (Point v : h.vertices()) {
      const double g = sf.max_gap(v).gap;
      worst_margin = std::max(worst_margin, g);
      if (g > 1e-12) ++unsound;
    }
    if (d <= 3) worst_gap = std::max(worst_gap, hausdorff(h, boundary_polygon(a, 1024)));
  }
  return {unsound == 0 && worst_gap <= 5e-3,
          fmt("%d hull vertices outside W(A) (max gap %.1e); worst d<=3 Hausdorff gap %.2e, tol 5e-3", unsound,
              worst_margin, worst_gap)};
}

// 3. Circle plus an outside point.
Outcome circle_point() {
  const auto a = fixture(2.0);
  const auto flats = flat_portions(a);
  bool angles = flats.size() == 2;
  for (const auto& f : flats) angles = angles && std::abs(std::abs(f.theta) - kPi / 3) <= 1e-6;
  const Point t1(0.5, std::sqrt(3.0) / 2), t2 = std::conj(t1);
  bool found1 = false, found2 = false, two_exposed = false;
  int non_exposed = 0;
  for (const auto& e : extreme_points(a)) {
    if (e.kind == ExtremePointReport::Kind::non_exposed) {
      ++non_exposed;
      found1 = found1 || std::abs(e.point - t1) <= 1e-6;
      found2 = found2 || std::abs(e.point - t2) <= 1e-6;
    }
    if (std::abs(e.point - 2.0) <= 1e-9)
      two_exposed = e.kind == ExtremePointReport::Kind::exposed && e.preimage.size() == 1;
  }
  const bool ok = angles && found1 && found2 && non_exposed == 2 && two_exposed;
  return {ok, fmt("%zu flat portions (+-pi/3: %s), non-exposed points %d (tangent points found: %s), (2,0) exposed "
                  "with 1-dim pre-image: %s",
                  flats.size(), angles ? "yes" : "no", non_exposed, found1 && found2 ? "yes" : "no",
                  two_exposed ? "yes" : "no")};
}

// 4. Pre-image dimensions.
Outcome multiply_generated() {
  const auto d1 = preimage(fixture(1.0), 1.0).size();
  const auto d2 = preimage(ComplexMatrix{{0.0, 2.0}, {0.0, 0.0}}, 1.0).size();
  return {d1 == 2 && d2 == 1, fmt("pre-image dimensions %zu (expected 2) and %zu (expected 1)", d1, d2)};
}

// 5. Birth of a flat portion at the multiply generated point, and refusal elsewhere.
Outcome birth() {
  const auto fam = birth_family(fixture(1.0), 1.0);
  const std::vector<double> eps{1e-1, 1e-2, 1e-3};
  double err_len = 0.0, err_h = 0.0;
  for (const auto& r : verify_birth(fam, eps)) {
    err_len = std::max(err_len, std::abs(r.flat_length - r.eps));
    err_h = std::max(err_h, std::abs(r.hausdorff_to_alpha - r.eps * std::sqrt(2.0)));
  }
  const std::vector<ComplexMatrix> fixtures{
      {{0.0, 2.0}, {0.0, 0.0}}, fixture(2.0), fixture(1.0), fixture(0.5), ComplexMatrix::diagonal(std::vector<Complex>{0.0, 1.0, I}),
      seeded_matrix(3, 9), seeded_matrix(4, 10)};
  int tried = 0, refused = 0;
  for (const auto& a : fixtures) {
    const auto pts = extreme_points(a, 256);
    const std::size_t stride = std::max<std::size_t>(1, pts.size() / 12);
    for (std::size_t k = 0; k < pts.size(); k += stride) {
      if (pts[k].multiply_generated) continue;
      ++tried;
      try {
        birth_family(a, pts[k].point);
      } catch (const PreconditionError&) {
        ++refused;
      }
    }
  }
  return {err_len <= 1e-8 && err_h <= 1e-8 && tried > 0 && refused == tried,
          fmt("flat_length error %.1e, d_H error %.1e (tol 1e-8); refused %d of %d simply generated points", err_len,
              err_h, refused, tried)};
}

// 6. Kippenhahn classes of the fixture table and their invariance.
Outcome classifier() {
  bool table = true;
  std::string bad;
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 2.0, -1.0, 3.0}) {
    if (classify(fixture(a)).cls != KippClass::R3) {
      table = false;
      bad += fmt(" fixture(%g)", a);
    }
  }
  for (double al : {0.01, 0.5})
    if (classify(m_family(al, 1.0)).cls != KippClass::E3) {
      table = false;
      bad += fmt(" M(%g,1)", al);
    }
  if (classify(f3_display(2.0, 0.1)).cls != KippClass::F3) {
    table = false;
    bad += " display(2,0.1)";
  }
  const ComplexMatrix jordan{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}};
  const auto jc = classify(jordan);
  double radius_err = 1.0;
  if (jc.cls == KippClass::E3 && jc.elliptic) {
    const auto e = jc.elliptic->ellipse();
    radius_err = std::max({std::abs(e.semi_minor - std::sqrt(2.0) / 2), std::abs(e.semi_major() - std::sqrt(2.0) / 2),
                           std::abs(e.center)});
  }
  if (radius_err > 1e-6) {
    table = false;
    bad += " jordan";
  }

  const std::vector<ComplexMatrix> fixtures{fixture(2.0), fixture(0.5), m_family(0.5, 1.0), f3_display(2.0, 0.1),
                                            jordan, seeded_matrix(3, 21)};
  std::vector<KippClass> base;
  for (const auto& f : fixtures) base.push_back(classify(f).cls);
  int changed = 0;
  SplitMix64 rng(606);
  for (int k = 0; k < 200; ++k) {
    const std::size_t which = k % fixtures.size();
    const auto u = random_unitary(rng, 3);
    Affine2 t;
    do {
      t = {rng.uniform() * 4 - 2, rng.uniform() * 4 - 2, rng.uniform() * 4 - 2, rng.uniform() * 4 - 2,
           Point(rng.uniform() * 4 - 2, rng.uniform() * 4 - 2)};
    } while (std::abs(t.det()) < 0.2);
    const auto b = affine_transform(u.adjoint() * fixtures[which] * u, t);
    if (classify(b).cls != base[which]) ++changed;
  }
  return {table && changed == 0,
          fmt("fixture table %s%s; Jordan disk radius error %.1e; class changed in %d of 200 transforms",
              table ? "ok" : "wrong at", bad.c_str(), radius_err, changed)};
}

// 7. Closures of E3 and F3 on the fixture family.
Outcome closure() {
  std::string mismatch;
  int bad_class = 0, not_linear = 0, witnesses = 0;
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 2.0}) {
    const auto m = fixture(a);
    const bool e = in_closure_E3(m), f = in_closure_F3(m);
    if ((e && f) != (a <= 1.0)) mismatch += fmt(" a=%g(E3:%d,F3:%d)", a, e, f);
    auto check = [&](bool member, KippClass want, ComplexMatrix (*witness)(const ComplexMatrix&, double)) {
      if (!member) return;
      double prev = -1.0;
      for (double eps : {1e-1, 1e-2, 1e-3}) {
        const auto w = witness(m, eps);
        ++witnesses;
        if (classify(w).cls != want) ++bad_class;
        const double dist = (w - m).frobenius_norm();
        if (prev >= 0.0 && dist > 0.2 * prev) ++not_linear;
        prev = dist;
      }
    };
    check(e, KippClass::E3, e3_witness);
    check(f, KippClass::F3, f3_witness);
  }
  return {mismatch.empty() && bad_class == 0 && not_linear == 0,
          fmt("closure membership %s%s; %d witnesses, %d misclassified, %d not shrinking linearly",
              mismatch.empty() ? "as stated" : "differs at", mismatch.c_str(), witnesses, bad_class, not_linear)};
}

// 8. Entropy discontinuity at the multiply generated disk point.
Outcome maxent_probe() {
  const auto rep = discontinuity_probe(fixture(1.0), 1.0);
  const double value_err = std::abs(rep.value - std::log(2.0));
  double worst = 0.0;
  int instances = 0;
  for (std::uint64_t k = 0; instances < 500; ++k) {
    const std::size_t d = 2 + k % 4;
    const auto a = seeded_matrix(d, 8000 + k);
    SplitMix64 rng(88, k);
    // Interior point: a random convex combination of many sampled values.
    Point alpha = 0.0;
    double wsum = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double w = rng.uniform();
      alpha += w * f_eval(a, unit_vector(rng, d));
      wsum += w;
    }
    alpha /= wsum;
    if (SupportFunction(a).max_gap(alpha).gap > -1e-3) continue;
    const double u = rng.complex_normal().real(), v = rng.complex_normal().real(), h = 1e-5;
    const Point g = dual_gradient(a, alpha, u, v);
    const double fu = (dual_value(a, alpha, u + h, v) - dual_value(a, alpha, u - h, v)) / (2 * h);
    const double fv = (dual_value(a, alpha, u, v + h) - dual_value(a, alpha, u, v - h)) / (2 * h);
    worst = std::max({worst, std::abs(g.real() - fu), std::abs(g.imag() - fv)});
    ++instances;
  }
  const bool ok = value_err <= 1e-6 && rep.boundary_limit <= 1e-3 && rep.discontinuous && worst <= 1e-6;
  return {ok, fmt("entropy at alpha %.10f (log 2 error %.1e); boundary limit %.1e, radial limit %.4f, flagged %s; "
                  "gradient vs differences %.1e on %d instances",
                  rep.value, value_err, rep.boundary_limit, rep.radial_limit, rep.discontinuous ? "yes" : "no",
                  worst, instances)};
}

// 9. Hausdorff convergence of ranges under vanishing perturbations.
Outcome hausdorff_convergence() {
  int violations = 0;
  double worst_slack = -1e300;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const std::size_t d = 2 + k % 4;
    const auto a = seeded_matrix(d, 9000 + k), e = seeded_matrix(d, 9500 + k);
    const double en = spectral_norm(e);
    std::vector<ComplexMatrix> seq;
    for (int i = 1; i <= 10; ++i) seq.push_back(a + (1.0 / i) * e);
    const auto dh = range_converges(seq, a, 1024);
    for (int i = 1; i <= 10; ++i) {
      const double slack = dh[i - 1] - (en / i + 10.0 / 1024);
      worst_slack = std::max(worst_slack, slack);
      if (slack > 0.0) ++violations;
    }
  }
  return {violations == 0,
          fmt("%d of 500 steps exceed ||A_i - A|| + 10/1024 (largest excess %.2e)", violations, worst_slack)};
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {"identity suite", 5, identities},
      {"support/oracle sandwich", 60, sandwich},
      {"circle plus outside point", 2, circle_point},
      {"multiply generated detection", 1, multiply_generated},
      {"birth of flat portions", 5, birth},
      {"Kippenhahn classifier", 30, classifier},
      {"closure of E3 and F3", 30, closure},
      {"maximum-entropy probe", 60, maxent_probe},
      {"Hausdorff convergence", 30, hausdorff_convergence},
  };
  int failed = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[k].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = o.ok && secs < all[k].budget_s;
    failed += !ok;
    std::printf("%s %zu %s: %s; %.2f s (budget %.0f s)\n", ok ? "PASS" : "FAIL", k + 1, all[k].name, o.detail.c_str(),
                secs, all[k].budget_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
