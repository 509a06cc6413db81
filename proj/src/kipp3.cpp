#include "numrange/kipp3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "golden.hpp"
#include "numrange/errors.hpp"

namespace numrange {

using detail::kPi;
using detail::kTwoPi;

namespace {

constexpr Complex kI{0.0, 1.0};

double scale_of(const ComplexMatrix& a) { return 1.0 + a.frobenius_norm(); }

void require3(const ComplexMatrix& a, const char* what) {
  if (a.dim() != 3) throw PreconditionError(std::string(what) + " requires a 3x3 matrix");
}

double cross(Point u, Point v) { return u.real() * v.imag() - u.imag() * v.real(); }

ComplexMatrix all_ones3() {
  ComplexMatrix j(3);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) j(r, c) = 1.0;
  return j;
}

ComplexMatrix diag3(Complex a, Complex b, Complex c) {
  const std::vector<Complex> d{a, b, c};
  return ComplexMatrix::diagonal(d);
}

/// Matrix with the given columns.
ComplexMatrix from_columns(const std::vector<Vector>& cols) {
  const std::size_t d = cols.size();
  ComplexMatrix u(d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) u(i, j) = cols[j][i];
  return u;
}

std::vector<std::vector<std::size_t>> clusters(const std::vector<double>& ascending, double tol) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k < ascending.size(); ++k) {
    if (out.empty() || ascending[k] - ascending[out.back().back()] > tol) out.emplace_back();
    out.back().push_back(k);
  }
  return out;
}

double residual(const ComplexMatrix& a, const Vector& x, Complex alpha) {
  const auto ax = a.apply(x);
  const auto ahx = a.adjoint().apply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += std::norm(ax[i] - alpha * x[i]) + std::norm(ahx[i] - std::conj(alpha) * x[i]);
  return std::sqrt(s);
}

/// Support function of an ellipse in direction e^{i theta}.
double ellipse_support(const EllipseParams& e, double theta) {
  const Point f = e.foci.second - e.foci.first;
  const double phi = std::abs(f) > 0.0 ? std::arg(f) : 0.0;
  const double big = e.semi_major(), small = e.semi_minor;
  const double c = std::cos(theta - phi), s = std::sin(theta - phi);
  return inner(e.center, std::polar(1.0, theta)) + std::sqrt(big * big * c * c + small * small * s * s);
}

/// max_theta <p, e^{i theta}> - h_E(theta): the distance to E outside, minus
/// the distance to the boundary inside.
double ellipse_offset(const EllipseParams& e, Point p) {
  auto g = [&](double t) { return inner(p, std::polar(1.0, t)) - ellipse_support(e, t); };
  constexpr int n = 720;
  const double step = kTwoPi / n;
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = g(step * k);
  double best = *std::max_element(v.begin(), v.end());
  for (int k = 0; k < n; ++k) {
    if (v[k] < v[(k + n - 1) % n] || v[k] < v[(k + 1) % n]) continue;
    const double t0 = step * k;
    const double t = detail::golden_min([&](double x) { return -g(x); }, t0 - step, t0 + step);
    best = std::max(best, g(t));
  }
  return best;
}

std::vector<double> rank_one_angles(const ComplexMatrix& a, int grid) {
  const double scale = scale_of(a);
  const auto n = static_cast<std::size_t>(grid);
  const double step = kTwoPi / static_cast<double>(n);
  auto gap = [&](double t) {
    const auto ev = eig_hermitian(rotate(a, t)).eigenvalues;
    return ev[ev.size() - 1] - ev[ev.size() - 2];
  };
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = gap(step * static_cast<double>(k));
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k) {
    const double prev = g[(k + n - 1) % n], next = g[(k + 1) % n];
    if (g[k] > prev || g[k] > next || g[k] > 2.0 * step * scale) continue;
    const double t0 = step * static_cast<double>(k);
    const double t = detail::golden_min(gap, t0 - step, t0 + step);
    if (gap(t) > 1e-8 * scale) continue;
    const double w = detail::wrap_angle(t);
    bool dup = false;
    for (double o : out) dup = dup || std::abs(detail::wrap_angle(o - w)) < 1e-7;
    if (!dup) out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_normal(const ComplexMatrix& a) {
  const ComplexMatrix ah = a.adjoint();
  const double s = scale_of(a);
  return (ah * a - a * ah).frobenius_norm() <= 1e-8 * s * s;
}

std::optional<CanonicalForm3> already_canonical(const ComplexMatrix& a) {
  constexpr double tol = 1e-14;
  auto near = [&](std::size_t i, std::size_t j, Complex v) { return std::abs(a(i, j) - v) <= tol; };
  auto offdiag_zero = [&] {
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j && !near(i, j, 0.0)) return false;
    return true;
  };
  CanonicalForm3 f;
  f.unitary = ComplexMatrix::identity(3);
  if (offdiag_zero() && near(0, 0, 0.0)) {
    const Complex b = a(1, 1), c = a(2, 2);
    if (std::abs(b) <= tol && std::abs(c) <= tol) {
      f.kind = CanonicalKind::zero;
      f.matrix = ComplexMatrix(3);
      return f;
    }
    if (std::abs(c - 1.0) <= tol && std::abs(b.imag()) <= tol && b.real() >= 0.0 && b.real() <= 0.5) {
      f.kind = CanonicalKind::diag_0_lambda_1;
      f.parameter = b.real();
      f.matrix = diag3(0.0, b.real(), 1.0);
      return f;
    }
    if (std::abs(b - 1.0) <= tol && std::abs(c - kI) <= tol) {
      f.kind = CanonicalKind::diag_0_1_i;
      f.matrix = diag3(0.0, 1.0, kI);
      return f;
    }
    return std::nullopt;
  }
  const Complex av = a(2, 2);
  const bool shape = near(0, 1, 2.0) && near(0, 0, 0.0) && near(1, 1, 0.0) && near(0, 2, 0.0) &&
                     near(1, 0, 0.0) && near(1, 2, 0.0) && near(2, 0, 0.0) && near(2, 1, 0.0);
  if (shape && std::abs(av.imag()) <= tol && av.real() >= 0.0) {
    f.kind = CanonicalKind::offdiag_a;
    f.parameter = av.real();
    f.matrix = offdiag_form(av.real());
    return f;
  }
  return std::nullopt;
}

/// Real-linear part of z -> c z.
Affine2 complex_affine(Complex c, Complex shift) {
  Affine2 t;
  t.t00 = c.real();
  t.t01 = -c.imag();
  t.t10 = c.imag();
  t.t11 = c.real();
  t.shift = shift;
  return t;
}

ComplexMatrix to_original(const CanonicalForm3& cf, const ComplexMatrix& w) {
  const ComplexMatrix back = affine_transform(w, cf.affine.inverse());
  return cf.unitary * back * cf.unitary.adjoint();
}

}  // namespace

// ---- Kippenhahn polynomial --------------------------------------------------

KippenhahnPolynomial::KippenhahnPolynomial(int degree)
    : degree_(degree), c_(static_cast<std::size_t>((degree + 1) * (degree + 1)), 0.0) {}

double KippenhahnPolynomial::coefficient(int i, int j, int k) const {
  if (i < 0 || j < 0 || k < 0 || i + j + k != degree_) return 0.0;
  return c_[static_cast<std::size_t>(j * (degree_ + 1) + k)];
}

void KippenhahnPolynomial::set_coefficient(int j, int k, double value) {
  if (j < 0 || k < 0 || j + k > degree_) throw std::out_of_range("coefficient index");
  c_[static_cast<std::size_t>(j * (degree_ + 1) + k)] = value;
}

double KippenhahnPolynomial::operator()(double y0, double y1, double y2) const {
  double s = 0.0;
  for (int j = 0; j <= degree_; ++j)
    for (int k = 0; j + k <= degree_; ++k)
      s += coefficient(degree_ - j - k, j, k) * std::pow(y0, degree_ - j - k) * std::pow(y1, j) * std::pow(y2, k);
  return s;
}

KippenhahnPolynomial kippenhahn_polynomial(const ComplexMatrix& a) {
  const int d = static_cast<int>(a.dim());
  if (d == 0) return KippenhahnPolynomial(0);
  if (d > 12) throw std::invalid_argument("kippenhahn_polynomial supports d <= 12");
  const auto re = re_part(a), im = im_part(a);
  const int w = d + 1;
  const std::size_t masks = std::size_t{1} << d;
  // poly[mask] holds the partial sum over injections of the first
  // popcount(mask) rows into the columns of mask; index j * w + k for
  // y1^j y2^k (the y0 exponent is implied by the degree).
  std::vector<std::vector<Complex>> poly(masks);
  poly[0].assign(static_cast<std::size_t>(w * w), 0.0);
  poly[0][0] = 1.0;
  for (std::size_t mask = 0; mask < masks; ++mask) {
    if (poly[mask].empty()) continue;
    const int row = __builtin_popcountll(mask);
    if (row == d) continue;
    for (int col = 0; col < d; ++col) {
      const std::size_t bit = std::size_t{1} << col;
      if (mask & bit) continue;
      const int above = __builtin_popcountll(mask >> (col + 1));
      const double sign = (above % 2) ? -1.0 : 1.0;
      const Complex e0 = row == col ? 1.0 : 0.0;
      const Complex e1 = re(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
      const Complex e2 = im(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
      auto& dst = poly[mask | bit];
      if (dst.empty()) dst.assign(static_cast<std::size_t>(w * w), 0.0);
      const auto& src = poly[mask];
      for (int j = 0; j <= row; ++j)
        for (int k = 0; j + k <= row; ++k) {
          const Complex v = sign * src[static_cast<std::size_t>(j * w + k)];
          if (v == 0.0) continue;
          dst[static_cast<std::size_t>(j * w + k)] += v * e0;
          dst[static_cast<std::size_t>((j + 1) * w + k)] += v * e1;
          dst[static_cast<std::size_t>(j * w + k + 1)] += v * e2;
        }
    }
    if (row > 0) std::vector<Complex>().swap(poly[mask]);
  }
  KippenhahnPolynomial f(d);
  const auto& top = poly[masks - 1];
  for (int j = 0; j <= d; ++j)
    for (int k = 0; j + k <= d; ++k) f.set_coefficient(j, k, top[static_cast<std::size_t>(j * w + k)].real());
  return f;
}

// ---- normal eigenvalues -----------------------------------------------------

std::vector<Vector> normal_eigenvectors(const ComplexMatrix& a) {
  const std::size_t d = a.dim();
  if (d == 0) return {};
  const double tol = 1e-8 * scale_of(a);
  const auto re = re_part(a), im = im_part(a);
  // A joint eigenvector is an eigenvector of every real combination of
  // Re(A), Im(A); a generic one separates the candidates.
  const double c = 0.41421356237309515;
  const auto h = HermitianMatrix::symmetrize(re.matrix() + c * im.matrix());
  const auto eh = eig_hermitian(h);
  std::vector<Vector> candidates;
  for (const auto& cl : clusters(eh.eigenvalues, tol)) {
    if (cl.size() == 1) {
      candidates.push_back(eh.eigenvectors[cl[0]]);
      continue;
    }
    std::vector<Vector> cols;
    for (std::size_t k : cl) cols.push_back(eh.eigenvectors[k]);
    const OrthonormalBasis q(d, cols);
    const auto er = eig_hermitian(compress(re, q));
    for (const auto& v : er.eigenvectors) candidates.push_back(q.lift(v));
  }
  std::vector<Vector> out;
  for (auto& x : candidates) {
    const Complex alpha = dot(x, a.apply(x));
    if (residual(a, x, alpha) <= tol) out.push_back(std::move(x));
  }
  return out;
}

std::vector<Complex> normal_eigenvalues(const ComplexMatrix& a) {
  const double tol = 1e-8 * scale_of(a);
  std::vector<Complex> out;
  for (const auto& x : normal_eigenvectors(a)) {
    const Complex alpha = dot(x, a.apply(x));
    bool dup = false;
    for (Complex o : out) dup = dup || std::abs(o - alpha) <= tol;
    if (!dup) out.push_back(alpha);
  }
  return out;
}

bool is_reducible3(const ComplexMatrix& a) {
  require3(a, "is_reducible3");
  return !normal_eigenvectors(a).empty();
}

// ---- elliptic criterion -----------------------------------------------------

EllipseParams EllipticData::ellipse() const {
  return {0.5 * (foci.first + foci.second), foci, 0.5 * minor_axis};
}

std::optional<EllipticData> elliptic_data(const ComplexMatrix& a) {
  require3(a, "elliptic_data");
  const double scale = scale_of(a);
  const auto t = schur3(a).triangular;
  const Complex ea = t(0, 0), eb = t(1, 1), ec = t(2, 2);
  const Complex x = t(0, 1), y = t(0, 2), z = t(1, 2);
  const double d = std::norm(x) + std::norm(y) + std::norm(z);
  if (std::sqrt(d) <= 1e-9 * scale) return std::nullopt;
  const Complex lambda = (ec * std::norm(x) + eb * std::norm(y) + ea * std::norm(z) - x * std::conj(y) * z) / d;
  const Complex eig[3] = {ea, eb, ec};
  std::size_t best = 0;
  for (std::size_t k = 1; k < 3; ++k)
    if (std::abs(eig[k] - lambda) < std::abs(eig[best] - lambda)) best = k;
  if (std::abs(eig[best] - lambda) > 1e-8 * scale) return std::nullopt;
  EllipticData e;
  e.lambda = lambda;
  e.foci = {eig[(best + 1) % 3], eig[(best + 2) % 3]};
  e.d = d;
  e.minor_axis = std::sqrt(d);
  return e;
}

// ---- classification ---------------------------------------------------------

std::string to_string(KippClass c) {
  switch (c) {
    case KippClass::R3: return "R3";
    case KippClass::E3: return "E3";
    case KippClass::F3: return "F3";
    case KippClass::O3: return "O3";
  }
  return "?";
}

std::string to_string(RangeShape s) {
  switch (s) {
    case RangeShape::point: return "point";
    case RangeShape::segment: return "segment";
    case RangeShape::triangle: return "triangle";
    case RangeShape::ellipse: return "ellipse";
    case RangeShape::ellipse_plus_outside_point: return "ellipse_plus_outside_point";
    case RangeShape::ellipse_irreducible: return "ellipse_irreducible";
    case RangeShape::flat_portion_shape: return "flat_portion_shape";
    case RangeShape::ovular: return "ovular";
  }
  return "?";
}

std::string to_string(CanonicalKind k) {
  switch (k) {
    case CanonicalKind::zero: return "zero";
    case CanonicalKind::diag_0_lambda_1: return "diag_0_lambda_1";
    case CanonicalKind::diag_0_1_i: return "diag_0_1_i";
    case CanonicalKind::offdiag_a: return "offdiag_a";
  }
  return "?";
}

KippenhahnClassification classify(const ComplexMatrix& a, int grid) {
  require3(a, "classify");
  const double scale = scale_of(a);
  KippenhahnClassification out;
  const auto nev = normal_eigenvectors(a);
  if (!nev.empty()) {
    out.cls = KippClass::R3;
    out.normal_eigenvalues = normal_eigenvalues(a);
    if (is_normal(a)) {
      const auto t = schur3(a).triangular;
      const Point w[3] = {t(0, 0), t(1, 1), t(2, 2)};
      double diam = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) diam = std::max(diam, std::abs(w[i] - w[j]));
      if (diam <= 1e-9 * scale) {
        out.shape = RangeShape::point;
      } else {
        const double area = std::abs(cross(w[1] - w[0], w[2] - w[0]));
        out.shape = area / diam <= 1e-9 * scale ? RangeShape::segment : RangeShape::triangle;
      }
      return out;
    }
    // One normal direction: A = alpha (+) B with B a non-normal 2x2 block.
    const auto u0 = unitary_with_first_column(nev[0]);
    const auto b = u0.adjoint() * a * u0;
    const Complex alpha = b(0, 0);
    const ComplexMatrix blk{{b(1, 1), b(1, 2)}, {b(2, 1), b(2, 2)}};
    const auto [m1, m2] = quadratic_roots(-blk.trace(), blk(0, 0) * blk(1, 1) - blk(0, 1) * blk(1, 0));
    const double fro2 = blk.frobenius_norm() * blk.frobenius_norm();
    const double minor = std::sqrt(std::max(0.0, fro2 - std::norm(m1) - std::norm(m2)));
    EllipseParams e{0.5 * (m1 + m2), {m1, m2}, 0.5 * minor};
    out.block_ellipse = e;
    out.eigenvalue_offset = ellipse_offset(e, alpha);
    out.shape = out.eigenvalue_offset <= 1e-8 * scale ? RangeShape::ellipse : RangeShape::ellipse_plus_outside_point;
    return out;
  }
  for (const auto& fp : flat_portions(a, grid)) out.flat_angles.push_back(detail::wrap_angle(fp.theta));
  // An ellipse has no flat portion; the scan overrides a tolerance-level
  // match of the elliptic criterion.
  if (out.flat_angles.empty()) out.elliptic = elliptic_data(a);
  if (out.elliptic) {
    out.cls = KippClass::E3;
    out.shape = RangeShape::ellipse_irreducible;
    return out;
  }
  out.rank_one_angles = rank_one_angles(a, grid);
  auto covered = [](const std::vector<double>& xs, const std::vector<double>& ys) {
    for (double x : xs) {
      bool hit = false;
      for (double y : ys) hit = hit || std::abs(detail::wrap_angle(x - y)) <= 1e-6;
      if (!hit) return false;
    }
    return true;
  };
  out.certificates_agree = covered(out.flat_angles, out.rank_one_angles) && covered(out.rank_one_angles, out.flat_angles);
  if (!out.flat_angles.empty()) {
    out.cls = KippClass::F3;
    out.shape = RangeShape::flat_portion_shape;
  } else {
    // No algebraic test for O3: assigned by elimination.
    out.cls = KippClass::O3;
    out.shape = RangeShape::ovular;
  }
  return out;
}

// ---- affine maps ------------------------------------------------------------

Point Affine2::apply(Point p) const noexcept {
  return {t00 * p.real() + t01 * p.imag() + shift.real(), t10 * p.real() + t11 * p.imag() + shift.imag()};
}

Affine2 Affine2::inverse() const {
  const double dt = det();
  const double mag = std::max({std::abs(t00), std::abs(t01), std::abs(t10), std::abs(t11)});
  if (!(std::abs(dt) > 1e-14 * mag * mag)) throw std::invalid_argument("affine map is singular");
  Affine2 r;
  r.t00 = t11 / dt;
  r.t01 = -t01 / dt;
  r.t10 = -t10 / dt;
  r.t11 = t00 / dt;
  r.shift = -Point(r.t00 * shift.real() + r.t01 * shift.imag(), r.t10 * shift.real() + r.t11 * shift.imag());
  return r;
}

Affine2 Affine2::compose(const Affine2& o) const noexcept {
  Affine2 r;
  r.t00 = t00 * o.t00 + t01 * o.t10;
  r.t01 = t00 * o.t01 + t01 * o.t11;
  r.t10 = t10 * o.t00 + t11 * o.t10;
  r.t11 = t10 * o.t01 + t11 * o.t11;
  Affine2 lin = *this;
  lin.shift = 0.0;
  r.shift = lin.apply(o.shift) + shift;
  return r;
}

ComplexMatrix affine_transform(const ComplexMatrix& a, const Affine2& t) {
  const double mag = std::max({std::abs(t.t00), std::abs(t.t01), std::abs(t.t10), std::abs(t.t11)});
  if (!(std::abs(t.det()) > 1e-14 * mag * mag)) throw std::invalid_argument("affine map is singular");
  const auto re = re_part(a).matrix();
  const auto im = im_part(a).matrix();
  const auto id = ComplexMatrix::identity(a.dim());
  const ComplexMatrix re2 = t.t00 * re + t.t01 * im + t.shift.real() * id;
  const ComplexMatrix im2 = t.t10 * re + t.t11 * im + t.shift.imag() * id;
  return re2 + kI * im2;
}

// ---- canonical forms ----------------------------------------------------------

ComplexMatrix offdiag_form(Complex a) { return {{0.0, 2.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, a}}; }

CanonicalForm3 canonical_reducible_form(const ComplexMatrix& a) {
  require3(a, "canonical_reducible_form");
  if (auto f = already_canonical(a)) return *f;
  const auto nev = normal_eigenvectors(a);
  if (nev.empty()) throw PreconditionError("matrix is unitarily irreducible; it has no reducible canonical form");
  const double scale = scale_of(a);
  CanonicalForm3 f;

  if (is_normal(a)) {
    const auto s = schur3(a);
    const Point w[3] = {s.triangular(0, 0), s.triangular(1, 1), s.triangular(2, 2)};
    std::vector<Vector> cols{s.unitary.column(0), s.unitary.column(1), s.unitary.column(2)};
    int p = 0, q = 1;
    double diam = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (std::abs(w[i] - w[j]) > diam) {
          diam = std::abs(w[i] - w[j]);
          p = i;
          q = j;
        }
    if (diam <= 1e-9 * scale) {
      f.kind = CanonicalKind::zero;
      f.unitary = s.unitary;
      f.affine.shift = -(w[0] + w[1] + w[2]) / 3.0;
      f.matrix = ComplexMatrix(3);
      return f;
    }
    const int r = 3 - p - q;
    const double area = std::abs(cross(w[1] - w[0], w[2] - w[0]));
    if (area / diam <= 1e-9 * scale) {
      // z -> (z - w_p) / (w_q - w_p), folded by z -> 1 - z when the middle
      // point lands above 1/2.
      Complex c = 1.0 / (w[q] - w[p]);
      Complex sh = -w[p] * c;
      double lambda = ((w[r] - w[p]) * c).real();
      if (lambda > 0.5) {
        c = -c;
        sh = w[q] / (w[q] - w[p]);
        std::swap(p, q);
        lambda = 1.0 - lambda;
      }
      f.kind = CanonicalKind::diag_0_lambda_1;
      f.parameter = std::clamp(lambda, 0.0, 0.5);
      f.unitary = from_columns({cols[p], cols[r], cols[q]});
      f.affine = complex_affine(c, sh);
      f.matrix = diag3(0.0, f.parameter, 1.0);
      return f;
    }
    // Triangle: w0 -> 0, w1 -> 1, w2 -> i.
    const Point d1 = w[1] - w[0], d2 = w[2] - w[0];
    const double det = d1.real() * d2.imag() - d2.real() * d1.imag();
    Affine2 t;
    t.t00 = d2.imag() / det;
    t.t01 = -d2.real() / det;
    t.t10 = -d1.imag() / det;
    t.t11 = d1.real() / det;
    Affine2 lin = t;
    t.shift = -lin.apply(w[0]);
    f.kind = CanonicalKind::diag_0_1_i;
    f.unitary = s.unitary;
    f.affine = t;
    f.matrix = diag3(0.0, 1.0, kI);
    return f;
  }

  // Non-normal: unitary putting the normal eigenvector last.
  const auto h = unitary_with_first_column(nev[0]);
  const ComplexMatrix u0 = from_columns({h.column(1), h.column(2), h.column(0)});
  const auto b = u0.adjoint() * a * u0;
  const ComplexMatrix blk{{b(0, 0), b(0, 1)}, {b(1, 0), b(1, 1)}};
  const Complex alpha = b(2, 2);
  const auto [m1, m2] = quadratic_roots(-blk.trace(), blk(0, 0) * blk(1, 1) - blk(0, 1) * blk(1, 0));
  const double fro2 = blk.frobenius_norm() * blk.frobenius_norm();
  const double minor = std::sqrt(std::max(0.0, fro2 - std::norm(m1) - std::norm(m2)));
  const double semi_minor = 0.5 * minor;
  const double semi_major = 0.5 * std::sqrt(minor * minor + std::norm(m1 - m2));
  const Point center = 0.5 * (m1 + m2);
  const double phi = std::abs(m2 - m1) > 1e-14 * scale ? std::arg(m2 - m1) : 0.0;

  // Ellipse of the block onto the unit disk, then rotate alpha onto [0, inf).
  Affine2 rot = complex_affine(std::polar(1.0, -phi), 0.0);
  Affine2 stretch;
  stretch.t00 = 1.0 / semi_major;
  stretch.t11 = 1.0 / semi_minor;
  Affine2 to_disk = stretch.compose(rot);
  to_disk.shift = -Affine2{to_disk.t00, to_disk.t01, to_disk.t10, to_disk.t11, 0.0}.apply(center);
  const Point alpha1 = to_disk.apply(alpha);
  const double psi = std::abs(alpha1) > 1e-14 ? std::arg(alpha1) : 0.0;
  const Affine2 t = complex_affine(std::polar(1.0, -psi), 0.0).compose(to_disk);

  const auto c = affine_transform(b, t);
  const ComplexMatrix disk{{c(0, 0), c(0, 1)}, {c(1, 0), c(1, 1)}};
  const auto v = smallest_singular_vector(disk);
  Vector w{-std::conj(v[1]), std::conj(v[0])};
  const auto dw = disk.apply(w);
  const Complex r = std::conj(v[0]) * dw[0] + std::conj(v[1]) * dw[1];
  const Complex phase = std::abs(r) > 0.0 ? std::conj(r) / std::abs(r) : 1.0;
  w[0] *= phase;
  w[1] *= phase;
  ComplexMatrix inner(3);
  inner(0, 0) = v[0];
  inner(1, 0) = v[1];
  inner(0, 1) = w[0];
  inner(1, 1) = w[1];
  inner(2, 2) = 1.0;

  f.kind = CanonicalKind::offdiag_a;
  f.parameter = std::abs(alpha1);
  f.unitary = u0 * inner;
  f.affine = t;
  f.matrix = offdiag_form(f.parameter);
  return f;
}

// ---- witness families ---------------------------------------------------------

ComplexMatrix m_family(double alpha, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("m_family needs beta > 0");
  return {{alpha, (1.0 - alpha) * (1.0 + beta * beta) / beta, alpha}, {0.0, alpha, -alpha * beta}, {0.0, 0.0, 1.0}};
}

ComplexMatrix f3_display(double a, double eps) {
  if (!(a >= 1.0)) throw std::invalid_argument("f3_display needs a >= 1");
  const double s = std::sqrt(a * a - 1.0);
  const ComplexMatrix im{{0.0, 0.0, eps}, {0.0, s, kI}, {eps, -kI, -s}};
  return diag3(a, a, -a) + (kI / a) * im;
}

ComplexMatrix f3_display_unitary(double a) {
  if (!(a >= 1.0)) throw std::invalid_argument("f3_display_unitary needs a >= 1");
  const double s = std::sqrt(a * a - 1.0);
  const Complex p(1.0, -s);
  ComplexMatrix u{{0.0, p, p}, {0.0, a, -a}, {a * std::sqrt(2.0), 0.0, 0.0}};
  return (1.0 / (a * std::sqrt(2.0))) * u;
}

bool in_closure_E3(const ComplexMatrix& a) {
  require3(a, "in_closure_E3");
  const auto c = classify(a);
  if (c.cls == KippClass::E3) return true;
  return c.cls == KippClass::R3 &&
         (c.shape == RangeShape::ellipse || c.shape == RangeShape::segment || c.shape == RangeShape::point);
}

bool in_closure_F3(const ComplexMatrix& a) {
  require3(a, "in_closure_F3");
  const auto c = classify(a);
  if (c.cls == KippClass::F3) return true;
  if (c.cls != KippClass::R3) return false;
  const bool strictly_inside = c.shape == RangeShape::ellipse && c.eigenvalue_offset < -1e-8 * scale_of(a);
  return !strictly_inside;
}

namespace {

/// E3 member near offdiag_form(a), a in [0, 1]. For a = 1 this is M(eps, 1).
/// Below 1 the family a M(eps, beta(a)) is irreducible only by a margin of
/// order a^3 eps, so the triangular [[0,2,-s],[0,0,eps],[0,0,a]] is used: its
/// elliptic point equals a when 2 s eps = a (s^2 + eps^2).
ComplexMatrix disk_witness(double a, double eps) {
  if (a >= 1.0) return m_family(eps, 1.0);
  const double s = a > 0.0 ? eps * (1.0 - std::sqrt(1.0 - a * a)) / a : 0.0;
  return {{0.0, 2.0, -s}, {0.0, 0.0, eps}, {0.0, 0.0, a}};
}

}  // namespace

ComplexMatrix e3_witness(const ComplexMatrix& a, double eps) {
  require3(a, "e3_witness");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  const auto c = classify(a);
  const bool reducible_ok = c.cls == KippClass::R3 && (c.shape == RangeShape::ellipse ||
                                                       c.shape == RangeShape::segment || c.shape == RangeShape::point);
  if (!reducible_ok)
    throw PreconditionError(c.cls == KippClass::E3 ? "matrix already lies in E3"
                                                   : "matrix is not in the closure of E3");
  const auto cf = canonical_reducible_form(a);
  ComplexMatrix w;
  switch (cf.kind) {
    case CanonicalKind::zero:
      w = eps * disk_witness(0.0, 1.0);
      break;
    case CanonicalKind::offdiag_a:
      w = disk_witness(cf.parameter, eps);
      break;
    case CanonicalKind::diag_0_lambda_1: {
      // U^* offdiag(1 - 2 lambda) U pushed by (x, y) -> ((1 - x)/2, eps y)
      // converges to diag[0, lambda, 1]; the inner disk witness uses the same eps.
      const double r = 1.0 / std::sqrt(2.0);
      const ComplexMatrix u{{r, 0.0, r}, {r, 0.0, -r}, {0.0, 1.0, 0.0}};
      const auto inner = disk_witness(1.0 - 2.0 * cf.parameter, eps);
      Affine2 t;
      t.t00 = -0.5;
      t.t11 = eps;
      t.shift = 0.5;
      w = affine_transform(u.adjoint() * inner * u, t);
      break;
    }
    case CanonicalKind::diag_0_1_i:
      throw PreconditionError("matrix is not in the closure of E3");
  }
  return to_original(cf, w);
}

ComplexMatrix f3_witness(const ComplexMatrix& a, double eps) {
  require3(a, "f3_witness");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  const auto c = classify(a);
  if (c.cls == KippClass::F3) throw PreconditionError("matrix already lies in F3");
  if (c.cls != KippClass::R3 ||
      (c.shape == RangeShape::ellipse && c.eigenvalue_offset < -1e-8 * scale_of(a)))
    throw PreconditionError("matrix is not in the closure of F3");
  const auto cf = canonical_reducible_form(a);
  const ComplexMatrix j = all_ones3();
  ComplexMatrix w;
  switch (cf.kind) {
    case CanonicalKind::zero:
      w = eps * (diag3(0.0, 1.0, kI) + (kI * eps) * j);
      break;
    case CanonicalKind::diag_0_lambda_1: {
      // For lambda = 0, diag[0,0,1] + i eps J keeps the joint eigenvector
      // e1 - e2, so the repeated eigenvalue is split as well.
      const double lambda = cf.parameter > 1e-12 ? cf.parameter : eps;
      w = diag3(0.0, lambda, 1.0) + (kI * eps) * j;
      break;
    }
    case CanonicalKind::diag_0_1_i:
      w = cf.matrix + (kI * eps) * j;
      break;
    case CanonicalKind::offdiag_a: {
      const double av = cf.parameter > 1.0 + 1e-9 ? cf.parameter : 1.0 + eps;
      const auto u = f3_display_unitary(av);
      Affine2 shear;
      shear.t01 = std::sqrt(av * av - 1.0);
      w = affine_transform(u * f3_display(av, eps) * u.adjoint(), shear.inverse());
      break;
    }
  }
  return to_original(cf, w);
}

}  // namespace numrange
