#include "numrange/rangegeo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "golden.hpp"
#include "numrange/extremal.hpp"
#include "numrange/parallel.hpp"

namespace numrange {

using detail::kPi;
using detail::kTwoPi;

namespace {

double cross(Point o, Point a, Point b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}

double top_eigenvalue(const ComplexMatrix& a, double theta) {
  return eig_hermitian(rotate(a, theta)).eigenvalues.back();
}

// Support vertex lookup for a polygon: sorted outward edge normals in
// [0, 2pi) and the vertex that follows each edge.
struct NormalFan {
  std::vector<double> angles;
  std::vector<std::size_t> vertex;

  explicit NormalFan(const ConvexPolygon& k) {
    const std::size_t n = k.size();
    if (n < 2) return;
    std::vector<std::pair<double, std::size_t>> e;
    e.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Point edge = k[(i + 1) % n] - k[i];
      double phi = std::arg(edge * Point(0.0, -1.0));
      if (phi < 0.0) phi += kTwoPi;
      if (phi >= kTwoPi) phi = 0.0;
      e.emplace_back(phi, (i + 1) % n);
    }
    std::sort(e.begin(), e.end());
    for (const auto& [phi, v] : e) {
      angles.push_back(phi);
      vertex.push_back(v);
    }
  }

  std::size_t support_vertex(double m) const {
    if (angles.empty()) return 0;
    auto it = std::upper_bound(angles.begin(), angles.end(), m);
    if (it == angles.begin()) return vertex.back();
    return vertex[static_cast<std::size_t>(it - angles.begin()) - 1];
  }
};

double max_abs_cos_on_arc(Point u, double a, double b) {
  auto f = [&](double t) { return std::abs(inner(u, std::polar(1.0, t))); };
  double best = std::max(f(a), f(b));
  const double base = std::arg(u);
  for (double c : {base, base + kPi}) {
    // Move c into [a, a + 2pi).
    double t = c - kTwoPi * std::floor((c - a) / kTwoPi);
    if (t <= b) best = std::max(best, f(t));
  }
  return best;
}

}  // namespace

// ---- ConvexPolygon --------------------------------------------------------

double ConvexPolygon::support(double theta) const {
  if (v_.empty()) throw std::invalid_argument("support of an empty polygon");
  const Point u = std::polar(1.0, theta);
  double h = inner(v_[0], u);
  for (const auto& p : v_) h = std::max(h, inner(p, u));
  return h;
}

double ConvexPolygon::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i)
    for (std::size_t j = i + 1; j < v_.size(); ++j) d = std::max(d, std::abs(v_[i] - v_[j]));
  return d;
}

ConvexPolygon ConvexPolygon::rotated(double phi, Point shift) const {
  const Point w = std::polar(1.0, phi);
  std::vector<Point> out;
  out.reserve(v_.size());
  for (const auto& p : v_) out.push_back(w * p + shift);
  return ConvexPolygon(std::move(out));
}

ConvexPolygon convex_hull(std::vector<Point> pts, double dedupe_tol) {
  if (pts.empty()) return {};
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, std::abs(p - pts.front()));
  const double eps = 1e-14 * scale * scale;

  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= eps) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= eps) --k;
    h[k++] = pts[i];
  }
  h.resize(k > 1 ? k - 1 : k);

  std::vector<Point> out;
  for (const auto& p : h)
    if (out.empty() || std::abs(p - out.back()) > dedupe_tol) out.push_back(p);
  while (out.size() > 1 && std::abs(out.back() - out.front()) <= dedupe_tol) out.pop_back();
  if (out.empty()) out.push_back(pts.front());
  return ConvexPolygon(std::move(out));
}

// ---- ellipses ---------------------------------------------------------------

double EllipseParams::semi_major() const {
  const double c = 0.5 * std::abs(foci.first - foci.second);
  return std::sqrt(semi_minor * semi_minor + c * c);
}

ConvexPolygon ellipse_polygon(const EllipseParams& e, int n) {
  const Point df = e.foci.second - e.foci.first;
  const Point u = std::abs(df) > 0.0 ? df / std::abs(df) : Point(1.0, 0.0);
  const double a = e.semi_major(), b = e.semi_minor;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double t = kTwoPi * k / n;
    pts.push_back(e.center + u * Point(a * std::cos(t), b * std::sin(t)));
  }
  return convex_hull(std::move(pts), 1e-14 * (1.0 + a));
}

std::optional<EllipseParams> ellipse_fit(const ConvexPolygon& k) {
  if (k.size() < 6) return std::nullopt;
  Point c0 = 0.0;
  for (const auto& p : k.vertices()) c0 += p;
  c0 /= static_cast<double>(k.size());
  double s = 0.0;
  for (const auto& p : k.vertices()) s = std::max(s, std::abs(p - c0));
  if (s == 0.0) return std::nullopt;

  // Least squares for A x^2 + B xy + C y^2 + D x + E y + F = 0 in centered,
  // scaled coordinates: smallest eigenvector of the 6x6 normal matrix.
  ComplexMatrix m(6);
  std::vector<std::array<double, 6>> rows;
  rows.reserve(k.size());
  for (const auto& p : k.vertices()) {
    const Point q = (p - c0) / s;
    const double x = q.real(), y = q.imag();
    rows.push_back({x * x, x * y, y * y, x, y, 1.0});
  }
  for (const auto& r : rows)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) m(i, j) += r[i] * r[j];
  const auto sd = eig_hermitian(HermitianMatrix::symmetrize(m));
  std::array<double, 6> c{};
  for (int i = 0; i < 6; ++i) c[i] = sd.eigenvectors[0][i].real();

  const double sn = std::sqrt(c[0] * c[0] + 0.5 * c[1] * c[1] + c[2] * c[2]);
  const double nrm = sn + std::hypot(c[3], c[4]) + std::abs(c[5]);
  if (c[0] + c[2] < 0.0)
    for (auto& v : c) v = -v;
  for (auto& v : c) v /= nrm;

  double residual = 0.0;
  for (const auto& r : rows) {
    double v = 0.0;
    for (int i = 0; i < 6; ++i) v += r[i] * c[i];
    residual = std::max(residual, std::abs(v));
  }
  const double diam = k.diameter() / s;
  if (residual > 1e-7 * diam * diam) return std::nullopt;

  const double sa = c[0], sb = 0.5 * c[1], sc = c[2];
  const double det = sa * sc - sb * sb;
  if (det <= 1e-12 * (sa * sa + sc * sc + 2 * sb * sb)) return std::nullopt;
  // Center q0 = -S^{-1} b / 2.
  const double qx = -(sc * c[3] - sb * c[4]) / (2.0 * det);
  const double qy = -(-sb * c[3] + sa * c[4]) / (2.0 * det);
  const double level = sa * qx * qx + 2 * sb * qx * qy + sc * qy * qy - c[5];
  if (level <= 0.0) return std::nullopt;

  // Eigen-decomposition of the 2x2 symmetric S.
  const double mean = 0.5 * (sa + sc);
  const double rad = std::hypot(0.5 * (sa - sc), sb);
  const double s_small = mean - rad, s_large = mean + rad;
  if (s_small <= 0.0) return std::nullopt;
  Point dir(1.0, 0.0);  // eigenvector of s_small: the major axis
  if (rad > 0.0) {
    const Point d1(sb, s_small - sa), d2(s_small - sc, sb);
    dir = std::abs(d1) >= std::abs(d2) ? d1 : d2;
  }
  dir /= std::abs(dir);

  const double major = s * std::sqrt(level / s_small);
  const double minor = s * std::sqrt(level / s_large);
  const double focal = std::sqrt(std::max(0.0, major * major - minor * minor));
  EllipseParams e;
  e.center = c0 + s * Point(qx, qy);
  e.foci = {e.center - focal * dir, e.center + focal * dir};
  e.semi_minor = minor;
  return e;
}

PolygonShape shape_of(const ConvexPolygon& k, double tol) {
  if (k.empty()) throw std::invalid_argument("shape of an empty polygon");
  double extent = 0.0;
  for (const auto& p : k.vertices()) extent = std::max(extent, std::abs(p));
  const double diam = k.diameter();
  if (diam <= tol * (1.0 + extent)) return PolygonShape::point;
  std::size_t ia = 0, ib = 1;
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = i + 1; j < k.size(); ++j)
      if (std::abs(k[i] - k[j]) >= std::abs(k[ia] - k[ib])) ia = i, ib = j;
  double width = 0.0;
  for (const auto& p : k.vertices())
    width = std::max(width, std::abs(cross(k[ia], k[ib], p)) / diam);
  if (width <= tol * (1.0 + diam)) return PolygonShape::segment;
  if (ellipse_fit(k)) return PolygonShape::ellipse;
  return PolygonShape::other;
}

// ---- support function ------------------------------------------------------

SupportSample support_value(const ComplexMatrix& a, double theta) {
  const auto sd = eig_hermitian(rotate(a, theta));
  SupportSample s;
  s.theta = theta;
  s.support = sd.eigenvalues.back();
  const double tol = cluster_tolerance(a);
  s.multiplicity = static_cast<int>(std::count_if(sd.eigenvalues.begin(), sd.eigenvalues.end(),
                                                  [&](double l) { return l >= s.support - tol; }));
  return s;
}

SupportFunction::SupportFunction(ComplexMatrix a, int grid)
    : a_(std::move(a)), scale_(1.0 + a_.frobenius_norm()), values_(static_cast<std::size_t>(grid)) {
  if (grid < 8) throw std::invalid_argument("support grid must have at least 8 angles");
  parallel_for(values_.size(), [&](std::size_t j) {
    values_[j] = top_eigenvalue(a_, kTwoPi * static_cast<double>(j) / static_cast<double>(grid));
  });
}

double SupportFunction::operator()(double theta) const { return top_eigenvalue(a_, theta); }

SupportFunction::Max SupportFunction::max_gap(Point p) const {
  const std::size_t n = values_.size();
  const double step = kTwoPi / static_cast<double>(n);
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j)
    g[j] = inner(p, std::polar(1.0, step * static_cast<double>(j))) - values_[j];

  // Refine the three largest local maxima of the sampled gap.
  std::vector<std::size_t> peaks;
  for (std::size_t j = 0; j < n; ++j)
    if (g[j] >= g[(j + n - 1) % n] && g[j] >= g[(j + 1) % n]) peaks.push_back(j);
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t x, std::size_t y) {
    return g[x] > g[y] || (g[x] == g[y] && x < y);
  });
  if (peaks.size() > 3) peaks.resize(3);

  Max best;
  best.gap = -std::numeric_limits<double>::infinity();
  auto gap_at = [&](double t) { return inner(p, std::polar(1.0, t)) - (*this)(t); };
  for (std::size_t j : peaks) {
    const double t0 = step * static_cast<double>(j);
    const double t = detail::golden_min([&](double s) { return -gap_at(s); }, t0 - step,
                                        t0 + step, 70);
    double gt = gap_at(t);
    double tt = t;
    if (g[j] > gt) gt = g[j], tt = t0;
    if (gt > best.gap) best = {detail::wrap_angle(tt), gt};
  }
  return best;
}

bool SupportFunction::contains(Point p) const { return max_gap(p).gap <= 1e-9 * scale_; }

bool contains(const ComplexMatrix& a, Point p) { return SupportFunction(a).contains(p); }

ConvexPolygon boundary_polygon(const ComplexMatrix& a, int samples) {
  if (samples < 8) throw std::invalid_argument("boundary_polygon needs at least 8 samples");
  const auto n = static_cast<std::size_t>(samples);
  std::vector<Point> pts(2 * n);
  parallel_for(n, [&](std::size_t j) {
    const auto f = face(a, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    pts[2 * j] = f.p_minus;
    pts[2 * j + 1] = f.p_plus;
  });
  return convex_hull(std::move(pts), 1e-10 * (1.0 + a.frobenius_norm()));
}

// ---- Hausdorff distance ------------------------------------------------------

double hausdorff(const ConvexPolygon& k, const ConvexPolygon& l) {
  if (k.empty() || l.empty()) throw std::invalid_argument("hausdorff of an empty polygon");
  const NormalFan fk(k), fl(l);
  std::vector<double> cuts{0.0, kTwoPi};
  cuts.insert(cuts.end(), fk.angles.begin(), fk.angles.end());
  cuts.insert(cuts.end(), fl.angles.begin(), fl.angles.end());
  std::sort(cuts.begin(), cuts.end());
  double best = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c], hi = cuts[c + 1];
    if (hi <= lo) continue;
    const double mid = 0.5 * (lo + hi);
    Point u = k[fk.support_vertex(mid)] - l[fl.support_vertex(mid)];
    // |<u, e^{it}>| is even in u; a canonical sign keeps the result symmetric.
    if (u.real() < 0.0 || (u.real() == 0.0 && u.imag() < 0.0)) u = -u;
    best = std::max(best, max_abs_cos_on_arc(u, lo, hi));
  }
  return best;
}

double distance_to(const ConvexPolygon& k, Point p) {
  if (k.empty()) throw std::invalid_argument("distance to an empty polygon");
  const std::size_t n = k.size();
  if (n == 1) return std::abs(p - k[0]);
  bool inside = n >= 3;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = k[i], b = k[(i + 1) % n];
    if (cross(a, b, p) < 0.0) inside = false;
    const Point e = b - a;
    const double t = std::clamp(inner(p - a, e) / std::norm(e), 0.0, 1.0);
    d = std::min(d, std::abs(p - (a + t * e)));
  }
  return inside ? 0.0 : d;
}

double hausdorff_pointwise(const ConvexPolygon& k, const ConvexPolygon& l) {
  double h = 0.0;
  for (const auto& p : k.vertices()) h = std::max(h, distance_to(l, p));
  for (const auto& p : l.vertices()) h = std::max(h, distance_to(k, p));
  return h;
}

std::vector<double> range_converges(std::span<const ComplexMatrix> sequence,
                                    const ComplexMatrix& limit, int samples) {
  for (const auto& m : sequence)
    if (m.dim() != limit.dim())
      throw std::invalid_argument("range_converges: dimension mismatch in sequence");
  const auto target = boundary_polygon(limit, samples);
  std::vector<double> out;
  out.reserve(sequence.size());
  for (const auto& m : sequence) out.push_back(hausdorff(boundary_polygon(m, samples), target));
  return out;
}

}  // namespace numrange
