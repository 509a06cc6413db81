#include "numrange/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "golden.hpp"
#include "numrange/errors.hpp"
#include "numrange/parallel.hpp"

namespace numrange {

using detail::kPi;
using detail::kTwoPi;

double cluster_tolerance(const ComplexMatrix& a) { return 1e-8 * (1.0 + a.frobenius_norm()); }
double flat_threshold(const ComplexMatrix& a) { return 1e-7 * (1.0 + a.frobenius_norm()); }

namespace {

constexpr Point kI{0.0, 1.0};

OrthonormalBasis columns_of(const SpectralDecomposition& sd, std::size_t from, std::size_t to) {
  const std::size_t d = sd.eigenvectors.empty() ? 0 : sd.eigenvectors[0].size();
  return OrthonormalBasis(d, {sd.eigenvectors.begin() + static_cast<std::ptrdiff_t>(from),
                              sd.eigenvectors.begin() + static_cast<std::ptrdiff_t>(to)});
}

std::size_t top_cluster_start(const std::vector<double>& ev, double tol) {
  std::size_t k = ev.size() - 1;
  while (k > 0 && ev[k - 1] >= ev.back() - tol) --k;
  return k;
}

// Lift the compression eigenvectors with indices [from, to) back to C^d.
OrthonormalBasis lift_block(const OrthonormalBasis& q, const SpectralDecomposition& c,
                            std::size_t from, std::size_t to) {
  std::vector<Vector> cols;
  for (std::size_t k = from; k < to; ++k) cols.push_back(q.lift(c.eigenvectors[k]));
  return OrthonormalBasis(q.ambient_dim(), std::move(cols));
}

// Slope of the eigenvalue curve through the unit vector q at angle t: the
// compression of A'(t) onto the top cluster is diagonalized and the
// eigenvector with the largest overlap with q is followed.
double tracked_slope(const ComplexMatrix& a, double t, const Vector& q) {
  const auto sd = eig_hermitian(rotate(a, t));
  const auto x = columns_of(sd, top_cluster_start(sd.eigenvalues, cluster_tolerance(a)),
                            sd.eigenvalues.size());
  const auto c = eig_hermitian(compress(rotate_prime(a, t), x));
  std::size_t best = 0;
  double overlap = -1.0;
  for (std::size_t k = 0; k < c.eigenvalues.size(); ++k) {
    const double o = std::abs(dot(x.lift(c.eigenvectors[k]), q));
    if (o > overlap) overlap = o, best = k;
  }
  return c.eigenvalues[best];
}

// theta0 is accurate only to about sqrt(eps) at smooth boundary points, since
// the gap <p, e^{it}> - h(t) is flat to second order at its maximum. The
// derivative of the gap along one eigenvalue curve through p changes sign
// linearly, so bisection on it recovers the angle to machine precision.
// Curves whose point stays at p for all t (normal eigenvectors) carry no
// angle information and are skipped.
double refine_angle(const ComplexMatrix& a, Point p, double theta0, const OrthonormalBasis& q) {
  const double w = 1e-6;
  for (const auto& col : q.columns()) {
    auto phi = [&](double t) { return inner(p, kI * std::polar(1.0, t)) - tracked_slope(a, t, col); };
    double lo = theta0 - w, hi = theta0 + w;
    if (!(phi(lo) > 0.0 && phi(hi) < 0.0)) continue;
    for (int it = 0; it < 64 && hi - lo > 1e-17; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (phi(mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  return theta0;
}

double angle_distance(double x, double y) {
  return std::abs(detail::wrap_angle(x - y));
}

struct FlatCandidate {
  FlatPortion portion;
  FaceDescriptor face;
};

std::vector<FlatCandidate> find_flats(const ComplexMatrix& a, int grid) {
  if (grid < 64) throw std::invalid_argument("flat_portions needs a grid of at least 64 angles");
  std::vector<FlatCandidate> out;
  if (a.dim() < 2) return out;
  const auto n = static_cast<std::size_t>(grid);
  const double step = kTwoPi / static_cast<double>(n);
  const double scale = 1.0 + a.frobenius_norm();
  std::vector<double> gap(n);
  parallel_for(n, [&](std::size_t j) {
    const auto ev = eig_hermitian(rotate(a, step * static_cast<double>(j))).eigenvalues;
    gap[j] = ev[ev.size() - 1] - ev[ev.size() - 2];
  });
  auto gap_at = [&](double t) {
    const auto ev = eig_hermitian(rotate(a, t)).eigenvalues;
    return ev[ev.size() - 1] - ev[ev.size() - 2];
  };

  // The top gap is Lipschitz with constant 2||A||, so a crossing lies within
  // half a grid step of a sampled local minimum below this threshold.
  const double threshold = 2.0 * step * scale;
  std::vector<std::size_t> cand;
  for (std::size_t j = 0; j < n; ++j)
    if (gap[j] < threshold && gap[j] <= gap[(j + n - 1) % n] && gap[j] <= gap[(j + 1) % n])
      cand.push_back(j);

  std::vector<FlatCandidate> found(cand.size());
  std::vector<char> ok(cand.size(), 0);
  parallel_for(cand.size(), [&](std::size_t c) {
    const double t0 = step * static_cast<double>(cand[c]);
    double t = t0;
    if (gap[cand[c]] > 1e-12 * scale) t = detail::golden_min(gap_at, t0 - step, t0 + step, 90);
    auto f = face(a, t);
    if (f.length() <= flat_threshold(a)) return;
    found[c].face = f;
    found[c].portion = {detail::wrap_angle(t), f.p_minus, f.p_plus, f.length()};
    ok[c] = 1;
  });

  const double match = flat_threshold(a);
  for (std::size_t c = 0; c < cand.size(); ++c) {
    if (!ok[c]) continue;
    const auto& p = found[c].portion;
    bool dup = false;
    for (const auto& q : out) {
      const bool same_ends = (std::abs(p.endpoint_minus - q.portion.endpoint_minus) <= match &&
                              std::abs(p.endpoint_plus - q.portion.endpoint_plus) <= match);
      if (same_ends || angle_distance(p.theta, q.portion.theta) <= 1e-9) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(found[c]);
  }
  std::sort(out.begin(), out.end(), [](const FlatCandidate& x, const FlatCandidate& y) {
    return x.portion.theta < y.portion.theta;
  });
  return out;
}

}  // namespace

OrthonormalBasis max_eigenspace(const ComplexMatrix& a, double theta) {
  const auto sd = eig_hermitian(rotate(a, theta));
  return columns_of(sd, top_cluster_start(sd.eigenvalues, cluster_tolerance(a)), sd.eigenvalues.size());
}

FaceDescriptor face(const ComplexMatrix& a, double theta) {
  const double tol = cluster_tolerance(a);
  const auto sd = eig_hermitian(rotate(a, theta));
  const std::size_t d = sd.eigenvalues.size();

  FaceDescriptor f;
  f.theta = theta;
  f.support = sd.eigenvalues.back();
  f.basis_m = columns_of(sd, top_cluster_start(sd.eigenvalues, tol), d);

  const auto c = eig_hermitian(compress(rotate_prime(a, theta), f.basis_m));
  const auto& mu = c.eigenvalues;
  const std::size_t k = mu.size();
  f.deriv_plus = mu.back();
  f.deriv_minus = mu.front();
  std::size_t hi = k - 1, lo = 1;
  while (hi > 0 && mu[hi - 1] >= mu.back() - tol) --hi;
  while (lo < k && mu[lo] <= mu.front() + tol) ++lo;
  f.basis_plus = lift_block(f.basis_m, c, hi, k);
  f.basis_minus = lift_block(f.basis_m, c, 0, lo);

  const Point w = std::polar(1.0, theta);
  f.p_plus = w * Point(f.support, f.deriv_plus);
  f.p_minus = w * Point(f.support, f.deriv_minus);
  return f;
}

std::vector<EigencurveDerivative> eigencurve_derivatives(const ComplexMatrix& a, double theta) {
  const double tol = cluster_tolerance(a);
  const auto sd = eig_hermitian(rotate(a, theta));
  const auto ap = rotate_prime(a, theta);
  const std::size_t d = sd.eigenvalues.size();
  std::vector<EigencurveDerivative> out;
  for (std::size_t s = 0; s < d;) {
    std::size_t e = s + 1;
    while (e < d && sd.eigenvalues[e] - sd.eigenvalues[e - 1] <= tol) ++e;
    const auto c = eig_hermitian(compress(ap, columns_of(sd, s, e)));
    for (std::size_t k = s; k < e; ++k)
      out.push_back({sd.eigenvalues[k], c.eigenvalues[k - s], static_cast<int>(e - s)});
    s = e;
  }
  return out;
}

std::vector<FlatPortion> flat_portions(const ComplexMatrix& a, int grid) {
  std::vector<FlatPortion> out;
  for (auto& c : find_flats(a, grid)) out.push_back(c.portion);
  return out;
}

AngleInterval normal_arc(const ComplexMatrix& a, const OrthonormalBasis& pre, double theta0) {
  const double tol = 1e-9 * (1.0 + a.frobenius_norm());
  auto in_cone = [&](double t) {
    const auto h = rotate(a, t);
    const double top = eig_hermitian(h).eigenvalues.back();
    double r = 0.0;
    for (const auto& b : pre.columns()) {
      auto hb = h.matrix().apply(b);
      for (std::size_t i = 0; i < hb.size(); ++i) hb[i] -= top * b[i];
      r = std::max(r, norm(hb));
    }
    return r <= tol;
  };
  if (pre.empty() || !in_cone(theta0)) return {theta0, theta0};
  if (in_cone(theta0 + kPi) && in_cone(theta0 - kPi)) return {theta0 - kPi, theta0 + kPi};

  auto extent = [&](double dir) {
    double lo = 0.0, hi = kSingleAngleArc;
    if (in_cone(theta0 + dir * hi)) {
      lo = hi;
      hi = kPi;
    }
    for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (in_cone(theta0 + dir * mid))
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  };
  return {theta0 - extent(-1.0), theta0 + extent(1.0)};
}

std::vector<ExtremePointReport> extreme_points(const ComplexMatrix& a, int grid) {
  const auto flats = find_flats(a, grid);
  const auto n = static_cast<std::size_t>(grid);
  const double step = kTwoPi / static_cast<double>(n);
  const double thr = flat_threshold(a);
  const double dedupe = 1e-9 * (1.0 + a.frobenius_norm());

  struct Candidate {
    double theta;
    Point point;
    OrthonormalBasis basis;
    bool flat_end;
  };
  std::vector<Candidate> cand;
  auto add_face = [&](const FaceDescriptor& f, bool flat) {
    const double t = detail::wrap_angle(f.theta);
    if (f.length() > thr) {
      cand.push_back({t, f.p_minus, f.basis_minus, flat});
      cand.push_back({t, f.p_plus, f.basis_plus, flat});
    } else {
      cand.push_back({t, f.p_plus, f.basis_m, false});
    }
  };
  for (const auto& fc : flats) add_face(fc.face, true);
  std::vector<FaceDescriptor> faces(n);
  parallel_for(n, [&](std::size_t j) { faces[j] = face(a, step * static_cast<double>(j)); });
  for (const auto& f : faces) add_face(f, false);

  std::stable_sort(cand.begin(), cand.end(), [](const Candidate& x, const Candidate& y) {
    return std::make_tuple(x.theta, x.point.real(), x.point.imag()) <
           std::make_tuple(y.theta, y.point.real(), y.point.imag());
  });
  std::vector<Candidate> kept;
  for (auto& c : cand) {
    auto it = std::find_if(kept.begin(), kept.end(),
                           [&](const Candidate& k) { return std::abs(k.point - c.point) <= dedupe; });
    if (it == kept.end())
      kept.push_back(std::move(c));
    else if (c.flat_end && !it->flat_end) {
      const double t = it->theta;
      *it = std::move(c);
      it->theta = t;
    }
  }

  auto is_flat_endpoint = [&](Point p) {
    for (const auto& fc : flats)
      if (std::abs(p - fc.portion.endpoint_minus) <= thr ||
          std::abs(p - fc.portion.endpoint_plus) <= thr)
        return true;
    return false;
  };

  std::vector<ExtremePointReport> out(kept.size());
  parallel_for(kept.size(), [&](std::size_t i) {
    auto& r = out[i];
    r.point = kept[i].point;
    r.preimage = kept[i].basis;
    r.multiply_generated = r.preimage.size() >= 2;
    r.normal_arc = normal_arc(a, r.preimage, kept[i].theta);
    const bool single = r.normal_arc.length() <= kSingleAngleArc;
    r.kind = single && is_flat_endpoint(r.point) ? ExtremePointReport::Kind::non_exposed
                                                 : ExtremePointReport::Kind::exposed;
  });
  return out;
}

SupportingFace supporting_face(const ComplexMatrix& a, Point p) {
  const double scale = 1.0 + a.frobenius_norm();
  const SupportFunction h(a);
  const auto m = h.max_gap(p);
  if (m.gap > 1e-8 * scale) throw PreconditionError("point is outside the numerical range");
  if (m.gap < -1e-8 * scale)
    throw PreconditionError("point lies in the interior of the numerical range, not an extreme point");

  // Match p against the face endpoints at an angle, then refine the angle
  // along the matched pre-image and match again.
  const double match = 1e-7 * scale;
  auto resolve = [&](double theta) {
    SupportingFace s;
    s.theta = theta;
    s.face = face(a, theta);
    const double dp = std::abs(p - s.face.p_plus), dm = std::abs(p - s.face.p_minus);
    if (s.face.length() > flat_threshold(a)) {
      if (std::min(dp, dm) > match)
        throw PreconditionError(
            "point lies in the relative interior of a flat boundary portion, not an extreme point");
      s.side = dp <= dm ? 1 : -1;
      s.preimage = s.side > 0 ? s.face.basis_plus : s.face.basis_minus;
    } else {
      if (dp > match) throw PreconditionError("point is not an extreme point of the numerical range");
      s.side = 0;
      s.preimage = s.face.basis_m;
    }
    return s;
  };
  const auto first = resolve(m.theta);
  return resolve(refine_angle(a, p, m.theta, first.preimage));
}

OrthonormalBasis preimage(const ComplexMatrix& a, Point p) { return supporting_face(a, p).preimage; }

}  // namespace numrange
