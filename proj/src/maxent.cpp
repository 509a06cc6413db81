#include "numrange/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "golden.hpp"
#include "numrange/errors.hpp"
#include "numrange/extremal.hpp"

namespace numrange {

namespace {

double scale_of(const ComplexMatrix& a) { return 1.0 + a.frobenius_norm(); }

/// Gibbs state exp(K) / tr exp(K) in the eigenbasis of K.
struct Gibbs {
  std::vector<double> kappa;  // eigenvalues of K
  std::vector<double> w;      // exp(kappa - max)
  std::vector<Vector> vecs;
  double log_z = 0.0;
  double z_shifted = 0.0;

  explicit Gibbs(const HermitianMatrix& k) {
    auto e = eig_hermitian(k);
    kappa = std::move(e.eigenvalues);
    vecs = std::move(e.eigenvectors);
    const double top = kappa.back();
    w.resize(kappa.size());
    z_shifted = 0.0;
    for (std::size_t j = 0; j < kappa.size(); ++j) z_shifted += w[j] = std::exp(kappa[j] - top);
    log_z = top + std::log(z_shifted);
  }

  ComplexMatrix state() const {
    const std::size_t d = kappa.size();
    ComplexMatrix rho(d);
    for (std::size_t j = 0; j < d; ++j) {
      const double p = w[j] / z_shifted;
      if (p == 0.0) continue;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) rho(r, c) += p * vecs[j][r] * std::conj(vecs[j][c]);
    }
    return HermitianMatrix::symmetrize(rho).matrix();
  }

  /// Matrix of X in the eigenbasis.
  ComplexMatrix rotated(const ComplexMatrix& x) const {
    const std::size_t d = kappa.size();
    ComplexMatrix out(d);
    std::vector<Vector> xv(d);
    for (std::size_t k = 0; k < d; ++k) xv[k] = x.apply(vecs[k]);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) out(j, k) = dot(vecs[j], xv[k]);
    return out;
  }

  /// (exp(kappa_j) - exp(kappa_k)) / (kappa_j - kappa_k), shifted like w.
  double divided(std::size_t j, std::size_t k) const {
    if (kappa[j] < kappa[k]) std::swap(j, k);
    const double delta = kappa[j] - kappa[k];
    if (delta == 0.0) return w[j];
    return w[j] * (-std::expm1(-delta)) / delta;
  }
};

struct DualState {
  double value = 0.0;
  double g[2] = {0.0, 0.0};   // gradient
  double h[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  ComplexMatrix rho;
};

DualState evaluate(const HermitianMatrix& re, const HermitianMatrix& im, Point alpha, double u, double v,
                   bool with_hessian) {
  const Gibbs gb(HermitianMatrix::symmetrize(u * re.matrix() + v * im.matrix()));
  DualState s;
  s.value = gb.log_z - (u * alpha.real() + v * alpha.imag());
  const ComplexMatrix xr = gb.rotated(re.matrix()), xi = gb.rotated(im.matrix());
  const ComplexMatrix* x[2] = {&xr, &xi};
  const std::size_t d = gb.kappa.size();
  double mean[2] = {0.0, 0.0};
  for (int a = 0; a < 2; ++a)
    for (std::size_t j = 0; j < d; ++j) mean[a] += gb.w[j] * (*x[a])(j, j).real() / gb.z_shifted;
  s.g[0] = mean[0] - alpha.real();
  s.g[1] = mean[1] - alpha.imag();
  if (with_hessian) {
    for (int a = 0; a < 2; ++a)
      for (int b = a; b < 2; ++b) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j)
          for (std::size_t k = 0; k < d; ++k)
            acc += ((*x[a])(j, k) * (*x[b])(k, j)).real() * gb.divided(j, k);
        s.h[a][b] = s.h[b][a] = acc / gb.z_shifted - mean[a] * mean[b];
      }
  }
  s.rho = gb.state();
  return s;
}

InferenceResult finish(const ComplexMatrix& a, Point alpha, const ComplexMatrix& rho) {
  InferenceResult r;
  r.rho = DensityMatrix(rho);
  r.entropy = entropy(r.rho);
  r.residual = std::abs(r.rho.expectation(a) - alpha);
  return r;
}

/// Classical exponential family p_j ~ exp(v h_j) with sum p_j h_j = target,
/// target strictly between min and max of h.
std::vector<double> classical_maxent(const std::vector<double>& h, double target, double* multiplier = nullptr) {
  auto state = [&](double v, double& value, double& grad, double& var, std::vector<double>& p) {
    double top = -INFINITY;
    for (double x : h) top = std::max(top, v * x);
    double z = 0.0;
    p.assign(h.size(), 0.0);
    for (std::size_t j = 0; j < h.size(); ++j) z += p[j] = std::exp(v * h[j] - top);
    double mean = 0.0, sq = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      p[j] /= z;
      mean += p[j] * h[j];
    }
    for (std::size_t j = 0; j < h.size(); ++j) sq += p[j] * (h[j] - mean) * (h[j] - mean);
    value = top + std::log(z) - v * target;
    grad = mean - target;
    var = sq;
  };
  double v = 0.0, value, grad, var;
  std::vector<double> p;
  state(v, value, grad, var, p);
  for (int it = 0; it < 200 && std::abs(grad) > 1e-12; ++it) {
    double step = var > 0.0 ? -grad / var : -grad;
    double t = 1.0, nv, ng, nvar;
    std::vector<double> np;
    for (;;) {
      state(v + t * step, nv, ng, nvar, np);
      if (nv <= value + 1e-4 * t * grad * step || t < 1e-20) break;
      t *= 0.5;
    }
    v += t * step;
    value = nv;
    grad = ng;
    var = nvar;
    p = std::move(np);
  }
  if (multiplier) *multiplier = v;
  return p;
}

ComplexMatrix lift(const OrthonormalBasis& q, const ComplexMatrix& small) {
  const std::size_t d = q.ambient_dim(), k = q.size();
  ComplexMatrix out(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) s += q[i][r] * small(i, j) * std::conj(q[j][c]);
      out(r, c) = s;
    }
  return out;
}

ComplexMatrix mixed_on(const OrthonormalBasis& q) {
  ComplexMatrix p = q.projector();
  p *= 1.0 / static_cast<double>(q.size());
  return p;
}

/// Angle of a supporting line through the boundary point alpha.
double supporting_angle(const ComplexMatrix& a, Point alpha, double fallback) {
  try {
    return supporting_face(a, alpha).theta;
  } catch (const PreconditionError&) {
    // Relative interior of a flat portion: the grid angle is the kink of the
    // gap and already accurate.
    return fallback;
  }
}

/// W(A) = c + e^{i theta} [lo, hi] i, so A is normal and rho ~ exp(s H) with
/// H the imaginary part of e^{-i theta} A.
InferenceResult relative_interior(const ComplexMatrix& a, Point alpha, double theta, const FaceDescriptor& f) {
  const double scale = scale_of(a);
  const auto h = eig_hermitian(rotate_prime(a, theta));
  const double lo = h.eigenvalues.front(), hi = h.eigenvalues.back();
  const double t = (std::polar(1.0, -theta) * alpha).imag();
  InferenceResult r;
  if (hi - lo <= flat_threshold(a)) {
    r = finish(a, alpha, mixed_on(f.basis_m));
  } else {
    if (t >= hi - 1e-7 * scale || t <= lo + 1e-7 * scale)
      throw PreconditionError("point is within 1e-7 of an endpoint of the numerical range; use the boundary solver");
    double s = 0.0;
    const auto p = classical_maxent(h.eigenvalues, t, &s);
    const std::size_t d = a.dim();
    ComplexMatrix rho(d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t rr = 0; rr < d; ++rr)
        for (std::size_t c = 0; c < d; ++c) rho(rr, c) += p[j] * h.eigenvectors[j][rr] * std::conj(h.eigenvectors[j][c]);
    r = finish(a, alpha, HermitianMatrix::symmetrize(rho).matrix());
    // Im(e^{-i theta} A) = -sin(theta) Re A + cos(theta) Im A.
    r.u = -s * std::sin(theta);
    r.v = s * std::cos(theta);
  }
  if (r.residual > 1e-8 * scale) throw PreconditionError("point is outside the numerical range");
  return r;
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m) : m_(m) {
  const std::size_t d = m.dim();
  if (d == 0) throw std::invalid_argument("density matrix must be non-empty");
  if ((m - m.adjoint()).frobenius_norm() > 1e-12) throw std::invalid_argument("density matrix must be Hermitian");
  if (std::abs(m.trace() - 1.0) > 1e-12) throw std::invalid_argument("density matrix must have trace one");
  if (eig_hermitian(HermitianMatrix::symmetrize(m)).eigenvalues.front() < -1e-12)
    throw std::invalid_argument("density matrix must be positive semi-definite");
}

Complex DensityMatrix::expectation(const ComplexMatrix& a) const {
  Complex s = 0.0;
  for (std::size_t i = 0; i < m_.dim(); ++i)
    for (std::size_t j = 0; j < m_.dim(); ++j) s += a(i, j) * m_(j, i);
  return s;
}

double entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double l : eig_hermitian(HermitianMatrix::symmetrize(rho.matrix())).eigenvalues)
    if (l > 1e-15) s -= l * std::log(l);
  return std::max(0.0, s);
}

double dual_value(const ComplexMatrix& a, Point alpha, double u, double v) {
  return evaluate(re_part(a), im_part(a), alpha, u, v, false).value;
}

Point dual_gradient(const ComplexMatrix& a, Point alpha, double u, double v) {
  const auto s = evaluate(re_part(a), im_part(a), alpha, u, v, false);
  return {s.g[0], s.g[1]};
}

InferenceResult maxent_interior(const ComplexMatrix& a, Point alpha, std::optional<Point> warm_start) {
  const double scale = scale_of(a);
  const auto m = SupportFunction(a).max_gap(alpha);
  if (m.gap > 1e-8 * scale) throw PreconditionError("point is outside the numerical range");
  if (m.gap > -1e-7 * scale) {
    // W(A) without interior: a segment or a point, solved on the whole space.
    const auto f = face(a, m.theta);
    if (f.basis_m.size() == a.dim()) return relative_interior(a, alpha, m.theta, f);
    throw PreconditionError("point is within 1e-7 of the boundary of the numerical range; use the boundary solver");
  }

  const auto re = re_part(a), im = im_part(a);
  double u = warm_start ? warm_start->real() : 0.0, v = warm_start ? warm_start->imag() : 0.0;
  auto s = evaluate(re, im, alpha, u, v, true);
  int it = 0;
  for (; it < 200; ++it) {
    const double gn = std::hypot(s.g[0], s.g[1]);
    if (gn <= 1e-10) break;
    const double det = s.h[0][0] * s.h[1][1] - s.h[0][1] * s.h[1][0];
    double du = -s.g[0], dv = -s.g[1];
    if (det > 1e-300 && s.h[0][0] > 0.0) {
      du = -(s.h[1][1] * s.g[0] - s.h[0][1] * s.g[1]) / det;
      dv = -(-s.h[1][0] * s.g[0] + s.h[0][0] * s.g[1]) / det;
    }
    double slope = du * s.g[0] + dv * s.g[1];
    if (!(slope < 0.0)) {
      du = -s.g[0];
      dv = -s.g[1];
      slope = -gn * gn;
    }
    double t = 1.0;
    DualState next;
    for (;;) {
      next = evaluate(re, im, alpha, u + t * du, v + t * dv, true);
      if (next.value <= s.value + 1e-4 * t * slope) break;
      // Close to the optimum the decrease drops below the rounding level of
      // the value; accept a full step that still shrinks the gradient.
      if (t == 1.0 && gn < 1e-6 && std::hypot(next.g[0], next.g[1]) < 0.5 * gn) break;
      t *= 0.5;
      if (t < 1e-16) break;
    }
    if (t < 1e-16) break;  // no further decrease at rounding level
    u += t * du;
    v += t * dv;
    s = std::move(next);
  }
  InferenceResult r = finish(a, alpha, s.rho);
  if (r.residual > 1e-8 * scale) throw std::runtime_error("maximum-entropy dual solver did not converge");
  r.u = u;
  r.v = v;
  r.iterations = it;
  return r;
}

InferenceResult maxent_boundary(const ComplexMatrix& a, Point alpha) {
  const double scale = scale_of(a);
  const auto m = SupportFunction(a).max_gap(alpha);
  if (m.gap > 1e-8 * scale) throw PreconditionError("point is outside the numerical range");
  if (m.gap < -1e-8 * scale)
    throw PreconditionError("point lies in the interior of the numerical range; use the interior solver");

  const double theta = supporting_angle(a, alpha, m.theta);
  const auto f = face(a, theta);
  const OrthonormalBasis& xm = f.basis_m;
  if (xm.size() == 1) return finish(a, alpha, xm.projector());

  // On X_m(theta) the rotated matrix is lambda_m + i H; only H is left.
  const auto h = eig_hermitian(compress(rotate_prime(a, theta), xm));
  const double lo = h.eigenvalues.front(), hi = h.eigenvalues.back();
  const double t = (std::polar(1.0, -theta) * alpha).imag();
  const double end_tol = 1e-7 * scale;
  if (hi - lo <= flat_threshold(a)) return finish(a, alpha, mixed_on(xm));
  if (t >= hi - end_tol) return finish(a, alpha, mixed_on(f.basis_plus));
  if (t <= lo + end_tol) return finish(a, alpha, mixed_on(f.basis_minus));

  const auto p = classical_maxent(h.eigenvalues, t);
  const std::size_t k = xm.size();
  ComplexMatrix small(k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) small(r, c) += p[j] * h.eigenvectors[j][r] * std::conj(h.eigenvectors[j][c]);
  return finish(a, alpha, HermitianMatrix::symmetrize(lift(xm, small)).matrix());
}

InferenceResult maxent(const ComplexMatrix& a, Point alpha) {
  const double scale = scale_of(a);
  const auto m = SupportFunction(a).max_gap(alpha);
  if (m.gap > 1e-8 * scale) throw PreconditionError("point is outside the numerical range");
  return m.gap > -1e-7 * scale ? maxent_boundary(a, alpha) : maxent_interior(a, alpha);
}

std::vector<Point> round_boundary_points(const ComplexMatrix& a, int grid) {
  const auto flats = flat_portions(a, grid);
  const double tol = 1e-7 * scale_of(a);
  std::vector<Point> out;
  for (const auto& e : extreme_points(a, grid)) {
    if (e.kind != ExtremePointReport::Kind::exposed || e.normal_arc.length() > kSingleAngleArc) continue;
    bool endpoint = false;
    for (const auto& fp : flats)
      endpoint = endpoint || std::abs(fp.endpoint_plus - e.point) <= tol || std::abs(fp.endpoint_minus - e.point) <= tol;
    if (!endpoint) out.push_back(e.point);
  }
  return out;
}

ProbeReport discontinuity_probe(const ComplexMatrix& a, Point alpha, int steps) {
  if (steps < 2) throw std::invalid_argument("discontinuity_probe needs at least two steps");
  const double scale = scale_of(a);
  const auto sf = supporting_face(a, alpha);
  if (sf.preimage.size() < 2)
    throw PreconditionError("point is not multiply generated (pre-image dimension 1)");
  if (normal_arc(a, sf.preimage, sf.theta).length() > kSingleAngleArc)
    throw PreconditionError("point has several supporting lines, so it is not a round boundary point");
  for (const auto& fp : flat_portions(a))
    if (std::abs(fp.endpoint_plus - alpha) <= 1e-7 * scale || std::abs(fp.endpoint_minus - alpha) <= 1e-7 * scale)
      throw PreconditionError("point is an endpoint of a flat boundary portion, not a round boundary point");

  ProbeReport rep;
  rep.alpha = alpha;
  rep.value = maxent_boundary(a, alpha).entropy;
  const Point centroid = a.trace() / static_cast<double>(a.dim());
  std::optional<Point> warm;
  for (int k = 0; k < steps; ++k) {
    const double delta = 0.5 * std::pow(2e-3, static_cast<double>(k) / (steps - 1));
    const Point p = centroid + (1.0 - delta) * (alpha - centroid);
    const auto r = maxent_interior(a, p, warm);
    warm = Point(r.u, r.v);
    rep.radial.push_back({delta, p, r.entropy});

    const Point q = face(a, sf.theta + delta).p_plus;
    rep.boundary.push_back({delta, q, maxent_boundary(a, q).entropy});
  }
  rep.radial_limit = rep.radial.back().entropy;
  rep.boundary_limit = rep.boundary.back().entropy;
  rep.discontinuous = std::abs(rep.radial_limit - rep.boundary_limit) > 1e-3;
  return rep;
}

}  // namespace numrange
