#include "numrange/birth.hpp"

#include <cmath>
#include <stdexcept>

#include "numrange/errors.hpp"
#include "numrange/rangegeo.hpp"

namespace numrange {

namespace {
constexpr Point kI{0.0, 1.0};
}

ComplexMatrix BirthFamily::member(double eps) const {
  const ComplexMatrix re = rotate(base, theta).matrix() + eps * projection;
  const ComplexMatrix im = rotate_prime(base, theta).matrix() + eps * h.matrix();
  return std::polar(1.0, theta) * (re + kI * im);
}

Point BirthFamily::expected_plus(double eps) const {
  return std::polar(1.0, theta) * Point(support + eps, lambda + eps * mu_plus);
}

Point BirthFamily::expected_minus(double eps) const {
  return std::polar(1.0, theta) * Point(support + eps, lambda + eps * mu_minus);
}

HermitianMatrix default_H(const OrthonormalBasis& q) {
  if (q.size() < 2) throw std::invalid_argument("default_H needs a basis with at least two columns");
  return HermitianMatrix::symmetrize(ComplexMatrix::outer(q[0], q[0]));
}

BirthFamily birth_family(const ComplexMatrix& a, Point alpha, const std::optional<HermitianMatrix>& h) {
  const auto sf = supporting_face(a, alpha);
  if (sf.preimage.size() < 2)
    throw PreconditionError(
        "point is simply generated (pre-image dimension 1); no flat boundary portion is born there");

  BirthFamily f;
  f.base = a;
  f.alpha = alpha;
  f.theta = sf.theta;
  f.sigma = sf.side;
  f.subspace = sf.preimage;
  f.support = sf.face.support;

  // At a corner any angle of the normal cone works; take its midpoint.
  const auto arc = normal_arc(a, sf.preimage, sf.theta);
  if (arc.length() > kSingleAngleArc) {
    const double mid = 0.5 * (arc.lo + arc.hi);
    const auto fm = face(a, mid);
    const double dp = std::abs(fm.p_plus - alpha), dm = std::abs(fm.p_minus - alpha);
    const double match = 1e-7 * (1.0 + a.frobenius_norm());
    if (std::min(dp, dm) <= match) {
      f.theta = mid;
      f.support = fm.support;
      if (fm.length() > flat_threshold(a)) {
        f.sigma = dp <= dm ? 1 : -1;
        f.subspace = f.sigma > 0 ? fm.basis_plus : fm.basis_minus;
      } else {
        f.sigma = 0;
        f.subspace = fm.basis_m;
      }
    }
  }
  f.projection = f.subspace.projector();
  f.h = h ? *h : default_H(f.subspace);
  if (f.h.dim() != a.dim()) throw std::invalid_argument("H has the wrong dimension");

  const auto restricted = compress(rotate_prime(a, f.theta), f.subspace);
  f.lambda = restricted.matrix().trace().real() / static_cast<double>(f.subspace.size());
  const double scale = 1.0 + a.frobenius_norm();
  const Point rebuilt = std::polar(1.0, f.theta) * Point(f.support, f.lambda);
  if (std::abs(rebuilt - alpha) > 1e-9 * scale)
    throw PreconditionError("supporting face does not reproduce the point within 1e-9");

  const auto mu = eig_hermitian(compress(f.h, f.subspace)).eigenvalues;
  f.mu_minus = mu.front();
  f.mu_plus = mu.back();
  if (f.mu_plus - f.mu_minus <= 1e-12 * (1.0 + f.h.matrix().frobenius_norm()))
    throw PreconditionError("H restricted to the pre-image is scalar, so no flat portion is produced");
  return f;
}

std::vector<BirthRow> verify_birth(const BirthFamily& family, std::span<const double> eps, int samples) {
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0)) throw std::invalid_argument("eps values must be positive");
    if (k > 0 && !(eps[k] < eps[k - 1])) throw std::invalid_argument("eps values must be descending");
  }
  const auto base_polygon = boundary_polygon(family.base, samples);
  std::vector<BirthRow> rows;
  for (double e : eps) {
    const auto m = family.member(e);
    const auto f = face(m, family.theta);
    BirthRow r;
    r.eps = e;
    r.p_plus = f.p_plus;
    r.p_minus = f.p_minus;
    r.flat_length = f.length();
    r.hausdorff_to_alpha = std::max(std::abs(f.p_plus - family.alpha), std::abs(f.p_minus - family.alpha));
    r.endpoint_error = std::max(std::abs(f.p_plus - family.expected_plus(e)),
                                std::abs(f.p_minus - family.expected_minus(e)));
    r.range_distance = hausdorff(boundary_polygon(m, samples), base_polygon);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace numrange
