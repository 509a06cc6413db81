#pragma once

// Birth of a flat boundary portion at a multiply generated extreme point:
// the perturbation A + eps e^{i theta}(P + iH) with P the projection onto the
// pre-image of alpha produces a segment on the supporting line that shrinks
// to alpha as eps -> 0.

#include <optional>
#include <span>
#include <vector>

#include "numrange/extremal.hpp"
#include "numrange/matcore.hpp"

namespace numrange {

struct BirthFamily {
  ComplexMatrix base;
  Point alpha;
  double theta = 0.0;
  int sigma = 0;          ///< +1 / -1: alpha = p_plus / p_minus; 0: singleton face
  OrthonormalBasis subspace;  ///< X_sigma(theta)
  ComplexMatrix projection;   ///< P
  HermitianMatrix h;
  double support = 0.0;   ///< lambda_m(theta)
  double lambda = 0.0;    ///< A'(theta) restricted to X_sigma equals lambda * id
  double mu_plus = 0.0, mu_minus = 0.0;  ///< extreme eigenvalues of H restricted to X_sigma

  /// e^{i theta}(A(theta) + eps P + i (A'(theta) + eps H)).
  ComplexMatrix member(double eps) const;
  /// Endpoints of the face of member(eps) at theta predicted by the construction.
  Point expected_plus(double eps) const;
  Point expected_minus(double eps) const;
};

/// Rank-one projector onto the first column of q; requires q.size() >= 2.
HermitianMatrix default_H(const OrthonormalBasis& q);

/// Throws PreconditionError if alpha is not an extreme point, or is simply
/// generated (no birth is possible there).
BirthFamily birth_family(const ComplexMatrix& a, Point alpha,
                         const std::optional<HermitianMatrix>& h = std::nullopt);

struct BirthRow {
  double eps = 0.0;
  Point p_plus, p_minus;
  double flat_length = 0.0;
  double hausdorff_to_alpha = 0.0;  ///< d_H(face segment, {alpha})
  double endpoint_error = 0.0;      ///< distance from the predicted endpoints
  double range_distance = 0.0;      ///< d_H(W(member), W(A)) on samples-angle polygons
};

/// eps values must be positive and descending.
std::vector<BirthRow> verify_birth(const BirthFamily& family, std::span<const double> eps,
                                   int samples = 1024);

}  // namespace numrange
