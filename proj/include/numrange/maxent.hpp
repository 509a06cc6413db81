#pragma once

// Maximum-entropy inference rho*(alpha) = argmax { S(rho) : tr(A rho) = alpha }
// over density matrices, for alpha in W(A).

#include <optional>
#include <vector>

#include "numrange/matcore.hpp"
#include "numrange/rangegeo.hpp"

namespace numrange {

/// Hermitian, positive semi-definite, trace one (all within 1e-12).
class DensityMatrix {
public:
  DensityMatrix() = default;
  /// Throws std::invalid_argument if m is not a density matrix.
  explicit DensityMatrix(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  /// tr(A rho).
  Complex expectation(const ComplexMatrix& a) const;

private:
  ComplexMatrix m_;
};

struct InferenceResult {
  DensityMatrix rho;
  double entropy = 0.0;
  double u = 0.0, v = 0.0;  ///< Lagrange multipliers of Re and Im (0 on faces)
  double residual = 0.0;    ///< |tr(A rho) - alpha|
  int iterations = 0;
};

/// -sum lambda log lambda, eigenvalues below 1e-15 contribute 0.
double entropy(const DensityMatrix& rho);

/// log tr exp(u Re A + v Im A) - (u alpha_x + v alpha_y) and its gradient.
double dual_value(const ComplexMatrix& a, Point alpha, double u, double v);
Point dual_gradient(const ComplexMatrix& a, Point alpha, double u, double v);

/// Throws PreconditionError unless alpha is at least 1e-7 (1 + ||A||)
/// inside W(A). When W(A) is a segment or a point, relative interior points
/// are accepted.
InferenceResult maxent_interior(const ComplexMatrix& a, Point alpha,
                                std::optional<Point> warm_start = std::nullopt);

/// Face compression: throws PreconditionError if alpha is outside W(A) or
/// farther than 1e-8 (1 + ||A||) from the boundary.
InferenceResult maxent_boundary(const ComplexMatrix& a, Point alpha);

/// Dispatches to maxent_interior or maxent_boundary.
InferenceResult maxent(const ComplexMatrix& a, Point alpha);

/// Extreme points with a unique supporting line that are not endpoints of a
/// flat portion.
std::vector<Point> round_boundary_points(const ComplexMatrix& a, int grid = 1024);

struct ProbeSample {
  double delta = 0.0;
  Point point;
  double entropy = 0.0;
};

struct ProbeReport {
  Point alpha;
  double value = 0.0;  ///< S(rho*(alpha))
  std::vector<ProbeSample> radial;    ///< centroid -> alpha
  std::vector<ProbeSample> boundary;  ///< along the boundary, theta* + delta
  double radial_limit = 0.0, boundary_limit = 0.0;
  bool discontinuous = false;  ///< limits differ by more than 1e-3
};

/// Throws PreconditionError unless alpha is a multiply generated round
/// boundary point.
ProbeReport discontinuity_probe(const ComplexMatrix& a, Point alpha, int steps = 12);

}  // namespace numrange
