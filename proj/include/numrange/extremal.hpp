#pragma once

// Exposed faces F_A(theta), their endpoints and pre-images, flat boundary
// portions and the classification of extreme points.

#include <vector>

#include "numrange/matcore.hpp"
#include "numrange/rangegeo.hpp"

namespace numrange {

/// Eigenvalues of A(theta) within this distance of the top one are treated
/// as one cluster.
double cluster_tolerance(const ComplexMatrix& a);
/// Faces shorter than this are singletons.
double flat_threshold(const ComplexMatrix& a);
/// Normal arcs at most this long count as a single supporting line.
inline constexpr double kSingleAngleArc = 1e-6;

struct FaceDescriptor {
  double theta = 0.0;
  double support = 0.0;
  Point p_plus, p_minus;
  double deriv_plus = 0.0, deriv_minus = 0.0;
  OrthonormalBasis basis_m, basis_plus, basis_minus;

  double length() const { return std::abs(p_plus - p_minus); }
};

struct FlatPortion {
  double theta = 0.0;
  Point endpoint_minus, endpoint_plus;
  double length = 0.0;
};

struct AngleInterval {
  double lo = 0.0, hi = 0.0;
  double length() const { return hi - lo; }
};

struct ExtremePointReport {
  enum class Kind { exposed, non_exposed };
  Point point;
  Kind kind = Kind::exposed;
  OrthonormalBasis preimage;
  bool multiply_generated = false;
  AngleInterval normal_arc;
};

struct EigencurveDerivative {
  double value = 0.0;
  double derivative = 0.0;
  int multiplicity = 1;
};

OrthonormalBasis max_eigenspace(const ComplexMatrix& a, double theta);
FaceDescriptor face(const ComplexMatrix& a, double theta);
/// One entry per eigenvalue of A(theta), ascending by value; inside a
/// cluster the derivatives are the eigenvalues of the compressed A'(theta).
std::vector<EigencurveDerivative> eigencurve_derivatives(const ComplexMatrix& a, double theta);
std::vector<FlatPortion> flat_portions(const ComplexMatrix& a, int grid = 1024);
std::vector<ExtremePointReport> extreme_points(const ComplexMatrix& a, int grid = 1024);

/// Supporting data of a boundary point p: an angle theta with p in F_A(theta)
/// and the pre-image subspace of p.
struct SupportingFace {
  double theta = 0.0;
  FaceDescriptor face;
  OrthonormalBasis preimage;
  int side = 0;  ///< +1: p = p_plus, -1: p = p_minus, 0: singleton face
};

/// Throws PreconditionError unless p is an extreme point of W(A).
SupportingFace supporting_face(const ComplexMatrix& a, Point p);
OrthonormalBasis preimage(const ComplexMatrix& a, Point p);

/// Set of angles theta with p in F_A(theta), given the pre-image basis of p
/// and one angle theta0 of that set.
AngleInterval normal_arc(const ComplexMatrix& a, const OrthonormalBasis& pre, double theta0);

}  // namespace numrange
