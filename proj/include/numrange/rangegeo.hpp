#pragma once

// Support function of W(A), polygonal approximations of W(A), membership,
// Hausdorff distance between convex polygons and conic recognition.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "numrange/matcore.hpp"

namespace numrange {

/// Points of the plane are complex numbers x + iy.
using Point = Complex;

/// Real inner product <a, b> = Re(a conj(b)).
inline double inner(Point a, Point b) noexcept { return (a * std::conj(b)).real(); }

struct SupportSample {
  double theta = 0.0;
  double support = 0.0;  ///< lambda_max(A(theta))
  int multiplicity = 1;
};

/// Counterclockwise list of vertices. One vertex is a point, two a segment.
class ConvexPolygon {
public:
  ConvexPolygon() = default;
  /// Takes vertices that are already in counterclockwise convex position.
  explicit ConvexPolygon(std::vector<Point> ccw_vertices) : v_(std::move(ccw_vertices)) {}

  const std::vector<Point>& vertices() const noexcept { return v_; }
  std::size_t size() const noexcept { return v_.size(); }
  bool empty() const noexcept { return v_.empty(); }
  const Point& operator[](std::size_t k) const noexcept { return v_[k]; }

  /// max over vertices of <v, e^{i theta}>.
  double support(double theta) const;
  double diameter() const;
  /// Image under z -> e^{i phi} z + shift.
  ConvexPolygon rotated(double phi, Point shift = {}) const;

private:
  std::vector<Point> v_;
};

/// Monotone-chain hull, collinear points dropped, points closer than
/// dedupe_tol merged.
ConvexPolygon convex_hull(std::vector<Point> points, double dedupe_tol = 0.0);

struct EllipseParams {
  Point center;
  std::pair<Point, Point> foci;
  double semi_minor = 0.0;
  double semi_major() const;
};

/// n points on the boundary of the ellipse (a segment if semi_minor = 0).
ConvexPolygon ellipse_polygon(const EllipseParams& e, int n);

/// lambda_max(A(theta)) for a fixed matrix, with a precomputed grid used to
/// locate the maximum of <p, e^{it}> - h(t) quickly for many points p.
class SupportFunction {
public:
  explicit SupportFunction(ComplexMatrix a, int grid = 4096);

  const ComplexMatrix& matrix() const noexcept { return a_; }
  double operator()(double theta) const;

  struct Max {
    double theta = 0.0;
    double gap = 0.0;  ///< max_t <p, e^{it}> - h(t); <= 0 iff p in W(A)
  };
  Max max_gap(Point p) const;
  bool contains(Point p) const;

private:
  ComplexMatrix a_;
  double scale_ = 1.0;
  std::vector<double> values_;
};

SupportSample support_value(const ComplexMatrix& a, double theta);
ConvexPolygon boundary_polygon(const ComplexMatrix& a, int samples = 1024);
bool contains(const ComplexMatrix& a, Point p);

/// sup_theta |h_K(theta) - h_L(theta)|, evaluated exactly on the merged
/// normal fans of the two polygons.
double hausdorff(const ConvexPolygon& k, const ConvexPolygon& l);
/// Point-set definition max(sup_K dist(., L), sup_L dist(., K)), evaluated
/// at the vertices (where the convex distance functions attain their maxima).
double hausdorff_pointwise(const ConvexPolygon& k, const ConvexPolygon& l);
/// Euclidean distance from p to the convex polygon (0 inside).
double distance_to(const ConvexPolygon& k, Point p);

std::optional<EllipseParams> ellipse_fit(const ConvexPolygon& k);

enum class PolygonShape { point, segment, ellipse, other };
/// Point and segment use tol relative to the diameter scale.
PolygonShape shape_of(const ConvexPolygon& k, double tol = 1e-9);

/// d_H(W(A_i), W(limit)) for every member of the sequence.
std::vector<double> range_converges(std::span<const ComplexMatrix> sequence,
                                    const ComplexMatrix& limit, int samples = 1024);

}  // namespace numrange
