#pragma once

// Shape classification of 3x3 matrices into the classes R3 (unitarily
// reducible), E3 (irreducible, elliptical range), F3 (irreducible with a flat
// boundary portion) and O3 (the rest), with canonical forms of reducible
// matrices and explicit approximating sequences for the closures of E3, F3.

#include <optional>
#include <string>
#include <vector>

#include "numrange/extremal.hpp"
#include "numrange/matcore.hpp"
#include "numrange/rangegeo.hpp"

namespace numrange {

/// Homogeneous polynomial F(y0, y1, y2) = det(y0 id + y1 Re(A) + y2 Im(A)).
class KippenhahnPolynomial {
public:
  explicit KippenhahnPolynomial(int degree = 0);

  int degree() const noexcept { return degree_; }
  /// Coefficient of y0^i y1^j y2^k, i + j + k = degree (0 otherwise).
  double coefficient(int i, int j, int k) const;
  void set_coefficient(int j, int k, double value);
  double operator()(double y0, double y1, double y2) const;

private:
  int degree_ = 0;
  std::vector<double> c_;  // index j * (degree + 1) + k
};

/// Exact expansion over column subsets; d <= 12.
KippenhahnPolynomial kippenhahn_polynomial(const ComplexMatrix& a);

/// Distinct normal eigenvalues (joint eigenvectors of A and A^*).
std::vector<Complex> normal_eigenvalues(const ComplexMatrix& a);
/// Unit joint eigenvectors, one per orthonormal direction found.
std::vector<Vector> normal_eigenvectors(const ComplexMatrix& a);
bool is_reducible3(const ComplexMatrix& a);

struct EllipticData {
  Complex lambda;
  std::pair<Complex, Complex> foci;
  double minor_axis = 0.0;  ///< full length sqrt(d)
  double d = 0.0;           ///< |x|^2 + |y|^2 + |z|^2 of the Schur form
  EllipseParams ellipse() const;
};

std::optional<EllipticData> elliptic_data(const ComplexMatrix& a);

enum class KippClass { R3, E3, F3, O3 };
enum class RangeShape {
  point,
  segment,
  triangle,
  ellipse,
  ellipse_plus_outside_point,
  ellipse_irreducible,
  flat_portion_shape,
  ovular
};

std::string to_string(KippClass c);
std::string to_string(RangeShape s);

struct KippenhahnClassification {
  KippClass cls = KippClass::O3;
  RangeShape shape = RangeShape::ovular;
  std::vector<Complex> normal_eigenvalues;
  std::optional<EllipticData> elliptic;
  std::vector<double> flat_angles;
  /// Angles where Re(e^{-i theta} A) - lambda_max has rank one.
  std::vector<double> rank_one_angles;
  /// Flat scan and rank-one criterion found the same angles.
  bool certificates_agree = true;
  /// For reducible non-normal A: ellipse of the 2x2 block and the signed
  /// distance of the normal eigenvalue to its boundary (negative inside).
  std::optional<EllipseParams> block_ellipse;
  double eigenvalue_offset = 0.0;
};

KippenhahnClassification classify(const ComplexMatrix& a, int grid = 1024);

/// Re/Im parts replaced by T [Re, Im] + s id; the range maps to T W(A) + s.
/// T is row-major {t00, t01, t10, t11}.
struct Affine2 {
  double t00 = 1.0, t01 = 0.0, t10 = 0.0, t11 = 1.0;
  Point shift;
  double det() const noexcept { return t00 * t11 - t01 * t10; }
  Point apply(Point p) const noexcept;
  Affine2 inverse() const;
  /// (this o other)(p) = this(other(p)).
  Affine2 compose(const Affine2& other) const noexcept;
};

ComplexMatrix affine_transform(const ComplexMatrix& a, const Affine2& t);

enum class CanonicalKind { zero, diag_0_lambda_1, diag_0_1_i, offdiag_a };
std::string to_string(CanonicalKind k);

struct CanonicalForm3 {
  CanonicalKind kind = CanonicalKind::zero;
  double parameter = 0.0;     ///< lambda in [0, 1/2] or a >= 0
  ComplexMatrix matrix;       ///< the canonical representative
  ComplexMatrix unitary;      ///< U
  Affine2 affine;             ///< matrix = affine_transform(U^* A U, affine)
};

/// Throws PreconditionError for irreducible input. Returns identity
/// transformations when A already is a canonical matrix.
CanonicalForm3 canonical_reducible_form(const ComplexMatrix& a);

/// M(alpha, beta) = [[alpha, (1-alpha)(1+beta^2)/beta, alpha], [0, alpha, -alpha beta], [0, 0, 1]].
ComplexMatrix m_family(double alpha, double beta);
/// diag[a,a,-a] + (i/a) [[0,0,eps],[0,s,i],[eps,-i,-s]], s = sqrt(a^2 - 1), a >= 1.
ComplexMatrix f3_display(double a, double eps);
/// Unitary u and shear with f3_display(a, 0) = u^* affine(offdiag(a)) u.
ComplexMatrix f3_display_unitary(double a);

bool in_closure_E3(const ComplexMatrix& a);
bool in_closure_F3(const ComplexMatrix& a);

/// B in E3 near A, expressed in the coordinates of A. Throws
/// PreconditionError unless A lies in the closure of E3 but not in E3.
ComplexMatrix e3_witness(const ComplexMatrix& a, double eps);
/// Same for F3.
ComplexMatrix f3_witness(const ComplexMatrix& a, double eps);

/// [[0,2,0],[0,0,0],[0,0,a]].
ComplexMatrix offdiag_form(Complex a);

}  // namespace numrange
