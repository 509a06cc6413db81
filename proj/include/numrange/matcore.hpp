#pragma once

// Dense complex matrices, Hermitian parts, the rotated pencil A(theta), a
// cyclic Jacobi eigensolver and a 3x3 Schur triangularization.

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace numrange {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

/// Square dense complex matrix stored row-major.
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  /// Outer product u v^*.
  static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v);

  std::size_t dim() const noexcept { return dim_; }
  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * dim_ + j];
  }
  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const noexcept;
  double frobenius_norm() const noexcept;
  Vector column(std::size_t j) const;
  Vector apply(std::span<const Complex> x) const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex s) noexcept;

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

/// A matrix equal to its conjugate transpose. Construction from a general
/// matrix checks the defect and then symmetrizes exactly.
class HermitianMatrix {
public:
  HermitianMatrix() = default;
  /// Throws std::invalid_argument if ||M - M^*|| > 1e-13 ||M||.
  explicit HermitianMatrix(const ComplexMatrix& m);
  /// Symmetrizes without checking.
  static HermitianMatrix symmetrize(const ComplexMatrix& m);

  std::size_t dim() const noexcept { return m_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  operator const ComplexMatrix&() const noexcept { return m_; }
  double operator()(std::size_t i) const noexcept { return m_(i, i).real(); }
  Complex operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }

private:
  struct Unchecked {};
  HermitianMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// d x k block of orthonormal columns.
class OrthonormalBasis {
public:
  OrthonormalBasis() = default;
  /// Throws std::invalid_argument unless the columns are orthonormal within 1e-10.
  OrthonormalBasis(std::size_t ambient_dim, std::vector<Vector> columns);
  static OrthonormalBasis standard(std::size_t d);

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t size() const noexcept { return cols_.size(); }
  bool empty() const noexcept { return cols_.empty(); }
  const Vector& operator[](std::size_t k) const noexcept { return cols_[k]; }
  const std::vector<Vector>& columns() const noexcept { return cols_; }

  /// Orthogonal projector Q Q^*.
  ComplexMatrix projector() const;
  /// Q c for a coefficient vector c of length size().
  Vector lift(std::span<const Complex> coeffs) const;

private:
  std::size_t ambient_ = 0;
  std::vector<Vector> cols_;
};

/// Ascending eigenvalues with orthonormal eigenvectors.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<Vector> eigenvectors;
};

// ---- vector helpers -------------------------------------------------------

Complex dot(std::span<const Complex> x, std::span<const Complex> y);  ///< x^* y
double norm(std::span<const Complex> x);
Vector normalized(std::span<const Complex> x);

// ---- matrix operations ----------------------------------------------------

HermitianMatrix re_part(const ComplexMatrix& a);
HermitianMatrix im_part(const ComplexMatrix& a);
/// A(theta) = cos(theta) Re(A) + sin(theta) Im(A).
HermitianMatrix rotate(const ComplexMatrix& a, double theta);
/// A'(theta) = Im(e^{-i theta} A) = -sin(theta) Re(A) + cos(theta) Im(A).
HermitianMatrix rotate_prime(const ComplexMatrix& a, double theta);

/// x^* A x for a unit vector x. Rejects ||x|| != 1 (tolerance 1e-10).
Complex f_eval(const ComplexMatrix& a, std::span<const Complex> x);
/// x^* H x without the unit check.
double quadratic_form(const HermitianMatrix& h, std::span<const Complex> x);

/// Cyclic Jacobi. Eigenvector phases are fixed so the largest-modulus
/// component is real and positive.
SpectralDecomposition eig_hermitian(const HermitianMatrix& h);
/// Throws std::invalid_argument if the matrix is not Hermitian.
SpectralDecomposition eig_hermitian(const ComplexMatrix& h);

/// Q^* B Q.
ComplexMatrix compress(const ComplexMatrix& b, const OrthonormalBasis& q);
HermitianMatrix compress(const HermitianMatrix& b, const OrthonormalBasis& q);

struct SchurForm {
  ComplexMatrix unitary;     ///< U
  ComplexMatrix triangular;  ///< T = U^* A U, strictly lower part zeroed
};

/// Roots of the monic cubic z^3 + c2 z^2 + c1 z + c0.
std::vector<Complex> cubic_roots(Complex c2, Complex c1, Complex c0);
/// Roots of z^2 + c1 z + c0.
std::pair<Complex, Complex> quadratic_roots(Complex c1, Complex c0);

/// Unitary triangularization of a 3x3 matrix.
SchurForm schur3(const ComplexMatrix& a);

/// Eigenvalues of a general matrix of dimension 1, 2 or 3.
std::vector<Complex> eigenvalues_small(const ComplexMatrix& a);

/// Unit vector minimizing ||M x|| (smallest right singular vector).
Vector smallest_singular_vector(const ComplexMatrix& m);

/// Unitary whose first column is the unit vector v (Householder reflector
/// scaled by a phase).
ComplexMatrix unitary_with_first_column(std::span<const Complex> v);

}  // namespace numrange
