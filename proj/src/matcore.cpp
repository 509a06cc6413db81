#include "numrange/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace numrange {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("matrix dimension mismatch");
}

}  // namespace

// ---- ComplexMatrix ----------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim_ * dim_) throw std::invalid_argument("entry count is not dim*dim");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw std::invalid_argument("matrix must be square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) throw std::invalid_argument("outer: length mismatch");
  ComplexMatrix m(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

Complex ComplexMatrix::trace() const noexcept {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

Vector ComplexMatrix::column(std::size_t j) const {
  Vector c(dim_);
  for (std::size_t i = 0; i < dim_; ++i) c[i] = (*this)(i, j);
  return c;
}

Vector ComplexMatrix::apply(std::span<const Complex> x) const {
  if (x.size() != dim_) throw std::invalid_argument("apply: vector length mismatch");
  Vector y(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) noexcept {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b);
  const std::size_t n = a.dim();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

// ---- HermitianMatrix --------------------------------------------------------

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  const double defect = (m - m.adjoint()).frobenius_norm();
  if (defect > 1e-13 * std::max(1.0, m.frobenius_norm()))
    throw std::invalid_argument("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  m_ = symmetrize(m).m_;
}

HermitianMatrix HermitianMatrix::symmetrize(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return HermitianMatrix(std::move(h), Unchecked{});
}

// ---- OrthonormalBasis -------------------------------------------------------

OrthonormalBasis::OrthonormalBasis(std::size_t ambient_dim, std::vector<Vector> columns)
    : ambient_(ambient_dim), cols_(std::move(columns)) {
  if (cols_.size() > ambient_) throw std::invalid_argument("basis has more columns than dimension");
  for (std::size_t a = 0; a < cols_.size(); ++a) {
    if (cols_[a].size() != ambient_) throw std::invalid_argument("basis column has wrong length");
    for (std::size_t b = a; b < cols_.size(); ++b) {
      const Complex g = dot(cols_[a], cols_[b]);
      const double expect = a == b ? 1.0 : 0.0;
      if (std::abs(g - expect) > 1e-10)
        throw std::invalid_argument("basis columns are not orthonormal");
    }
  }
}

OrthonormalBasis OrthonormalBasis::standard(std::size_t d) {
  std::vector<Vector> cols(d, Vector(d));
  for (std::size_t k = 0; k < d; ++k) cols[k][k] = 1.0;
  return OrthonormalBasis(d, std::move(cols));
}

ComplexMatrix OrthonormalBasis::projector() const {
  ComplexMatrix p(ambient_);
  for (const auto& c : cols_) p += ComplexMatrix::outer(c, c);
  return p;
}

Vector OrthonormalBasis::lift(std::span<const Complex> coeffs) const {
  if (coeffs.size() != cols_.size()) throw std::invalid_argument("lift: coefficient length");
  Vector x(ambient_);
  for (std::size_t k = 0; k < cols_.size(); ++k)
    for (std::size_t i = 0; i < ambient_; ++i) x[i] += coeffs[k] * cols_[k][i];
  return x;
}

// ---- vectors ----------------------------------------------------------------

Complex dot(std::span<const Complex> x, std::span<const Complex> y) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double norm(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

Vector normalized(std::span<const Complex> x) {
  const double n = norm(x);
  if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  Vector y(x.begin(), x.end());
  for (auto& z : y) z /= n;
  return y;
}

// ---- Hermitian parts and rotations -----------------------------------------

HermitianMatrix re_part(const ComplexMatrix& a) {
  return HermitianMatrix::symmetrize(0.5 * (a + a.adjoint()));
}

HermitianMatrix im_part(const ComplexMatrix& a) {
  return HermitianMatrix::symmetrize(Complex(0.0, -0.5) * (a - a.adjoint()));
}

HermitianMatrix rotate(const ComplexMatrix& a, double theta) {
  // Re(e^{-i theta} A), computed entrywise.
  const Complex w = std::polar(1.0, -theta);
  const std::size_t n = a.dim();
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = 0.5 * (w * a(i, j) + std::conj(w * a(j, i)));
  return HermitianMatrix::symmetrize(m);
}

HermitianMatrix rotate_prime(const ComplexMatrix& a, double theta) {
  const Complex w = std::polar(1.0, -theta);
  const std::size_t n = a.dim();
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = Complex(0.0, -0.5) * (w * a(i, j) - std::conj(w * a(j, i)));
  return HermitianMatrix::symmetrize(m);
}

Complex f_eval(const ComplexMatrix& a, std::span<const Complex> x) {
  if (x.size() != a.dim()) throw std::invalid_argument("f_eval: vector length mismatch");
  if (std::abs(norm(x) - 1.0) > 1e-10) throw std::invalid_argument("f_eval: x is not a unit vector");
  return dot(x, a.apply(x));
}

double quadratic_form(const HermitianMatrix& h, std::span<const Complex> x) {
  return dot(x, h.matrix().apply(x)).real();
}

// ---- Jacobi eigensolver -----------------------------------------------------

SpectralDecomposition eig_hermitian(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  std::vector<Complex> a(h.matrix().data().begin(), h.matrix().data().end());
  std::vector<Complex> v(n * n);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> Complex& { return a[i * n + j]; };
  auto V = [&](std::size_t i, std::size_t j) -> Complex& { return v[i * n + j]; };

  const double scale = h.matrix().frobenius_norm();
  const double threshold = 1e-14 * scale;
  constexpr int kMaxSweeps = 60;

  for (int sweep = 0; sweep < kMaxSweeps && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) off += std::norm(A(i, j));
    if (std::sqrt(off) <= threshold) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex b = A(p, q);
        const double r = std::abs(b);
        if (r <= 1e-300) continue;
        const Complex phase = b / r;  // e^{i phi}
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = diag(1, e^{-i phi}) [[c, s], [-s, c]]
        const Complex gpp = c, gpq = s;
        const Complex gqp = -s * std::conj(phase), gqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {  // A <- A G
          const Complex akp = A(k, p), akq = A(k, q);
          A(k, p) = akp * gpp + akq * gqp;
          A(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- G^* A
          const Complex apk = A(p, k), aqk = A(q, k);
          A(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          A(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        A(p, p) = A(p, p).real();
        A(q, q) = A(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {  // V <- V G
          const Complex vkp = V(k, p), vkq = V(k, q);
          V(k, p) = vkp * gpp + vkq * gqp;
          V(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return A(x, x).real() < A(y, y).real();
  });

  SpectralDecomposition out;
  out.eigenvalues.reserve(n);
  out.eigenvectors.reserve(n);
  for (std::size_t idx : order) {
    out.eigenvalues.push_back(A(idx, idx).real());
    Vector col(n);
    std::size_t big = 0;
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = V(i, idx);
      if (std::abs(col[i]) > std::abs(col[big])) big = i;
    }
    const double mag = std::abs(col[big]);
    if (mag > 0.0) {
      const Complex fix = std::conj(col[big]) / mag;
      for (auto& z : col) z *= fix;
      col[big] = std::abs(col[big]);
    }
    out.eigenvectors.push_back(std::move(col));
  }
  return out;
}

SpectralDecomposition eig_hermitian(const ComplexMatrix& h) {
  return eig_hermitian(HermitianMatrix(h));
}

// ---- compressions -------------------------------------------------------------

ComplexMatrix compress(const ComplexMatrix& b, const OrthonormalBasis& q) {
  if (q.ambient_dim() != b.dim()) throw std::invalid_argument("compress: basis dimension mismatch");
  const std::size_t k = q.size();
  std::vector<Vector> bq;
  bq.reserve(k);
  for (std::size_t j = 0; j < k; ++j) bq.push_back(b.apply(q[j]));
  ComplexMatrix c(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) c(i, j) = dot(q[i], bq[j]);
  return c;
}

HermitianMatrix compress(const HermitianMatrix& b, const OrthonormalBasis& q) {
  return HermitianMatrix::symmetrize(compress(b.matrix(), q));
}

// ---- polynomial roots -------------------------------------------------------

std::pair<Complex, Complex> quadratic_roots(Complex c1, Complex c0) {
  const Complex disc = std::sqrt(c1 * c1 - 4.0 * c0);
  // Avoid cancellation: pick the larger-magnitude root first.
  const Complex q = std::real(std::conj(c1) * disc) >= 0.0 ? -0.5 * (c1 + disc)
                                                           : -0.5 * (c1 - disc);
  if (q == Complex{}) return {0.0, 0.0};
  return {q, c0 / q};
}

namespace {

Complex cubic_value(Complex c2, Complex c1, Complex c0, Complex z) {
  return ((z + c2) * z + c1) * z + c0;
}

// Simultaneous Aberth iteration for the monic cubic, used when the Cardano
// discriminant is too small to separate the roots reliably.
std::vector<Complex> aberth_cubic(Complex c2, Complex c1, Complex c0, std::vector<Complex> z) {
  auto dp = [&](Complex x) { return (3.0 * x + 2.0 * c2) * x + c1; };
  for (int it = 0; it < 100; ++it) {
    double move = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const Complex p = cubic_value(c2, c1, c0, z[k]);
      const Complex d = dp(z[k]);
      if (p == Complex{}) continue;
      const Complex ratio = d == Complex{} ? Complex(1e300) : p / d;
      Complex sum = 0.0;
      for (std::size_t j = 0; j < 3; ++j)
        if (j != k && z[j] != z[k]) sum += 1.0 / (z[k] - z[j]);
      const Complex denom = 1.0 - ratio * sum;
      const Complex step = denom == Complex{} ? ratio : ratio / denom;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[k] -= step;
      move = std::max(move, std::abs(step));
    }
    double size = 0.0;
    for (const auto& x : z) size = std::max(size, std::abs(x));
    if (move <= 1e-16 * std::max(1.0, size)) break;
  }
  return z;
}

}  // namespace

std::vector<Complex> cubic_roots(Complex c2, Complex c1, Complex c0) {
  // Depressed cubic w^3 + p w + q with z = w - c2/3.
  const Complex shift = -c2 / 3.0;
  const Complex p = c1 - c2 * c2 / 3.0;
  const Complex q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const Complex disc = q * q / 4.0 + p * p * p / 27.0;
  const Complex sq = std::sqrt(disc);
  Complex u3 = -q / 2.0 + sq;
  const Complex alt = -q / 2.0 - sq;
  if (std::abs(alt) > std::abs(u3)) u3 = alt;
  const Complex omega(-0.5, std::sqrt(3.0) / 2.0);

  std::vector<Complex> roots(3);
  if (std::abs(u3) == 0.0) {
    roots = {shift, shift, shift};
  } else {
    const Complex u = std::pow(u3, 1.0 / 3.0);
    Complex uk = u;
    for (int k = 0; k < 3; ++k) {
      roots[k] = uk - p / (3.0 * uk) + shift;
      uk *= omega;
    }
  }

  const double scale = std::max({std::abs(c2), std::sqrt(std::abs(c1)), std::cbrt(std::abs(c0))});
  if (scale > 0.0 && std::abs(disc) < 1e-12 * std::pow(scale, 6)) {
    // Start from a small spread around the Cardano roots.
    std::vector<Complex> start = roots;
    const double spread = 1e-3 * scale;
    for (int k = 0; k < 3; ++k) start[k] += spread * std::polar(1.0, 0.4 + 2.0 * kPi * k / 3.0);
    auto refined = aberth_cubic(c2, c1, c0, start);
    double r0 = 0.0, r1 = 0.0;
    for (int k = 0; k < 3; ++k) {
      r0 = std::max(r0, std::abs(cubic_value(c2, c1, c0, roots[k])));
      r1 = std::max(r1, std::abs(cubic_value(c2, c1, c0, refined[k])));
    }
    if (r1 < r0) roots = refined;
  }

  // Newton polish, accepted only when it lowers the residual.
  for (auto& z : roots) {
    for (int it = 0; it < 3; ++it) {
      const Complex f = cubic_value(c2, c1, c0, z);
      const Complex df = (3.0 * z + 2.0 * c2) * z + c1;
      if (df == Complex{}) break;
      const Complex next = z - f / df;
      if (std::abs(cubic_value(c2, c1, c0, next)) < std::abs(f)) z = next;
      else break;
    }
  }
  return roots;
}

// ---- singular vectors and unitaries -----------------------------------------

Vector smallest_singular_vector(const ComplexMatrix& m) {
  return eig_hermitian(HermitianMatrix::symmetrize(m.adjoint() * m)).eigenvectors.front();
}

ComplexMatrix unitary_with_first_column(std::span<const Complex> v) {
  const std::size_t n = v.size();
  const Vector x = normalized(v);
  const Complex phase = std::abs(x[0]) > 0.0 ? x[0] / std::abs(x[0]) : Complex(1.0);
  Vector u = x;
  u[0] += phase;
  const double uu = std::norm(norm(u));
  ComplexMatrix h = ComplexMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) -= 2.0 * u[i] * std::conj(u[j]) / uu;
  for (std::size_t i = 0; i < n; ++i) h(i, 0) *= -phase;
  return h;
}

// ---- Schur ------------------------------------------------------------------

namespace {

std::vector<Complex> char_poly_roots3(const ComplexMatrix& a) {
  const Complex tr = a.trace();
  const Complex m2 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) -
                     a(0, 2) * a(2, 0) + a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  const Complex det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                      a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                      a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  return cubic_roots(-tr, m2, -det);
}

ComplexMatrix shifted(const ComplexMatrix& a, Complex mu) {
  ComplexMatrix m = a;
  for (std::size_t i = 0; i < m.dim(); ++i) m(i, i) -= mu;
  return m;
}

}  // namespace

SchurForm schur3(const ComplexMatrix& a) {
  if (a.dim() != 3) throw std::invalid_argument("schur3 requires a 3x3 matrix");
  if (a(1, 0) == Complex{} && a(2, 0) == Complex{} && a(2, 1) == Complex{})
    return {ComplexMatrix::identity(3), a};
  const auto roots = char_poly_roots3(a);

  // Deflate with the best separated eigenvalue first.
  std::size_t pick = 0;
  double best = -1.0;
  for (std::size_t k = 0; k < 3; ++k) {
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < 3; ++j)
      if (j != k) sep = std::min(sep, std::abs(roots[k] - roots[j]));
    if (sep > best) {
      best = sep;
      pick = k;
    }
  }
  const Vector v1 = smallest_singular_vector(shifted(a, roots[pick]));
  const ComplexMatrix q1 = unitary_with_first_column(v1);
  const ComplexMatrix a1 = q1.adjoint() * a * q1;

  ComplexMatrix block(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) block(i, j) = a1(i + 1, j + 1);
  const auto [mu1, mu2] = quadratic_roots(-block.trace(),
                                          block(0, 0) * block(1, 1) - block(0, 1) * block(1, 0));
  (void)mu2;
  const Vector w = smallest_singular_vector(shifted(block, mu1));
  const ComplexMatrix q2 = unitary_with_first_column(w);

  ComplexMatrix embed = ComplexMatrix::identity(3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) embed(i + 1, j + 1) = q2(i, j);

  SchurForm out;
  out.unitary = q1 * embed;
  out.triangular = out.unitary.adjoint() * a * out.unitary;
  for (std::size_t i = 1; i < 3; ++i)
    for (std::size_t j = 0; j < i; ++j) out.triangular(i, j) = 0.0;
  return out;
}

std::vector<Complex> eigenvalues_small(const ComplexMatrix& a) {
  switch (a.dim()) {
    case 1:
      return {a(0, 0)};
    case 2: {
      const auto [x, y] = quadratic_roots(-a.trace(), a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
      return {x, y};
    }
    case 3: {
      const auto s = schur3(a);
      return {s.triangular(0, 0), s.triangular(1, 1), s.triangular(2, 2)};
    }
    default:
      throw std::invalid_argument("eigenvalues_small supports dimensions 1 to 3");
  }
}

}  // namespace numrange
