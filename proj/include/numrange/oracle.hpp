#pragma once

// Brute-force ground truth: samples of the numerical range map x -> x^*Ax.

#include <cstdint>
#include <vector>

#include "numrange/matcore.hpp"
#include "numrange/rangegeo.hpp"

namespace numrange {

/// Counter-based splitmix64 stream: draw k of stream s never depends on how
/// the other streams are consumed.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0) noexcept;
  std::uint64_t next() noexcept;
  /// Uniform in (0, 1].
  double uniform() noexcept;
  /// Standard complex Gaussian (real and imaginary parts N(0, 1)).
  Complex complex_normal() noexcept;

private:
  std::uint64_t state_;
};

struct SampleCloud {
  std::vector<Point> points;
  std::uint64_t seed = 0;
  std::size_t count = 0;
};

/// Unit vectors in the structured part of every cloud: e_1..e_d, then
/// (e_i + e^{2 pi i k/8} e_j)/sqrt 2 for i < j and k = 0..7.
std::vector<Vector> structured_vectors(std::size_t d);

/// n values f_A(x): the structured vectors first (truncated to n), then
/// normalized complex Gaussians, sample k drawn from stream k of the seed.
/// Throws std::invalid_argument if n = 0.
SampleCloud sample_range(const ComplexMatrix& a, std::size_t n, std::uint64_t seed);

/// Throws std::invalid_argument on an empty cloud.
ConvexPolygon hull(const SampleCloud& cloud);

/// d_H(hull(sample_range(A, n, seed)), boundary_polygon(A, N)).
/// Throws std::invalid_argument unless n, N >= 64.
double oracle_gap(const ComplexMatrix& a, std::size_t n, int support_samples, std::uint64_t seed = 0);

/// Entries are independent standard complex Gaussians drawn from the seed.
ComplexMatrix seeded_matrix(std::size_t d, std::uint64_t seed);

}  // namespace numrange
