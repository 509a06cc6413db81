#include "numrange/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "golden.hpp"
#include "numrange/parallel.hpp"

namespace numrange {

namespace {

std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

}  // namespace

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream) noexcept
    : state_(mix(seed + kGamma) ^ mix(stream * 0xD1B54A32D192ED03ULL + 1)) {}

std::uint64_t SplitMix64::next() noexcept { return mix(state_ += kGamma); }

double SplitMix64::uniform() noexcept {
  return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

Complex SplitMix64::complex_normal() noexcept {
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  return std::polar(r, detail::kTwoPi * uniform());
}

std::vector<Vector> structured_vectors(std::size_t d) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < d; ++i) {
    Vector e(d);
    e[i] = 1.0;
    out.push_back(std::move(e));
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (int k = 0; k < 8; ++k) {
        Vector x(d);
        x[i] = s;
        x[j] = std::polar(s, detail::kTwoPi * k / 8.0);
        out.push_back(std::move(x));
      }
  return out;
}

SampleCloud sample_range(const ComplexMatrix& a, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_range needs at least one sample");
  const std::size_t d = a.dim();
  SampleCloud cloud;
  cloud.seed = seed;
  cloud.count = n;
  cloud.points.resize(n);
  const auto fixed = structured_vectors(d);
  const std::size_t nf = std::min(n, fixed.size());
  for (std::size_t k = 0; k < nf; ++k) cloud.points[k] = f_eval(a, fixed[k]);

  constexpr std::size_t chunk = 1024;
  const std::size_t rest = n - nf, chunks = (rest + chunk - 1) / chunk;
  parallel_for(chunks, [&](std::size_t c) {
    Vector x(d);
    for (std::size_t k = c * chunk; k < std::min(rest, (c + 1) * chunk); ++k) {
      SplitMix64 rng(seed, k);
      double nn = 0.0;
      for (auto& z : x) {
        z = rng.complex_normal();
        nn += std::norm(z);
      }
      const double inv = 1.0 / std::sqrt(nn);
      for (auto& z : x) z *= inv;
      cloud.points[nf + k] = f_eval(a, x);
    }
  });
  return cloud;
}

ConvexPolygon hull(const SampleCloud& cloud) {
  if (cloud.points.empty()) throw std::invalid_argument("hull of an empty sample cloud");
  return convex_hull(cloud.points);
}

double oracle_gap(const ComplexMatrix& a, std::size_t n, int support_samples, std::uint64_t seed) {
  if (n < 64 || support_samples < 64) throw std::invalid_argument("oracle_gap needs n, N >= 64");
  return hausdorff(hull(sample_range(a, n, seed)), boundary_polygon(a, support_samples));
}

ComplexMatrix seeded_matrix(std::size_t d, std::uint64_t seed) {
  SplitMix64 rng(seed, ~std::uint64_t{0});
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.complex_normal();
  return m;
}

}  // namespace numrange
