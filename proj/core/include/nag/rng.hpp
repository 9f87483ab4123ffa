#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace nag {

/// Deterministic counter-free pseudo-random stream.
///
/// All randomized operations derive their streams from a user seed plus a
/// stream index, so independent trials can run in any order (or in parallel)
/// and still reproduce bit-identical results. The generator is splitmix64,
/// which is small, fast and has no implementation-defined behaviour, unlike
/// the distributions in <random>.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Sub-stream derived from (seed, index); streams are independent for
  /// practical purposes (distinct splitmix64 trajectories).
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    mix.next_u64();
    mix.next_u64();
    return mix;
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal via Box-Muller (deterministic, no cached state).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  /// Standard complex normal: E|z|^2 = 1.
  std::complex<double> complex_normal() {
    const double s = 0.7071067811865475244;
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  /// Uniform point on the unit sphere of R^m (normalized Gaussian vector).
  std::vector<double> sphere_point(int m) {
    std::vector<double> x(m);
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (int i = 0; i < m; ++i) {
        x[i] = normal();
        n2 += x[i] * x[i];
      }
    } while (n2 == 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    for (int i = 0; i < m; ++i) x[i] *= inv;
    return x;
  }

  /// Uniform point on the unit sphere of C^m.
  std::vector<std::complex<double>> complex_sphere_point(int m) {
    std::vector<std::complex<double>> z(m);
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (int i = 0; i < m; ++i) {
        z[i] = complex_normal();
        n2 += std::norm(z[i]);
      }
    } while (n2 == 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    for (int i = 0; i < m; ++i) z[i] *= inv;
    return z;
  }

 private:
  std::uint64_t state_;
};

}  // namespace nag
