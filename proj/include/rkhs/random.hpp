#pragma once

#include <cstdint>
#include <random>

#include "rkhs/types.hpp"

namespace rkhs {

/// Deterministic stream of standard normal variates.
///
/// Uses Box-Muller over mt19937_64 uniforms instead of
/// std::normal_distribution, whose output is implementation-defined; with a
/// fixed seed this stream produces the same doubles on every standard
/// library, which the reproducibility guarantees of the samplers rely on.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

  /// Uniform draw in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// One standard normal N(0, 1) draw.
  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the logarithm finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Circularly symmetric complex normal: E[conj(z) z] = 1, E[z z] = 0.
  Complex next_complex() {
    const double re = next();
    const double im = next();
    return Complex(re * 0.7071067811865475244, im * 0.7071067811865475244);
  }

  /// Vector of independent N(0, 1) draws.
  RealVector real_vector(Eigen::Index n) {
    RealVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = next();
    return v;
  }

  /// Vector of independent circular complex normals.
  Vector complex_vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = next_complex();
    return v;
  }

  /// Independent child seed; splitmix64 step decorrelates nearby indices.
  static std::uint64_t substream(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rkhs
