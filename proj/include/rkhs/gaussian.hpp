#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rkhs/boundary.hpp"
#include "rkhs/kernel.hpp"
#include "rkhs/types.hpp"

namespace rkhs {

/// Gaussian process sampler with covariance equal to the kernel Gram.
///
/// Real Grams produce real Gaussian vectors; genuinely complex Grams produce
/// circularly symmetric complex Gaussians, so in both cases
/// E[conj(V_x) V_y] = K(x, y).  The Cholesky factorization walks a jitter
/// ladder 0, 1e-14, 1e-12, 1e-10, 1e-8 (relative to trace/N) before failing
/// with the smallest eigenvalue attached.
class GaussianSampler {
 public:
  GaussianSampler(const Kernel& kernel, std::vector<Point> points);

  /// n sample rows; identical seeds give bit-identical matrices.
  Matrix sample(int n, std::uint64_t seed) const;

  const Matrix& gram() const { return gram_; }
  double jitter() const { return jitter_; }
  bool real() const { return real_; }
  const std::vector<Point>& points() const { return points_; }

 private:
  std::vector<Point> points_;
  Matrix gram_;
  Matrix factor_;   // lower-triangular, gram + jitter*I = factor factor^*
  double jitter_ = 0.0;
  bool real_ = false;
};

Matrix sample_gp(const Kernel& kernel, const std::vector<Point>& points, int n,
                 std::uint64_t seed);

/// Karhunen-Loeve sampling from a value frame (columns phi_n on the points):
/// each row is sum_n phi_n Z_n with i.i.d. standard normal Z_n (real frame)
/// or circular complex Z_n (complex frame).  The empirical covariance
/// (1/n) sum V_x conj(V_y) converges to sum_n phi_n(x) conj(phi_n(y)).
Matrix kl_sample(const Matrix& frame_values, int n, std::uint64_t seed);

/// (1/n) sum_s conj(V_i^s) V_j^s over the sample rows; estimates
/// E[conj(V_i) V_j].
Matrix empirical_covariance(const Matrix& samples);

/// Entrywise 5-sigma acceptance band for the covariance estimate:
/// 5 * sqrt((K_ii K_jj + |K_ij|^2) / n).
RealMatrix covariance_bound(const Matrix& gram, int n, double sigmas = 5.0);

/// Increments of a generalized Wiener process attached to a discrete
/// measure: independent sqrt(w_j) Z_j per node, Z_j standard normal.
struct WienerDiscretization {
  MeasurePtr measure;
  RealVector z;           // the raw standard normals
  RealVector increments;  // sqrt(w_j) z_j
};

WienerDiscretization wiener_increments(MeasurePtr measure, std::uint64_t seed);

/// Ito integral of node values against the increments:
/// sum_j k(b_j) dW_j.
Complex ito_integral(const Vector& k_values, const WienerDiscretization& w);

/// Empirical check of the factorization K_mu(x, y) = E[conj(V_x) V_y] for
/// the process V_x = Ito integral of the features of x.
struct DisintegrationReport {
  Matrix empirical;
  Matrix expected;    // induced-kernel Gram on the points
  double max_error = 0.0;
  double max_bound = 0.0;  // largest entrywise 5-sigma band
  bool within_bound = false;
};

DisintegrationReport disintegration_check(const FeatureSystem& fs,
                                          const std::vector<Point>& points,
                                          int n_samples, std::uint64_t seed);

/// Set kernel K(A1, A2) = mu(A1 intersect A2) on index sets over the
/// measure's nodes.
Kernel set_kernel(MeasurePtr measure);

/// Element of the set-kernel space, represented by its density against mu:
/// F(A) = sum_{j in A} w_j d_j.
struct SetRkhsElement {
  MeasurePtr measure;
  Vector density;
};

SetRkhsElement indicator_element(MeasurePtr measure, const IndexSet& a);
Complex set_value(const SetRkhsElement& f, const IndexSet& a);
/// <F, G> = sum_j conj(d_F(j)) (w_j d_G(j)); with F an indicator element the
/// sum reproduces G(A) bit-for-bit.
Complex set_inner(const SetRkhsElement& f, const SetRkhsElement& g);
double set_norm(const SetRkhsElement& f);

}  // namespace rkhs
