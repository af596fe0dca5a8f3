#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rkhs/boundary.hpp"
#include "rkhs/kernel.hpp"
#include "rkhs/types.hpp"

namespace rkhs::da {

/// Point of the open unit ball of C^k.  Construction rejects |z| >= 1.
class BallPoint {
 public:
  explicit BallPoint(Vector z);

  const Vector& z() const { return z_; }
  double norm_squared() const { return norm2_; }
  int dim() const { return static_cast<int>(z_.size()); }

 private:
  Vector z_;
  double norm2_;
};

/// Convenience for one complex coordinate.
BallPoint ball_point(Complex z);

/// K(z, w) = 1 / (1 - <z, w>), with <z, w> = sum_j conj(z_j) w_j.
Complex da_kernel(const BallPoint& z, const BallPoint& w);

/// Kernel object over complex-vector points of fixed dimension k.
Kernel da_kernel_fn(int k);

enum class SphereMode {
  monte_carlo,  // normalized complex Gaussian directions
  circle_grid,  // equispaced roots of unity; k = 1 only
};

/// Finite quadrature of the uniform probability measure on the unit sphere
/// of C^k: M unit nodes with weight 1/M each.
class SphereMeasure {
 public:
  SphereMeasure(int k, int m, SphereMode mode, std::uint64_t seed);

  int dim() const { return k_; }
  int size() const { return m_; }
  SphereMode mode() const { return mode_; }
  const std::vector<Vector>& nodes() const { return nodes_; }
  double weight() const { return weight_; }
  MeasurePtr measure() const { return measure_; }

 private:
  int k_;
  int m_;
  SphereMode mode_;
  std::vector<Vector> nodes_;
  double weight_;
  MeasurePtr measure_;
};

SphereMeasure sphere_sample(int k, int m, SphereMode mode,
                            std::uint64_t seed = 0);

/// Boundary feature values of z at the sphere nodes:
/// f_z(b) = 1 / (1 - <b, z>), the slot choice for which the weighted
/// pairing sum_j w_j conj(f_z(b_j)) f_w(b_j) recovers 1 / (1 - <z, w>) on
/// the circle (k = 1) exactly in the quadrature limit.
Vector boundary_features(const BallPoint& z, const SphereMeasure& sphere);

/// The same features packaged as a FeatureSystem over complex-vector points.
FeatureSystem da_features(const SphereMeasure& sphere);

/// Induced kernel value sum_j w_j conj(f_z(b_j)) f_w(b_j).
Complex da_induced(const BallPoint& z, const BallPoint& w,
                   const SphereMeasure& sphere);

/// Exact value of the induced kernel for k <= 2:
/// k = 1: 1 / (1 - u); k = 2: -log(1 - u) / u (u = <z, w>), continued by 1
/// at u = 0.  Other k throw InputError.
Complex da_induced_closed_form(int k, const BallPoint& z, const BallPoint& w);

/// Random points of the ball with |z| <= max_norm.
std::vector<BallPoint> random_ball_points(int k, int n, std::uint64_t seed,
                                          double max_norm = 0.9);

struct DaOrderReport {
  double margin = 0.0;  // min eigenvalue of Gram(K) - Gram(K_mu)
  double slack = 0.0;   // statistical allowance folded in (k >= 3 only)
  bool dominated = false;
};

/// Domination certificate K_mu << K on random ball points.  For k <= 2 the
/// induced Gram uses the closed form and the test is margin >= -tol; for
/// k >= 3 it is Monte-Carlo quadrature with `m` nodes and the margin is
/// allowed a 5-sigma slack estimated from the quadrature variance.
DaOrderReport da_order_certificate(int k, int n_points, int m,
                                   std::uint64_t seed, double tol);

/// Entire function on the ball stored degree by degree as monomial
/// coefficients: F(z) = sum_n sum_{|alpha| = n} c_alpha z^alpha, each degree
/// aligned with multi_indices(k, n).  The space norm is
/// |F|^2 = sum |c_alpha|^2 alpha! / |alpha|!.
class FockCoefficients {
 public:
  FockCoefficients(int k, std::vector<Vector> per_degree);

  /// One-variable convenience: coefficients of z^0, z^1, ...
  static FockCoefficients one_dim(Vector coefficients);

  int dim() const { return k_; }
  int max_degree() const { return static_cast<int>(per_degree_.size()) - 1; }
  const Vector& degree(int n) const;

  double norm() const;
  Complex evaluate_degree(int n, const Vector& z) const;
  Complex evaluate(const Vector& z) const;

 private:
  int k_;
  std::vector<Vector> per_degree_;
};

/// All multi-indices alpha over k variables with |alpha| = degree, in the
/// deterministic order produced by descending first coordinate recursion.
std::vector<std::vector<int>> multi_indices(int k, int degree);

/// (|F|, |F_r|) where F_r(z) = F(r z), via the exact one-variable identity
/// |F_r|^2 = sum_n r^{2n} |xi_n|^2.  Only k = 1 supports this exact path.
std::pair<double, double> dilation_norms(const FockCoefficients& f, double r);

/// Quadrature route for any k: |F_r|^2 ~ sum_n r^{2n} * sum_j w_j
/// |F_n(b_j)|^2, carrying the sphere quadrature's statistical error.
std::pair<double, double> dilation_norms_quadrature(const FockCoefficients& f,
                                                    double r,
                                                    const SphereMeasure& s);

/// Moment matrix [<b^alpha, b^beta>_{L2(mu_M)}] over all multi-indices of
/// degree <= max_degree, enumerated degree by degree via multi_indices.
Matrix moment_matrix(const SphereMeasure& sphere, int max_degree);

/// Smallest singular value of moment_matrix(sphere, max_degree).  Positive
/// values certify that boundary moments of distinct monomials stay
/// independent under the quadrature.
double moment_injectivity(const SphereMeasure& sphere, int max_degree);

}  // namespace rkhs::da
