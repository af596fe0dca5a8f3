#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rkhs/kernel.hpp"
#include "rkhs/types.hpp"

namespace rkhs {

/// Weighted samples (x_i, psi_i) with strictly positive weights.
class TrainingSet {
 public:
  TrainingSet(std::vector<Point> points, RealVector weights, Vector targets);

  const std::vector<Point>& points() const { return points_; }
  const RealVector& weights() const { return weights_; }
  const Vector& targets() const { return targets_; }
  Eigen::Index size() const { return targets_.size(); }

 private:
  std::vector<Point> points_;
  RealVector weights_;
  Vector targets_;
};

struct FitResult {
  RkhsElement f;
  Vector residual;            // psi - G c, per sample
  double objective = 0.0;     // weighted squared error + beta |f|^2
  double gradient_norm = 0.0; // |beta c + W (G c - psi)|
};

/// Minimizes sum_i w_i |psi_i - f(x_i)|^2 + beta |f|^2 over the span of
/// K(., x_i).  The coefficients solve the symmetrized normal equations
/// (beta I + W^{1/2} G W^{1/2}) u = W^{1/2} psi, c = W^{1/2} u, which are
/// Hermitian positive definite for beta > 0.
FitResult fit(const Kernel& kernel, const TrainingSet& data, double beta);

/// The same objective evaluated at an arbitrary element (not necessarily
/// supported on the data points).
double objective(const Kernel& kernel, const TrainingSet& data, double beta,
                 const RkhsElement& f);

struct StationarityReport {
  double max_directional_derivative = 0.0;
  double threshold = 0.0;
  bool stationary = false;
};

/// Central-difference stationarity test: for random directions h supported
/// on the data points and normalized to unit RKHS norm, estimates
/// (Q(f + eps h) - Q(f - eps h)) / (2 eps).  The objective is quadratic, so
/// at a minimizer every such derivative vanishes up to roundoff; the
/// acceptance threshold is 10 * eps^2 * (Q(f) + 1).
StationarityReport stationarity_check(const Kernel& kernel,
                                      const TrainingSet& data, double beta,
                                      const RkhsElement& f, int n_directions,
                                      double eps, std::uint64_t seed);

/// Kernel built from an explicit feature map: K(x, y) = <pi(x), pi(y)>
/// (conjugate-linear in x).  Positive semidefinite by construction.
Kernel feature_map_kernel(Domain domain, std::string name,
                          std::function<Vector(const Point&)> pi);

}  // namespace rkhs
