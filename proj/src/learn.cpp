#include "rkhs/learn.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rkhs/random.hpp"

namespace rkhs {

TrainingSet::TrainingSet(std::vector<Point> points, RealVector weights,
                         Vector targets)
    : points_(std::move(points)),
      weights_(std::move(weights)),
      targets_(std::move(targets)) {
  const auto n = static_cast<Eigen::Index>(points_.size());
  if (n == 0) {
    throw InputError("training set must contain at least one sample");
  }
  if (weights_.size() != n || targets_.size() != n) {
    throw InputError("points, weights and targets must have equal lengths");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw InputError("sample weights must be positive and finite (sample " +
                       std::to_string(i) + " has weight " +
                       std::to_string(weights_[i]) + ")");
    }
    if (!std::isfinite(targets_[i].real()) ||
        !std::isfinite(targets_[i].imag())) {
      throw InputError("sample targets must be finite (sample " +
                       std::to_string(i) + " is not)");
    }
  }
}

FitResult fit(const Kernel& kernel, const TrainingSet& data, double beta) {
  if (!(beta > 0.0)) {
    throw InputError("regularization strength must be positive");
  }
  const Eigen::Index n = data.size();
  const GramMatrix gm(kernel, data.points());
  const Matrix& g = gm.matrix();

  const RealVector wsqrt = data.weights().cwiseSqrt();
  const Vector wsqrt_c = wsqrt.cast<Complex>();

  Matrix a = wsqrt_c.asDiagonal() * g * wsqrt_c.asDiagonal();
  a += beta * Matrix::Identity(n, n);
  a = 0.5 * (a + Matrix(a.adjoint()));

  Eigen::LDLT<Matrix> ldlt(a);
  if (ldlt.info() != Eigen::Success) {
    throw CertificateError("normal equations could not be factorized", beta);
  }
  const Vector u = ldlt.solve(data.targets().cwiseProduct(wsqrt_c));
  const Vector c = u.cwiseProduct(wsqrt_c);

  FitResult result{RkhsElement(kernel, data.points(), c), Vector(), 0.0, 0.0};
  const Vector gc = g * c;
  result.residual = data.targets() - gc;
  result.objective =
      (data.weights().array() * result.residual.cwiseAbs2().array()).sum() +
      beta * std::max(0.0, c.dot(gc).real());
  const Vector w_c = data.weights().cast<Complex>();
  result.gradient_norm =
      (beta * c + w_c.cwiseProduct(gc - data.targets())).norm();
  return result;
}

double objective(const Kernel& kernel, const TrainingSet& data, double beta,
                 const RkhsElement& f) {
  if (!(beta > 0.0)) {
    throw InputError("regularization strength must be positive");
  }
  if (!f.kernel().same_as(kernel)) {
    throw InputError("element does not belong to the requested kernel");
  }
  double err = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    err += data.weights()[i] *
           std::norm(data.targets()[i] -
                     f.evaluate(data.points()[static_cast<std::size_t>(i)]));
  }
  const double norm_sq = std::max(0.0, rkhs_inner(f, f).real());
  return err + beta * norm_sq;
}

StationarityReport stationarity_check(const Kernel& kernel,
                                      const TrainingSet& data, double beta,
                                      const RkhsElement& f, int n_directions,
                                      double eps, std::uint64_t seed) {
  if (n_directions < 1) {
    throw InputError("need at least one probe direction");
  }
  if (!(eps > 0.0)) {
    throw InputError("step size must be positive");
  }
  const Eigen::Index n = data.size();
  const GramMatrix gm(kernel, data.points());
  const Matrix& g = gm.matrix();

  const double base = objective(kernel, data, beta, f);
  StationarityReport report;
  report.threshold = 10.0 * eps * eps * (base + 1.0);

  // Perturbed elements concatenate the base support with the data points;
  // duplicated points are harmless for evaluation and inner products.
  std::vector<Point> joint = f.points();
  joint.insert(joint.end(), data.points().begin(), data.points().end());
  const Eigen::Index nf = f.coefficients().size();

  NormalStream stream(seed);
  int done = 0;
  while (done < n_directions) {
    const Vector d = stream.complex_vector(static_cast<int>(n));
    const double gn_sq = d.dot(g * d).real();
    if (!(gn_sq > 1e-30)) continue;  // direction with no RKHS mass; redraw
    const Vector h = d / std::sqrt(gn_sq);

    Vector cp(nf + n);
    cp.head(nf) = f.coefficients();
    cp.tail(n) = eps * h;
    Vector cm(nf + n);
    cm.head(nf) = f.coefficients();
    cm.tail(n) = -eps * h;

    const double qp =
        objective(kernel, data, beta, RkhsElement(kernel, joint, cp));
    const double qm =
        objective(kernel, data, beta, RkhsElement(kernel, joint, cm));
    const double deriv = (qp - qm) / (2.0 * eps);
    report.max_directional_derivative =
        std::max(report.max_directional_derivative, std::abs(deriv));
    ++done;
  }
  report.stationary = report.max_directional_derivative <= report.threshold;
  return report;
}

Kernel feature_map_kernel(Domain domain, std::string name,
                          std::function<Vector(const Point&)> pi) {
  if (!pi) {
    throw InputError("feature map must be callable");
  }
  return Kernel(domain, std::move(name),
                [pi = std::move(pi)](const Point& x, const Point& y) {
                  const Vector fx = pi(x);
                  const Vector fy = pi(y);
                  if (fx.size() != fy.size()) {
                    throw InputError(
                        "feature map returned inconsistent lengths");
                  }
                  return fx.dot(fy);
                });
}

}  // namespace rkhs
