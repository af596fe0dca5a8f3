#include "rkhs/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "rkhs/random.hpp"

namespace rkhs {

GaussianSampler::GaussianSampler(const Kernel& kernel,
                                 std::vector<Point> points)
    : points_(std::move(points)) {
  gram_ = GramMatrix(kernel, points_).matrix();
  const auto n = gram_.rows();
  real_ = (gram_.imag().cwiseAbs().maxCoeff() == 0.0);

  if (gram_.cwiseAbs().maxCoeff() == 0.0) {
    factor_ = Matrix::Zero(n, n);
    return;
  }

  const double unit = gram_.trace().real() / static_cast<double>(n);
  const double ladder[] = {0.0, 1e-14, 1e-12, 1e-10, 1e-8};
  for (double step : ladder) {
    const double jitter = step * unit;
    if (real_) {
      RealMatrix shifted =
          gram_.real() + jitter * RealMatrix::Identity(n, n);
      Eigen::LLT<RealMatrix> llt(shifted);
      if (llt.info() == Eigen::Success) {
        factor_ = llt.matrixL().toDenseMatrix().cast<Complex>();
        jitter_ = jitter;
        return;
      }
    } else {
      Matrix shifted = gram_ + jitter * Matrix::Identity(n, n);
      Eigen::LLT<Matrix> llt(shifted);
      if (llt.info() == Eigen::Success) {
        factor_ = llt.matrixL().toDenseMatrix();
        jitter_ = jitter;
        return;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram_, Eigen::EigenvaluesOnly);
  const double lo =
      es.info() == Eigen::Success ? es.eigenvalues().minCoeff() : 0.0;
  throw CertificateError(
      "gaussian sampler: covariance is not positive definite even with "
      "jitter 1e-8 (smallest eigenvalue " +
          std::to_string(lo) + ")",
      lo);
}

Matrix GaussianSampler::sample(int n, std::uint64_t seed) const {
  if (n <= 0) throw InputError("sample: n must be positive");
  const auto dim = gram_.rows();
  Matrix out(n, dim);
  NormalStream rng(seed);
  if (real_) {
    const RealMatrix l = factor_.real();
    for (int s = 0; s < n; ++s) {
      const RealVector z = rng.real_vector(dim);
      out.row(s) = (l * z).cast<Complex>().transpose();
    }
  } else {
    // V = conj(L) zeta gives E[conj(V_i) V_j] = (L L^*)(i, j) = K(x_i, x_j)
    // for circular zeta.
    const Matrix lbar = factor_.conjugate();
    for (int s = 0; s < n; ++s) {
      const Vector zeta = rng.complex_vector(dim);
      out.row(s) = (lbar * zeta).transpose();
    }
  }
  return out;
}

Matrix sample_gp(const Kernel& kernel, const std::vector<Point>& points, int n,
                 std::uint64_t seed) {
  return GaussianSampler(kernel, points).sample(n, seed);
}

Matrix kl_sample(const Matrix& frame_values, int n, std::uint64_t seed) {
  if (n <= 0) throw InputError("kl_sample: n must be positive");
  if (frame_values.size() == 0)
    throw InputError("kl_sample: empty frame");
  const auto dim = frame_values.rows();
  const auto terms = frame_values.cols();
  const bool real_frame = (frame_values.imag().cwiseAbs().maxCoeff() == 0.0);
  Matrix out(n, dim);
  NormalStream rng(seed);
  if (real_frame) {
    const RealMatrix f = frame_values.real();
    for (int s = 0; s < n; ++s)
      out.row(s) = (f * rng.real_vector(terms)).cast<Complex>().transpose();
  } else {
    for (int s = 0; s < n; ++s)
      out.row(s) = (frame_values * rng.complex_vector(terms)).transpose();
  }
  return out;
}

Matrix empirical_covariance(const Matrix& samples) {
  if (samples.rows() == 0) throw InputError("empirical_covariance: no samples");
  return (samples.adjoint() * samples) / static_cast<double>(samples.rows());
}

RealMatrix covariance_bound(const Matrix& gram, int n, double sigmas) {
  if (n <= 0) throw InputError("covariance_bound: n must be positive");
  const auto dim = gram.rows();
  RealMatrix b(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      b(i, j) = sigmas * std::sqrt((gram(i, i).real() * gram(j, j).real() +
                                    std::norm(gram(i, j))) /
                                   static_cast<double>(n));
  return b;
}

WienerDiscretization wiener_increments(MeasurePtr measure, std::uint64_t seed) {
  if (!measure) throw InputError("wiener_increments: null measure");
  NormalStream rng(seed);
  const auto m = static_cast<Eigen::Index>(measure->size());
  RealVector z = rng.real_vector(m);
  RealVector inc = measure->weights().cwiseSqrt().cwiseProduct(z);
  return WienerDiscretization{std::move(measure), std::move(z),
                              std::move(inc)};
}

Complex ito_integral(const Vector& k_values, const WienerDiscretization& w) {
  if (k_values.size() != w.increments.size())
    throw InputError("ito_integral: value count does not match node count");
  Complex acc(0.0, 0.0);
  for (Eigen::Index j = 0; j < k_values.size(); ++j)
    acc += k_values[j] * w.increments[j];
  return acc;
}

DisintegrationReport disintegration_check(const FeatureSystem& fs,
                                          const std::vector<Point>& points,
                                          int n_samples, std::uint64_t seed) {
  if (points.empty()) throw InputError("disintegration_check: no points");
  if (n_samples <= 0)
    throw InputError("disintegration_check: n_samples must be positive");
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto m = static_cast<Eigen::Index>(fs.measure().size());

  Matrix feats(n, m);  // row i holds the features of x_i
  for (Eigen::Index i = 0; i < n; ++i)
    feats.row(i) = fs.features(points[static_cast<std::size_t>(i)]).transpose();
  const RealVector wsqrt = fs.measure().weights().cwiseSqrt();

  NormalStream rng(seed);
  Matrix samples(n_samples, n);
  for (int s = 0; s < n_samples; ++s) {
    const RealVector z = rng.real_vector(m);
    const Vector inc = wsqrt.cwiseProduct(z).cast<Complex>();
    samples.row(s) = (feats * inc).transpose();
  }

  DisintegrationReport report;
  report.empirical = empirical_covariance(samples);
  report.expected = gram(induced_kernel(fs), points).matrix();
  report.max_error =
      (report.empirical - report.expected).cwiseAbs().maxCoeff();
  const RealMatrix bound = covariance_bound(report.expected, n_samples);
  report.max_bound = bound.maxCoeff();
  report.within_bound =
      ((report.empirical - report.expected).cwiseAbs().array() <=
       bound.array())
          .all();
  return report;
}

Kernel set_kernel(MeasurePtr measure) {
  if (!measure) throw InputError("set_kernel: null measure");
  const std::size_t m = measure->size();
  return Kernel(Domain::index_set,
                "set(mu,|nodes|=" + std::to_string(m) + ")",
                [measure, m](const Point& x, const Point& y) {
                  const IndexSet& a = x.as_index_set();
                  const IndexSet& b = y.as_index_set();
                  if ((!a.empty() && a.back() >= m) ||
                      (!b.empty() && b.back() >= m))
                    throw InputError("set kernel: node index out of range");
                  // Sorted-merge intersection mass.
                  double acc = 0.0;
                  std::size_t i = 0, j = 0;
                  while (i < a.size() && j < b.size()) {
                    if (a[i] < b[j]) {
                      ++i;
                    } else if (b[j] < a[i]) {
                      ++j;
                    } else {
                      acc += measure->weights()[
                          static_cast<Eigen::Index>(a[i])];
                      ++i;
                      ++j;
                    }
                  }
                  return Complex(acc, 0.0);
                });
}

namespace {

void check_set_element(const SetRkhsElement& f, const char* who) {
  if (!f.measure) throw InputError(std::string(who) + ": null measure");
  if (f.density.size() != static_cast<Eigen::Index>(f.measure->size()))
    throw InputError(std::string(who) +
                     ": density length does not match node count");
}

}  // namespace

SetRkhsElement indicator_element(MeasurePtr measure, const IndexSet& a) {
  if (!measure) throw InputError("indicator_element: null measure");
  Vector d = Vector::Zero(static_cast<Eigen::Index>(measure->size()));
  for (std::size_t j : a) {
    if (j >= measure->size())
      throw InputError("indicator_element: node index out of range");
    d[static_cast<Eigen::Index>(j)] = Complex(1.0, 0.0);
  }
  return SetRkhsElement{std::move(measure), std::move(d)};
}

Complex set_value(const SetRkhsElement& f, const IndexSet& a) {
  check_set_element(f, "set_value");
  Complex acc(0.0, 0.0);
  for (std::size_t j : a) {
    if (j >= f.measure->size())
      throw InputError("set_value: node index out of range");
    const auto jj = static_cast<Eigen::Index>(j);
    acc += f.measure->weights()[jj] * f.density[jj];
  }
  return acc;
}

Complex set_inner(const SetRkhsElement& f, const SetRkhsElement& g) {
  check_set_element(f, "set_inner");
  check_set_element(g, "set_inner");
  if (f.measure != g.measure)
    throw InputError("set_inner: elements live over different measures");
  Complex acc(0.0, 0.0);
  // Grouping w_j with the second density first makes the indicator case
  // reproduce set_value term by term.
  for (Eigen::Index j = 0; j < f.density.size(); ++j)
    acc += std::conj(f.density[j]) * (f.measure->weights()[j] * g.density[j]);
  return acc;
}

double set_norm(const SetRkhsElement& f) {
  check_set_element(f, "set_norm");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < f.density.size(); ++j)
    acc += f.measure->weights()[j] * std::norm(f.density[j]);
  return std::sqrt(acc);
}

}  // namespace rkhs
