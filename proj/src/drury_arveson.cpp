#include "rkhs/drury_arveson.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>
#include <utility>

#include "rkhs/random.hpp"

namespace rkhs::da {

namespace {

Complex pairing(const Vector& a, const Vector& b) {
  // <a, b> = sum_j conj(a_j) b_j; Eigen's dot conjugates the first factor.
  return a.dot(b);
}

Complex reciprocal_of_one_minus(Complex u) {
  const Complex d = 1.0 - u;
  if (std::abs(d) < 1e-14) {
    throw InputError("kernel evaluation too close to the singular set "
                     "<z, w> = 1");
  }
  return 1.0 / d;
}

}  // namespace

BallPoint::BallPoint(Vector z) : z_(std::move(z)) {
  if (z_.size() == 0) {
    throw InputError("ball point must have at least one coordinate");
  }
  norm2_ = z_.squaredNorm();
  if (!(norm2_ < 1.0)) {
    throw InputError("point lies outside the open unit ball (|z|^2 = " +
                     std::to_string(norm2_) + ")");
  }
}

BallPoint ball_point(Complex z) {
  Vector v(1);
  v[0] = z;
  return BallPoint(std::move(v));
}

Complex da_kernel(const BallPoint& z, const BallPoint& w) {
  if (z.dim() != w.dim()) {
    throw InputError("kernel arguments have mismatched dimensions");
  }
  return reciprocal_of_one_minus(pairing(z.z(), w.z()));
}

Kernel da_kernel_fn(int k) {
  if (k < 1) {
    throw InputError("dimension must be at least 1");
  }
  return Kernel(Domain::complex_vector,
                "drury-arveson(" + std::to_string(k) + ")",
                [k](const Point& x, const Point& y) {
                  const Vector& zx = x.as_complex_vector();
                  const Vector& zy = y.as_complex_vector();
                  if (zx.size() != k || zy.size() != k) {
                    throw InputError("point dimension does not match kernel "
                                     "dimension " + std::to_string(k));
                  }
                  return da_kernel(BallPoint(zx), BallPoint(zy));
                });
}

SphereMeasure::SphereMeasure(int k, int m, SphereMode mode, std::uint64_t seed)
    : k_(k), m_(m), mode_(mode) {
  if (k < 1) {
    throw InputError("sphere dimension must be at least 1");
  }
  if (m < 1) {
    throw InputError("number of sphere nodes must be at least 1");
  }
  nodes_.reserve(static_cast<std::size_t>(m));
  if (mode == SphereMode::circle_grid) {
    if (k != 1) {
      throw InputError("circle-grid nodes exist only in dimension 1");
    }
    for (int j = 0; j < m; ++j) {
      Vector b(1);
      b[0] = std::polar(1.0, 2.0 * std::numbers::pi * j / m);
      nodes_.push_back(std::move(b));
    }
  } else {
    NormalStream stream(seed);
    while (static_cast<int>(nodes_.size()) < m) {
      Vector g = stream.complex_vector(k);
      const double n = g.norm();
      if (n == 0.0) continue;
      nodes_.push_back(g / n);
    }
  }
  weight_ = 1.0 / m;

  std::vector<Point> pts;
  pts.reserve(nodes_.size());
  for (const Vector& b : nodes_) pts.emplace_back(b);
  measure_ = std::make_shared<const DiscreteMeasure>(
      std::move(pts), RealVector::Constant(m, weight_));
}

SphereMeasure sphere_sample(int k, int m, SphereMode mode,
                            std::uint64_t seed) {
  return SphereMeasure(k, m, mode, seed);
}

Vector boundary_features(const BallPoint& z, const SphereMeasure& sphere) {
  if (z.dim() != sphere.dim()) {
    throw InputError("point dimension does not match sphere dimension");
  }
  const auto& nodes = sphere.nodes();
  Vector out(static_cast<Eigen::Index>(nodes.size()));
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    out[j] = reciprocal_of_one_minus(pairing(nodes[j], z.z()));
  }
  return out;
}

FeatureSystem da_features(const SphereMeasure& sphere) {
  auto nodes = std::make_shared<const std::vector<Vector>>(sphere.nodes());
  const int k = sphere.dim();
  return FeatureSystem(
      sphere.measure(), Domain::complex_vector,
      "drury-arveson boundary (k=" + std::to_string(k) + ")",
      [nodes, k](const Point& x) {
        const Vector& z = x.as_complex_vector();
        if (z.size() != k) {
          throw InputError("point dimension does not match sphere dimension "
                           + std::to_string(k));
        }
        BallPoint p(z);
        Vector out(static_cast<Eigen::Index>(nodes->size()));
        for (Eigen::Index j = 0; j < out.size(); ++j) {
          out[j] = reciprocal_of_one_minus(pairing((*nodes)[j], p.z()));
        }
        return out;
      });
}

Complex da_induced(const BallPoint& z, const BallPoint& w,
                   const SphereMeasure& sphere) {
  const Vector fz = boundary_features(z, sphere);
  const Vector fw = boundary_features(w, sphere);
  return sphere.weight() * fz.dot(fw);
}

Complex da_induced_closed_form(int k, const BallPoint& z, const BallPoint& w) {
  if (z.dim() != k || w.dim() != k) {
    throw InputError("point dimension does not match requested dimension");
  }
  const Complex u = pairing(z.z(), w.z());
  if (k == 1) {
    return reciprocal_of_one_minus(u);
  }
  if (k == 2) {
    // -log(1 - u) / u = sum_{n >= 0} u^n / (n + 1); the series avoids the
    // 0/0 cancellation of the closed form near u = 0.
    if (std::abs(u) < 1e-4) {
      Complex acc = 0.0;
      Complex pw = 1.0;
      for (int n = 0; n < 10; ++n) {
        acc += pw / static_cast<double>(n + 1);
        pw *= u;
      }
      return acc;
    }
    return -std::log(1.0 - u) / u;
  }
  throw InputError("closed-form induced kernel is available for dimensions "
                   "1 and 2 only");
}

std::vector<BallPoint> random_ball_points(int k, int n, std::uint64_t seed,
                                          double max_norm) {
  if (k < 1) {
    throw InputError("dimension must be at least 1");
  }
  if (n < 0) {
    throw InputError("number of points must be nonnegative");
  }
  if (!(max_norm > 0.0) || !(max_norm < 1.0)) {
    throw InputError("max_norm must lie strictly between 0 and 1");
  }
  NormalStream stream(seed);
  std::vector<BallPoint> out;
  out.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(out.size()) < n) {
    Vector g = stream.complex_vector(k);
    const double gn = g.norm();
    if (gn == 0.0) continue;
    // Radius law r = R u^{1/(2k)} makes the points uniform in the ball of
    // radius R (the ball of C^k has real dimension 2k).
    const double r = max_norm * std::pow(stream.uniform(), 1.0 / (2.0 * k));
    out.emplace_back(Vector(g * (r / gn)));
  }
  return out;
}

namespace {

Matrix hermitian_part(const Matrix& m) {
  return 0.5 * (m + m.adjoint());
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m),
                                           Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw CertificateError("eigenvalue computation failed", 0.0);
  }
  return es.eigenvalues().minCoeff();
}

}  // namespace

DaOrderReport da_order_certificate(int k, int n_points, int m,
                                   std::uint64_t seed, double tol) {
  if (n_points < 1) {
    throw InputError("need at least one sample point");
  }
  if (tol < 0.0) {
    throw InputError("tolerance must be nonnegative");
  }
  const auto points =
      random_ball_points(k, n_points, NormalStream::substream(seed, 0));
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());

  Matrix gk(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gk(i, i) = Complex(da_kernel(points[i], points[i]).real(), 0.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      gk(i, j) = da_kernel(points[i], points[j]);
      gk(j, i) = std::conj(gk(i, j));
    }
  }

  DaOrderReport report;
  const double scale = std::max(1.0, gk.trace().real() / n);

  if (k <= 2) {
    Matrix gmu(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      gmu(i, i) = Complex(
          da_induced_closed_form(k, points[i], points[i]).real(), 0.0);
      for (Eigen::Index j = i + 1; j < n; ++j) {
        gmu(i, j) = da_induced_closed_form(k, points[i], points[j]);
        gmu(j, i) = std::conj(gmu(i, j));
      }
    }
    report.margin = min_eigenvalue(gk - gmu);
    report.slack = 0.0;
  } else {
    if (m < 2) {
      throw InputError("Monte-Carlo quadrature needs at least two nodes");
    }
    const SphereMeasure sphere = sphere_sample(
        k, m, SphereMode::monte_carlo, NormalStream::substream(seed, 1));
    Matrix phi(static_cast<Eigen::Index>(m), n);
    for (Eigen::Index i = 0; i < n; ++i) {
      phi.col(i) = boundary_features(points[i], sphere);
    }
    const double w = sphere.weight();
    Matrix gmu = w * (phi.adjoint() * phi);
    gmu = hermitian_part(gmu);

    // Entrywise standard error of the quadrature mean, then a 5-sigma
    // Frobenius allowance on the eigenvalue perturbation.
    double se_frob_sq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        double second = 0.0;
        for (Eigen::Index l = 0; l < phi.rows(); ++l) {
          second += std::norm(std::conj(phi(l, i)) * phi(l, j));
        }
        second /= phi.rows();
        const double var = std::max(0.0, second - std::norm(gmu(i, j)));
        se_frob_sq += var / phi.rows();
      }
    }
    report.slack = 5.0 * std::sqrt(se_frob_sq);
    report.margin = min_eigenvalue(gk - gmu);
  }
  report.dominated = report.margin >= -(tol * scale + report.slack);
  return report;
}

std::vector<std::vector<int>> multi_indices(int k, int degree) {
  if (k < 1) {
    throw InputError("dimension must be at least 1");
  }
  if (degree < 0) {
    throw InputError("degree must be nonnegative");
  }
  if (k == 1) {
    return {{degree}};
  }
  std::vector<std::vector<int>> out;
  for (int a = degree; a >= 0; --a) {
    for (auto& tail : multi_indices(k - 1, degree - a)) {
      std::vector<int> idx;
      idx.reserve(static_cast<std::size_t>(k));
      idx.push_back(a);
      idx.insert(idx.end(), tail.begin(), tail.end());
      out.push_back(std::move(idx));
    }
  }
  return out;
}

namespace {

// Exact multinomial coefficient n! / (alpha_1! ... alpha_k!) as a double;
// computed as a product of binomial coefficients so every intermediate is
// an integer.
double multinomial(const std::vector<int>& alpha) {
  double result = 1.0;
  int total = 0;
  for (int a : alpha) {
    total += a;
    // binom(total, a) via the usual stable product.
    double b = 1.0;
    for (int i = 1; i <= a; ++i) {
      b = b * (total - a + i) / i;
    }
    result *= std::round(b);
  }
  return result;
}

Complex monomial(const Vector& z, const std::vector<int>& alpha) {
  Complex acc = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (int p = 0; p < alpha[i]; ++p) acc *= z[static_cast<Eigen::Index>(i)];
  }
  return acc;
}

}  // namespace

FockCoefficients::FockCoefficients(int k, std::vector<Vector> per_degree)
    : k_(k), per_degree_(std::move(per_degree)) {
  if (k < 1) {
    throw InputError("dimension must be at least 1");
  }
  if (per_degree_.empty()) {
    throw InputError("coefficient list must cover at least degree 0");
  }
  for (std::size_t n = 0; n < per_degree_.size(); ++n) {
    const auto expected = multi_indices(k, static_cast<int>(n)).size();
    if (static_cast<std::size_t>(per_degree_[n].size()) != expected) {
      throw InputError("degree " + std::to_string(n) + " expects " +
                       std::to_string(expected) + " coefficients, got " +
                       std::to_string(per_degree_[n].size()));
    }
  }
}

FockCoefficients FockCoefficients::one_dim(Vector coefficients) {
  if (coefficients.size() == 0) {
    throw InputError("coefficient list must cover at least degree 0");
  }
  std::vector<Vector> per_degree;
  per_degree.reserve(static_cast<std::size_t>(coefficients.size()));
  for (Eigen::Index n = 0; n < coefficients.size(); ++n) {
    Vector c(1);
    c[0] = coefficients[n];
    per_degree.push_back(std::move(c));
  }
  return FockCoefficients(1, std::move(per_degree));
}

const Vector& FockCoefficients::degree(int n) const {
  if (n < 0 || n > max_degree()) {
    throw InputError("degree out of range");
  }
  return per_degree_[static_cast<std::size_t>(n)];
}

double FockCoefficients::norm() const {
  double acc = 0.0;
  for (std::size_t n = 0; n < per_degree_.size(); ++n) {
    const auto alphas = multi_indices(k_, static_cast<int>(n));
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      // |c_alpha|^2 * alpha! / n!  =  |c_alpha|^2 / multinomial(n; alpha).
      acc += std::norm(per_degree_[n][static_cast<Eigen::Index>(a)]) /
             multinomial(alphas[a]);
    }
  }
  return std::sqrt(acc);
}

Complex FockCoefficients::evaluate_degree(int n, const Vector& z) const {
  if (z.size() != k_) {
    throw InputError("point dimension does not match coefficient dimension");
  }
  const Vector& c = degree(n);
  const auto alphas = multi_indices(k_, n);
  Complex acc = 0.0;
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    acc += c[static_cast<Eigen::Index>(a)] * monomial(z, alphas[a]);
  }
  return acc;
}

Complex FockCoefficients::evaluate(const Vector& z) const {
  Complex acc = 0.0;
  for (int n = 0; n <= max_degree(); ++n) {
    acc += evaluate_degree(n, z);
  }
  return acc;
}

std::pair<double, double> dilation_norms(const FockCoefficients& f, double r) {
  if (f.dim() != 1) {
    throw InputError("exact dilation norms are available in dimension 1 "
                     "only; use the quadrature route for higher dimensions");
  }
  if (!(r >= 0.0) || !(r <= 1.0)) {
    throw InputError("dilation factor must lie in [0, 1]");
  }
  double acc = 0.0;
  double r2n = 1.0;
  for (int n = 0; n <= f.max_degree(); ++n) {
    acc += r2n * std::norm(f.degree(n)[0]);
    r2n *= r * r;
  }
  return {f.norm(), std::sqrt(acc)};
}

std::pair<double, double> dilation_norms_quadrature(const FockCoefficients& f,
                                                    double r,
                                                    const SphereMeasure& s) {
  if (f.dim() != s.dim()) {
    throw InputError("coefficient dimension does not match sphere dimension");
  }
  if (!(r >= 0.0) || !(r <= 1.0)) {
    throw InputError("dilation factor must lie in [0, 1]");
  }
  double acc = 0.0;
  double r2n = 1.0;
  for (int n = 0; n <= f.max_degree(); ++n) {
    double level = 0.0;
    for (const Vector& b : s.nodes()) {
      level += std::norm(f.evaluate_degree(n, b));
    }
    acc += r2n * s.weight() * level;
    r2n *= r * r;
  }
  return {f.norm(), std::sqrt(acc)};
}

Matrix moment_matrix(const SphereMeasure& sphere, int max_degree) {
  if (max_degree < 0) {
    throw InputError("degree must be nonnegative");
  }
  std::vector<std::vector<int>> alphas;
  for (int n = 0; n <= max_degree; ++n) {
    for (auto& a : multi_indices(sphere.dim(), n)) {
      alphas.push_back(std::move(a));
    }
  }
  const Eigen::Index na = static_cast<Eigen::Index>(alphas.size());
  const Eigen::Index m = static_cast<Eigen::Index>(sphere.nodes().size());
  Matrix p(m, na);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index a = 0; a < na; ++a) {
      p(j, a) = monomial(sphere.nodes()[static_cast<std::size_t>(j)],
                         alphas[static_cast<std::size_t>(a)]);
    }
  }
  Matrix g = sphere.weight() * (p.adjoint() * p);
  return hermitian_part(g);
}

double moment_injectivity(const SphereMeasure& sphere, int max_degree) {
  const Matrix g = moment_matrix(sphere, max_degree);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw CertificateError("eigenvalue computation failed", 0.0);
  }
  return es.eigenvalues().cwiseAbs().minCoeff();
}

}  // namespace rkhs::da
