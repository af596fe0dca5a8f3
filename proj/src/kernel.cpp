#include "rkhs/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rkhs {

struct Kernel::Impl {
  Domain domain;
  std::string name;
  Evaluator eval;
};

Kernel::Kernel(Domain domain, std::string name, Evaluator eval)
    : impl_(std::make_shared<Impl>(
          Impl{domain, std::move(name), std::move(eval)})) {
  if (!impl_->eval) throw InputError("kernel: null evaluator");
}

Complex Kernel::operator()(const Point& x, const Point& y) const {
  if (x.domain() != impl_->domain || y.domain() != impl_->domain)
    throw InputError("kernel '" + impl_->name + "': expected " +
                     domain_name(impl_->domain) + " points, have " +
                     domain_name(x.domain()) + " / " +
                     domain_name(y.domain()));
  return impl_->eval(x, y);
}

Domain Kernel::domain() const { return impl_->domain; }

const std::string& Kernel::name() const { return impl_->name; }

GramMatrix::GramMatrix(const Kernel& kernel, std::vector<Point> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw InputError("gram: empty point list");
  const auto n = static_cast<Eigen::Index>(points_.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (points_[static_cast<std::size_t>(i)].domain() != kernel.domain())
      throw InputError("gram: point " + std::to_string(i) + " has domain " +
                       domain_name(points_[static_cast<std::size_t>(i)].domain()) +
                       ", kernel '" + kernel.name() + "' expects " +
                       domain_name(kernel.domain()));
  }
  m_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& xi = points_[static_cast<std::size_t>(i)];
    // The diagonal of a Hermitian kernel is real; drop any rounding residue
    // in the imaginary part so the stored matrix is Hermitian exactly.
    m_(i, i) = Complex(kernel(xi, xi).real(), 0.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex v = kernel(xi, points_[static_cast<std::size_t>(j)]);
      m_(i, j) = v;
      m_(j, i) = std::conj(v);
    }
  }
}

GramMatrix gram(const Kernel& kernel, const std::vector<Point>& points) {
  return GramMatrix(kernel, points);
}

namespace {

void require_hermitian(const Matrix& m, const char* who) {
  if (m.rows() != m.cols())
    throw InputError(std::string(who) + ": matrix is not square");
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      if (m(i, j) != std::conj(m(j, i)))
        throw InputError(std::string(who) + ": matrix is not Hermitian at (" +
                         std::to_string(i) + ", " + std::to_string(j) + ")");
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw CertificateError("eigensolver failed to converge", 0.0);
  return es.eigenvalues().minCoeff();
}

}  // namespace

PsdReport is_psd(const Matrix& m, double tol) {
  require_hermitian(m, "is_psd");
  const double lo = min_eigenvalue(m);
  const double n = static_cast<double>(m.rows());
  const double bound = tol * std::max(1.0, m.trace().real() / n);
  return PsdReport{lo >= -bound, lo, bound};
}

OrderCertificate kernel_leq(const Kernel& k, const Kernel& l,
                            const std::vector<Point>& points, double tol) {
  if (k.domain() != l.domain())
    throw InputError("kernel_leq: kernels live on different domains (" +
                     std::string(domain_name(k.domain())) + " vs " +
                     domain_name(l.domain()) + ")");
  const Matrix gk = gram(k, points).matrix();
  const Matrix gl = gram(l, points).matrix();
  const Matrix diff = gl - gk;
  const double lo = min_eigenvalue(diff);
  const double n = static_cast<double>(diff.rows());
  const double scale = std::max({1.0, std::abs(gk.trace().real()) / n,
                                 std::abs(gl.trace().real()) / n});
  const double bound = tol * scale;
  return OrderCertificate{lo >= -bound, lo, bound};
}

RkhsElement::RkhsElement(Kernel kernel, std::vector<Point> points,
                         Vector coefficients)
    : kernel_(std::move(kernel)),
      points_(std::move(points)),
      coeff_(std::move(coefficients)) {
  if (static_cast<Eigen::Index>(points_.size()) != coeff_.size())
    throw InputError("rkhs element: " + std::to_string(points_.size()) +
                     " points but " + std::to_string(coeff_.size()) +
                     " coefficients");
  for (const auto& p : points_)
    if (p.domain() != kernel_.domain())
      throw InputError("rkhs element: point domain " +
                       std::string(domain_name(p.domain())) +
                       " does not match kernel domain " +
                       domain_name(kernel_.domain()));
}

Complex RkhsElement::evaluate(const Point& x) const {
  Complex acc(0.0, 0.0);
  for (std::size_t j = 0; j < points_.size(); ++j)
    acc += coeff_[static_cast<Eigen::Index>(j)] * kernel_(x, points_[j]);
  return acc;
}

Complex rkhs_inner(const RkhsElement& a, const RkhsElement& b) {
  if (!a.kernel().same_as(b.kernel()))
    throw InputError("rkhs_inner: elements belong to different kernels ('" +
                     a.kernel().name() + "' vs '" + b.kernel().name() + "')");
  Complex acc(0.0, 0.0);
  const auto& pts = a.points();
  const auto& c = a.coefficients();
  // Row i reuses RkhsElement::evaluate so that <K(., x), f> is the very same
  // floating point expression as f.evaluate(x).
  for (std::size_t i = 0; i < pts.size(); ++i)
    acc += std::conj(c[static_cast<Eigen::Index>(i)]) * b.evaluate(pts[i]);
  return acc;
}

double rkhs_norm(const RkhsElement& a, double tol) {
  const double sq = rkhs_inner(a, a).real();
  double diag = 0.0;
  for (std::size_t i = 0; i < a.points().size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    diag += std::norm(a.coefficients()[ii]) *
            a.kernel()(a.points()[i], a.points()[i]).real();
  }
  const double bound = tol * std::max(1.0, diag);
  if (sq < -bound)
    throw CertificateError(
        "rkhs_norm: squared norm " + std::to_string(sq) +
            " is negative beyond tolerance; kernel is not positive definite "
            "on these points",
        sq);
  return std::sqrt(std::max(0.0, sq));
}

MembershipBound membership_bound(const Kernel& kernel, const Vector& f_values,
                                 const std::vector<Point>& points) {
  if (static_cast<Eigen::Index>(points.size()) != f_values.size())
    throw InputError("membership_bound: value/point count mismatch");
  const Matrix g = gram(kernel, points).matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  if (es.info() != Eigen::Success)
    throw CertificateError("membership_bound: eigensolver failed", 0.0);
  const RealVector lam = es.eigenvalues();
  const double sigma_max = lam.cwiseAbs().maxCoeff();
  const double cutoff = 1e-10 * sigma_max;
  const Vector coeff = es.eigenvectors().adjoint() * f_values;

  double value = 0.0;
  double outside_sq = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] > cutoff)
      value += std::norm(coeff[i]) / lam[i];
    else
      outside_sq += std::norm(coeff[i]);
  }
  const double outside = std::sqrt(outside_sq);
  if (outside > 1e-6 * f_values.norm())
    return MembershipBound{std::numeric_limits<double>::infinity(), outside,
                           false};
  return MembershipBound{value, outside, true};
}

RkhsElement contraction_map(const RkhsElement& a, const Kernel& k) {
  if (k.domain() != a.kernel().domain())
    throw InputError("contraction_map: target kernel domain " +
                     std::string(domain_name(k.domain())) +
                     " does not match element domain " +
                     domain_name(a.kernel().domain()));
  return RkhsElement(k, a.points(), a.coefficients());
}

Kernel product_kernel(const Kernel& k1, const Kernel& k2) {
  if (k1.domain() != k2.domain())
    throw InputError("product_kernel: factors live on different domains (" +
                     std::string(domain_name(k1.domain())) + " vs " +
                     domain_name(k2.domain()) + ")");
  return Kernel(k1.domain(), "product(" + k1.name() + "," + k2.name() + ")",
                [k1, k2](const Point& x, const Point& y) {
                  return k1(x, y) * k2(x, y);
                });
}

Kernel min_kernel() {
  return Kernel(Domain::vertex, "min",
                [](const Point& x, const Point& y) {
                  const auto i = x.as_vertex();
                  const auto j = y.as_vertex();
                  if (i < 0 || j < 0)
                    throw InputError(
                        "min kernel: vertices must be nonnegative");
                  return Complex(static_cast<double>(std::min(i, j)), 0.0);
                });
}

Kernel constant_kernel(double c, Domain domain) {
  return Kernel(domain, "constant(" + std::to_string(c) + ")",
                [c](const Point&, const Point&) { return Complex(c, 0.0); });
}

Kernel scaled_kernel(const Kernel& k, double s) {
  if (s < 0.0)
    throw InputError("scaled_kernel: negative scale breaks positivity");
  return Kernel(k.domain(), std::to_string(s) + "*" + k.name(),
                [k, s](const Point& x, const Point& y) { return s * k(x, y); });
}

}  // namespace rkhs
