#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rkhs/types.hpp"

namespace rkhs {

/// Positive definite kernel over one of the supported domains.
///
/// Convention used throughout the library: K(x, y) is conjugate-linear in
/// its first argument and linear in its second, i.e. K(x, y) = sum_n
/// conj(phi_n(x)) phi_n(y) for any feature realization, and the reproducing
/// inner product <., .> is linear in the second slot, so that
/// <K(., x), f> = f(x).
///
/// A Kernel is an immutable value; copies share the underlying evaluator,
/// and same_as() tells whether two kernels originate from the same
/// construction (used to reject mixed-space inner products).
class Kernel {
 public:
  using Evaluator = std::function<Complex(const Point&, const Point&)>;

  Kernel(Domain domain, std::string name, Evaluator eval);

  /// Evaluate K(x, y).  Throws InputError if either point has the wrong
  /// domain tag.
  Complex operator()(const Point& x, const Point& y) const;

  Domain domain() const;
  const std::string& name() const;
  bool same_as(const Kernel& other) const { return impl_ == other.impl_; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Gram matrix of a kernel on a finite point list.
///
/// Storage is Hermitian by construction: entries (i, j) with i < j are
/// kernel evaluations, lower entries are their exact conjugates, and the
/// diagonal keeps only the real part (which is exact for any Hermitian
/// kernel).
class GramMatrix {
 public:
  GramMatrix(const Kernel& kernel, std::vector<Point> points);

  const Matrix& matrix() const { return m_; }
  const std::vector<Point>& points() const { return points_; }
  Eigen::Index size() const { return m_.rows(); }

 private:
  std::vector<Point> points_;
  Matrix m_;
};

GramMatrix gram(const Kernel& kernel, const std::vector<Point>& points);

struct PsdReport {
  bool psd = false;
  double min_eigenvalue = 0.0;
  /// Acceptance bound: psd iff min_eigenvalue >= -bound, where
  /// bound = tol * max(1, trace / N).
  double bound = 0.0;
};

/// Positive semidefiniteness test.  The matrix must be Hermitian exactly as
/// stored (GramMatrix guarantees this); anything else is an InputError.
PsdReport is_psd(const Matrix& m, double tol);

struct OrderCertificate {
  bool dominated = false;   // true iff Gram(L) - Gram(K) is PSD within tol
  double margin = 0.0;      // smallest eigenvalue of the difference
  double bound = 0.0;       // tolerance actually applied
};

/// Finite-set certificate for the domination order K << L: checks that
/// Gram(L, points) - Gram(K, points) is PSD.  The bound is relative,
/// tol * max(1, |trace K|/N, |trace L|/N).
OrderCertificate kernel_leq(const Kernel& k, const Kernel& l,
                            const std::vector<Point>& points, double tol);

/// Finite linear combination sum_i c_i K(., x_i) of kernel sections.
class RkhsElement {
 public:
  RkhsElement(Kernel kernel, std::vector<Point> points, Vector coefficients);

  const Kernel& kernel() const { return kernel_; }
  const std::vector<Point>& points() const { return points_; }
  const Vector& coefficients() const { return coeff_; }

  /// Pointwise value sum_i c_i K(x, x_i).
  Complex evaluate(const Point& x) const;

 private:
  Kernel kernel_;
  std::vector<Point> points_;
  Vector coeff_;
};

/// Reproducing inner product, linear in the second argument:
/// <a, b> = sum_{i,j} conj(a_i) b_j K(x_i^a, x_j^b).
///
/// It is computed as sum_i conj(a_i) * b.evaluate(x_i^a), so for
/// a = K(., x) with unit coefficient the result is bit-identical to
/// b.evaluate(x).  Throws InputError when the elements live over different
/// kernels.
Complex rkhs_inner(const RkhsElement& a, const RkhsElement& b);

/// Norm sqrt(<a, a>).  Tiny negative squares (within tol relative to the
/// diagonal bound sum_i |c_i|^2 K(x_i, x_i)) are clamped to zero; anything
/// more negative throws CertificateError.
double rkhs_norm(const RkhsElement& a, double tol = 1e-10);

/// Smallest constant C such that the finite data {(x_i, f_i)} is consistent
/// with a member of the space of norm^2 <= C; equals f* G^+ f on the range
/// of the Gram matrix.
struct MembershipBound {
  double value = 0.0;         // +infinity when the data leaves the range
  double outside_norm = 0.0;  // norm of the component outside range(G)
  bool in_range = false;
};

/// Rank decisions use the cutoff 1e-10 * sigma_max; data counts as outside
/// the range when its null-space component exceeds 1e-6 * |f|.
MembershipBound membership_bound(const Kernel& kernel, const Vector& f_values,
                                 const std::vector<Point>& points);

/// Reinterpret an element of H(L) as an element of H(K), keeping points and
/// coefficients.  Well defined (and norm-contractive) whenever K << L; the
/// caller is responsible for having certified that.
RkhsElement contraction_map(const RkhsElement& a, const Kernel& k);

/// Pointwise product kernel (x, y) -> K1(x, y) * K2(x, y).  Both factors
/// must share a domain.
Kernel product_kernel(const Kernel& k1, const Kernel& k2);

/// K(i, j) = min(i, j) on nonnegative vertices.
Kernel min_kernel();

/// Constant kernel K == c (c real so the kernel stays Hermitian).
Kernel constant_kernel(double c, Domain domain);

/// s * K for s >= 0.
Kernel scaled_kernel(const Kernel& k, double s);

}  // namespace rkhs
