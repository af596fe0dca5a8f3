#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rkhs/kernel.hpp"
#include "rkhs/types.hpp"

namespace rkhs {

/// Finite measure space: nodes b_j with strictly positive weights w_j.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Point> nodes, RealVector weights);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const RealVector& weights() const { return weights_; }
  double total_mass() const { return weights_.sum(); }

  /// mu(A) for a subset of node indices; indices must be in range.
  double mass(const IndexSet& subset) const;

 private:
  std::vector<Point> nodes_;
  RealVector weights_;
};

using MeasurePtr = std::shared_ptr<const DiscreteMeasure>;

/// Weighted L^2(mu) pairing over node vectors, linear in the second slot:
/// sum_j w_j conj(u_j) v_j.
Complex l2_inner(const DiscreteMeasure& mu, const Vector& u, const Vector& v);

/// Family of boundary features: for each domain point x a node-value vector
/// k_x = (k_x(b_1), ..., k_x(b_M)) over a fixed discrete measure.
class FeatureSystem {
 public:
  using Evaluator = std::function<Vector(const Point&)>;

  FeatureSystem(MeasurePtr measure, Domain domain, std::string name,
                Evaluator eval);

  /// Feature vector of x; length and finiteness are checked.
  Vector features(const Point& x) const;

  const DiscreteMeasure& measure() const { return *measure_; }
  const MeasurePtr& measure_ptr() const { return measure_; }
  Domain domain() const { return domain_; }
  const std::string& name() const { return name_; }

 private:
  MeasurePtr measure_;
  Domain domain_;
  std::string name_;
  Evaluator eval_;
};

/// Kernel induced by a feature system:
/// K_mu(x, y) = sum_j w_j conj(k_x(b_j)) k_y(b_j).
Kernel induced_kernel(const FeatureSystem& fs);

/// Analysis operator on the span of kernel sections:
/// T(sum_i c_i K(., x_i)) = sum_i c_i k_{x_i}, a node-value vector.
Vector analysis_op(const RkhsElement& f, const FeatureSystem& fs);

/// Synthesis operator evaluated at one probe point:
/// (S phi)(x) = sum_j w_j conj(k_x(b_j)) phi_j.
Complex synthesis_at(const Vector& phi, const FeatureSystem& fs,
                     const Point& x);

/// Synthesis values at a list of probe points.
Vector synthesis_op(const Vector& phi, const FeatureSystem& fs,
                    const std::vector<Point>& probes);

/// Randomized check that synthesis is the adjoint of analysis:
/// <T F, phi>_{L2(mu)} = sum_i conj(c_i) (S phi)(x_i) for `trials` random
/// pairs.  Returns the largest relative residual
/// |lhs - rhs| / max(1, |lhs|, |rhs|) and throws CertificateError (with the
/// witness trial in the message) when it exceeds tol.
double verify_adjoint(const FeatureSystem& fs, const std::vector<Point>& points,
                      int trials, double tol, std::uint64_t seed);

/// Both routes to the induced kernel value at (x, y): the direct quadrature
/// and the synthesis-after-analysis composition S(T K(., y))(x).  They agree
/// up to rounding.
std::pair<Complex, Complex> factor_check(const FeatureSystem& fs,
                                         const Point& x, const Point& y);

struct BoundaryCertificate {
  bool is_boundary = false;       // K == K_mu on the points, entrywise within tol
  bool is_sub_boundary = false;   // K_mu << K within tol
  double max_equality_residual = 0.0;
  double ordering_margin = 0.0;   // min eigenvalue of Gram(K) - Gram(K_mu)
  std::vector<Point> points;
};

/// Certify whether the feature system realizes the kernel's boundary
/// (equality) or a sub-boundary (domination) on the given point set.
/// Equality forces the sub-boundary flag, matching the containment of the
/// two notions.
BoundaryCertificate certify(const Kernel& kernel, const FeatureSystem& fs,
                            const std::vector<Point>& points, double tol);

/// Product of two boundary realizations over the same domain: node pairs
/// (stored as index pairs into the factors), product weights, and pointwise
/// feature products.  Induces the product kernel.
FeatureSystem product_boundary(const FeatureSystem& a, const FeatureSystem& b);

/// Parseval frame for span{K(., x_i)} (-) ker T, obtained from the singular
/// value decomposition of the analysis operator written between orthonormal
/// coordinates.  One frame vector per measure node (images of the weighted
/// node deltas under the adjoint of the polar isometry).
struct ParsevalFrame {
  std::vector<RkhsElement> vectors;
  /// Coefficient vectors of an orthonormal basis of the complement of
  /// ker T inside the span (N x rank); useful for drawing test elements.
  Matrix complement_basis;
  int rank = 0;
};

ParsevalFrame parseval_frame(const Kernel& kernel,
                             const std::vector<Point>& points,
                             const FeatureSystem& fs);

/// Spectral (Mercer) frame of a Gram matrix: columns phi_n = sqrt(lambda_n)
/// u_n for the eigenpairs with lambda_n above the rank cutoff
/// 1e-12 * lambda_max, eigenvalues descending.  Reconstruction:
/// sum_n phi_n(x_i) conj(phi_n(x_j)) = G(i, j).
struct MercerFrame {
  Matrix values;          // N x rank, column n is phi_n sampled on the points
  RealVector eigenvalues; // descending, one per kept column
};

/// Throws CertificateError when G has an eigenvalue below
/// -tol * max(1, trace/N).
MercerFrame mercer_frame(const GramMatrix& g, double tol = 1e-10);

}  // namespace rkhs
