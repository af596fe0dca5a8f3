#include "rkhs/boundary.hpp"

#include <cmath>

#include "rkhs/random.hpp"

namespace rkhs {

DiscreteMeasure::DiscreteMeasure(std::vector<Point> nodes, RealVector weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.empty()) throw InputError("measure: empty node list");
  if (static_cast<Eigen::Index>(nodes_.size()) != weights_.size())
    throw InputError("measure: " + std::to_string(nodes_.size()) +
                     " nodes but " + std::to_string(weights_.size()) +
                     " weights");
  for (Eigen::Index j = 0; j < weights_.size(); ++j)
    if (!(weights_[j] > 0.0) || !std::isfinite(weights_[j]))
      throw InputError("measure: weights must be positive (node " +
                       std::to_string(j) + " has weight " +
                       std::to_string(weights_[j]) + ")");
}

double DiscreteMeasure::mass(const IndexSet& subset) const {
  double acc = 0.0;
  for (std::size_t j : subset) {
    if (j >= nodes_.size())
      throw InputError("measure: node index " + std::to_string(j) +
                       " out of range");
    acc += weights_[static_cast<Eigen::Index>(j)];
  }
  return acc;
}

Complex l2_inner(const DiscreteMeasure& mu, const Vector& u, const Vector& v) {
  if (u.size() != static_cast<Eigen::Index>(mu.size()) ||
      v.size() != static_cast<Eigen::Index>(mu.size()))
    throw InputError("l2_inner: vector length does not match node count");
  Complex acc(0.0, 0.0);
  for (Eigen::Index j = 0; j < u.size(); ++j)
    acc += mu.weights()[j] * std::conj(u[j]) * v[j];
  return acc;
}

FeatureSystem::FeatureSystem(MeasurePtr measure, Domain domain,
                             std::string name, Evaluator eval)
    : measure_(std::move(measure)),
      domain_(domain),
      name_(std::move(name)),
      eval_(std::move(eval)) {
  if (!measure_) throw InputError("features '" + name_ + "': null measure");
  if (!eval_) throw InputError("features '" + name_ + "': null evaluator");
}

Vector FeatureSystem::features(const Point& x) const {
  if (x.domain() != domain_)
    throw InputError("features '" + name_ + "': expected " +
                     domain_name(domain_) + " point, have " +
                     domain_name(x.domain()));
  Vector v = eval_(x);
  if (v.size() != static_cast<Eigen::Index>(measure_->size()))
    throw InputError("features '" + name_ + "': evaluator returned " +
                     std::to_string(v.size()) + " values for " +
                     std::to_string(measure_->size()) + " nodes");
  if (!v.allFinite())
    throw CertificateError("features '" + name_ + "': non-finite value", 0.0);
  return v;
}

Kernel induced_kernel(const FeatureSystem& fs) {
  return Kernel(fs.domain(), "induced(" + fs.name() + ")",
                [fs](const Point& x, const Point& y) {
                  return l2_inner(fs.measure(), fs.features(x),
                                  fs.features(y));
                });
}

Vector analysis_op(const RkhsElement& f, const FeatureSystem& fs) {
  if (f.kernel().domain() != fs.domain())
    throw InputError("analysis_op: element domain does not match features");
  Vector out = Vector::Zero(static_cast<Eigen::Index>(fs.measure().size()));
  for (std::size_t i = 0; i < f.points().size(); ++i)
    out += f.coefficients()[static_cast<Eigen::Index>(i)] *
           fs.features(f.points()[i]);
  return out;
}

Complex synthesis_at(const Vector& phi, const FeatureSystem& fs,
                     const Point& x) {
  return l2_inner(fs.measure(), fs.features(x), phi);
}

Vector synthesis_op(const Vector& phi, const FeatureSystem& fs,
                    const std::vector<Point>& probes) {
  Vector out(static_cast<Eigen::Index>(probes.size()));
  for (std::size_t i = 0; i < probes.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = synthesis_at(phi, fs, probes[i]);
  return out;
}

double verify_adjoint(const FeatureSystem& fs, const std::vector<Point>& points,
                      int trials, double tol, std::uint64_t seed) {
  if (points.empty()) throw InputError("verify_adjoint: no points");
  if (trials <= 0) throw InputError("verify_adjoint: trials must be positive");
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto m = static_cast<Eigen::Index>(fs.measure().size());

  // Cache the feature matrix; columns are k_{x_i}.
  Matrix phi_mat(m, n);
  for (Eigen::Index i = 0; i < n; ++i)
    phi_mat.col(i) = fs.features(points[static_cast<std::size_t>(i)]);

  NormalStream rng(seed);
  double worst = 0.0;
  int worst_trial = -1;
  for (int t = 0; t < trials; ++t) {
    const Vector c = rng.complex_vector(n);
    const Vector phi = rng.complex_vector(m);
    const Vector tf = phi_mat * c;
    const Complex lhs = l2_inner(fs.measure(), tf, phi);
    Complex rhs(0.0, 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
      rhs += std::conj(c[i]) *
             l2_inner(fs.measure(), phi_mat.col(i), phi);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    const double res = std::abs(lhs - rhs) / scale;
    if (res > worst) {
      worst = res;
      worst_trial = t;
    }
  }
  if (worst > tol)
    throw CertificateError("verify_adjoint: residual " + std::to_string(worst) +
                               " above tolerance " + std::to_string(tol) +
                               " (trial " + std::to_string(worst_trial) + ")",
                           worst);
  return worst;
}

std::pair<Complex, Complex> factor_check(const FeatureSystem& fs,
                                         const Point& x, const Point& y) {
  const Complex direct =
      l2_inner(fs.measure(), fs.features(x), fs.features(y));
  // Composition route: analyze the section K(., y) (its analysis image is
  // exactly the feature vector of y), then synthesize at x.
  const Vector image = fs.features(y);
  const Complex composed = synthesis_at(image, fs, x);
  return {direct, composed};
}

BoundaryCertificate certify(const Kernel& kernel, const FeatureSystem& fs,
                            const std::vector<Point>& points, double tol) {
  if (kernel.domain() != fs.domain())
    throw InputError("certify: kernel domain does not match features");
  const Matrix gk = gram(kernel, points).matrix();
  const Kernel induced = induced_kernel(fs);
  const Matrix gm = gram(induced, points).matrix();

  BoundaryCertificate cert;
  cert.points = points;
  cert.max_equality_residual = (gk - gm).cwiseAbs().maxCoeff();
  cert.is_boundary = cert.max_equality_residual <= tol;

  Eigen::SelfAdjointEigenSolver<Matrix> es(gk - gm, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw CertificateError("certify: eigensolver failed", 0.0);
  cert.ordering_margin = es.eigenvalues().minCoeff();
  const double n = static_cast<double>(gk.rows());
  const double scale = std::max(1.0, std::abs(gk.trace().real()) / n);
  cert.is_sub_boundary = cert.ordering_margin >= -tol * scale;
  // Equality within tol dominates: a boundary is in particular a
  // sub-boundary.
  if (cert.is_boundary) cert.is_sub_boundary = true;
  return cert;
}

FeatureSystem product_boundary(const FeatureSystem& a, const FeatureSystem& b) {
  if (a.domain() != b.domain())
    throw InputError("product_boundary: factor domains differ");
  const auto ma = static_cast<Eigen::Index>(a.measure().size());
  const auto mb = static_cast<Eigen::Index>(b.measure().size());

  std::vector<Point> nodes;
  nodes.reserve(static_cast<std::size_t>(ma * mb));
  RealVector weights(ma * mb);
  for (Eigen::Index i = 0; i < ma; ++i)
    for (Eigen::Index j = 0; j < mb; ++j) {
      nodes.push_back(Point::index_set(
          {static_cast<std::size_t>(i), static_cast<std::size_t>(j)}));
      weights[i * mb + j] = a.measure().weights()[i] * b.measure().weights()[j];
    }
  auto mu = std::make_shared<DiscreteMeasure>(std::move(nodes),
                                              std::move(weights));
  // Capture copies of the factor systems; feature of x is the Kronecker
  // product of the factor features, matching the node ordering above.
  FeatureSystem fa = a;
  FeatureSystem fb = b;
  return FeatureSystem(
      std::move(mu), a.domain(), "product(" + a.name() + "," + b.name() + ")",
      [fa, fb, ma, mb](const Point& x) {
        const Vector va = fa.features(x);
        const Vector vb = fb.features(x);
        Vector out(ma * mb);
        for (Eigen::Index i = 0; i < ma; ++i)
          for (Eigen::Index j = 0; j < mb; ++j) out[i * mb + j] = va[i] * vb[j];
        return out;
      });
}

namespace {

// Hermitian square root and pseudo-inverse square root with relative rank
// cutoff.
struct GramRoots {
  Matrix half;      // G^{1/2}
  Matrix inv_half;  // pseudo-inverse of G^{1/2}
};

GramRoots gram_roots(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  if (es.info() != Eigen::Success)
    throw CertificateError("frame: Gram eigensolver failed", 0.0);
  const RealVector lam = es.eigenvalues();
  const double top = lam.cwiseAbs().maxCoeff();
  const double cutoff = 1e-10 * top;
  RealVector sq = RealVector::Zero(lam.size());
  RealVector isq = RealVector::Zero(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] > cutoff) {
      sq[i] = std::sqrt(lam[i]);
      isq[i] = 1.0 / sq[i];
    }
  }
  const Matrix& u = es.eigenvectors();
  return GramRoots{u * sq.asDiagonal() * u.adjoint(),
                   u * isq.asDiagonal() * u.adjoint()};
}

}  // namespace

ParsevalFrame parseval_frame(const Kernel& kernel,
                             const std::vector<Point>& points,
                             const FeatureSystem& fs) {
  if (kernel.domain() != fs.domain())
    throw InputError("parseval_frame: kernel domain does not match features");
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto m = static_cast<Eigen::Index>(fs.measure().size());
  const Matrix g = gram(kernel, points).matrix();
  const GramRoots roots = gram_roots(g);

  Matrix phi_mat(m, n);
  for (Eigen::Index i = 0; i < n; ++i)
    phi_mat.col(i) = fs.features(points[static_cast<std::size_t>(i)]);
  const RealVector wsqrt = fs.measure().weights().cwiseSqrt();

  // Analysis operator between orthonormal coordinates on both sides.
  Matrix a = wsqrt.asDiagonal() * phi_mat * roots.inv_half;

  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * top && top > 0.0) ++rank;

  ParsevalFrame frame;
  frame.rank = rank;
  if (rank == 0) {
    frame.complement_basis = Matrix::Zero(n, 0);
    return frame;
  }
  const Matrix ur = svd.matrixU().leftCols(rank);
  const Matrix vr = svd.matrixV().leftCols(rank);
  // Coefficients of the frame vectors: column per measure node.  The frame
  // vector for node index nu is the adjoint polar isometry applied to the
  // weighted delta at nu.
  const Matrix coeffs = roots.inv_half * (vr * ur.adjoint());
  frame.complement_basis = roots.inv_half * vr;
  frame.vectors.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index nu = 0; nu < m; ++nu)
    frame.vectors.emplace_back(kernel, points, Vector(coeffs.col(nu)));
  return frame;
}

MercerFrame mercer_frame(const GramMatrix& g, double tol) {
  const Matrix& mat = g.matrix();
  const auto n = mat.rows();
  const double scale =
      std::max(1.0, mat.trace().real() / static_cast<double>(n));

  // Exactly real Grams go through the real solver so the frame itself is
  // real (the complex solver may smear arbitrary phases onto eigenvectors).
  const bool real_gram = (mat.imag().cwiseAbs().maxCoeff() == 0.0);
  RealVector lam(n);
  Matrix vecs(n, n);
  if (real_gram) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(mat.real());
    if (es.info() != Eigen::Success)
      throw CertificateError("mercer_frame: eigensolver failed", 0.0);
    lam = es.eigenvalues();
    vecs = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat);
    if (es.info() != Eigen::Success)
      throw CertificateError("mercer_frame: eigensolver failed", 0.0);
    lam = es.eigenvalues();
    vecs = es.eigenvectors();
  }
  if (lam.minCoeff() < -tol * scale)
    throw CertificateError(
        "mercer_frame: Gram matrix has negative eigenvalue " +
            std::to_string(lam.minCoeff()),
        lam.minCoeff());

  const double top = lam.cwiseAbs().maxCoeff();
  const double cutoff = 1e-12 * std::max(top, 1.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = n - 1; i >= 0; --i)  // descending eigenvalues
    if (lam[i] > cutoff) keep.push_back(i);

  MercerFrame frame;
  frame.values.resize(n, static_cast<Eigen::Index>(keep.size()));
  frame.eigenvalues.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const Eigen::Index i = keep[c];
    frame.eigenvalues[static_cast<Eigen::Index>(c)] = lam[i];
    frame.values.col(static_cast<Eigen::Index>(c)) =
        std::sqrt(lam[i]) * vecs.col(i);
  }
  return frame;
}

}  // namespace rkhs
