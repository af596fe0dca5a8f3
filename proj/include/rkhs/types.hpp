#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace rkhs {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;      // dense complex column vector
using Matrix = Eigen::MatrixXcd;      // dense complex matrix
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Sorted, duplicate-free list of node indices (a finite "event" over a
/// discrete measure).
using IndexSet = std::vector<std::size_t>;

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: domain mismatches, invalid descriptors, bad sizes.
/// The CLI maps this to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical certificate failed: PSD violation, adjoint residual above
/// tolerance, factorization breakdown.  Carries the offending metric
/// (margin, residual, or smallest eigenvalue).  The CLI maps this to exit
/// code 2.
class CertificateError : public Error {
 public:
  CertificateError(const std::string& what, double metric)
      : Error(what), metric_(metric) {}
  double metric() const { return metric_; }

 private:
  double metric_ = 0.0;
};

/// Kernel domains.  Every Point carries exactly one of these tags and every
/// Kernel declares which tag it accepts.
enum class Domain {
  scalar,          // real number (grid nodes, quadrature abscissae)
  vertex,          // nonnegative integer vertex id of a network
  complex_vector,  // point of C^k
  index_set,       // subset of node indices of a discrete measure
};

inline const char* domain_name(Domain d) {
  switch (d) {
    case Domain::scalar: return "scalar";
    case Domain::vertex: return "vertex";
    case Domain::complex_vector: return "complex-vector";
    case Domain::index_set: return "index-set";
  }
  return "unknown";
}

/// A point of a kernel domain.  Immutable tagged union; accessors throw
/// InputError on tag mismatch so domain bugs surface as typed errors rather
/// than silent coercions.
class Point {
 public:
  Point(double v) : value_(v) {}
  Point(std::int64_t v) : value_(v) {}
  Point(int v) : value_(static_cast<std::int64_t>(v)) {}
  Point(Vector z) : value_(std::move(z)) {}
  explicit Point(IndexSet s);

  static Point scalar(double v) { return Point(v); }
  static Point vertex(std::int64_t v) { return Point(v); }
  static Point complex_vector(Vector z) { return Point(std::move(z)); }
  static Point index_set(IndexSet s) { return Point(std::move(s)); }

  Domain domain() const { return static_cast<Domain>(value_.index()); }

  double as_scalar() const;
  std::int64_t as_vertex() const;
  const Vector& as_complex_vector() const;
  const IndexSet& as_index_set() const;

 private:
  std::variant<double, std::int64_t, Vector, IndexSet> value_;
};

/// Vertex points {from, from+1, ..., to} (inclusive).
std::vector<Point> vertex_range(std::int64_t from, std::int64_t to);

/// One-dimensional complex-vector point, the domain of disc kernels.
Point complex_point(Complex z);

}  // namespace rkhs
