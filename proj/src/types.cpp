#include "rkhs/types.hpp"

#include <algorithm>

namespace rkhs {

namespace {

[[noreturn]] void mismatch(Domain want, Domain have) {
  throw InputError(std::string("point access: expected ") + domain_name(want) +
                   " point, have " + domain_name(have));
}

}  // namespace

Point::Point(IndexSet s) : value_(std::move(s)) {
  auto& v = std::get<IndexSet>(value_);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

double Point::as_scalar() const {
  if (domain() != Domain::scalar) mismatch(Domain::scalar, domain());
  return std::get<double>(value_);
}

std::int64_t Point::as_vertex() const {
  if (domain() != Domain::vertex) mismatch(Domain::vertex, domain());
  return std::get<std::int64_t>(value_);
}

const Vector& Point::as_complex_vector() const {
  if (domain() != Domain::complex_vector)
    mismatch(Domain::complex_vector, domain());
  return std::get<Vector>(value_);
}

const IndexSet& Point::as_index_set() const {
  if (domain() != Domain::index_set) mismatch(Domain::index_set, domain());
  return std::get<IndexSet>(value_);
}

std::vector<Point> vertex_range(std::int64_t from, std::int64_t to) {
  if (to < from) throw InputError("vertex_range: to < from");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(to - from + 1));
  for (std::int64_t i = from; i <= to; ++i) out.push_back(Point::vertex(i));
  return out;
}

Point complex_point(Complex z) {
  Vector v(1);
  v[0] = z;
  return Point::complex_vector(std::move(v));
}

}  // namespace rkhs
