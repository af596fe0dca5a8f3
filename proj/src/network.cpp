#include "rkhs/network.hpp"

#include <memory>
#include <queue>
#include <set>
#include <utility>

namespace rkhs::net {

ResistanceNetwork::ResistanceNetwork(int n_vertices,
                                     std::vector<EdgeSpec> edges, int base)
    : n_(n_vertices), base_(base), edges_(std::move(edges)) {
  if (n_ <= 0) throw InputError("network: need at least one vertex");
  if (base_ < 0 || base_ >= n_)
    throw InputError("network: base vertex out of range");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges_) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
      throw InputError("network: edge endpoint out of range");
    if (e.u == e.v) throw InputError("network: self-loops are not allowed");
    if (!(e.conductance > 0.0))
      throw InputError("network: conductances must be positive");
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second)
      throw InputError("network: duplicate edge " + std::to_string(e.u) + "-" +
                       std::to_string(e.v));
  }
  // Connectivity: the grounded Laplacian of a disconnected graph is singular.
  std::vector<char> mark(static_cast<std::size_t>(n_), 0);
  std::queue<int> q;
  q.push(base_);
  mark[static_cast<std::size_t>(base_)] = 1;
  int reached = 1;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_));
  for (const auto& e : edges_) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : adj[static_cast<std::size_t>(x)])
      if (!mark[static_cast<std::size_t>(y)]) {
        mark[static_cast<std::size_t>(y)] = 1;
        ++reached;
        q.push(y);
      }
  }
  if (reached != n_)
    throw InputError("network: graph is disconnected (" +
                     std::to_string(reached) + " of " + std::to_string(n_) +
                     " vertices reachable from base)");

  laplacian_ = RealMatrix::Zero(n_, n_);
  for (const auto& e : edges_) {
    laplacian_(e.u, e.u) += e.conductance;
    laplacian_(e.v, e.v) += e.conductance;
    laplacian_(e.u, e.v) -= e.conductance;
    laplacian_(e.v, e.u) -= e.conductance;
  }
}

ResistanceNetwork chain(int n, double conductance) {
  if (n < 1) throw InputError("chain: need at least one edge");
  std::vector<EdgeSpec> edges;
  edges.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) edges.push_back({i, i + 1, conductance});
  return ResistanceNetwork(n + 1, std::move(edges), 0);
}

namespace {

void check_function(const ResistanceNetwork& net, const Vector& f,
                    const char* who) {
  if (f.size() != net.size())
    throw InputError(std::string(who) + ": function has " +
                     std::to_string(f.size()) + " values, network has " +
                     std::to_string(net.size()) + " vertices");
}

void check_vertex(const ResistanceNetwork& net, int x, const char* who) {
  if (x < 0 || x >= net.size())
    throw InputError(std::string(who) + ": vertex " + std::to_string(x) +
                     " out of range");
}

}  // namespace

double energy_norm(const ResistanceNetwork& net, const Vector& f) {
  check_function(net, f, "energy_norm");
  double acc = 0.0;
  for (const auto& e : net.edges())
    acc += e.conductance * std::norm(f[e.u] - f[e.v]);
  return std::sqrt(acc);
}

Complex energy_inner(const ResistanceNetwork& net, const Vector& f,
                     const Vector& g) {
  check_function(net, f, "energy_inner");
  check_function(net, g, "energy_inner");
  Complex acc(0.0, 0.0);
  for (const auto& e : net.edges())
    acc += e.conductance * std::conj(f[e.u] - f[e.v]) * (g[e.u] - g[e.v]);
  return acc;
}

Complex laplacian_apply(const ResistanceNetwork& net, const Vector& f, int x) {
  check_function(net, f, "laplacian_apply");
  check_vertex(net, x, "laplacian_apply");
  Complex acc(0.0, 0.0);
  for (const auto& e : net.edges()) {
    if (e.u == x) acc += e.conductance * (f[x] - f[e.v]);
    if (e.v == x) acc += e.conductance * (f[x] - f[e.u]);
  }
  return acc;
}

double conductance_degree(const ResistanceNetwork& net, int x) {
  check_vertex(net, x, "conductance_degree");
  double acc = 0.0;
  for (const auto& e : net.edges())
    if (e.u == x || e.v == x) acc += e.conductance;
  return acc;
}

namespace {

// Grounded Laplacian: base row/column removed.  Index map: vertex v maps to
// v when v < base, v-1 when v > base.
RealMatrix grounded_laplacian(const ResistanceNetwork& net) {
  const int n = net.size();
  const int b = net.base();
  RealMatrix red(n - 1, n - 1);
  for (int i = 0, ri = 0; i < n; ++i) {
    if (i == b) continue;
    for (int j = 0, rj = 0; j < n; ++j) {
      if (j == b) continue;
      red(ri, rj) = net.laplacian()(i, j);
      ++rj;
    }
    ++ri;
  }
  return red;
}

RealVector lift(const ResistanceNetwork& net, const RealVector& reduced) {
  const int b = net.base();
  RealVector full(net.size());
  for (int i = 0, r = 0; i < net.size(); ++i)
    full[i] = (i == b) ? 0.0 : reduced[r++];
  return full;
}

}  // namespace

RealVector green_element(const ResistanceNetwork& net, int x) {
  check_vertex(net, x, "green_element");
  if (net.size() == 1) return RealVector::Zero(1);
  if (x == net.base()) return RealVector::Zero(net.size());
  RealMatrix red = grounded_laplacian(net);
  Eigen::LDLT<RealMatrix> ldlt(red);
  if (ldlt.info() != Eigen::Success)
    throw CertificateError("green_element: grounded Laplacian solve failed",
                           0.0);
  RealVector rhs = RealVector::Zero(net.size() - 1);
  rhs[x < net.base() ? x : x - 1] = 1.0;
  return lift(net, ldlt.solve(rhs));
}

double green_kernel(const ResistanceNetwork& net, int x, int y) {
  check_vertex(net, x, "green_kernel");
  return green_element(net, y)[x];
}

RealMatrix green_matrix(const ResistanceNetwork& net) {
  const int n = net.size();
  if (n == 1) return RealMatrix::Zero(1, 1);
  RealMatrix red = grounded_laplacian(net);
  Eigen::LDLT<RealMatrix> ldlt(red);
  if (ldlt.info() != Eigen::Success)
    throw CertificateError("green_matrix: grounded Laplacian solve failed",
                           0.0);
  RealMatrix inv = ldlt.solve(RealMatrix::Identity(n - 1, n - 1));
  // Symmetrize: the inverse of a symmetric matrix computed by LDLT carries
  // rounding asymmetry of order machine epsilon.
  inv = ((inv + inv.transpose()) / 2.0).eval();
  RealMatrix full = RealMatrix::Zero(n, n);
  const int b = net.base();
  for (int i = 0, ri = 0; i < n; ++i) {
    if (i == b) continue;
    for (int j = 0, rj = 0; j < n; ++j) {
      if (j == b) continue;
      full(i, j) = inv(ri, rj);
      ++rj;
    }
    ++ri;
  }
  return full;
}

Kernel green_kernel_fn(const ResistanceNetwork& net) {
  auto g = std::make_shared<RealMatrix>(green_matrix(net));
  const int n = net.size();
  return Kernel(Domain::vertex, "green(|V|=" + std::to_string(n) + ")",
                [g, n](const Point& x, const Point& y) {
                  const auto i = x.as_vertex();
                  const auto j = y.as_vertex();
                  if (i < 0 || i >= n || j < 0 || j >= n)
                    throw InputError("green kernel: vertex out of range");
                  return Complex((*g)(i, j), 0.0);
                });
}

double delta_embedding_norm(const ResistanceNetwork& net, int x) {
  check_vertex(net, x, "delta_embedding_norm");
  Vector delta = Vector::Zero(net.size());
  delta[x] = Complex(1.0, 0.0);
  const double nrm = energy_norm(net, delta);
  return nrm * nrm;
}

FeatureSystem chain_boundary(int n, int subdivisions) {
  if (n < 1) throw InputError("chain_boundary: need n >= 1");
  if (subdivisions < 1)
    throw InputError("chain_boundary: subdivisions must be positive");
  const double h = 1.0 / static_cast<double>(subdivisions);
  const int m = n * subdivisions;
  std::vector<Point> nodes;
  nodes.reserve(static_cast<std::size_t>(m));
  auto grid = std::make_shared<RealVector>(m);
  for (int j = 0; j < m; ++j) {
    const double t = static_cast<double>(j + 1) * h;
    (*grid)[j] = t;
    nodes.push_back(Point::scalar(t));
  }
  auto mu = std::make_shared<DiscreteMeasure>(std::move(nodes),
                                              RealVector::Constant(m, h));
  return FeatureSystem(
      std::move(mu), Domain::vertex,
      "chain-indicators(n=" + std::to_string(n) + ")",
      [grid, n](const Point& x) {
        const auto i = x.as_vertex();
        if (i < 0 || i > n)
          throw InputError("chain_boundary: vertex " + std::to_string(i) +
                           " outside 0.." + std::to_string(n));
        Vector v(grid->size());
        const double bound = static_cast<double>(i);
        for (Eigen::Index j = 0; j < grid->size(); ++j)
          v[j] = Complex((*grid)[j] <= bound ? 1.0 : 0.0, 0.0);
        return v;
      });
}

}  // namespace rkhs::net
