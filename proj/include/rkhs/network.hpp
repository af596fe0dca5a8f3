#pragma once

#include <vector>

#include "rkhs/boundary.hpp"
#include "rkhs/kernel.hpp"
#include "rkhs/types.hpp"

namespace rkhs::net {

struct EdgeSpec {
  int u = 0;
  int v = 0;
  double conductance = 0.0;
};

/// Finite connected resistance network with a distinguished base vertex.
///
/// Vertices are 0 .. size()-1.  Construction validates positivity of the
/// conductances, rejects self-loops and duplicate edges, and requires the
/// graph to be connected so that the grounded Laplacian stays invertible.
class ResistanceNetwork {
 public:
  ResistanceNetwork(int n_vertices, std::vector<EdgeSpec> edges, int base);

  int size() const { return n_; }
  int base() const { return base_; }
  const std::vector<EdgeSpec>& edges() const { return edges_; }

  /// Dense graph Laplacian: L(x,x) = c(x), L(x,y) = -c_xy.
  const RealMatrix& laplacian() const { return laplacian_; }

 private:
  int n_;
  int base_;
  std::vector<EdgeSpec> edges_;
  RealMatrix laplacian_;
};

/// Unit-conductance chain on vertices 0..n with base 0.
ResistanceNetwork chain(int n, double conductance = 1.0);

/// Dirichlet energy norm sqrt(sum_edges c |f(u) - f(v)|^2); each undirected
/// edge counted once.
double energy_norm(const ResistanceNetwork& net, const Vector& f);

/// Energy pairing, linear in the second argument.
Complex energy_inner(const ResistanceNetwork& net, const Vector& f,
                     const Vector& g);

/// (Delta f)(x) = sum_{y ~ x} c_xy (f(x) - f(y)).
Complex laplacian_apply(const ResistanceNetwork& net, const Vector& f, int x);

/// Total conductance c(x) at a vertex.
double conductance_degree(const ResistanceNetwork& net, int x);

/// Potential v_x with Delta v_x = delta_x - delta_base and v_x(base) = 0,
/// computed from the grounded (base row/column deleted) Laplacian solve.
RealVector green_element(const ResistanceNetwork& net, int x);

/// Green's function G(x, y) = v_y(x).
double green_kernel(const ResistanceNetwork& net, int x, int y);

/// All-pairs Green matrix; factors the grounded Laplacian once.
RealMatrix green_matrix(const ResistanceNetwork& net);

/// The Green's function as a vertex-domain Kernel (precomputes the matrix).
Kernel green_kernel_fn(const ResistanceNetwork& net);

/// Squared energy norm of the delta embedding at x; equals
/// conductance_degree(x).
double delta_embedding_norm(const ResistanceNetwork& net, int x);

/// Boundary realization of the unit chain on vertices 0..n: a uniform grid
/// quadrature of [0, n] with Lebesgue weights (right endpoints, spacing
/// 1/subdivisions) and indicator features k_i = 1_{[0, i]}.
///
/// The indicator Riemann sums telescope to the interval length, so the
/// quadrature reproduces min(i, j) at integer points bit-for-bit whenever
/// the spacing is an exact dyadic (subdivisions a power of two), and to
/// within a few ulps otherwise.
FeatureSystem chain_boundary(int n, int subdivisions = 1);

}  // namespace rkhs::net
