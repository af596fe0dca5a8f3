#pragma once

#include <cstdint>
#include <vector>

#include "rkhs/boundary.hpp"
#include "rkhs/kernel.hpp"
#include "rkhs/types.hpp"

namespace rkhs::cantor {

/// Exponent set Lambda_4(depth): all sums of distinct powers 4^i with
/// i < depth (binary digit patterns in base 4), sorted ascending.
/// Size 2^depth.
std::vector<std::int64_t> lambda4(int depth);

/// Level-m quadrature of the quarter-Cantor measure: the 2^m points
/// sum_{i=1..m} d_i 4^{-i} with digits d_i in {0, 2}, each carrying mass
/// 2^{-m}.  Nodes are exact dyadics and the weights sum to exactly 1.
struct CantorQuadrature {
  int level = 0;
  RealVector nodes;     // sorted ascending
  double weight = 0.0;  // common weight 2^{-level}
  MeasurePtr measure;   // the same data as a DiscreteMeasure over scalars
};

CantorQuadrature cantor_nodes(int level);

/// Fourier transform of the quarter-Cantor measure,
/// mu_hat(xi) = exp(i 2 pi xi / 3) * prod_{n=0}^{n_factors-1}
///              cos(pi xi / (2 * 4^n)).
/// The product converges superexponentially; n_factors = 32 is far past
/// double precision for any |xi| below 4^16.
Complex mu_hat(double xi, int n_factors = 32);

/// Quadrature counterpart sum_j w_j exp(i 2 pi xi theta_j).
Complex mu_hat_quadrature(double xi, const CantorQuadrature& quad);

/// Gram matrix of the exponentials {exp(i 2 pi lambda theta)} in
/// L2 of the quadrature: G(l, l') = sum_j w_j exp(i 2 pi (lambda_l' -
/// lambda_l) theta_j).  For exponents from lambda4(depth) and
/// level >= depth this is the identity in exact arithmetic.
Matrix spectral_gram(const CantorQuadrature& quad,
                     const std::vector<std::int64_t>& lambda);

/// K(z, w) = sum_{lambda in Lambda_4(depth)} (conj(z) w)^lambda, summed
/// term by term.
Complex k_lambda4_series(Complex z, Complex w, int depth);

/// The same kernel through the product identity
/// prod_{k=0}^{depth-1} (1 + u^{4^k}), u = conj(z) w.
Complex k_lambda4_product(Complex z, Complex w, int depth);

/// Kernel object over one-dimensional complex points.
Kernel k_lambda4_fn(int depth);

struct BoundaryIdentityResult {
  Complex induced = 0.0;
  Complex direct = 0.0;
  double residual = 0.0;
};

/// Checks that the boundary features s_z(theta) = sum_lambda z^lambda
/// exp(-i 2 pi lambda theta), integrated against the level-m quadrature,
/// reproduce K(z1, z2).  Exact (up to roundoff) once level >= depth.
BoundaryIdentityResult boundary_identity(Complex z1, Complex z2, int depth,
                                         int level);

/// The features above packaged as a FeatureSystem over one-dimensional
/// complex points, with the quadrature as its measure.
FeatureSystem cantor_features(int depth, const CantorQuadrature& quad);

}  // namespace rkhs::cantor
