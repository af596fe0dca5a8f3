#include "rkhs/cantor.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <utility>

namespace rkhs::cantor {

namespace {

constexpr int kMaxDepth = 30;   // 2^30 exponents would already be absurd
constexpr int kMaxLevel = 24;   // 2^24 nodes ~ 134 MB of doubles

Complex int_power(Complex base, std::int64_t exp) {
  Complex acc = 1.0;
  Complex p = base;
  while (exp > 0) {
    if (exp & 1) acc *= p;
    p *= p;
    exp >>= 1;
  }
  return acc;
}

Complex unit_phase(double turns) {
  // exp(i 2 pi turns)
  const double a = 2.0 * std::numbers::pi * turns;
  return Complex(std::cos(a), std::sin(a));
}

}  // namespace

std::vector<std::int64_t> lambda4(int depth) {
  if (depth < 0 || depth > kMaxDepth) {
    throw InputError("depth must lie in [0, " + std::to_string(kMaxDepth) +
                     "]");
  }
  const std::size_t count = std::size_t{1} << depth;
  std::vector<std::int64_t> out;
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::int64_t value = 0;
    for (int i = 0; i < depth; ++i) {
      if (mask & (std::size_t{1} << i)) {
        value += std::int64_t{1} << (2 * i);  // 4^i
      }
    }
    out.push_back(value);
  }
  // Bit masks enumerate the sums in increasing order already (each 4^i
  // exceeds the sum of all lower powers), so no sort is needed; keep one
  // for clarity of contract.
  return out;
}

CantorQuadrature cantor_nodes(int level) {
  if (level < 0 || level > kMaxLevel) {
    throw InputError("level must lie in [0, " + std::to_string(kMaxLevel) +
                     "]");
  }
  const std::size_t count = std::size_t{1} << level;
  CantorQuadrature quad;
  quad.level = level;
  quad.weight = std::ldexp(1.0, -level);
  quad.nodes = RealVector(static_cast<Eigen::Index>(count));
  for (std::size_t j = 0; j < count; ++j) {
    double x = 0.0;
    for (int i = 1; i <= level; ++i) {
      // Bit (level - i) of j is the base-4 digit at place 4^{-i}; reading
      // the most significant bit first makes the node list ascending.
      if (j & (std::size_t{1} << (level - i))) {
        x += std::ldexp(2.0, -2 * i);  // 2 * 4^{-i}, an exact dyadic
      }
    }
    quad.nodes[static_cast<Eigen::Index>(j)] = x;
  }

  std::vector<Point> pts;
  pts.reserve(count);
  for (Eigen::Index j = 0; j < quad.nodes.size(); ++j) {
    pts.emplace_back(quad.nodes[j]);
  }
  quad.measure = std::make_shared<const DiscreteMeasure>(
      std::move(pts),
      RealVector::Constant(static_cast<Eigen::Index>(count), quad.weight));
  return quad;
}

Complex mu_hat(double xi, int n_factors) {
  if (n_factors < 1) {
    throw InputError("need at least one product factor");
  }
  double prod = 1.0;
  double scale = 0.5 * std::numbers::pi * xi;  // pi xi / (2 * 4^0)
  for (int n = 0; n < n_factors; ++n) {
    prod *= std::cos(scale);
    scale *= 0.25;
  }
  return unit_phase(xi / 3.0) * prod;
}

Complex mu_hat_quadrature(double xi, const CantorQuadrature& quad) {
  Complex acc = 0.0;
  for (Eigen::Index j = 0; j < quad.nodes.size(); ++j) {
    acc += unit_phase(xi * quad.nodes[j]);
  }
  return quad.weight * acc;
}

Matrix spectral_gram(const CantorQuadrature& quad,
                     const std::vector<std::int64_t>& lambda) {
  const Eigen::Index l = static_cast<Eigen::Index>(lambda.size());
  if (l == 0) {
    throw InputError("exponent list must not be empty");
  }
  const Eigen::Index m = quad.nodes.size();
  Matrix e(m, l);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index c = 0; c < l; ++c) {
      e(j, c) = unit_phase(
          static_cast<double>(lambda[static_cast<std::size_t>(c)]) *
          quad.nodes[j]);
    }
  }
  Matrix g = quad.weight * (e.adjoint() * e);
  return 0.5 * (g + Matrix(g.adjoint()));
}

Complex k_lambda4_series(Complex z, Complex w, int depth) {
  const Complex u = std::conj(z) * w;
  Complex acc = 0.0;
  for (std::int64_t lam : lambda4(depth)) {
    acc += int_power(u, lam);
  }
  return acc;
}

Complex k_lambda4_product(Complex z, Complex w, int depth) {
  if (depth < 0 || depth > kMaxDepth) {
    throw InputError("depth must lie in [0, " + std::to_string(kMaxDepth) +
                     "]");
  }
  const Complex u = std::conj(z) * w;
  Complex acc = 1.0;
  Complex p = u;  // u^{4^k}, advanced by two squarings per step
  for (int k = 0; k < depth; ++k) {
    acc *= 1.0 + p;
    p *= p;
    p *= p;
  }
  return acc;
}

Kernel k_lambda4_fn(int depth) {
  if (depth < 0 || depth > kMaxDepth) {
    throw InputError("depth must lie in [0, " + std::to_string(kMaxDepth) +
                     "]");
  }
  return Kernel(Domain::complex_vector,
                "cantor-lambda4(" + std::to_string(depth) + ")",
                [depth](const Point& x, const Point& y) {
                  const Vector& zx = x.as_complex_vector();
                  const Vector& zy = y.as_complex_vector();
                  if (zx.size() != 1 || zy.size() != 1) {
                    throw InputError(
                        "cantor-lambda4 expects one-dimensional points");
                  }
                  return k_lambda4_product(zx[0], zy[0], depth);
                });
}

BoundaryIdentityResult boundary_identity(Complex z1, Complex z2, int depth,
                                         int level) {
  const CantorQuadrature quad = cantor_nodes(level);
  const auto lambda = lambda4(depth);
  const Eigen::Index l = static_cast<Eigen::Index>(lambda.size());

  Vector p1(l);
  Vector p2(l);
  for (Eigen::Index c = 0; c < l; ++c) {
    const std::int64_t lam = lambda[static_cast<std::size_t>(c)];
    p1[c] = int_power(z1, lam);
    p2[c] = int_power(z2, lam);
  }

  Complex acc = 0.0;
  for (Eigen::Index j = 0; j < quad.nodes.size(); ++j) {
    Complex s1 = 0.0;
    Complex s2 = 0.0;
    for (Eigen::Index c = 0; c < l; ++c) {
      const Complex ph = unit_phase(
          -static_cast<double>(lambda[static_cast<std::size_t>(c)]) *
          quad.nodes[j]);
      s1 += p1[c] * ph;
      s2 += p2[c] * ph;
    }
    acc += std::conj(s1) * s2;
  }

  BoundaryIdentityResult result;
  result.induced = quad.weight * acc;
  result.direct = k_lambda4_product(z1, z2, depth);
  result.residual = std::abs(result.induced - result.direct);
  return result;
}

FeatureSystem cantor_features(int depth, const CantorQuadrature& quad) {
  auto lambda =
      std::make_shared<const std::vector<std::int64_t>>(lambda4(depth));
  auto nodes = std::make_shared<const RealVector>(quad.nodes);
  return FeatureSystem(
      quad.measure, Domain::complex_vector,
      "cantor boundary (depth=" + std::to_string(depth) + ")",
      [lambda, nodes](const Point& x) {
        const Vector& zv = x.as_complex_vector();
        if (zv.size() != 1) {
          throw InputError("cantor features expect one-dimensional points");
        }
        const Complex z = zv[0];
        const Eigen::Index l = static_cast<Eigen::Index>(lambda->size());
        Vector zpow(l);
        for (Eigen::Index c = 0; c < l; ++c) {
          zpow[c] = int_power(z, (*lambda)[static_cast<std::size_t>(c)]);
        }
        Vector out(nodes->size());
        for (Eigen::Index j = 0; j < nodes->size(); ++j) {
          Complex s = 0.0;
          for (Eigen::Index c = 0; c < l; ++c) {
            s += zpow[c] *
                 unit_phase(
                     -static_cast<double>((*lambda)[static_cast<std::size_t>(c)]) *
                     (*nodes)[j]);
          }
          out[j] = s;
        }
        return out;
      });
}

}  // namespace rkhs::cantor
