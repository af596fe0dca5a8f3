#include <doctest.h>

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "rkhs/boundary.hpp"
#include "rkhs/drury_arveson.hpp"
#include "rkhs/gaussian.hpp"
#include "rkhs/kernel.hpp"
#include "rkhs/network.hpp"
#include "rkhs/random.hpp"
#include "rkhs/types.hpp"

using namespace rkhs;

namespace {

std::vector<Point> ball_points(int k, int n, std::uint64_t seed) {
  std::vector<Point> out;
  for (const auto& p : da::random_ball_points(k, n, seed)) {
    out.push_back(Point::complex_vector(p.z()));
  }
  return out;
}

bool within(const Matrix& a, const Matrix& b, const RealMatrix& band) {
  return ((a - b).cwiseAbs().array() <= band.array()).all();
}

}  // namespace

TEST_CASE("real grams give real samples with the right covariance") {
  const auto pts = vertex_range(1, 5);
  const GaussianSampler sampler(min_kernel(), pts);
  CHECK(sampler.real());
  CHECK(sampler.jitter() == 0.0);

  const int n = 20000;
  const Matrix s = sampler.sample(n, 2024);
  REQUIRE(s.rows() == n);
  REQUIRE(s.cols() == 5);
  CHECK(s.imag().cwiseAbs().maxCoeff() == 0.0);

  const Matrix cov = empirical_covariance(s);
  const RealMatrix band = covariance_bound(sampler.gram(), n);
  CHECK(within(cov, sampler.gram(), band));
}

TEST_CASE("complex grams give circular samples with hermitian covariance") {
  const auto pts = ball_points(1, 4, 8);
  const Kernel k = da::da_kernel_fn(1);
  const GaussianSampler sampler(k, pts);
  CHECK_FALSE(sampler.real());

  const int n = 40000;
  const Matrix s = sampler.sample(n, 7);
  const Matrix cov = empirical_covariance(s);
  const RealMatrix band = covariance_bound(sampler.gram(), n);
  // Orientation: E[conj(V_x) V_y] = K(x, y), not its transpose.  Both the
  // value and the placement of the conjugate are checked here.
  CHECK(within(cov, sampler.gram(), band));

  // Circularity: the pseudo-covariance E[V_x V_y] of a circular complex
  // Gaussian vanishes.
  const Matrix pseudo = (s.transpose() * s) / static_cast<double>(n);
  CHECK(pseudo.cwiseAbs().maxCoeff() <= band.maxCoeff());
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto pts = vertex_range(1, 3);
  const Matrix a = sample_gp(min_kernel(), pts, 32, 5);
  const Matrix b = sample_gp(min_kernel(), pts, 32, 5);
  const Matrix c = sample_gp(min_kernel(), pts, 32, 6);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("degenerate and invalid covariances") {
  const Kernel zero = constant_kernel(0.0, Domain::vertex);
  const Matrix s = sample_gp(zero, vertex_range(0, 2), 8, 1);
  CHECK(s.cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(
      GaussianSampler(constant_kernel(-1.0, Domain::vertex),
                      vertex_range(0, 2)),
      CertificateError);

  // A duplicated point makes the Gram exactly singular; the factorization
  // copes without any jitter and the duplicated coordinates coincide.
  const std::vector<Point> dup = {Point::vertex(2), Point::vertex(2),
                                  Point::vertex(4)};
  const GaussianSampler sampler(min_kernel(), dup);
  CHECK(sampler.jitter() == 0.0);
  const Matrix t = sampler.sample(4096, 3);
  CHECK((t.col(0) - t.col(1)).cwiseAbs().maxCoeff() <= 1e-7);

  // A Gram pushed slightly below singular engages the jitter ladder.
  Matrix shifted = sampler.gram();
  shifted -= 5e-13 * Matrix::Identity(3, 3);
  const Kernel wobbly(
      Domain::vertex, "nearly-singular",
      [shifted](const Point& x, const Point& y) {
        return shifted(x.as_vertex(), y.as_vertex());
      });
  const GaussianSampler repaired(wobbly, vertex_range(0, 2));
  CHECK(repaired.jitter() > 0.0);
  CHECK(repaired.jitter() <= 1e-8 * repaired.gram().real().trace() / 3.0);
  const int n = 20000;
  const Matrix r = repaired.sample(n, 4);
  CHECK(within(empirical_covariance(r), repaired.gram(),
               covariance_bound(repaired.gram(), n)));
}

TEST_CASE("karhunen-loeve sampling matches its frame covariance") {
  // Real frame from a real Gram.
  const GramMatrix g = gram(min_kernel(), vertex_range(1, 4));
  const MercerFrame mf = mercer_frame(g);
  const int n = 20000;
  const Matrix s = kl_sample(mf.values, n, 11);
  CHECK(s.imag().cwiseAbs().maxCoeff() == 0.0);
  const Matrix cov = empirical_covariance(s);
  CHECK(within(cov, g.matrix(), covariance_bound(g.matrix(), n)));

  // Complex frame: covariance orientation is E[V_x conj(V_y)] = G(x, y).
  const Kernel k = da::da_kernel_fn(1);
  const auto pts = ball_points(1, 3, 21);
  const GramMatrix g2 = gram(k, pts);
  const MercerFrame mf2 = mercer_frame(g2);
  const Matrix s2 = kl_sample(mf2.values, 2 * n, 13);
  const Matrix cov2 =
      (s2.transpose() * s2.conjugate()) / static_cast<double>(2 * n);
  CHECK(within(cov2, g2.matrix(), covariance_bound(g2.matrix(), 2 * n)));
}

TEST_CASE("covariance bound values") {
  Matrix g(2, 2);
  g << Complex(4, 0), Complex(1, 1), Complex(1, -1), Complex(9, 0);
  const RealMatrix band = covariance_bound(g, 100);
  CHECK(band(0, 0) == doctest::Approx(5.0 * std::sqrt(32.0 / 100.0)));
  CHECK(band(0, 1) == doctest::Approx(5.0 * std::sqrt(38.0 / 100.0)));
  CHECK(covariance_bound(g, 100, 2.0)(0, 0) ==
        doctest::Approx(2.0 * std::sqrt(32.0 / 100.0)));
}

TEST_CASE("wiener increments and ito integrals") {
  const FeatureSystem fs = net::chain_boundary(4, 2);
  const WienerDiscretization w = wiener_increments(fs.measure_ptr(), 9);
  REQUIRE(w.z.size() == 8);
  for (Eigen::Index j = 0; j < w.z.size(); ++j) {
    CHECK(w.increments[j] ==
          std::sqrt(fs.measure().weights()[j]) * w.z[j]);
  }
  const WienerDiscretization w2 = wiener_increments(fs.measure_ptr(), 9);
  CHECK(w.z == w2.z);

  // The integral of a node indicator is exactly that increment.
  Vector e3 = Vector::Zero(8);
  e3[3] = Complex(1.0, 0.0);
  CHECK(ito_integral(e3, w) == Complex(w.increments[3], 0.0));

  // Ito isometry, checked empirically with real integrands: the bound
  // formula is exact for jointly Gaussian real pairs.
  NormalStream gen(31);
  const Vector u = gen.real_vector(8).cast<Complex>();
  const Vector v = gen.real_vector(8).cast<Complex>();
  const int n = 20000;
  Complex acc = 0.0;
  for (int s = 0; s < n; ++s) {
    const WienerDiscretization ws =
        wiener_increments(fs.measure_ptr(), NormalStream::substream(100, s));
    acc += std::conj(ito_integral(u, ws)) * ito_integral(v, ws);
  }
  acc /= static_cast<double>(n);
  const Complex expected = l2_inner(fs.measure(), u, v);
  const double uu = l2_inner(fs.measure(), u, u).real();
  const double vv = l2_inner(fs.measure(), v, v).real();
  const double band =
      5.0 * std::sqrt((uu * vv + std::norm(expected)) / n);
  CHECK(std::abs(acc - expected) <= band);
}

TEST_CASE("disintegration: ito integrals of features have the induced gram") {
  const FeatureSystem fs = net::chain_boundary(4, 2);
  const auto pts = vertex_range(0, 4);
  const DisintegrationReport rep = disintegration_check(fs, pts, 20000, 5);
  CHECK(rep.within_bound);
  CHECK(rep.max_error <= rep.max_bound);
  // The expected matrix is the induced Gram, here exactly min(i, j).
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; j <= 4; ++j) {
      CHECK(rep.expected(i, j) ==
            Complex(static_cast<double>(std::min(i, j)), 0.0));
    }
  }

  // Complex features over the circle grid.
  const auto sphere = da::sphere_sample(1, 32, da::SphereMode::circle_grid);
  const FeatureSystem dafs = da::da_features(sphere);
  const auto zs = ball_points(1, 3, 77);
  const DisintegrationReport rep2 = disintegration_check(dafs, zs, 30000, 15);
  CHECK(rep2.within_bound);
}

TEST_CASE("set kernel equals the measure of the intersection") {
  RealVector w(4);
  w << 0.5, 0.25, 0.125, 2.0;
  auto mu = std::make_shared<const DiscreteMeasure>(
      std::vector<Point>{Point::scalar(0), Point::scalar(1), Point::scalar(2),
                         Point::scalar(3)},
      w);
  const Kernel k = set_kernel(mu);
  const Point a = Point::index_set({0, 1});
  const Point b = Point::index_set({1, 3});
  CHECK(k(a, b) == Complex(0.25, 0.0));
  CHECK(k(a, a) == Complex(0.75, 0.0));
  CHECK(k(a, Point::index_set({2})) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(k(a, Point::index_set({7})), InputError);
  CHECK_THROWS_AS(k(a, Point::scalar(0.5)), InputError);

  const std::vector<Point> sets = {a, b, Point::index_set({0, 1, 2, 3}),
                                   Point::index_set({2}),
                                   Point::index_set({0, 2, 3})};
  CHECK(is_psd(gram(k, sets).matrix(), 1e-12).psd);
}

TEST_CASE("set elements reproduce set values bit for bit") {
  RealVector w(5);
  w << 0.5, 0.25, 0.125, 2.0, 1.0;
  std::vector<Point> nodes;
  for (int j = 0; j < 5; ++j) nodes.push_back(Point::scalar(j));
  auto mu = std::make_shared<const DiscreteMeasure>(std::move(nodes), w);

  const SetRkhsElement ind = indicator_element(mu, {1, 3, 4});
  CHECK(set_value(ind, {0, 1, 3}) == Complex(2.25, 0.0));
  CHECK(set_norm(ind) == doctest::Approx(std::sqrt(3.25)));

  NormalStream stream(41);
  const SetRkhsElement g{mu, stream.complex_vector(5)};
  const IndexSet a = {0, 2, 3};
  // <1_A, g> = g(A) with identical arithmetic on both sides.
  CHECK(set_inner(indicator_element(mu, a), g) == set_value(g, a));
  CHECK(set_inner(g, g).real() >= 0.0);
}
