#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "rkhs/boundary.hpp"
#include "rkhs/drury_arveson.hpp"
#include "rkhs/kernel.hpp"
#include "rkhs/random.hpp"
#include "rkhs/types.hpp"

using namespace rkhs;
using namespace rkhs::da;

namespace {

Vector cvec(std::initializer_list<Complex> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (Complex z : values) v[i++] = z;
  return v;
}

}  // namespace

TEST_CASE("ball points must lie strictly inside the ball") {
  CHECK_THROWS_AS(ball_point(Complex(1.0, 0.0)), InputError);
  CHECK_THROWS_AS(ball_point(Complex(0.8, 0.7)), InputError);
  CHECK_THROWS_AS(BallPoint{Vector{}}, InputError);
  const BallPoint p(cvec({Complex(0.5, 0.0), Complex(0.0, 0.5)}));
  CHECK(p.dim() == 2);
  CHECK(p.norm_squared() == doctest::Approx(0.5));
}

TEST_CASE("kernel values against hand-computed fractions") {
  // u = conj(0.5) * (0.25 + 0.25i) = 0.125 + 0.125i, so
  // K = 1/(0.875 - 0.125i) = 1.12 + 0.16i.
  const Complex v =
      da_kernel(ball_point(Complex(0.5, 0.0)), ball_point(Complex(0.25, 0.25)));
  CHECK(v.real() == doctest::Approx(1.12).epsilon(1e-15));
  CHECK(v.imag() == doctest::Approx(0.16).epsilon(1e-15));

  const Kernel k = da_kernel_fn(1);
  const Matrix g =
      gram(k, {complex_point(Complex(0, 0)), complex_point(Complex(0.5, 0))})
          .matrix();
  CHECK(g(0, 0) == Complex(1, 0));
  CHECK(g(0, 1) == Complex(1, 0));
  CHECK(g(1, 1).real() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  // Conjugate-linearity in the first slot: K(z, w) = conj(K(w, z)).
  const BallPoint z(cvec({Complex(0.3, 0.2), Complex(-0.1, 0.4)}));
  const BallPoint w(cvec({Complex(0.0, -0.5), Complex(0.25, 0.1)}));
  CHECK(da_kernel(z, w) == std::conj(da_kernel(w, z)));

  CHECK_THROWS_AS(da_kernel(z, ball_point(Complex(0.1, 0.0))), InputError);
  CHECK_THROWS_AS(k(Point::vertex(1), complex_point(0.5)), InputError);
  CHECK_THROWS_AS(da_kernel_fn(2)(complex_point(0.5), complex_point(0.5)),
                  InputError);  // dimension mismatch with k = 2
}

TEST_CASE("sphere quadratures") {
  const SphereMeasure grid = sphere_sample(1, 16, SphereMode::circle_grid);
  CHECK(grid.size() == 16);
  CHECK(grid.weight() == 1.0 / 16.0);
  CHECK(grid.nodes()[4][0] == Complex(std::cos(std::acos(-1.0) / 2),
                                      std::sin(std::acos(-1.0) / 2)));
  CHECK(grid.measure()->total_mass() == 1.0);
  CHECK_THROWS_AS(sphere_sample(2, 8, SphereMode::circle_grid), InputError);

  const SphereMeasure mc = sphere_sample(3, 100, SphereMode::monte_carlo, 4);
  for (const Vector& b : mc.nodes()) {
    CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
  const SphereMeasure mc2 = sphere_sample(3, 100, SphereMode::monte_carlo, 4);
  CHECK(mc.nodes()[99] == mc2.nodes()[99]);  // deterministic in the seed
}

TEST_CASE("boundary features put the conjugate on the node slot") {
  const SphereMeasure grid = sphere_sample(1, 8, SphereMode::circle_grid);
  const BallPoint z = ball_point(Complex(0.4, 0.3));
  const Vector f = boundary_features(z, grid);
  for (int j = 0; j < 8; ++j) {
    const Complex b = grid.nodes()[static_cast<std::size_t>(j)][0];
    CHECK(f[j] == 1.0 / (1.0 - std::conj(b) * z.z()[0]));
  }
}

TEST_CASE("circle-grid quadrature reproduces the szego kernel") {
  const SphereMeasure grid = sphere_sample(1, 128, SphereMode::circle_grid);
  const auto pts = random_ball_points(1, 20, 2, 0.49);
  for (int t = 0; t + 1 < 20; t += 2) {
    const BallPoint& z = pts[static_cast<std::size_t>(t)];
    const BallPoint& w = pts[static_cast<std::size_t>(t) + 1];
    const Complex exact = da_induced_closed_form(1, z, w);
    const Complex quad = da_induced(z, w, grid);
    CHECK(std::abs(exact - quad) <= 1e-13);
    CHECK(exact == da_kernel(z, w));
  }
}

TEST_CASE("dimension-two closed form matches its power series") {
  const BallPoint z(cvec({Complex(0.5, 0.1), Complex(-0.2, 0.3)}));
  const BallPoint w(cvec({Complex(0.1, -0.4), Complex(0.3, 0.2)}));
  const Complex u = z.z().dot(w.z());
  Complex series = 0.0;
  Complex pw = 1.0;
  for (int n = 0; n <= 80; ++n) {
    series += pw / static_cast<double>(n + 1);
    pw *= u;
  }
  CHECK(std::abs(da_induced_closed_form(2, z, w) - series) <= 1e-14);

  // Small-u branch agrees with the analytic continuation by 1 at u = 0.
  const BallPoint tiny(cvec({Complex(1e-6, 0), Complex(0, 1e-6)}));
  const BallPoint other(cvec({Complex(1e-5, 1e-6), Complex(1e-6, 0)}));
  const Complex ut = tiny.z().dot(other.z());
  const Complex val = da_induced_closed_form(2, tiny, other);
  CHECK(std::abs(val - (1.0 + ut / 2.0)) <= 1e-20);
  CHECK(da_induced_closed_form(2, tiny, tiny).real() ==
        doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(da_induced_closed_form(3, z, w), InputError);
  CHECK_THROWS_AS(da_induced_closed_form(1, z, w), InputError);
}

TEST_CASE("multi index enumeration") {
  const auto deg2 = multi_indices(2, 2);
  REQUIRE(deg2.size() == 3);
  CHECK(deg2[0] == std::vector<int>{2, 0});
  CHECK(deg2[1] == std::vector<int>{1, 1});
  CHECK(deg2[2] == std::vector<int>{0, 2});
  CHECK(multi_indices(3, 4).size() == 15);  // C(4 + 2, 2)
  CHECK(multi_indices(1, 7) == std::vector<std::vector<int>>{{7}});
}

TEST_CASE("space norms of monomials follow the factorial weights") {
  // One variable: every monomial has norm one, so norms are l2 of coeffs.
  const FockCoefficients f1 =
      FockCoefficients::one_dim(cvec({Complex(1, 0), Complex(0, 2),
                                      Complex(-3, 0)}));
  CHECK(f1.norm() == doctest::Approx(std::sqrt(14.0)).epsilon(1e-15));

  // Two variables, degree two: |z1 z2|^2 = 1/2, |z1^2|^2 = 1.
  std::vector<Vector> mixed(3);
  mixed[0] = cvec({Complex(0, 0)});
  mixed[1] = cvec({Complex(0, 0), Complex(0, 0)});
  mixed[2] = cvec({Complex(0, 0), Complex(1, 0), Complex(0, 0)});
  CHECK(FockCoefficients(2, mixed).norm() ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  mixed[2] = cvec({Complex(1, 0), Complex(0, 0), Complex(0, 0)});
  CHECK(FockCoefficients(2, mixed).norm() == doctest::Approx(1.0));

  // Degree alignment is validated.
  std::vector<Vector> bad(2);
  bad[0] = cvec({Complex(1, 0)});
  bad[1] = cvec({Complex(1, 0)});  // needs two entries for k = 2
  CHECK_THROWS_AS(FockCoefficients(2, bad), InputError);

  // Pointwise evaluation: 2 + z1 + i z2 at (0.3, 0.4i) = 1.9.
  std::vector<Vector> affine(2);
  affine[0] = cvec({Complex(2, 0)});
  affine[1] = cvec({Complex(1, 0), Complex(0, 1)});
  const FockCoefficients g(2, affine);
  const Complex gv = g.evaluate(cvec({Complex(0.3, 0), Complex(0, 0.4)}));
  CHECK(gv.real() == doctest::Approx(1.9).epsilon(1e-15));
  CHECK(gv.imag() == 0.0);
}

TEST_CASE("exact dilation norms in one variable") {
  const FockCoefficients f =
      FockCoefficients::one_dim(cvec({Complex(1, 0), Complex(0, 2),
                                      Complex(-3, 0)}));
  const auto [norm, dilated] = dilation_norms(f, 0.5);
  CHECK(norm == doctest::Approx(std::sqrt(14.0)));
  // 1 + 4/4 + 9/16 = 2.5625.
  CHECK(dilated == doctest::Approx(std::sqrt(2.5625)).epsilon(1e-15));
  CHECK(dilated <= norm);

  const auto [n1, d1] = dilation_norms(f, 1.0);
  CHECK(d1 == doctest::Approx(n1).epsilon(1e-15));
  CHECK(dilation_norms(f, 0.0).second == 1.0);  // only the constant survives

  CHECK_THROWS_AS(dilation_norms(f, 1.5), InputError);
  std::vector<Vector> two(1);
  two[0] = cvec({Complex(1, 0)});
  CHECK_THROWS_AS(dilation_norms(FockCoefficients(2, two), 0.5), InputError);
}

TEST_CASE("quadrature dilation norms agree with the exact route") {
  const FockCoefficients f = FockCoefficients::one_dim(
      cvec({Complex(0.5, 0.5), Complex(0, 2), Complex(-1, 0),
            Complex(0.25, -0.75)}));
  const SphereMeasure grid = sphere_sample(1, 64, SphereMode::circle_grid);
  for (double r : {0.0, 0.3, 0.9, 1.0}) {
    const auto [en, ed] = dilation_norms(f, r);
    const auto [qn, qd] = dilation_norms_quadrature(f, r, grid);
    CHECK(qn == doctest::Approx(en).epsilon(1e-14));
    CHECK(qd == doctest::Approx(ed).epsilon(1e-13));
  }

  // Two variables: the quadrature norm of F = z1 z2 at dilation r has
  // closed moment value r^4 * 1/6 under the sphere measure.
  std::vector<Vector> mixed(3);
  mixed[0] = cvec({Complex(0, 0)});
  mixed[1] = cvec({Complex(0, 0), Complex(0, 0)});
  mixed[2] = cvec({Complex(0, 0), Complex(1, 0), Complex(0, 0)});
  const FockCoefficients f2(2, mixed);
  const SphereMeasure mc = sphere_sample(2, 200000, SphereMode::monte_carlo,
                                         19);
  const double qd = dilation_norms_quadrature(f2, 0.8, mc).second;
  const double expected = std::sqrt(std::pow(0.8, 4) / 6.0);
  CHECK(std::abs(qd - expected) <= 5e-3);
}

TEST_CASE("sphere moment matrices") {
  // The circle grid integrates monomials of modest degree exactly: the
  // moment matrix is the identity.
  const SphereMeasure grid = sphere_sample(1, 16, SphereMode::circle_grid);
  const Matrix m1 = moment_matrix(grid, 3);
  CHECK((m1 - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(moment_injectivity(grid, 3) == doctest::Approx(1.0).epsilon(1e-14));

  // Dimension two: diagonal moments (k-1)! alpha! / (|alpha|+k-1)! for
  // degrees 0..2 are 1, 1/2, 1/2, 1/3, 1/6, 1/3; off-diagonals vanish.
  const SphereMeasure mc = sphere_sample(2, 200000, SphereMode::monte_carlo,
                                         23);
  const Matrix m2 = moment_matrix(mc, 2);
  REQUIRE(m2.rows() == 6);
  const double diag[6] = {1.0, 0.5, 0.5, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0};
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(m2(i, i).real() - diag[i]) <= 0.01);
    for (int j = 0; j < i; ++j) {
      CHECK(std::abs(m2(i, j)) <= 0.01);
    }
  }
  const double inj = moment_injectivity(mc, 2);
  CHECK(inj > 0.1);
  CHECK(inj < 0.25);
}

TEST_CASE("random ball points are deterministic and inside the ball") {
  const auto pts = random_ball_points(3, 40, 9, 0.75);
  CHECK(pts.size() == 40);
  for (const BallPoint& p : pts) {
    CHECK(p.norm_squared() <= 0.75 * 0.75 + 1e-15);
  }
  const auto again = random_ball_points(3, 40, 9, 0.75);
  CHECK(pts[17].z() == again[17].z());
  CHECK_THROWS_AS(random_ball_points(2, 4, 0, 1.5), InputError);
  CHECK_THROWS_AS(random_ball_points(0, 4, 0, 0.5), InputError);
}

TEST_CASE("order certificates for the quadrature kernels") {
  const DaOrderReport r1 = da_order_certificate(1, 6, 0, 3, 1e-10);
  CHECK(r1.dominated);
  CHECK(r1.slack == 0.0);
  CHECK(std::abs(r1.margin) <= 1e-12);  // identical kernels in dimension one

  const DaOrderReport r2 = da_order_certificate(2, 6, 0, 3, 1e-10);
  CHECK(r2.dominated);
  CHECK(r2.slack == 0.0);
  CHECK(r2.margin >= -1e-12);

  const DaOrderReport r3 = da_order_certificate(3, 4, 20000, 5, 1e-6);
  CHECK(r3.dominated);
  CHECK(r3.slack > 0.0);
  CHECK(r3.margin >= -r3.slack);
}

TEST_CASE("boundary certificates for disc and ball") {
  // Dimension one: genuine boundary through the circle grid.
  const Kernel k1 = da_kernel_fn(1);
  const SphereMeasure grid = sphere_sample(1, 128, SphereMode::circle_grid);
  const FeatureSystem fs1 = da_features(grid);
  NormalStream stream(6);
  std::vector<Point> zs;
  for (int i = 0; i < 4; ++i) {
    zs.push_back(complex_point(0.55 * stream.next_complex()));
  }
  const BoundaryCertificate c1 = certify(k1, fs1, zs, 1e-10);
  CHECK(c1.is_boundary);
  CHECK(c1.is_sub_boundary);

  // Dimension two: the quadrature kernel is strictly dominated, so the
  // certificate reports a sub-boundary that is not a boundary.
  const Kernel k2 = da_kernel_fn(2);
  const SphereMeasure mc = sphere_sample(2, 500000, SphereMode::monte_carlo,
                                         12);
  const FeatureSystem fs2 = da_features(mc);
  const std::vector<Point> ws = {
      Point::complex_vector(cvec({Complex(0.5, 0.0), Complex(0.0, 0.1)})),
      Point::complex_vector(cvec({Complex(-0.1, 0.35), Complex(0.3, 0.0)})),
      Point::complex_vector(cvec({Complex(0.0, -0.2), Complex(-0.45, 0.2)}))};
  const BoundaryCertificate c2 = certify(k2, fs2, ws, 5e-3);
  CHECK(c2.is_sub_boundary);
  CHECK_FALSE(c2.is_boundary);
  CHECK(c2.max_equality_residual > 0.01);
  CHECK(c2.ordering_margin > 0.0);
}
