#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "rkhs/drury_arveson.hpp"
#include "rkhs/learn.hpp"
#include "rkhs/network.hpp"
#include "rkhs/random.hpp"
#include "rkhs/types.hpp"

using namespace rkhs;

namespace {

TrainingSet chain_data() {
  std::vector<Point> pts = vertex_range(1, 5);
  RealVector w(5);
  w << 1.0, 0.5, 2.0, 1.0, 0.25;
  Vector psi(5);
  psi << Complex(1.0, 0.0), Complex(0.5, -0.5), Complex(-1.0, 2.0),
      Complex(0.0, 1.0), Complex(3.0, 0.0);
  return TrainingSet(pts, w, psi);
}

}  // namespace

TEST_CASE("training set validation") {
  std::vector<Point> pts = vertex_range(1, 3);
  RealVector w = RealVector::Ones(3);
  Vector psi = Vector::Ones(3);

  CHECK_NOTHROW(TrainingSet(pts, w, psi));
  CHECK_THROWS_AS(TrainingSet(pts, RealVector::Ones(2), psi), InputError);
  CHECK_THROWS_AS(TrainingSet(pts, w, Vector::Ones(4)), InputError);

  RealVector bad = w;
  bad(1) = 0.0;
  CHECK_THROWS_AS(TrainingSet(pts, bad, psi), InputError);
  bad(1) = -1.0;
  CHECK_THROWS_AS(TrainingSet(pts, bad, psi), InputError);
  bad(1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(TrainingSet(pts, bad, psi), InputError);

  Vector nan_psi = psi;
  nan_psi(0) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(TrainingSet(pts, w, nan_psi), InputError);
}

TEST_CASE("one-sample fit matches the scalar closed form") {
  // With a single sample the normal equations collapse to
  // c = w psi / (beta + w K(x, x)).
  const Kernel k = min_kernel();
  const Point x = Point::vertex(3);  // K(x, x) = 3
  const double w = 2.0;
  const Complex psi(1.0, -2.0);
  const double beta = 0.5;

  TrainingSet data({x}, RealVector::Constant(1, w), Vector::Constant(1, psi));
  const FitResult r = fit(k, data, beta);

  const Complex expected = w * psi / (beta + w * 3.0);
  CHECK(std::abs(r.f.coefficients()(0) - expected) <= 1e-15);

  // Objective at the optimum, assembled independently.
  const Complex fx = expected * 3.0;
  const double q = w * std::norm(psi - fx) + beta * std::norm(expected) * 3.0;
  CHECK(r.objective == doctest::Approx(q).epsilon(1e-12));
  CHECK(r.gradient_norm <= 1e-14 * std::max(1.0, q));
}

TEST_CASE("fit satisfies the normal equations on a chain kernel") {
  const Kernel k = min_kernel();
  const TrainingSet data = chain_data();
  const double beta = 0.1;
  const FitResult r = fit(k, data, beta);

  // Independent residual: psi_i - f(x_i) through pointwise evaluation.
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const Complex fx = r.f.evaluate(data.points()[i]);
    CHECK(std::abs(data.targets()(i) - fx - r.residual(i)) <= 1e-12);
  }

  // First-order condition beta c + W (G c - psi) = 0.
  CHECK(r.gradient_norm <= 1e-12 * std::max(1.0, r.objective));

  // The reported objective agrees with the standalone evaluator.
  CHECK(objective(k, data, beta, r.f) ==
        doctest::Approx(r.objective).epsilon(1e-12));

  // Any other coefficient vector scores strictly worse.
  std::vector<RkhsElement> rivals;
  Vector bump = r.f.coefficients();
  bump(2) += Complex(0.05, -0.02);
  rivals.emplace_back(k, data.points(), bump);
  rivals.emplace_back(k, data.points(),
                      Vector::Zero(data.size()));
  for (const RkhsElement& g : rivals) {
    CHECK(objective(k, data, beta, g) > r.objective);
  }

  CHECK_THROWS_AS(fit(k, data, 0.0), InputError);
  CHECK_THROWS_AS(fit(k, data, -1.0), InputError);
}

TEST_CASE("fit drives the gradient to zero on a holomorphic-ball kernel") {
  const Kernel k = da::da_kernel_fn(2);
  std::vector<Point> pts;
  for (const da::BallPoint& b : da::random_ball_points(2, 6, 11, 0.8)) {
    pts.push_back(Point::complex_vector(b.z()));
  }
  NormalStream stream(12);
  TrainingSet data(pts, RealVector::Ones(6), stream.complex_vector(6));

  const FitResult r = fit(k, data, 1e-3);
  CHECK(r.gradient_norm <= 1e-10 * std::max(1.0, r.objective));
  CHECK(std::isfinite(r.objective));

  // Weighted misfit alone (beta -> larger shrinks the fit toward zero).
  const FitResult heavy = fit(k, data, 10.0);
  CHECK(heavy.f.coefficients().norm() < r.f.coefficients().norm());
  CHECK(heavy.objective >= r.objective);
}

TEST_CASE("stationarity holds at the minimizer and fails off it") {
  const Kernel k = min_kernel();
  const TrainingSet data = chain_data();
  const double beta = 0.25;
  const FitResult r = fit(k, data, beta);

  const StationarityReport at_min =
      stationarity_check(k, data, beta, r.f, 8, 1e-4, 77);
  CHECK(at_min.stationary);
  CHECK(at_min.max_directional_derivative <= at_min.threshold);

  Vector off = r.f.coefficients();
  off(0) += Complex(0.1, 0.0);
  const RkhsElement g(k, data.points(), off);
  const StationarityReport away =
      stationarity_check(k, data, beta, g, 8, 1e-4, 77);
  CHECK_FALSE(away.stationary);
  CHECK(away.max_directional_derivative > 10.0 * away.threshold);

  // An element supported elsewhere still works: the probe directions live
  // on the union of its points and the data points.
  const RkhsElement h(k, {Point::vertex(7)}, Vector::Constant(1, 0.3));
  const StationarityReport elsewhere =
      stationarity_check(k, data, beta, h, 4, 1e-4, 78);
  CHECK_FALSE(elsewhere.stationary);

  CHECK_THROWS_AS(stationarity_check(k, data, beta, r.f, 0, 1e-4, 1),
                  InputError);
  CHECK_THROWS_AS(stationarity_check(k, data, beta, r.f, 4, 0.0, 1),
                  InputError);
}

TEST_CASE("objective rejects elements of a different kernel") {
  const Kernel k = min_kernel();
  const Kernel other = min_kernel();  // distinct instance, same formula
  const TrainingSet data = chain_data();
  const RkhsElement f(other, data.points(), Vector::Ones(data.size()));
  CHECK_THROWS_AS(objective(k, data, 0.1, f), InputError);
}

TEST_CASE("feature map kernels are positive and recover linear models") {
  // pi(x) = (1, x, x^2) on vertices: a rank-3 polynomial kernel.
  const Kernel k = feature_map_kernel(
      Domain::vertex, "poly-features", [](const Point& p) {
        const double v = static_cast<double>(p.as_vertex());
        Vector out(3);
        out << Complex(1.0, 0.0), Complex(v, 0.0), Complex(v * v, 0.0);
        return out;
      });

  const std::vector<Point> pts = vertex_range(0, 5);
  const GramMatrix g(k, pts);
  CHECK(is_psd(g.matrix(), 1e-12).psd);
  // K(x, y) = 1 + x y + x^2 y^2.
  CHECK(g.matrix()(2, 3).real() == doctest::Approx(1.0 + 6.0 + 36.0));
  CHECK(g.matrix()(2, 3).imag() == 0.0);

  // Targets drawn from the model itself: psi(x) = 2 - x + 0.5 x^2.  With a
  // tiny ridge the fit reproduces them almost exactly.
  Vector psi(6);
  for (int i = 0; i < 6; ++i) {
    psi(i) = Complex(2.0 - i + 0.5 * i * i, 0.0);
  }
  TrainingSet data(pts, RealVector::Ones(6), psi);
  const FitResult r = fit(k, data, 1e-10);
  CHECK(r.residual.cwiseAbs().maxCoeff() <= 1e-6);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(r.f.evaluate(pts[i]) - psi(i)) <= 1e-6);
  }

  // Feature length must be consistent across points.
  const Kernel ragged = feature_map_kernel(
      Domain::vertex, "ragged", [](const Point& p) {
        return Vector::Ones(1 + (p.as_vertex() % 2));
      });
  CHECK_THROWS_AS(ragged(Point::vertex(0), Point::vertex(1)), InputError);
}
