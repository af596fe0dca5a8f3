// Command-line front end: every subcommand reads one JSON descriptor,
// runs the corresponding computation, and writes either a CSV matrix or a
// JSON report.  Exit codes: 0 success, 1 malformed input, 2 a requested
// certificate failed to hold.

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rkhs/boundary.hpp"
#include "rkhs/cantor.hpp"
#include "rkhs/drury_arveson.hpp"
#include "rkhs/gaussian.hpp"
#include "rkhs/kernel.hpp"
#include "rkhs/learn.hpp"
#include "rkhs/network.hpp"
#include "rkhs/random.hpp"
#include "rkhs/types.hpp"

using nlohmann::json;
using namespace rkhs;

namespace {

// ---------------------------------------------------------------------
// Descriptor plumbing
// ---------------------------------------------------------------------

struct Options {
  std::string input;
  std::string output;  // empty = stdout, no sidecar
  bool has_seed = false;
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  std::string op;
};

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) {
    throw InputError(where + " must be a JSON object");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw InputError("unknown field \"" + it.key() + "\" in " + where);
    }
  }
}

const json& need(const json& obj, const std::string& key,
                 const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw InputError("missing field \"" + key + "\" in " + where);
  }
  return *it;
}

double need_number(const json& obj, const std::string& key,
                   const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_number()) {
    throw InputError("field \"" + key + "\" in " + where +
                     " must be a number");
  }
  return v.get<double>();
}

std::int64_t need_int(const json& obj, const std::string& key,
                      const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_number_integer()) {
    throw InputError("field \"" + key + "\" in " + where +
                     " must be an integer");
  }
  return v.get<std::int64_t>();
}

std::string need_string(const json& obj, const std::string& key,
                        const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_string()) {
    throw InputError("field \"" + key + "\" in " + where +
                     " must be a string");
  }
  return v.get<std::string>();
}

double opt_number(const json& obj, const std::string& key, double fallback,
                  const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return need_number(obj, key, where);
}

std::int64_t opt_int(const json& obj, const std::string& key,
                     std::int64_t fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return need_int(obj, key, where);
}

std::uint64_t effective_seed(const json& desc, const Options& opts,
                             std::uint64_t fallback) {
  if (opts.has_seed) return opts.seed;
  if (!desc.contains("seed")) return fallback;
  const json& v = desc["seed"];
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw InputError("field \"seed\" must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double effective_tol(const json& desc, const Options& opts, double fallback) {
  const double base = opt_number(desc, "tol", fallback, "the descriptor");
  if (!(base >= 0.0)) {
    throw InputError("field \"tol\" must be nonnegative");
  }
  return base * opts.tol_scale;
}

Complex parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw InputError(where + " must be a [re, im] pair of numbers");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Vector parse_cvec(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw InputError(where + " must be a nonempty array of [re, im] pairs");
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] =
        parse_complex(j[i], where + ", coordinate " + std::to_string(i));
  }
  return v;
}

// ---------------------------------------------------------------------
// Kernel / point / boundary specs
// ---------------------------------------------------------------------

Kernel parse_kernel(const json& spec) {
  const std::string where = "the kernel spec";
  if (!spec.is_object()) throw InputError(where + " must be a JSON object");
  const std::string family = need_string(spec, "family", where);
  if (family == "min") {
    check_keys(spec, {"family"}, where);
    return min_kernel();
  }
  if (family == "da") {
    check_keys(spec, {"family", "k"}, where);
    return da::da_kernel_fn(static_cast<int>(need_int(spec, "k", where)));
  }
  if (family == "chain-green") {
    check_keys(spec, {"family", "n", "conductance"}, where);
    const int n = static_cast<int>(need_int(spec, "n", where));
    const double c = opt_number(spec, "conductance", 1.0, where);
    return net::green_kernel_fn(net::chain(n, c));
  }
  if (family == "cantor-lambda4") {
    check_keys(spec, {"family", "depth"}, where);
    return cantor::k_lambda4_fn(
        static_cast<int>(need_int(spec, "depth", where)));
  }
  if (family == "scaled") {
    check_keys(spec, {"family", "factor", "base"}, where);
    return scaled_kernel(parse_kernel(need(spec, "base", where)),
                         need_number(spec, "factor", where));
  }
  throw InputError("unknown kernel family \"" + family + "\"");
}

std::vector<Point> parse_points(const json& spec) {
  const std::string where = "the points spec";
  if (!spec.is_object()) throw InputError(where + " must be a JSON object");
  const std::string type = need_string(spec, "type", where);
  if (type == "vertices") {
    check_keys(spec, {"type", "values"}, where);
    const json& vals = need(spec, "values", where);
    if (!vals.is_array() || vals.empty()) {
      throw InputError("\"values\" must be a nonempty array of integers");
    }
    std::vector<Point> out;
    out.reserve(vals.size());
    for (const json& v : vals) {
      if (!v.is_number_integer()) {
        throw InputError("\"values\" must contain integers only");
      }
      out.push_back(Point::vertex(v.get<std::int64_t>()));
    }
    return out;
  }
  if (type == "vertex-range") {
    check_keys(spec, {"type", "from", "to"}, where);
    return vertex_range(need_int(spec, "from", where),
                        need_int(spec, "to", where));
  }
  if (type == "complex") {
    check_keys(spec, {"type", "values"}, where);
    const json& vals = need(spec, "values", where);
    if (!vals.is_array() || vals.empty()) {
      throw InputError(
          "\"values\" must be a nonempty array of points; each point is an "
          "array of [re, im] coordinate pairs");
    }
    std::vector<Point> out;
    out.reserve(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      out.push_back(Point::complex_vector(
          parse_cvec(vals[i], "point " + std::to_string(i))));
    }
    return out;
  }
  if (type == "random-ball") {
    check_keys(spec, {"type", "k", "n", "seed", "max_norm"}, where);
    const int k = static_cast<int>(need_int(spec, "k", where));
    const int n = static_cast<int>(need_int(spec, "n", where));
    const auto seed =
        static_cast<std::uint64_t>(opt_int(spec, "seed", 0, where));
    const double max_norm = opt_number(spec, "max_norm", 0.9, where);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(n));
    for (const auto& p : da::random_ball_points(k, n, seed, max_norm)) {
      out.push_back(Point::complex_vector(p.z()));
    }
    return out;
  }
  throw InputError("unknown points type \"" + type + "\"");
}

struct BoundarySetup {
  Kernel kernel;
  FeatureSystem features;
};

// A boundary spec names a quadrature family; it must be compatible with the
// kernel family it is meant to realize.
BoundarySetup parse_boundary(const json& kspec, const json& mspec) {
  const std::string where = "the measure spec";
  if (!mspec.is_object()) throw InputError(where + " must be a JSON object");
  const std::string family = need_string(mspec, "family", where);
  const std::string kfamily = need_string(kspec, "family", "the kernel spec");

  if (family == "circle-grid" || family == "sphere-mc") {
    if (kfamily != "da") {
      throw InputError("measure family \"" + family +
                       "\" realizes kernels of family \"da\" only");
    }
    const int k = static_cast<int>(need_int(kspec, "k", "the kernel spec"));
    if (family == "circle-grid") {
      check_keys(mspec, {"family", "m"}, where);
      const int m = static_cast<int>(need_int(mspec, "m", where));
      return {parse_kernel(kspec),
              da::da_features(da::sphere_sample(
                  k, m, da::SphereMode::circle_grid))};
    }
    check_keys(mspec, {"family", "m", "seed"}, where);
    const int m = static_cast<int>(need_int(mspec, "m", where));
    const auto seed =
        static_cast<std::uint64_t>(opt_int(mspec, "seed", 0, where));
    return {parse_kernel(kspec),
            da::da_features(da::sphere_sample(
                k, m, da::SphereMode::monte_carlo, seed))};
  }
  if (family == "chain-grid") {
    check_keys(mspec, {"family", "n", "subdivisions"}, where);
    const int n = static_cast<int>(need_int(mspec, "n", where));
    const int s = static_cast<int>(opt_int(mspec, "subdivisions", 1, where));
    if (kfamily == "chain-green") {
      const int kn = static_cast<int>(need_int(kspec, "n", "the kernel spec"));
      if (kn != n) {
        throw InputError("chain-grid length " + std::to_string(n) +
                         " does not match chain-green length " +
                         std::to_string(kn));
      }
    } else if (kfamily != "min") {
      throw InputError(
          "measure family \"chain-grid\" realizes kernel families \"min\" "
          "and \"chain-green\" only");
    }
    return {parse_kernel(kspec), net::chain_boundary(n, s)};
  }
  if (family == "cantor") {
    check_keys(mspec, {"family", "level"}, where);
    if (kfamily != "cantor-lambda4") {
      throw InputError(
          "measure family \"cantor\" realizes kernel family "
          "\"cantor-lambda4\" only");
    }
    const int level = static_cast<int>(need_int(mspec, "level", where));
    const int depth =
        static_cast<int>(need_int(kspec, "depth", "the kernel spec"));
    return {parse_kernel(kspec),
            cantor::cantor_features(depth, cantor::cantor_nodes(level))};
  }
  throw InputError("unknown measure family \"" + family + "\"");
}

// ---------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json cvec_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v[i]));
  return out;
}

std::string format_g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_matrix(const Matrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_g17(m(i, j).real());
      out += ',';
      out += format_g17(m(i, j).imag());
    }
    out += '\n';
  }
  return out;
}

void write_sidecar(const Options& opts) {
  if (opts.output.empty()) return;
  json meta;
  char stamp[32];
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  meta["generated_at"] = stamp;
  meta["op"] = opts.op;
  meta["input"] = opts.input;
  if (opts.has_seed) meta["seed_override"] = opts.seed;
  meta["tol_scale"] = opts.tol_scale;
  std::ofstream f(opts.output + ".meta.json");
  if (!f) {
    throw InputError("cannot write sidecar next to " + opts.output);
  }
  f << meta.dump(2) << '\n';
}

void emit(const Options& opts, const std::string& payload) {
  if (opts.output.empty()) {
    std::cout << payload;
  } else {
    std::ofstream f(opts.output);
    if (!f) {
      throw InputError("cannot open output file " + opts.output);
    }
    f << payload;
    write_sidecar(opts);
  }
}

void emit_json(const Options& opts, const json& report) {
  emit(opts, report.dump(2) + "\n");
}

// ---------------------------------------------------------------------
// Subcommand runners (return the process exit code)
// ---------------------------------------------------------------------

int run_gram(const json& d, const Options& opts) {
  check_keys(d, {"op", "kernel", "points"}, "the descriptor");
  const Kernel k = parse_kernel(need(d, "kernel", "the descriptor"));
  const auto pts = parse_points(need(d, "points", "the descriptor"));
  emit(opts, csv_matrix(gram(k, pts).matrix()));
  return 0;
}

int run_order_check(const json& d, const Options& opts) {
  check_keys(d, {"op", "lower", "upper", "points", "tol"}, "the descriptor");
  const Kernel lo = parse_kernel(need(d, "lower", "the descriptor"));
  const Kernel hi = parse_kernel(need(d, "upper", "the descriptor"));
  const auto pts = parse_points(need(d, "points", "the descriptor"));
  const double tol = effective_tol(d, opts, 1e-10);
  const OrderCertificate cert = kernel_leq(lo, hi, pts, tol);
  json report;
  report["op"] = "order-check";
  report["dominated"] = cert.dominated;
  report["margin"] = cert.margin;
  report["bound"] = cert.bound;
  emit_json(opts, report);
  return cert.dominated ? 0 : 2;
}

int run_boundary_certify(const json& d, const Options& opts) {
  check_keys(d, {"op", "kernel", "measure", "points", "tol"},
             "the descriptor");
  const BoundarySetup setup = parse_boundary(
      need(d, "kernel", "the descriptor"), need(d, "measure", "the descriptor"));
  const auto pts = parse_points(need(d, "points", "the descriptor"));
  const double tol = effective_tol(d, opts, 1e-8);
  const BoundaryCertificate cert =
      certify(setup.kernel, setup.features, pts, tol);
  json report;
  report["op"] = "boundary-certify";
  report["is_boundary"] = cert.is_boundary;
  report["is_sub_boundary"] = cert.is_sub_boundary;
  report["max_equality_residual"] = cert.max_equality_residual;
  report["ordering_margin"] = cert.ordering_margin;
  report["tol"] = tol;
  emit_json(opts, report);
  return cert.is_sub_boundary ? 0 : 2;
}

int run_adjoint_check(const json& d, const Options& opts) {
  check_keys(d, {"op", "kernel", "measure", "points", "trials", "tol", "seed"},
             "the descriptor");
  const BoundarySetup setup = parse_boundary(
      need(d, "kernel", "the descriptor"), need(d, "measure", "the descriptor"));
  const auto pts = parse_points(need(d, "points", "the descriptor"));
  const int trials =
      static_cast<int>(opt_int(d, "trials", 20, "the descriptor"));
  const double tol = effective_tol(d, opts, 1e-10);
  const std::uint64_t seed = effective_seed(d, opts, 0);
  const double max_residual =
      verify_adjoint(setup.features, pts, trials, tol, seed);
  json report;
  report["op"] = "adjoint-check";
  report["max_residual"] = max_residual;
  report["trials"] = trials;
  report["tol"] = tol;
  report["passed"] = true;
  emit_json(opts, report);
  return 0;
}

int run_frame(const json& d, const Options& opts) {
  check_keys(d, {"op", "kernel", "measure", "points"}, "the descriptor");
  const BoundarySetup setup = parse_boundary(
      need(d, "kernel", "the descriptor"), need(d, "measure", "the descriptor"));
  const auto pts = parse_points(need(d, "points", "the descriptor"));
  const ParsevalFrame frame = parseval_frame(setup.kernel, pts, setup.features);
  json report;
  report["op"] = "frame";
  report["rank"] = frame.rank;
  report["n_points"] = pts.size();
  report["n_nodes"] = frame.vectors.size();
  json vecs = json::array();
  for (const RkhsElement& v : frame.vectors) {
    vecs.push_back(cvec_json(v.coefficients()));
  }
  report["vectors"] = vecs;
  emit_json(opts, report);
  return 0;
}

int run_gp_sample(const json& d, const Options& opts) {
  check_keys(d, {"op", "kernel", "points", "n", "seed"}, "the descriptor");
  const Kernel k = parse_kernel(need(d, "kernel", "the descriptor"));
  const auto pts = parse_points(need(d, "points", "the descriptor"));
  const int n = static_cast<int>(need_int(d, "n", "the descriptor"));
  const std::uint64_t seed = effective_seed(d, opts, 0);
  emit(opts, csv_matrix(sample_gp(k, pts, n, seed)));
  return 0;
}

int run_ito_check(const json& d, const Options& opts) {
  check_keys(d, {"op", "kernel", "measure", "points", "n", "seed"},
             "the descriptor");
  const BoundarySetup setup = parse_boundary(
      need(d, "kernel", "the descriptor"), need(d, "measure", "the descriptor"));
  const auto pts = parse_points(need(d, "points", "the descriptor"));
  const int n = static_cast<int>(need_int(d, "n", "the descriptor"));
  const std::uint64_t seed = effective_seed(d, opts, 0);
  const DisintegrationReport rep =
      disintegration_check(setup.features, pts, n, seed);
  json report;
  report["op"] = "ito-check";
  report["n_samples"] = n;
  report["max_error"] = rep.max_error;
  report["max_bound"] = rep.max_bound;
  report["within_bound"] = rep.within_bound;
  emit_json(opts, report);
  return rep.within_bound ? 0 : 2;
}

int run_da_induced(const json& d, const Options& opts) {
  check_keys(d, {"op", "k", "z", "w", "m", "mode", "seed", "tol"},
             "the descriptor");
  const int k = static_cast<int>(need_int(d, "k", "the descriptor"));
  const da::BallPoint z(parse_cvec(need(d, "z", "the descriptor"), "\"z\""));
  const da::BallPoint w(parse_cvec(need(d, "w", "the descriptor"), "\"w\""));
  const int m = static_cast<int>(need_int(d, "m", "the descriptor"));
  const std::string mode = need_string(d, "mode", "the descriptor");
  const std::uint64_t seed = effective_seed(d, opts, 0);
  const double tol = effective_tol(d, opts, 1e-6);

  da::SphereMode sphere_mode;
  if (mode == "circle-grid") {
    sphere_mode = da::SphereMode::circle_grid;
  } else if (mode == "monte-carlo") {
    sphere_mode = da::SphereMode::monte_carlo;
  } else {
    throw InputError("field \"mode\" must be \"circle-grid\" or "
                     "\"monte-carlo\"");
  }
  const da::SphereMeasure sphere = da::sphere_sample(k, m, sphere_mode, seed);
  const Complex closed = da::da_induced_closed_form(k, z, w);
  const Complex quad = da::da_induced(z, w, sphere);
  const double error = std::abs(closed - quad);
  json report;
  report["op"] = "da-induced";
  report["closed_form"] = complex_json(closed);
  report["quadrature"] = complex_json(quad);
  report["error"] = error;
  report["tol"] = tol;
  report["passed"] = error <= tol;
  emit_json(opts, report);
  return error <= tol ? 0 : 2;
}

int run_da_dilation(const json& d, const Options& opts) {
  check_keys(d, {"op", "coefficients", "r"}, "the descriptor");
  const Vector coeffs =
      parse_cvec(need(d, "coefficients", "the descriptor"), "\"coefficients\"");
  const double r = need_number(d, "r", "the descriptor");
  const auto [norm, dilated] =
      da::dilation_norms(da::FockCoefficients::one_dim(coeffs), r);
  json report;
  report["op"] = "da-dilation";
  report["r"] = r;
  report["norm"] = norm;
  report["dilated_norm"] = dilated;
  const bool contracts = dilated <= norm;
  report["contracts"] = contracts;
  emit_json(opts, report);
  return contracts ? 0 : 2;
}

int run_network_green(const json& d, const Options& opts) {
  check_keys(d, {"op", "chain", "conductance", "vertices", "edges", "base"},
             "the descriptor");
  if (d.contains("chain")) {
    check_keys(d, {"op", "chain", "conductance"}, "the descriptor");
    const int n = static_cast<int>(need_int(d, "chain", "the descriptor"));
    const double c = opt_number(d, "conductance", 1.0, "the descriptor");
    emit(opts, csv_matrix(net::green_matrix(net::chain(n, c)).cast<Complex>()));
    return 0;
  }
  check_keys(d, {"op", "vertices", "edges", "base"}, "the descriptor");
  const int n = static_cast<int>(need_int(d, "vertices", "the descriptor"));
  const int base =
      static_cast<int>(opt_int(d, "base", 0, "the descriptor"));
  const json& edges = need(d, "edges", "the descriptor");
  if (!edges.is_array() || edges.empty()) {
    throw InputError("\"edges\" must be a nonempty array of [u, v, "
                     "conductance] triples");
  }
  std::vector<net::EdgeSpec> es;
  es.reserve(edges.size());
  for (const json& e : edges) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || !e[2].is_number()) {
      throw InputError("each edge must be a [u, v, conductance] triple");
    }
    es.push_back(net::EdgeSpec{static_cast<int>(e[0].get<std::int64_t>()),
                               static_cast<int>(e[1].get<std::int64_t>()),
                               e[2].get<double>()});
  }
  const net::ResistanceNetwork network(n, std::move(es), base);
  emit(opts, csv_matrix(net::green_matrix(network).cast<Complex>()));
  return 0;
}

int run_cantor_spectral(const json& d, const Options& opts) {
  check_keys(d, {"op", "depth", "level", "tol"}, "the descriptor");
  const int depth = static_cast<int>(need_int(d, "depth", "the descriptor"));
  const int level = static_cast<int>(need_int(d, "level", "the descriptor"));
  const double tol = effective_tol(d, opts, 1e-10);
  const Matrix g = cantor::spectral_gram(cantor::cantor_nodes(level),
                                         cantor::lambda4(depth));
  const Matrix dev =
      g - Matrix::Identity(g.rows(), g.cols());
  const double deviation = dev.cwiseAbs().maxCoeff();
  json report;
  report["op"] = "cantor-spectral";
  report["size"] = g.rows();
  report["deviation"] = deviation;
  report["tol"] = tol;
  report["passed"] = deviation <= tol;
  emit_json(opts, report);
  return deviation <= tol ? 0 : 2;
}

int run_cantor_identity(const json& d, const Options& opts) {
  check_keys(d, {"op", "depth", "level", "z1", "z2", "tol"},
             "the descriptor");
  const int depth = static_cast<int>(need_int(d, "depth", "the descriptor"));
  const int level = static_cast<int>(need_int(d, "level", "the descriptor"));
  const Complex z1 = parse_complex(need(d, "z1", "the descriptor"), "\"z1\"");
  const Complex z2 = parse_complex(need(d, "z2", "the descriptor"), "\"z2\"");
  const double tol = effective_tol(d, opts, 1e-10);
  const cantor::BoundaryIdentityResult res =
      cantor::boundary_identity(z1, z2, depth, level);
  json report;
  report["op"] = "cantor-identity";
  report["induced"] = complex_json(res.induced);
  report["direct"] = complex_json(res.direct);
  report["residual"] = res.residual;
  report["tol"] = tol;
  report["passed"] = res.residual <= tol;
  emit_json(opts, report);
  return res.residual <= tol ? 0 : 2;
}

TrainingSet parse_training(const json& d) {
  const auto pts = parse_points(need(d, "points", "the descriptor"));
  const json& tj = need(d, "targets", "the descriptor");
  if (!tj.is_array() || tj.size() != pts.size()) {
    throw InputError("\"targets\" must list one [re, im] pair per point");
  }
  Vector targets(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < tj.size(); ++i) {
    targets[static_cast<Eigen::Index>(i)] =
        parse_complex(tj[i], "target " + std::to_string(i));
  }
  RealVector weights = RealVector::Ones(targets.size());
  if (d.contains("weights")) {
    const json& wj = d["weights"];
    if (!wj.is_array() || wj.size() != pts.size()) {
      throw InputError("\"weights\" must list one number per point");
    }
    for (std::size_t i = 0; i < wj.size(); ++i) {
      if (!wj[i].is_number()) {
        throw InputError("\"weights\" must contain numbers only");
      }
      weights[static_cast<Eigen::Index>(i)] = wj[i].get<double>();
    }
  }
  return TrainingSet(pts, std::move(weights), std::move(targets));
}

int run_fit(const json& d, const Options& opts) {
  check_keys(d, {"op", "kernel", "points", "targets", "weights", "beta"},
             "the descriptor");
  const Kernel k = parse_kernel(need(d, "kernel", "the descriptor"));
  const TrainingSet data = parse_training(d);
  const double beta = need_number(d, "beta", "the descriptor");
  const FitResult fitres = fit(k, data, beta);
  json report;
  report["op"] = "fit";
  report["beta"] = beta;
  report["coefficients"] = cvec_json(fitres.f.coefficients());
  report["objective"] = fitres.objective;
  report["gradient_norm"] = fitres.gradient_norm;
  report["residual"] = cvec_json(fitres.residual);
  emit_json(opts, report);
  return 0;
}

int run_stationarity(const json& d, const Options& opts) {
  check_keys(d,
             {"op", "kernel", "points", "targets", "weights", "beta",
              "directions", "eps", "seed"},
             "the descriptor");
  const Kernel k = parse_kernel(need(d, "kernel", "the descriptor"));
  const TrainingSet data = parse_training(d);
  const double beta = need_number(d, "beta", "the descriptor");
  const int directions =
      static_cast<int>(opt_int(d, "directions", 8, "the descriptor"));
  const double eps = opt_number(d, "eps", 1e-4, "the descriptor");
  const std::uint64_t seed = effective_seed(d, opts, 0);
  const FitResult fitres = fit(k, data, beta);
  const StationarityReport rep =
      stationarity_check(k, data, beta, fitres.f, directions, eps, seed);
  json report;
  report["op"] = "stationarity";
  report["beta"] = beta;
  report["objective"] = fitres.objective;
  report["max_directional_derivative"] = rep.max_directional_derivative;
  report["threshold"] = rep.threshold;
  report["stationary"] = rep.stationary;
  emit_json(opts, report);
  return rep.stationary ? 0 : 2;
}

// ---------------------------------------------------------------------

using Runner = std::function<int(const json&, const Options&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"gram", run_gram},
      {"order-check", run_order_check},
      {"boundary-certify", run_boundary_certify},
      {"adjoint-check", run_adjoint_check},
      {"frame", run_frame},
      {"gp-sample", run_gp_sample},
      {"ito-check", run_ito_check},
      {"da-induced", run_da_induced},
      {"da-dilation", run_da_dilation},
      {"network-green", run_network_green},
      {"cantor-spectral", run_cantor_spectral},
      {"cantor-identity", run_cantor_identity},
      {"fit", run_fit},
      {"stationarity", run_stationarity},
  };
  return table;
}

int dispatch(const Options& opts) {
  std::ifstream in(opts.input);
  if (!in) {
    throw InputError("cannot open descriptor file " + opts.input);
  }
  json desc;
  try {
    desc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("descriptor is not valid JSON: ") + e.what());
  }
  if (!desc.is_object()) {
    throw InputError("the descriptor must be a JSON object");
  }
  const std::string op = need_string(desc, "op", "the descriptor");
  if (op != opts.op) {
    throw InputError("descriptor op \"" + op +
                     "\" does not match subcommand \"" + opts.op + "\"");
  }
  return runners().at(opts.op)(desc, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Reproducing-kernel toolbox: Gram matrices, boundary certificates, "
      "frames, Gaussian sampling and kernel regression"};
  app.require_subcommand(1);

  Options opts;
  std::int64_t seed_arg = -1;

  for (const auto& [name, runner] : runners()) {
    (void)runner;
    CLI::App* sub = app.add_subcommand(name, "run the \"" + name +
                                                 "\" descriptor");
    sub->add_option("--input", opts.input, "JSON descriptor file")
        ->required();
    sub->add_option("--output", opts.output,
                    "output file (stdout if omitted); a .meta.json sidecar "
                    "with the timestamp is written next to it");
    sub->add_option("--seed", seed_arg,
                    "override the descriptor's top-level seed");
    sub->add_option("--tol", opts.tol_scale,
                    "multiplicative scale applied to the descriptor "
                    "tolerance");
    sub->callback([&opts, name = name]() { opts.op = name; });
  }

  CLI11_PARSE(app, argc, argv);

  if (seed_arg >= 0) {
    opts.has_seed = true;
    opts.seed = static_cast<std::uint64_t>(seed_arg);
  }

  try {
    return dispatch(opts);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const CertificateError& e) {
    std::cerr << "certificate error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  }
}
