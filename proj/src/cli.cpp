#include "liouflow/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "liouflow/classical.hpp"
#include "liouflow/ensemble.hpp"
#include "liouflow/nonmarkovian.hpp"
#include "liouflow/rng.hpp"
#include "liouflow/trajectory.hpp"

namespace liouflow::cli {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// JSON helpers with strict key checking

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) {
    throw ConfigError(where + ": expected an object");
  }
}

void require_keys(const json& j, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional, const std::string& where) {
  require_object(j, where);
  for (const auto& key : required) {
    if (!j.contains(key)) {
      throw ConfigError(where + ": missing required key '" + key + "'");
    }
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const bool known =
        std::find(required.begin(), required.end(), key) != required.end() ||
        std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number()) {
    throw ConfigError(where + ": '" + key + "' must be a number");
  }
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) {
    throw ConfigError(where + ": '" + key + "' must be finite");
  }
  return v;
}

double get_number_or(const json& j, const std::string& key, double fallback,
                     const std::string& where) {
  return j.contains(key) ? get_number(j, key, where) : fallback;
}

std::int64_t get_integer(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number_integer()) {
    throw ConfigError(where + ": '" + key + "' must be an integer");
  }
  return j.at(key).get<std::int64_t>();
}

std::int64_t get_integer_or(const json& j, const std::string& key, std::int64_t fallback,
                            const std::string& where) {
  return j.contains(key) ? get_integer(j, key, where) : fallback;
}

bool get_bool_or(const json& j, const std::string& key, bool fallback,
                 const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) {
    throw ConfigError(where + ": '" + key + "' must be a boolean");
  }
  return j.at(key).get<bool>();
}

Complex parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) {
    return Complex(j.get<double>(), 0.0);
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw ConfigError(where + ": complex entries must be a number or [re, im]");
}

ComplexMatrix parse_complex_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where + ": expected a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw ConfigError(where + ": rows must be non-empty arrays");
  }
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ConfigError(where + ": rows must all have the same length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = parse_complex(j[r][c], where);
    }
  }
  return m;
}

RealVector parse_real_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where + ": expected a non-empty array of numbers");
  }
  RealVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ConfigError(where + ": entries must be numbers");
    }
    v(Eigen::Index(i)) = j[i].get<double>();
  }
  return v;
}

RealMatrix parse_real_matrix(const json& j, const std::string& where) {
  const ComplexMatrix m = parse_complex_matrix(j, where);
  if (m.imag().cwiseAbs().maxCoeff() != 0.0) {
    throw ConfigError(where + ": matrix must be real");
  }
  return m.real();
}

// ---------------------------------------------------------------------------
// Model builders

struct QuantumModel {
  FlowField field;
  bool analytic = false;  // spin-boson family: closed form transport available
  double omega = 0.0;
  double gamma_phi = 0.0;
  double gamma = 0.0;
};

QuantumModel build_quantum_model(const json& model) {
  const std::string kind = model.at("kind").get<std::string>();
  QuantumModel out;
  if (kind == "closed-spin") {
    require_keys(model, {"kind", "omega"}, {}, "model(closed-spin)");
    out.omega = get_number(model, "omega", "model");
    out.field = spin_boson_flow(out.omega, 0.0, 0.0);
    out.analytic = true;
  } else if (kind == "spin-boson") {
    require_keys(model, {"kind", "omega", "gamma_phi", "gamma"}, {}, "model(spin-boson)");
    out.omega = get_number(model, "omega", "model");
    out.gamma_phi = get_number(model, "gamma_phi", "model");
    out.gamma = get_number(model, "gamma", "model");
    out.field = spin_boson_flow(out.omega, out.gamma_phi, out.gamma);
    out.analytic = true;
  } else if (kind == "gksl-custom") {
    require_keys(model, {"kind", "hamiltonian", "lindblad_ops"}, {}, "model(gksl-custom)");
    const ComplexMatrix h = parse_complex_matrix(model.at("hamiltonian"), "model.hamiltonian");
    if (!model.at("lindblad_ops").is_array()) {
      throw ConfigError("model.lindblad_ops: expected an array");
    }
    std::vector<LindbladTerm> terms;
    for (const auto& entry : model.at("lindblad_ops")) {
      require_keys(entry, {"matrix", "rate"}, {}, "model.lindblad_ops[]");
      terms.push_back({parse_complex_matrix(entry.at("matrix"), "model.lindblad_ops[].matrix"),
                       get_number(entry, "rate", "model.lindblad_ops[]")});
    }
    const HermitianBasis basis(int(h.rows()));
    out.field = gksl_flow(h, terms, basis);
  } else {
    throw ConfigError("model.kind '" + kind + "' is not a quantum model");
  }
  return out;
}

ClassicalFlow build_classical_flow(const json& model) {
  const std::string kind = model.at("kind").get<std::string>();
  if (kind == "classical-harmonic") {
    require_keys(model, {"kind", "mass", "omega"}, {}, "model(classical-harmonic)");
    return harmonic_flow(get_number(model, "mass", "model"),
                         get_number(model, "omega", "model"));
  }
  if (kind == "classical-damped") {
    require_keys(model, {"kind", "mass", "omega", "gamma"}, {}, "model(classical-damped)");
    return damped_harmonic_flow(get_number(model, "mass", "model"),
                                get_number(model, "omega", "model"),
                                get_number(model, "gamma", "model"));
  }
  throw ConfigError("model.kind '" + kind + "' is not a classical model");
}

CompositeModel build_composite_model(const json& model) {
  require_keys(model, {"kind", "h_sys", "h_bath", "coupling", "bath_state"},
               {"enforce_zero_mean_field"}, "model(nz-composite)");
  return CompositeModel(parse_complex_matrix(model.at("h_sys"), "model.h_sys"),
                        parse_complex_matrix(model.at("h_bath"), "model.h_bath"),
                        parse_complex_matrix(model.at("coupling"), "model.coupling"),
                        parse_complex_matrix(model.at("bath_state"), "model.bath_state"),
                        get_bool_or(model, "enforce_zero_mean_field", true, "model"));
}

TruncatedGaussian parse_gaussian(const json& j, const std::string& where) {
  require_keys(j, {"mean", "cov"}, {"truncated"}, where);
  TruncatedGaussian dist;
  const RealVector mean = parse_real_vector(j.at("mean"), where + ".mean");
  const RealMatrix cov = parse_real_matrix(j.at("cov"), where + ".cov");
  if (mean.size() != 3 || cov.rows() != 3 || cov.cols() != 3) {
    throw ConfigError(where + ": mean must be length 3 and cov 3x3");
  }
  dist.mean = mean;
  dist.cov = cov;
  dist.truncated = get_bool_or(j, "truncated", true, where);
  dist.validate();
  return dist;
}

// ---------------------------------------------------------------------------
// Output plumbing

struct OutputSink {
  std::filesystem::path dir;
  std::vector<std::pair<std::string, std::string>> checksums;  // (file, fnv)
  std::vector<std::string> files;

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
      throw ConfigError("cannot open output file: " + (dir / name).string());
    }
    out.write(content.data(), std::streamsize(content.size()));
    out.close();
    files.push_back(name);
    checksums.emplace_back(name, fnv1a64_hex(content));
  }
};

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

std::string csv_numeric_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  return csv_row(cells);
}

json json_vector(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic random states for the compressibility run

Eigen::Vector3d random_ball_point(const CounterRng& rng, std::uint64_t& counter) {
  while (true) {
    Eigen::Vector3d p;
    for (int axis = 0; axis < 3; ++axis) {
      p(axis) = 2.0 * rng.uniform(counter++) - 1.0;
    }
    if (p.norm() < 0.95) return p;
  }
}

RealVector random_interior_coords(const CounterRng& rng, std::uint64_t& counter, int dim,
                                  const HermitianBasis& basis) {
  if (dim == 2) {
    return random_ball_point(rng, counter);
  }
  // Random full-rank density: G G^dag normalized, mixed toward the identity.
  ComplexMatrix g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      double z0, z1;
      rng.normal_pair(counter++, z0, z1);
      g(r, c) = Complex(z0, z1);
    }
  }
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  rho = 0.8 * rho + 0.2 * ComplexMatrix::Identity(dim, dim) / double(dim);
  return to_coords(rho, basis);
}

// ---------------------------------------------------------------------------
// Run drivers

void run_flow_grid(const ScenarioConfig& config, OutputSink& sink) {
  require_keys(config.run, {"kind"}, {"grid_points", "extent"}, "run(flow-grid)");
  const auto grid = int(get_integer_or(config.run, "grid_points", 9, "run"));
  if (grid < 2) throw ConfigError("run.grid_points must be >= 2");

  const std::string kind = config.model.at("kind").get<std::string>();
  if (kind == "classical-harmonic" || kind == "classical-damped") {
    const ClassicalFlow flow = build_classical_flow(config.model);
    const double extent = get_number_or(config.run, "extent", 1.5, "run");
    std::string csv = csv_row({"q", "p", "qdot", "pdot"});
    for (int iq = 0; iq < grid; ++iq) {
      for (int ip = 0; ip < grid; ++ip) {
        RealVector x(2);
        x << -extent + 2.0 * extent * iq / (grid - 1),
             -extent + 2.0 * extent * ip / (grid - 1);
        const RealVector v = flow(x);
        csv += csv_numeric_row({x(0), x(1), v(0), v(1)});
      }
    }
    sink.write(config.output_prefix + "_flow_grid.csv", csv);
    return;
  }

  const QuantumModel model = build_quantum_model(config.model);
  if (model.field.dim != 2) {
    throw ConfigError("run(flow-grid): quantum flow grids require a two-level model");
  }
  const double extent = get_number_or(config.run, "extent", 1.0, "run");
  std::string csv = csv_row({"x", "y", "z", "xdot", "ydot", "zdot"});
  for (int ix = 0; ix < grid; ++ix) {
    for (int iy = 0; iy < grid; ++iy) {
      for (int iz = 0; iz < grid; ++iz) {
        RealVector c(3);
        c << -extent + 2.0 * extent * ix / (grid - 1),
             -extent + 2.0 * extent * iy / (grid - 1),
             -extent + 2.0 * extent * iz / (grid - 1);
        if (c.norm() > 1.0) continue;
        const RealVector v = model.field(c);
        csv += csv_numeric_row({c(0), c(1), c(2), v(0), v(1), v(2)});
      }
    }
  }
  sink.write(config.output_prefix + "_flow_grid.csv", csv);
}

void run_trajectory(const ScenarioConfig& config, OutputSink& sink) {
  require_keys(config.run, {"kind", "initial", "t_end", "dt"},
               {"snapshot_times", "stride"}, "run(trajectory)");
  const QuantumModel model = build_quantum_model(config.model);
  const HermitianBasis basis(model.field.dim);
  const RealVector c0 = parse_real_vector(config.run.at("initial"), "run.initial");
  if (c0.size() != model.field.linear.rows()) {
    throw ConfigError("run.initial: wrong coordinate length for the model");
  }
  const double t_end = get_number(config.run, "t_end", "run");
  const double dt = get_number(config.run, "dt", "run");
  const auto stride = std::max<std::int64_t>(1, get_integer_or(config.run, "stride", 1, "run"));

  const Trajectory traj = integrate(model.field, basis, c0, t_end, dt);

  const bool bloch = model.field.dim == 2;
  std::string csv = bloch ? csv_row({"t", "x", "y", "z", "purity"}) : std::string();
  if (!bloch) {
    std::vector<std::string> header{"t"};
    for (int k = 1; k <= int(model.field.linear.rows()); ++k) {
      header.push_back("c" + std::to_string(k));
    }
    header.push_back("purity");
    csv = csv_row(header);
  }
  for (std::size_t i = 0; i < traj.times.size(); i += std::size_t(stride)) {
    std::vector<double> row{traj.times[i]};
    for (Eigen::Index k = 0; k < traj.points[i].size(); ++k) row.push_back(traj.points[i](k));
    row.push_back(purity(from_coords(traj.points[i], basis)));
    csv += csv_numeric_row(row);
  }
  if ((traj.times.size() - 1) % std::size_t(stride) != 0) {
    std::vector<double> row{traj.times.back()};
    for (Eigen::Index k = 0; k < traj.points.back().size(); ++k) {
      row.push_back(traj.points.back()(k));
    }
    row.push_back(purity(from_coords(traj.points.back(), basis)));
    csv += csv_numeric_row(row);
  }
  sink.write(config.output_prefix + "_trajectory.csv", csv);

  if (config.run.contains("snapshot_times")) {
    const RealVector times = parse_real_vector(config.run.at("snapshot_times"),
                                               "run.snapshot_times");
    std::string snap = csv.substr(0, csv.find('\n') + 1);  // same header row
    for (Eigen::Index i = 0; i < times.size(); ++i) {
      const RealVector point = integrate_endpoint(model.field, c0, times(i), dt);
      std::vector<double> row{times(i)};
      for (Eigen::Index k = 0; k < point.size(); ++k) row.push_back(point(k));
      row.push_back(purity(from_coords(point, basis)));
      snap += csv_numeric_row(row);
    }
    sink.write(config.output_prefix + "_snapshots.csv", snap);
  }
}

void run_ensemble(const ScenarioConfig& config, OutputSink& sink) {
  require_keys(config.run, {"kind", "initial", "n", "times"},
               {"dump_samples", "dump_max", "mismatch_probes"}, "run(ensemble)");
  const QuantumModel model = build_quantum_model(config.model);
  if (!model.analytic) {
    throw ConfigError("run(ensemble): requires a closed-spin or spin-boson model");
  }
  const TruncatedGaussian dist0 = parse_gaussian(config.run.at("initial"), "run.initial");
  const auto n = std::size_t(get_integer(config.run, "n", "run"));
  if (n < 2) throw ConfigError("run.n must be >= 2");
  const RealVector times = parse_real_vector(config.run.at("times"), "run.times");
  const bool dump = get_bool_or(config.run, "dump_samples", true, "run");
  const auto dump_max = std::size_t(get_integer_or(config.run, "dump_max", 0, "run"));
  const auto probes = std::size_t(get_integer_or(config.run, "mismatch_probes", 20000, "run"));

  const SampleEnsemble ens = sample(dist0, n, config.seed);
  const Propagator prop = spin_boson_propagator(model.omega, model.gamma_phi, model.gamma);

  std::string moments = csv_row({"t", "n", "mean_x", "mean_y", "mean_z", "cov_xx", "cov_xy",
                                 "cov_xz", "cov_yy", "cov_yz", "cov_zz"});
  std::string gaussians = csv_row({"t", "mean_x", "mean_y", "mean_z", "cov_xx", "cov_xy",
                                   "cov_xz", "cov_yy", "cov_yz", "cov_zz", "support_xx",
                                   "support_yy", "support_zz", "support_mismatch"});

  for (Eigen::Index i = 0; i < times.size(); ++i) {
    const double t = times(i);
    const SampleEnsemble moved = pushforward(ens, prop, t);
    const Eigen::Vector3d mean = ensemble_mean(moved);
    const Eigen::Matrix3d cov = ensemble_covariance(moved);
    moments += csv_numeric_row({t, double(n), mean(0), mean(1), mean(2), cov(0, 0), cov(0, 1),
                                cov(0, 2), cov(1, 1), cov(1, 2), cov(2, 2)});

    const TruncatedGaussian analytic =
        propagate_gaussian(dist0, model.omega, model.gamma_phi, model.gamma, t);
    const double mismatch =
        dist0.truncated
            ? support_mismatch(dist0, model.omega, model.gamma_phi, model.gamma, t, probes,
                               config.seed + 7919 + std::uint64_t(i))
            : 0.0;
    gaussians += csv_numeric_row({t, analytic.mean(0), analytic.mean(1), analytic.mean(2),
                                  analytic.cov(0, 0), analytic.cov(0, 1), analytic.cov(0, 2),
                                  analytic.cov(1, 1), analytic.cov(1, 2), analytic.cov(2, 2),
                                  analytic.support_map(0, 0), analytic.support_map(1, 1),
                                  analytic.support_map(2, 2), mismatch});

    if (dump) {
      const std::size_t limit =
          dump_max == 0 ? moved.points.size() : std::min(dump_max, moved.points.size());
      std::string samples = csv_row({"x", "y", "z"});
      for (std::size_t k = 0; k < limit; ++k) {
        samples += csv_numeric_row({moved.points[k](0), moved.points[k](1), moved.points[k](2)});
      }
      sink.write(config.output_prefix + "_samples_" + std::to_string(i) + ".csv", samples);
    }
  }
  sink.write(config.output_prefix + "_moments.csv", moments);
  sink.write(config.output_prefix + "_gaussian.csv", gaussians);
}

void run_compressibility(const ScenarioConfig& config, OutputSink& sink) {
  require_keys(config.run, {"kind"}, {"n_points", "step"}, "run(compressibility)");
  const QuantumModel model = build_quantum_model(config.model);
  const HermitianBasis basis(model.field.dim);
  const auto n_points = int(get_integer_or(config.run, "n_points", 10, "run"));
  const double step = get_number_or(config.run, "step", 1e-5, "run");
  if (n_points < 1) throw ConfigError("run.n_points must be >= 1");

  const CounterRng rng(config.seed);
  std::uint64_t counter = 0;

  std::vector<std::string> header;
  for (int k = 1; k <= int(model.field.linear.rows()); ++k) {
    header.push_back("c" + std::to_string(k));
  }
  header.push_back("kappa_numeric");
  std::string csv = csv_row(header);

  double max_dev = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const RealVector c = random_interior_coords(rng, counter, model.field.dim, basis);
    const double numeric = compressibility_numeric(model.field, c, step);
    max_dev = std::max(max_dev, std::abs(numeric - model.field.kappa));
    std::vector<double> row;
    for (Eigen::Index k = 0; k < c.size(); ++k) row.push_back(c(k));
    row.push_back(numeric);
    csv += csv_numeric_row(row);
  }
  sink.write(config.output_prefix + "_compressibility.csv", csv);

  json report;
  report["kappa_analytic"] = model.field.kappa;
  report["max_abs_deviation"] = max_dev;
  report["n_points"] = n_points;
  report["step"] = step;
  sink.write(config.output_prefix + "_report.json", report.dump(2) + "\n");
}

void run_boundary_flux(const ScenarioConfig& config, OutputSink& sink) {
  require_keys(config.run, {"kind", "initial", "center", "radius", "t"},
               {"n", "quadrature_points", "dt_occupancy"}, "run(boundary-flux)");
  const QuantumModel model = build_quantum_model(config.model);
  if (model.field.dim != 2) {
    throw ConfigError("run(boundary-flux): requires a two-level model");
  }
  const TruncatedGaussian dist0 = parse_gaussian(config.run.at("initial"), "run.initial");
  const RealVector center = parse_real_vector(config.run.at("center"), "run.center");
  if (center.size() != 3) throw ConfigError("run.center must have length 3");

  FluxCheckOptions opts;
  opts.samples = std::size_t(get_integer_or(config.run, "n", 100000, "run"));
  opts.seed = config.seed;
  opts.quadrature_points = int(get_integer_or(config.run, "quadrature_points", 2048, "run"));
  opts.dt_occupancy = get_number_or(config.run, "dt_occupancy", 1e-2, "run");

  const FluxCheckRecord rec =
      boundary_flux_check(model.field, dist0, center, get_number(config.run, "radius", "run"),
                          get_number(config.run, "t", "run"), opts);

  json report;
  report["dpdt_mc"] = rec.dpdt_mc;
  report["surface_flux"] = rec.surface_flux;
  report["discrepancy"] = rec.discrepancy;
  report["occupancy"] = rec.occupancy;
  report["n"] = opts.samples;
  report["quadrature_points"] = opts.quadrature_points;
  report["dt_occupancy"] = opts.dt_occupancy;
  sink.write(config.output_prefix + "_fluxcheck.json", report.dump(2) + "\n");
}

void run_nz_kernel(const ScenarioConfig& config, OutputSink& sink) {
  require_keys(config.run, {"kind", "t_end", "steps"}, {"t_start", "dt_integrator"},
               "run(nz-kernel)");
  const CompositeModel model = build_composite_model(config.model);
  const double t_start = get_number_or(config.run, "t_start", 0.0, "run");
  const double t_end = get_number(config.run, "t_end", "run");
  const auto steps = int(get_integer(config.run, "steps", "run"));
  if (steps < 1) throw ConfigError("run.steps must be >= 1");
  if (t_end < t_start) throw ConfigError("run.t_end must be >= t_start");

  std::string csv = csv_row({"t", "kappa"});
  for (int i = 0; i <= steps; ++i) {
    const double t = t_start + (t_end - t_start) * double(i) / double(steps);
    csv += csv_numeric_row({t, nz_compressibility(model, t)});
  }
  sink.write(config.output_prefix + "_nz_kappa.csv", csv);
}

void run_classical(const ScenarioConfig& config, OutputSink& sink) {
  require_keys(config.run, {"kind", "initial", "t_end"},
               {"steps", "grid_points", "extent", "density"}, "run(classical)");
  const ClassicalFlow flow = build_classical_flow(config.model);
  const RealVector x0 = parse_real_vector(config.run.at("initial"), "run.initial");
  if (x0.size() != 2) throw ConfigError("run.initial must be [q, p]");
  const double t_end = get_number(config.run, "t_end", "run");
  if (t_end < 0.0) throw ConfigError("run.t_end must be >= 0");
  const auto steps = int(get_integer_or(config.run, "steps", 200, "run"));
  if (steps < 1) throw ConfigError("run.steps must be >= 1");

  PhaseGaussian dist;
  if (config.run.contains("density")) {
    const json& d = config.run.at("density");
    require_keys(d, {"mean", "cov"}, {}, "run.density");
    dist.mean = parse_real_vector(d.at("mean"), "run.density.mean");
    dist.cov = parse_real_matrix(d.at("cov"), "run.density.cov");
  } else {
    dist.mean = x0;
    dist.cov = 0.05 * RealMatrix::Identity(2, 2);
  }
  dist.validate();

  std::string traj = csv_row({"t", "q", "p", "density"});
  for (int i = 0; i <= steps; ++i) {
    const double t = t_end * double(i) / double(steps);
    const RealVector x = classical_map(flow, t)(x0);
    traj += csv_numeric_row({t, x(0), x(1), classical_density_at(dist, flow, x, t)});
  }
  sink.write(config.output_prefix + "_trajectory.csv", traj);

  const auto grid = int(get_integer_or(config.run, "grid_points", 9, "run"));
  if (grid < 2) throw ConfigError("run.grid_points must be >= 2");
  const double extent = get_number_or(config.run, "extent", 1.5, "run");
  std::string grid_csv = csv_row({"q", "p", "qdot", "pdot"});
  for (int iq = 0; iq < grid; ++iq) {
    for (int ip = 0; ip < grid; ++ip) {
      RealVector x(2);
      x << -extent + 2.0 * extent * iq / (grid - 1),
           -extent + 2.0 * extent * ip / (grid - 1);
      const RealVector v = flow(x);
      grid_csv += csv_numeric_row({x(0), x(1), v(0), v(1)});
    }
  }
  sink.write(config.output_prefix + "_flow_grid.csv", grid_csv);

  const double kappa_numeric = compressibility_numeric(
      [&flow](const RealVector& x) { return flow(x); }, x0, 1e-5);
  json report;
  report["kappa_analytic"] = flow.kappa;
  report["kappa_numeric"] = kappa_numeric;
  sink.write(config.output_prefix + "_report.json", report.dump(2) + "\n");
}

}  // namespace

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, hash);
  return std::string(buf);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return std::string(buf);
}

ScenarioConfig parse_config(const std::string& text) {
  json raw;
  try {
    raw = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config is not valid JSON: ") + err.what());
  }
  require_keys(raw, {"version", "model", "run"}, {"seed", "output_prefix"}, "config");
  if (!raw.at("version").is_number_integer() ||
      raw.at("version").get<int>() != kConfigVersion) {
    throw ConfigError("config.version must be the integer 1");
  }

  ScenarioConfig config;
  config.raw = raw;
  config.seed = raw.contains("seed") ? raw.at("seed").get<std::uint64_t>() : 0;
  config.output_prefix =
      raw.contains("output_prefix") ? raw.at("output_prefix").get<std::string>() : "run";
  config.model = raw.at("model");
  config.run = raw.at("run");

  require_object(config.model, "config.model");
  require_object(config.run, "config.run");
  if (!config.model.contains("kind") || !config.model.at("kind").is_string()) {
    throw ConfigError("config.model.kind must be a string");
  }
  if (!config.run.contains("kind") || !config.run.at("kind").is_string()) {
    throw ConfigError("config.run.kind must be a string");
  }
  config.run_kind = config.run.at("kind").get<std::string>();

  static const std::vector<std::string> kinds = {
      "flow-grid", "trajectory", "ensemble", "compressibility",
      "boundary-flux", "nz-kernel", "classical"};
  if (std::find(kinds.begin(), kinds.end(), config.run_kind) == kinds.end()) {
    throw ConfigError("config.run.kind '" + config.run_kind + "' is not recognized");
  }
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read config file: " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string run_kind_for_subcommand(const std::string& subcommand) {
  if (subcommand == "flow") return "flow-grid";
  if (subcommand == "traj") return "trajectory";
  if (subcommand == "ensemble") return "ensemble";
  if (subcommand == "compress") return "compressibility";
  if (subcommand == "fluxcheck") return "boundary-flux";
  if (subcommand == "nz") return "nz-kernel";
  if (subcommand == "classical") return "classical";
  throw ConfigError("unknown subcommand: " + subcommand);
}

RunResult run_scenario(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  OutputSink sink{out_dir, {}, {}};

  if (config.run_kind == "flow-grid") {
    run_flow_grid(config, sink);
  } else if (config.run_kind == "trajectory") {
    run_trajectory(config, sink);
  } else if (config.run_kind == "ensemble") {
    run_ensemble(config, sink);
  } else if (config.run_kind == "compressibility") {
    run_compressibility(config, sink);
  } else if (config.run_kind == "boundary-flux") {
    run_boundary_flux(config, sink);
  } else if (config.run_kind == "nz-kernel") {
    run_nz_kernel(config, sink);
  } else if (config.run_kind == "classical") {
    run_classical(config, sink);
  } else {
    throw ConfigError("config.run.kind '" + config.run_kind + "' is not recognized");
  }

  json manifest;
  manifest["tool"] = "liouflow";
  manifest["version"] = kToolVersion;
  manifest["run_kind"] = config.run_kind;
  manifest["seed"] = config.seed;
  manifest["config"] = config.raw;
  json outputs = json::array();
  for (const auto& [file, checksum] : sink.checksums) {
    json entry;
    entry["path"] = file;
    entry["fnv1a64"] = checksum;
    entry["bytes"] = std::filesystem::file_size(out_dir / file);
    outputs.push_back(entry);
  }
  manifest["outputs"] = outputs;

  const std::string manifest_name = config.output_prefix + "_manifest.json";
  std::ofstream out(out_dir / manifest_name, std::ios::binary);
  out << manifest.dump(2) << "\n";
  out.close();

  RunResult result;
  result.files = sink.files;
  result.manifest_path = out_dir / manifest_name;
  return result;
}

}  // namespace liouflow::cli
