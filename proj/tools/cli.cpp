#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <boost/version.hpp>

#include "helmkit/bessel.hpp"
#include "helmkit/dtn.hpp"
#include "helmkit/experiments.hpp"
#include "helmkit/fem.hpp"
#include "helmkit/mesh.hpp"
#include "helmkit/mie.hpp"
#include "helmkit/output.hpp"
#include "helmkit/raytrace.hpp"

#ifndef HELMKIT_VERSION
#define HELMKIT_VERSION "0.0.0"
#endif

namespace helmkit::cli {

using json = nlohmann::ordered_json;

namespace {

json point_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

json phase_json(const PhasePoint& p) { return {{"x", point_json(p.x)}, {"xi", point_json(p.xi)}}; }

// Shared state of one invocation.
struct Context {
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  RunConfig config;
  json options = json::object();
  std::vector<std::string> outputs;
  std::vector<std::string> argv;
  std::string started;
  std::ostream* out = nullptr;

  Executor executor() const { return Executor(jobs); }

  std::string path(const std::string& name) const { return (std::filesystem::path(out_dir) / name).string(); }

  void write_csv(const std::string& name, const CsvTable& table) {
    table.write(path(name));
    outputs.push_back(name);
  }

  void write_json(const std::string& name, const json& j) {
    write_file(path(name), j.dump(2) + "\n");
    outputs.push_back(name);
  }

  // The manifest holds everything needed to repeat the run; wall-clock and
  // invocation details live under "invocation" so they can be ignored.
  void finish(const json& summary) {
    write_file(path("config.cfg"), config.serialize());
    outputs.push_back("config.cfg");
    json m;
    m["tool"] = "helmkit";
    m["version"] = HELMKIT_VERSION;
    m["command"] = command;
    m["seed"] = config.seed;
    m["config_hash"] = config.hash();
    m["options"] = options;
    m["config"] = config.serialize();
    m["outputs"] = outputs;
    m["libraries"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION)},
                      {"boost", BOOST_LIB_VERSION}};
    m["invocation"] = {{"argv", argv}, {"jobs", jobs}, {"out", out_dir}, {"started_utc", started},
                       {"finished_utc", utc_timestamp()}};
    write_file(path("manifest.json"), m.dump(2) + "\n");
    (*out) << summary.dump(2) << "\n";
  }
};

Cutoff cutoff_of(const RunConfig& c) { return {c.experiments.cutoff_inner, c.experiments.cutoff_outer, 1.0}; }

double ray_length(const RunConfig& c, double radius, const Executor& exec, json* diag) {
  TruncationGeometry geom = c.geometry;
  geom.R_ray = std::max(geom.R_ray, radius);
  const auto r = longest_ray_length(c.coefficient_field(), c.obstacle_shape(), geom, radius, c.ray_config(), exec);
  if (diag) {
    *diag = {{"R", radius},
             {"L", r.L},
             {"maximizer", phase_json(r.maximizer)},
             {"samples", r.stats.samples},
             {"censored_fraction", r.stats.censored_fraction()},
             {"history", r.history}};
  }
  return r.L;
}

// ---- subcommands -------------------------------------------------------------

struct RayFlags {
  std::optional<double> R, step, budget;
  std::optional<int> grid_pos, grid_dir, refine;
  bool allow_censored = false;
  bool dump = false;
};

int cmd_rays(Context& ctx, const RayFlags& f) {
  auto& c = ctx.config;
  if (f.step) c.rays.step = *f.step;
  if (f.budget) c.rays.budget = *f.budget;
  if (f.grid_pos) c.rays.grid_pos = *f.grid_pos;
  if (f.grid_dir) c.rays.grid_dir = *f.grid_dir;
  if (f.refine) c.rays.refine = *f.refine;
  if (f.allow_censored) c.rays.allow_censored = true;
  const double R = f.R.value_or(c.geometry.R);
  ctx.options = {{"R", R}, {"dump_trajectory", f.dump}};

  TruncationGeometry geom = c.geometry;
  geom.R_ray = std::max(geom.R_ray, R);
  const auto coeffs = c.coefficient_field();
  const auto obstacle = c.obstacle_shape();
  const auto r = longest_ray_length(coeffs, obstacle, geom, R, c.ray_config(), ctx.executor());
  json j = {{"L", r.L},
            {"R", R},
            {"maximizer", phase_json(r.maximizer)},
            {"censored_fraction", r.stats.censored_fraction()},
            {"samples", r.stats.samples},
            {"glancing", r.stats.glancing},
            {"budget_exceeded", r.stats.budget_exceeded},
            {"history", r.history}};
  ctx.write_json("rays.json", j);
  if (f.dump) {
    const auto traj = integrate_ray(coeffs, obstacle, geom, r.maximizer, c.ray_config());
    CsvTable t({"s", "x1", "x2", "xi1", "xi2", "H"});
    for (const auto& s : traj.samples) {
      t.add_row({s.s, s.p.x.x(), s.p.x.y(), s.p.xi.x(), s.p.xi.y(), hamiltonian(coeffs, s.p)});
    }
    ctx.write_csv("trajectory.csv", t);
  }
  ctx.finish(j);
  return 0;
}

int cmd_dtn_check(Context& ctx, std::optional<double> k, std::optional<double> R, std::optional<int> nmax) {
  auto& c = ctx.config;
  if (k) c.wave.k = *k;
  if (R) c.geometry.R = *R;
  const auto op = build_dtn(c.wave.k, c.geometry.R, nmax.value_or(c.fem.n_max));
  ctx.options = {{"k", op.k}, {"R", op.R}, {"n_max", op.n_max}};
  CsvTable t({"n", "re_t", "im_t"});
  bool sign_ok = true;
  double max_re = -INFINITY;
  for (int n = 0; n <= op.n_max; ++n) {
    t.add_row({static_cast<std::int64_t>(n), op.t[n].real(), op.t[n].imag()});
    sign_ok = sign_ok && op.t[n].real() <= 0.0;
    max_re = std::max(max_re, op.t[n].real());
  }
  // Wronskian on the orders where Y_n is representable.
  const double z = op.k * op.R;
  const auto tab = bessel::cylinder(op.n_max, z);
  double wronskian = 0.0;
  int checked = 0;
  for (int n = 0; n <= op.n_max; ++n) {
    if (!std::isfinite(tab.Y[n]) || std::abs(tab.Y[n]) > 1e150) break;
    wronskian = std::max(wronskian, std::abs((tab.J[n] * tab.dY(n) - tab.dJ(n) * tab.Y[n]) * pi * z / 2.0 - 1.0));
    ++checked;
  }
  ctx.write_csv("dtn.csv", t);
  json j = {{"k", op.k},
            {"R", op.R},
            {"n_max", op.n_max},
            {"sign_ok", sign_ok},
            {"max_re_t", max_re},
            {"wronskian_max_residual", wronskian},
            {"wronskian_orders_checked", checked},
            {"continuity_constant", dtn_continuity_constant(op)}};
  ctx.write_json("dtn_check.json", j);
  ctx.finish(j);
  return sign_ok ? 0 : 1;
}

int cmd_solve(Context& ctx, std::optional<double> k, std::optional<double> h, std::optional<std::string> problem,
              std::optional<double> angle, bool write_mesh_file) {
  auto& c = ctx.config;
  if (k) c.wave.k = *k;
  if (h) c.fem.h = *h;
  if (problem) c.fem.problem = *problem;
  if (angle) c.incident_angle = *angle;
  if (c.fem.problem != "scattering" && c.fem.problem != "source") throw ConfigError("--problem must be scattering or source");
  validate_wave(c.wave);
  ctx.options = {{"k", c.wave.k}, {"h", c.fem.h}, {"problem", c.fem.problem}, {"incident_angle", c.incident_angle}};

  const auto scene = c.scene();
  auto mesh = std::make_shared<Mesh>(generate_mesh(scene.obstacle, scene.R, c.fem.h));
  auto space = std::make_shared<FeSpace>(mesh);
  auto sys = assemble(scene.coeffs, space, build_dtn(c.wave.k, scene.R, c.fem.n_max), ctx.executor());
  const PlaneWave wave{c.wave.k, c.incident_angle};
  if (c.fem.problem == "scattering") {
    sys.rhs = assemble_load_scattering(sys, wave);
  } else {
    const Vec2 x0 = c.fem.source_center;
    const double w = c.fem.source_width;
    sys.rhs = assemble_load_source(*space, [x0, w](const Vec2& x) { return cplx(std::exp(-(x - x0).squaredNorm() / (w * w))); });
  }
  const auto sol = solve(sys);
  const CVec u = space->to_vertices(sol.dofs);
  CsvTable t({"vertex", "x", "y", "re_u", "im_u"});
  for (std::size_t v = 0; v < mesh->vertices.size(); ++v) {
    t.add_row({static_cast<std::int64_t>(v), mesh->vertices[v].x(), mesh->vertices[v].y(), u(v).real(), u(v).imag()});
  }
  ctx.write_csv("solution.csv", t);
  if (write_mesh_file) {
    std::ostringstream m;
    write_mesh(*mesh, m);
    write_file(ctx.path("mesh.txt"), m.str());
    ctx.outputs.push_back("mesh.txt");
  }
  json j = {{"k", c.wave.k},
            {"problem", c.fem.problem},
            {"mesh", {{"vertices", mesh->vertices.size()},
                      {"triangles", mesh->triangles.size()},
                      {"h_fem", mesh->h_fem},
                      {"shape_regularity", mesh->shape_regularity}}},
            {"dofs", space->ndofs()},
            {"dtn_modes", sys.dtn.n_max},
            {"residual", sol.residual},
            {"energy_norm", sys.energy_norm(sol.dofs)},
            {"l2_norm", sys.l2_norm(sol.dofs)}};
  if (c.fem.problem == "scattering" && scene.has_series_reference()) {
    const bool empty = scene.obstacle.empty();
    const double a = empty ? 0.0 : scene.obstacle.parts()[0].radius(0.0);
    std::shared_ptr<SoundSoftDisk> mie = empty ? nullptr : std::make_shared<SoundSoftDisk>(c.wave.k, a, c.incident_angle);
    auto exact = [&](const Vec2& x) { return mie ? mie->value(x) : wave.value(x); };
    auto grad = [&](const Vec2& x) { return mie ? CGrad(mie->gradient(x)) : CGrad(wave.gradient(x)); };
    const auto e = field_errors(scene.coeffs, *space, sol.dofs, c.wave.k, exact, grad, ctx.executor());
    j["reference"] = empty ? "plane_wave" : "series";
    j["relative_l2_error"] = e.l2_error / e.l2_exact;
    j["relative_energy_error"] = e.energy_error / e.energy_exact;
  }
  ctx.write_json("solve.json", j);
  ctx.finish(j);
  return 0;
}

json threshold_json(const ThresholdReport& r) {
  return {{"k", r.k},
          {"h", r.h_query},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"admissible", r.admissible},
          {"h_max", r.h_max},
          {"quasioptimality_constant", r.quasioptimality_constant},
          {"C_H2_provenance", r.C_H2_provenance}};
}

int cmd_threshold(Context& ctx, std::optional<double> k, std::optional<double> h) {
  auto& c = ctx.config;
  if (k) c.wave.k = *k;
  if (h) c.fem.h = *h;
  ctx.options = {{"k", c.wave.k}, {"h", c.fem.h}};
  const auto ledger = build_ledger(c, ctx.executor());
  const auto r = mesh_threshold(ledger, c.wave.k, c.fem.h);
  json j = threshold_json(r);
  j["ledger"] = json::parse(ledger.to_json());
  ctx.write_json("threshold.json", j);
  ctx.finish(j);
  return 0;
}

int cmd_constants(Context& ctx) {
  json diag = json::object();
  const auto ledger = build_ledger(ctx.config, ctx.executor(), &diag);
  write_file(ctx.path("ledger.json"), ledger.to_json() + "\n");
  ctx.outputs.push_back("ledger.json");
  ctx.write_json("constants.json", diag);
  ctx.finish(json::parse(ledger.to_json()));
  return 0;
}

int cmd_validate(Context& ctx) {
  const auto& c = ctx.config;
  json j;
  std::vector<std::string> failures;
  const auto report = validate_configuration(c.coefficient_field(), c.obstacle_shape(), c.geometry);
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"invariant", v.invariant}, {"point", point_json(v.point)}, {"detail", v.detail}});
  }
  if (!report.passed()) failures.push_back(report.first_failure());
  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      failures.push_back(name + ": " + e.what());
    }
  };
  guarded("wave", [&] { validate_wave(c.wave); });
  guarded("rays", [&] { c.ray_config().validate(); });
  guarded("cutoff", [&] {
    if (!(c.experiments.cutoff_inner < c.experiments.cutoff_outer) || c.experiments.cutoff_outer > c.geometry.R) {
      throw ConfigError("need cutoff_inner < cutoff_outer <= R");
    }
  });
  guarded("fem", [&] {
    if (!(c.fem.h > 0.0)) throw ConfigError("fem.h must be positive");
  });
  if (!c.ledger.file.empty()) guarded("ledger", [&] { ConstantsLedger::from_json(read_file(c.ledger.file)); });
  j["passed"] = failures.empty();
  j["samples_checked"] = report.samples_checked;
  j["failures"] = failures;
  j["violations"] = violations;
  ctx.write_json("validate.json", j);
  ctx.finish(j);
  return failures.empty() ? 0 : 1;
}

int cmd_resolvent_scan(Context& ctx, const std::vector<double>& k_list, std::optional<int> s) {
  auto& c = ctx.config;
  if (!k_list.empty()) c.experiments.k_list = k_list;
  if (s) c.experiments.s = *s;
  json ray_diag;
  double L = c.experiments.L;
  if (!(L > 0.0)) L = ray_length(c, c.experiments.cutoff_outer, ctx.executor(), &ray_diag);
  ctx.options = {{"k_list", c.experiments.k_list}, {"s", c.experiments.s}, {"L", L}};
  const auto scan =
      resolvent_scan(c.scene(), c.experiments.k_list, cutoff_of(c), c.experiments.s, L, c.resolvent_options(), ctx.executor());
  CsvTable t({"k", "resolution", "norm", "scaled", "lower_ref", "upper_ref", "iterations", "converged", "dominant_mode",
              "method"});
  for (const auto& r : scan.rows) {
    t.add_row({r.k, r.resolution, r.norm, r.scaled, r.lower_ref, r.upper_ref, static_cast<std::int64_t>(r.iterations),
               static_cast<std::int64_t>(r.converged), static_cast<std::int64_t>(r.dominant_mode), scan.method});
  }
  ctx.write_csv("resolvent_scan.csv", t);
  json j = {{"s", scan.s}, {"L", L}, {"method", scan.method}, {"rows", scan.rows.size()}};
  if (!ray_diag.is_null()) j["rays"] = ray_diag;
  ctx.finish(j);
  return 0;
}

int cmd_quasimode(Context& ctx, std::optional<double> L, std::optional<double> delta, std::optional<double> h) {
  auto& e = ctx.config.experiments;
  if (L) e.quasimode_L = *L;
  if (delta) e.quasimode_delta = *delta;
  if (h) e.quasimode_h = *h;
  ctx.options = {{"L", e.quasimode_L}, {"delta", e.quasimode_delta}, {"h", e.quasimode_h}};
  const auto q = quasimode_lower_bound(e.quasimode_L, e.quasimode_delta, e.quasimode_h);
  CsvTable t({"x", "f", "u"});
  for (std::size_t i = 0; i < q.x.size(); ++i) t.add_row({q.x[i], q.f[i], q.u[i]});
  ctx.write_csv("quasimode.csv", t);
  json j = {{"model", "1-D flat transport model h u' = f"},
            {"L", q.L},
            {"delta", q.delta},
            {"h", q.h},
            {"mu", q.mu},
            {"ratio", q.ratio},
            {"bound", q.bound},
            {"f_norm_squared", q.f_norm_squared},
            {"f_norm_identity", q.f_norm_identity},
            {"u_norm", q.u_norm}};
  ctx.write_json("quasimode.json", j);
  ctx.finish(j);
  return 0;
}

int cmd_eta(Context& ctx, std::optional<double> k, std::optional<double> h, std::optional<int> samples) {
  auto& c = ctx.config;
  if (k) c.wave.k = *k;
  if (h) c.fem.h = *h;
  if (samples) c.experiments.samples = *samples;
  ctx.options = {{"k", c.wave.k}, {"h", c.fem.h}, {"samples", c.experiments.samples}};
  const auto ledger = build_ledger(c, ctx.executor());
  const auto est = estimate_eta(c.scene(), c.wave.k, c.fem.h, c.experiments.samples, c.seed, c.experiments.refinements,
                                ctx.executor());
  CsvTable t({"sample", "ratio", "running_sup"});
  for (std::size_t i = 0; i < est.ratios.size(); ++i) {
    t.add_row({static_cast<std::int64_t>(i), est.ratios[i], est.running[i]});
  }
  ctx.write_csv("eta.csv", t);
  json j = {{"k", est.k},
            {"h", est.h},
            {"h_reference", est.h_reference},
            {"samples", est.ratios.size()},
            {"eta", est.eta},
            {"k_eta", est.k * est.eta},
            {"schatz_bound", schatz_bound(ledger, est.k)},
            {"schatz_condition", schatz_condition(ledger, est.k, est.eta)}};
  ctx.write_json("eta.json", j);
  ctx.finish(j);
  return 0;
}

int cmd_convergence(Context& ctx, const std::vector<double>& k_list, const std::vector<double>& h_list) {
  auto& c = ctx.config;
  if (!k_list.empty()) c.experiments.k_list = k_list;
  if (!h_list.empty()) c.experiments.h_list = h_list;
  ctx.options = {{"k_list", c.experiments.k_list}, {"h_list", c.experiments.h_list}};
  const auto ledger = build_ledger(c, ctx.executor());
  const auto table =
      quasioptimality_study(c.scene(), c.experiments.k_list, c.experiments.h_list, ledger, c.incident_angle, ctx.executor());
  CsvTable t({"k", "h_target", "h", "dofs", "energy_error", "l2_error", "relative_l2_error", "best_error",
              "interpolation_error", "ratio", "threshold_rhs", "admissible", "failed", "reference", "note"});
  int violations = 0, admissible = 0, failed = 0;
  for (const auto& r : table.rows) {
    t.add_row({r.k, r.h_target, r.h, static_cast<std::int64_t>(r.dofs), r.energy_error, r.l2_error, r.relative_l2_error,
               r.best_error, r.interpolation_error, r.ratio, r.threshold_rhs, static_cast<std::int64_t>(r.admissible),
               static_cast<std::int64_t>(r.failed), r.reference, r.note});
    if (r.admissible) {
      ++admissible;
      if (r.failed || r.ratio > table.quasioptimality_constant) ++violations;
    }
    failed += r.failed;
  }
  ctx.write_csv("convergence.csv", t);
  json j = {{"quasioptimality_constant", table.quasioptimality_constant},
            {"rows", table.rows.size()},
            {"admissible_rows", admissible},
            {"violations", violations},
            {"failed_rows", failed},
            {"ledger", json::parse(ledger.to_json())}};
  ctx.write_json("convergence.json", j);
  ctx.finish(j);
  return violations == 0 ? 0 : 1;
}

int cmd_h2_scan(Context& ctx, const std::vector<double>& k_list) {
  auto& c = ctx.config;
  if (!k_list.empty()) c.experiments.k_list = k_list;
  ctx.options = {{"k_list", c.experiments.k_list}};
  const auto ledger = build_ledger(c, ctx.executor());
  const auto s = h2_scaling_study(c.scene(), c.experiments.k_list, ledger, c.experiments.h_factor,
                                  c.experiments.power_steps, c.seed, ctx.executor());
  CsvTable t({"k", "h", "f_norm", "h2_norm", "ratio", "bound_coefficient"});
  for (const auto& r : s.rows) t.add_row({r.k, r.h, r.f_norm, r.h2_norm, r.ratio, r.bound_coefficient});
  ctx.write_csv("h2_scaling.csv", t);
  json j = {{"exponent", s.exponent}, {"rows", s.rows.size()}};
  ctx.write_json("h2_scaling.json", j);
  ctx.finish(j);
  return 0;
}

json error_json(const std::string& type, const std::string& message, const std::string& command) {
  return {{"error", {{"type", type}, {"command", command}, {"message", message}}}};
}

}  // namespace

ConstantsLedger build_ledger(const RunConfig& c, const Executor& exec, json* diagnostics) {
  if (!c.ledger.file.empty()) {
    auto l = ConstantsLedger::from_json(read_file(c.ledger.file));
    if (diagnostics) (*diagnostics)["source"] = c.ledger.file;
    return l;
  }
  const auto coeffs = c.coefficient_field();
  const auto obstacle = c.obstacle_shape();
  ConstantsLedger l;
  const auto& b = coeffs.bounds();
  l.A_min = b.A_min;
  l.A_max = b.A_max;
  l.nu_min = b.nu_min;
  l.nu_max = b.nu_max;
  l.k0 = c.wave.k0;
  l.s = c.experiments.s;
  for (const char* key : {"A_min", "A_max", "nu_min", "nu_max"}) l.provenance[key] = "preset";
  l.provenance["k0"] = "supplied";
  l.provenance["s"] = "supplied";
  json diag = json::object();
  const double R = c.geometry.R;

  if (c.ledger.L_ray > 0.0) {
    l.L_ray = c.ledger.L_ray;
    l.provenance["L_ray"] = "supplied";
  } else {
    json d;
    l.L_ray = ray_length(c, R + 2.0, exec, &d);
    l.provenance["L_ray"] = "estimate";
    diag["L_ray"] = d;
  }
  if (c.ledger.C_int_tilde > 0.0) {
    l.C_int_tilde = c.ledger.C_int_tilde;
    l.provenance["C_int_tilde"] = "supplied";
  } else {
    const auto e = estimate_C_int_tilde(obstacle, R, c.experiments.h_interp);
    l.C_int_tilde = e.value;
    l.provenance["C_int_tilde"] = "empirical_lower";
    diag["C_int_tilde"] = {{"h", e.h}, {"ratio", e.ratio}};
  }
  if (c.ledger.C_DtN_tilde > 0.0) {
    l.C_DtN_tilde = c.ledger.C_DtN_tilde;
    l.provenance["C_DtN_tilde"] = "supplied";
  } else {
    const double inner = obstacle.empty() ? 0.0 : obstacle.extent();
    const auto e = estimate_C_DtN_tilde(R, inner, c.wave.k0, std::max(c.wave.k0, c.experiments.k_max));
    l.C_DtN_tilde = e.value;
    l.provenance["C_DtN_tilde"] = "estimate";
    diag["C_DtN_tilde"] = {{"inner_radius", inner}, {"k_at_max", e.k_at_max}, {"n_at_max", e.n_at_max}};
  }
  if (c.ledger.C_H2 > 0.0) {
    l.C_H2 = c.ledger.C_H2;
    l.provenance["C_H2"] = "supplied";
  } else {
    const auto e = estimate_C_H2(coeffs, obstacle, R, c.experiments.b, c.experiments.h_constants, c.experiments.samples,
                                 c.seed, exec);
    l.C_H2 = e.value;
    l.provenance["C_H2"] = "empirical_lower";
    diag["C_H2"] = {{"b", c.experiments.b}, {"h", c.experiments.h_constants}, {"ratios", e.ratios}};
  }
  l.derive();
  l.validate();
  if (diagnostics) *diagnostics = diag;
  return l;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.out = &out;
  ctx.argv = args;
  ctx.started = utc_timestamp();

  CLI::App app{"helmkit: longest rays, DtN-truncated Helmholtz FEM, and mesh-threshold constants"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--config", ctx.config_path, "INI configuration file");
  app.add_option("--out", ctx.out_dir, "output directory");
  app.add_option("--seed", ctx.seed, "random seed (overrides [run] seed)");
  app.add_option("--jobs", ctx.jobs, "worker threads")->check(CLI::Range(1u, 1024u));

  RayFlags rf;
  auto* rays = app.add_subcommand("rays", "longest ray length L by sampled maximization");
  rays->add_option("--R", rf.R, "ball radius for L (default: geometry R)");
  rays->add_option("--grid-pos", rf.grid_pos);
  rays->add_option("--grid-dir", rf.grid_dir);
  rays->add_option("--step", rf.step);
  rays->add_option("--budget", rf.budget);
  rays->add_option("--refine", rf.refine);
  rays->add_flag("--allow-censored", rf.allow_censored);
  rays->add_flag("--dump-trajectory", rf.dump, "write the maximizing trajectory as CSV");

  std::optional<double> k, h, R, angle, L, delta;
  std::optional<int> nmax, samples, s;
  std::optional<std::string> problem;
  std::vector<double> k_list, h_list;
  bool write_mesh_file = false;

  auto* dtn = app.add_subcommand("dtn-check", "DtN coefficients, sign property and Wronskian");
  dtn->add_option("--k", k);
  dtn->add_option("--R", R);
  dtn->add_option("--nmax", nmax);

  auto* solve_cmd = app.add_subcommand("solve", "finite-element solution of the truncated problem");
  solve_cmd->add_option("--k", k);
  solve_cmd->add_option("--h", h);
  solve_cmd->add_option("--problem", problem)->check(CLI::IsMember({"source", "scattering"}));
  solve_cmd->add_option("--incident-angle", angle);
  solve_cmd->add_flag("--write-mesh", write_mesh_file);

  auto* threshold = app.add_subcommand("threshold", "evaluate the mesh threshold");
  threshold->add_option("--k", k);
  threshold->add_option("--h", h);

  app.add_subcommand("constants", "estimate the explicit constants and write a ledger");
  app.add_subcommand("validate", "check the structural hypotheses of the configuration");

  auto* scan = app.add_subcommand("resolvent-scan", "cut-off resolvent norm across k");
  scan->add_option("--k-list", k_list)->delimiter(',');
  scan->add_option("--s", s)->check(CLI::Range(0, 1));

  auto* quasimode = app.add_subcommand("quasimode", "1-D lower-bound quasimode");
  quasimode->add_option("--L", L);
  quasimode->add_option("--delta", delta);
  quasimode->add_option("--h", h);

  auto* eta = app.add_subcommand("eta", "adjoint approximability eta");
  eta->add_option("--k", k);
  eta->add_option("--h", h);
  eta->add_option("--samples", samples);

  auto* conv = app.add_subcommand("convergence", "quasioptimality study");
  conv->add_option("--k-list", k_list)->delimiter(',');
  conv->add_option("--h-list", h_list)->delimiter(',');

  auto* h2 = app.add_subcommand("h2-scan", "k-scaling of the H2 norm of solutions");
  h2->add_option("--k-list", k_list)->delimiter(',');

  std::vector<char*> cargs;
  std::vector<std::string> storage = args;
  for (auto& a : storage) cargs.push_back(a.data());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << error_json("usage", e.what(), "").dump(2) << "\n";
    return 2;
  }
  ctx.command = app.get_subcommands().front()->get_name();
  try {
    if (!ctx.config_path.empty()) ctx.config = load_config(ctx.config_path);
    if (ctx.seed) ctx.config.seed = *ctx.seed;
    std::filesystem::create_directories(ctx.out_dir);
    const auto& cmd = ctx.command;
    if (cmd == "rays") return cmd_rays(ctx, rf);
    if (cmd == "dtn-check") return cmd_dtn_check(ctx, k, R, nmax);
    if (cmd == "solve") return cmd_solve(ctx, k, h, problem, angle, write_mesh_file);
    if (cmd == "threshold") return cmd_threshold(ctx, k, h);
    if (cmd == "constants") return cmd_constants(ctx);
    if (cmd == "validate") return cmd_validate(ctx);
    if (cmd == "resolvent-scan") return cmd_resolvent_scan(ctx, k_list, s);
    if (cmd == "quasimode") return cmd_quasimode(ctx, L, delta, h);
    if (cmd == "eta") return cmd_eta(ctx, k, h, samples);
    if (cmd == "convergence") return cmd_convergence(ctx, k_list, h_list);
    if (cmd == "h2-scan") return cmd_h2_scan(ctx, k_list);
    throw ConfigError("unknown subcommand " + cmd);
  } catch (const ConfigError& e) {
    err << error_json("config", e.what(), ctx.command).dump(2) << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << error_json("numerical", e.what(), ctx.command).dump(2) << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << error_json("internal", e.what(), ctx.command).dump(2) << "\n";
    return 4;
  }
}

}  // namespace helmkit::cli
