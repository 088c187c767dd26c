#include "helmkit/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "helmkit/output.hpp"

namespace helmkit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + text + "'");
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("config: key '" + key + "' expects true or false, got '" + text + "'");
}

Vec2 parse_point(const std::string& key, const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 2) throw ConfigError("config: key '" + key + "' expects two numbers");
  return {v[0], v[1]};
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

std::string fmt(const Vec2& p) { return fmt(p.x()) + ", " + fmt(p.y()); }

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

template <class T>
Setter number(T RunConfig::*group, double T::*field) {
  return [=](RunConfig& c, const std::string& k, const std::string& v) { (c.*group).*field = parse_double(k, v); };
}

template <class T>
Setter integer(T RunConfig::*group, int T::*field) {
  return [=](RunConfig& c, const std::string& k, const std::string& v) { (c.*group).*field = parse_int(k, v); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["coefficients.preset"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.coefficients.preset = trim(v);
    };
    t["coefficients.peak"] = number(&RunConfig::coefficients, &CoefficientSpec::peak);
    t["coefficients.radius"] = number(&RunConfig::coefficients, &CoefficientSpec::radius);
    t["coefficients.a1"] = number(&RunConfig::coefficients, &CoefficientSpec::a1);
    t["coefficients.a2"] = number(&RunConfig::coefficients, &CoefficientSpec::a2);
    t["coefficients.angle"] = number(&RunConfig::coefficients, &CoefficientSpec::angle);
    t["coefficients.center"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.coefficients.center = parse_point(k, v);
    };

    t["geometry.R1"] = number(&RunConfig::geometry, &TruncationGeometry::R1);
    t["geometry.R"] = number(&RunConfig::geometry, &TruncationGeometry::R);
    t["geometry.R_ray"] = number(&RunConfig::geometry, &TruncationGeometry::R_ray);

    t["wave.k"] = number(&RunConfig::wave, &WaveContext::k);
    t["wave.k0"] = number(&RunConfig::wave, &WaveContext::k0);
    t["wave.incident_angle"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.incident_angle = parse_double(k, v);
    };

    t["rays.step"] = number(&RunConfig::rays, &RayOptions::step);
    t["rays.budget"] = number(&RunConfig::rays, &RayOptions::budget);
    t["rays.grid_pos"] = integer(&RunConfig::rays, &RayOptions::grid_pos);
    t["rays.grid_dir"] = integer(&RunConfig::rays, &RayOptions::grid_dir);
    t["rays.refine"] = integer(&RunConfig::rays, &RayOptions::refine);
    t["rays.refine_points"] = integer(&RunConfig::rays, &RayOptions::refine_points);
    t["rays.glancing_threshold"] = number(&RunConfig::rays, &RayOptions::glancing_threshold);
    t["rays.allow_censored"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.rays.allow_censored = parse_bool(k, v);
    };

    t["fem.h"] = number(&RunConfig::fem, &FemOptions::h);
    t["fem.problem"] = [](RunConfig& c, const std::string&, const std::string& v) { c.fem.problem = trim(v); };
    t["fem.n_max"] = integer(&RunConfig::fem, &FemOptions::n_max);
    t["fem.source_center"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.fem.source_center = parse_point(k, v);
    };
    t["fem.source_width"] = number(&RunConfig::fem, &FemOptions::source_width);

    using E = ExperimentOptions;
    t["experiments.k_list"] = [](RunConfig& c, const std::string&, const std::string& v) { c.experiments.k_list = parse_list(v); };
    t["experiments.h_list"] = [](RunConfig& c, const std::string&, const std::string& v) { c.experiments.h_list = parse_list(v); };
    t["experiments.h_interp"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.experiments.h_interp = parse_list(v);
    };
    t["experiments.cutoff_inner"] = number(&RunConfig::experiments, &E::cutoff_inner);
    t["experiments.cutoff_outer"] = number(&RunConfig::experiments, &E::cutoff_outer);
    t["experiments.s"] = integer(&RunConfig::experiments, &E::s);
    t["experiments.L"] = number(&RunConfig::experiments, &E::L);
    t["experiments.method"] = [](RunConfig& c, const std::string&, const std::string& v) { c.experiments.method = trim(v); };
    t["experiments.resolution"] = number(&RunConfig::experiments, &E::resolution);
    t["experiments.tolerance"] = number(&RunConfig::experiments, &E::tolerance);
    t["experiments.max_iterations"] = integer(&RunConfig::experiments, &E::max_iterations);
    t["experiments.quasimode_L"] = number(&RunConfig::experiments, &E::quasimode_L);
    t["experiments.quasimode_delta"] = number(&RunConfig::experiments, &E::quasimode_delta);
    t["experiments.quasimode_h"] = number(&RunConfig::experiments, &E::quasimode_h);
    t["experiments.samples"] = integer(&RunConfig::experiments, &E::samples);
    t["experiments.refinements"] = integer(&RunConfig::experiments, &E::refinements);
    t["experiments.h_factor"] = number(&RunConfig::experiments, &E::h_factor);
    t["experiments.power_steps"] = integer(&RunConfig::experiments, &E::power_steps);
    t["experiments.b"] = number(&RunConfig::experiments, &E::b);
    t["experiments.h_constants"] = number(&RunConfig::experiments, &E::h_constants);
    t["experiments.k_max"] = number(&RunConfig::experiments, &E::k_max);

    t["ledger.C_int_tilde"] = number(&RunConfig::ledger, &LedgerSpec::C_int_tilde);
    t["ledger.C_DtN_tilde"] = number(&RunConfig::ledger, &LedgerSpec::C_DtN_tilde);
    t["ledger.C_H2"] = number(&RunConfig::ledger, &LedgerSpec::C_H2);
    t["ledger.L_ray"] = number(&RunConfig::ledger, &LedgerSpec::L_ray);
    t["ledger.file"] = [](RunConfig& c, const std::string&, const std::string& v) { c.ledger.file = trim(v); };

    t["run.seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      const std::string s = trim(v);
      std::uint64_t seed = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
      if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ConfigError("config: key '" + k + "' expects an unsigned integer");
      }
      c.seed = seed;
    };
    return t;
  }();
  return table;
}

// Obstacle parts are numbered: rho_fourier_coefficients, rho_fourier_coefficients_2, ...
bool set_obstacle_key(RunConfig& c, const std::string& key, const std::string& value) {
  for (const std::string stem : {"rho_fourier_coefficients", "center"}) {
    if (key.rfind(stem, 0) != 0) continue;
    const std::string rest = key.substr(stem.size());
    std::size_t index = 0;
    if (!rest.empty()) {
      if (rest[0] != '_' || rest.size() < 2) return false;
      const int n = parse_int("obstacle." + key, rest.substr(1));
      if (n < 2) return false;
      index = static_cast<std::size_t>(n - 1);
    }
    auto& o = c.obstacle;
    if (o.parts.size() <= index) {
      o.parts.resize(index + 1);
      o.centers.resize(index + 1, Vec2::Zero());
    }
    if (stem == "center") {
      o.centers[index] = parse_point("obstacle." + key, value);
    } else {
      o.parts[index] = parse_list(value);
      if (o.parts[index].empty()) throw ConfigError("config: obstacle." + key + " is empty");
    }
    return true;
  }
  return false;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double("list", item));
  }
  return out;
}

RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig c;
  const auto& table = setters();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (section == "obstacle") {
        if (!set_obstacle_key(c, key, value.data())) throw ConfigError("config: unknown key '" + full + "'");
        continue;
      }
      const auto it = table.find(full);
      if (it == table.end()) throw ConfigError("config: unknown key '" + full + "'");
      it->second(c, full, value.data());
    }
  }
  for (std::size_t i = 0; i < c.obstacle.parts.size(); ++i) {
    if (c.obstacle.parts[i].empty()) {
      throw ConfigError("config: obstacle part " + std::to_string(i + 1) + " has a center but no coefficients");
    }
  }
  const auto& p = c.coefficients.preset;
  if (p != "identity" && p != "nu_bump" && p != "anisotropic_bump") {
    throw ConfigError("config: unknown coefficient preset '" + p + "'");
  }
  if (c.fem.problem != "scattering" && c.fem.problem != "source") {
    throw ConfigError("config: fem.problem must be scattering or source");
  }
  const auto& m = c.experiments.method;
  if (m != "automatic" && m != "radial" && m != "mesh") throw ConfigError("config: unknown experiments.method '" + m + "'");
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

CoefficientField RunConfig::coefficient_field() const {
  const auto& s = coefficients;
  if (s.preset == "nu_bump") return CoefficientField::nu_bump(s.peak, s.radius, s.center);
  if (s.preset == "anisotropic_bump") return CoefficientField::anisotropic_bump(s.a1, s.a2, s.angle, s.radius, s.center);
  return CoefficientField::identity(geometry.R1);
}

Obstacle RunConfig::obstacle_shape() const {
  std::vector<StarShape> parts;
  for (std::size_t i = 0; i < obstacle.parts.size(); ++i) parts.emplace_back(obstacle.centers[i], obstacle.parts[i]);
  return Obstacle(std::move(parts));
}

RayConfig RunConfig::ray_config() const {
  RayConfig r;
  r.step_size = rays.step;
  r.max_time_budget = rays.budget;
  r.grid_positions = rays.grid_pos;
  r.grid_directions = rays.grid_dir;
  r.refinement_rounds = rays.refine;
  r.refinement_points = rays.refine_points;
  r.glancing_threshold = rays.glancing_threshold;
  r.allow_censored = rays.allow_censored;
  return r;
}

Scene RunConfig::scene() const { return {coefficient_field(), obstacle_shape(), geometry.R}; }

ResolventOptions RunConfig::resolvent_options() const {
  ResolventOptions o;
  o.method = experiments.method == "radial" ? ResolventMethod::radial
             : experiments.method == "mesh" ? ResolventMethod::mesh
                                             : ResolventMethod::automatic;
  o.resolution = experiments.resolution;
  o.tolerance = experiments.tolerance;
  o.max_iterations = experiments.max_iterations;
  o.seed = seed;
  return o;
}

std::string RunConfig::serialize() const {
  std::ostringstream o;
  const auto& c = coefficients;
  o << "[coefficients]\npreset = " << c.preset << "\npeak = " << fmt(c.peak) << "\nradius = " << fmt(c.radius)
    << "\ncenter = " << fmt(c.center) << "\na1 = " << fmt(c.a1) << "\na2 = " << fmt(c.a2) << "\nangle = " << fmt(c.angle)
    << "\n\n[obstacle]\n";
  for (std::size_t i = 0; i < obstacle.parts.size(); ++i) {
    const std::string suffix = i == 0 ? "" : "_" + std::to_string(i + 1);
    o << "rho_fourier_coefficients" << suffix << " = " << fmt(obstacle.parts[i]) << "\n";
    o << "center" << suffix << " = " << fmt(obstacle.centers[i]) << "\n";
  }
  o << "\n[geometry]\nR1 = " << fmt(geometry.R1) << "\nR = " << fmt(geometry.R) << "\nR_ray = " << fmt(geometry.R_ray)
    << "\n\n[wave]\nk = " << fmt(wave.k) << "\nk0 = " << fmt(wave.k0) << "\nincident_angle = " << fmt(incident_angle)
    << "\n\n[rays]\nstep = " << fmt(rays.step) << "\nbudget = " << fmt(rays.budget) << "\ngrid_pos = " << rays.grid_pos
    << "\ngrid_dir = " << rays.grid_dir << "\nrefine = " << rays.refine << "\nrefine_points = " << rays.refine_points
    << "\nglancing_threshold = " << fmt(rays.glancing_threshold)
    << "\nallow_censored = " << (rays.allow_censored ? "true" : "false") << "\n\n[fem]\nh = " << fmt(fem.h)
    << "\nproblem = " << fem.problem << "\nn_max = " << fem.n_max << "\nsource_center = " << fmt(fem.source_center)
    << "\nsource_width = " << fmt(fem.source_width) << "\n\n";
  const auto& e = experiments;
  o << "[experiments]\nk_list = " << fmt(e.k_list) << "\nh_list = " << fmt(e.h_list)
    << "\ncutoff_inner = " << fmt(e.cutoff_inner) << "\ncutoff_outer = " << fmt(e.cutoff_outer) << "\ns = " << e.s
    << "\nL = " << fmt(e.L) << "\nmethod = " << e.method << "\nresolution = " << fmt(e.resolution)
    << "\ntolerance = " << fmt(e.tolerance) << "\nmax_iterations = " << e.max_iterations
    << "\nquasimode_L = " << fmt(e.quasimode_L) << "\nquasimode_delta = " << fmt(e.quasimode_delta)
    << "\nquasimode_h = " << fmt(e.quasimode_h) << "\nsamples = " << e.samples << "\nrefinements = " << e.refinements
    << "\nh_factor = " << fmt(e.h_factor) << "\npower_steps = " << e.power_steps << "\nb = " << fmt(e.b)
    << "\nh_constants = " << fmt(e.h_constants) << "\nh_interp = " << fmt(e.h_interp) << "\nk_max = " << fmt(e.k_max)
    << "\n\n";
  o << "[ledger]\nC_int_tilde = " << fmt(ledger.C_int_tilde) << "\nC_DtN_tilde = " << fmt(ledger.C_DtN_tilde)
    << "\nC_H2 = " << fmt(ledger.C_H2) << "\nL_ray = " << fmt(ledger.L_ray) << "\n";
  if (!ledger.file.empty()) o << "file = " << ledger.file << "\n";
  o << "\n[run]\nseed = " << seed << "\n";
  return o.str();
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(serialize())));
  return buf;
}

}  // namespace helmkit
