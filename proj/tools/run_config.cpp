#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fdbem::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key + ": not a number: '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key + ": not an integer: '" + text + "'");
  }
  return v;
}

Vec3 parse_vec3(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  std::string a, b, c, extra;
  if (!(in >> a >> b >> c) || (in >> extra)) {
    throw ConfigError(key + ": expected three numbers, got '" + text + "'");
  }
  return {parse_double(key, a), parse_double(key, b), parse_double(key, c)};
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

const std::map<std::string, std::string>& config_keys() {
  static const std::map<std::string, std::string> keys{
      {"mesh", "OFF or OBJ surface mesh; a generated sphere when unset"},
      {"sphere_subdivisions", "generated sphere refinement n (8*4^n elements)"},
      {"sphere_radius", "generated sphere radius"},
      {"k", "wavenumber, e.g. 3.14159, pi, 2pi"},
      {"epsilon", "SVD truncation threshold"},
      {"p0", "points-per-side offset"},
      {"max_leaf", "elements per octree leaf"},
      {"problem", "pulsating | plane_wave | point_source"},
      {"direction", "plane-wave direction 'dx dy dz'"},
      {"source", "point-source location 'x y z'"},
      {"gmres_tol", "GMRES tolerance (default: epsilon)"},
      {"gmres_max_iter", "GMRES iteration cap"},
      {"gmres_restart", "GMRES restart length, 0 for none"},
      {"threads", "worker threads (the engine runs single-threaded)"},
      {"csv", "surface field CSV output"},
      {"summary", "run summary output"},
      {"cache", "translation operator cache file"},
      {"bench_n_min", "benchmark: smallest sphere refinement"},
      {"bench_n_max", "benchmark: largest sphere refinement"},
      {"bench_csv", "benchmark: optional table output"},
  };
  return keys;
}

double parse_wavenumber(const std::string& text) {
  std::string t = trim(text);
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    std::string coef = trim(t.substr(0, t.size() - 2));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    return (coef.empty() ? 1.0 : parse_double("k", coef)) * kPi;
  }
  return parse_double("k", t);
}

std::string to_string(Problem p) {
  switch (p) {
    case Problem::Pulsating: return "pulsating";
    case Problem::PlaneWave: return "plane_wave";
    case Problem::PointSource: return "point_source";
  }
  return "?";
}

Overrides read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path.string());
  Overrides out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig make_config(const Overrides& pairs) {
  RunConfig c;
  bool tol_set = false;
  for (const auto& [key, value] : pairs) {
    if (!config_keys().count(key)) throw ConfigError("unknown config key: " + key);
    if (key == "mesh") c.mesh = value;
    else if (key == "sphere_subdivisions") c.sphere_subdivisions = parse_int(key, value);
    else if (key == "sphere_radius") c.sphere_radius = parse_double(key, value);
    else if (key == "k") c.k = parse_wavenumber(value);
    else if (key == "epsilon") c.epsilon = parse_double(key, value);
    else if (key == "p0") c.p0 = parse_int(key, value);
    else if (key == "max_leaf") c.max_leaf = parse_int(key, value);
    else if (key == "problem") {
      if (value == "pulsating") c.problem = Problem::Pulsating;
      else if (value == "plane_wave") c.problem = Problem::PlaneWave;
      else if (value == "point_source") c.problem = Problem::PointSource;
      else throw ConfigError("problem: expected pulsating, plane_wave or point_source");
    } else if (key == "direction") c.direction = parse_vec3(key, value);
    else if (key == "source") c.source = parse_vec3(key, value);
    else if (key == "gmres_tol") {
      c.gmres_tol = parse_double(key, value);
      tol_set = true;
    } else if (key == "gmres_max_iter") c.gmres_max_iter = parse_int(key, value);
    else if (key == "gmres_restart") c.gmres_restart = parse_int(key, value);
    else if (key == "threads") c.threads = parse_int(key, value);
    else if (key == "csv") c.csv = value;
    else if (key == "summary") c.summary = value;
    else if (key == "cache") c.cache = value;
    else if (key == "bench_n_min") c.bench_n_min = parse_int(key, value);
    else if (key == "bench_n_max") c.bench_n_max = parse_int(key, value);
    else if (key == "bench_csv") c.bench_csv = value;
  }
  require(c.sphere_subdivisions >= 0 && c.sphere_subdivisions <= 7,
          "sphere_subdivisions must lie in 0..7");
  require(c.sphere_radius > 0.0, "sphere_radius must be positive");
  require(c.k > 0.0, "k must be positive");
  require(c.epsilon > 0.0 && c.epsilon < 1.0, "epsilon must lie in (0, 1)");
  require(c.p0 >= 0, "p0 must be non-negative");
  require(c.max_leaf >= 1, "max_leaf must be positive");
  require(!tol_set || c.gmres_tol > 0.0, "gmres_tol must be positive");
  require(c.gmres_max_iter >= 1, "gmres_max_iter must be positive");
  require(c.gmres_restart >= 0, "gmres_restart must be non-negative");
  require(c.threads >= 1, "threads must be positive");
  require(c.direction.norm() > 0.0, "direction must be nonzero");
  require(c.bench_n_min >= 0 && c.bench_n_min <= c.bench_n_max && c.bench_n_max <= 7,
          "benchmark range must satisfy 0 <= bench_n_min <= bench_n_max <= 7");
  try {
    points_per_side(c.epsilon, c.p0);
  } catch (const Error& e) {
    throw ConfigError(std::string("epsilon/p0: ") + e.what());
  }
  return c;
}

SolverConfig RunConfig::solver_config(const TriMesh& mesh_data) const {
  SolverConfig s = default_solver_config(epsilon);
  s.engine.max_leaf = max_leaf;
  s.engine.translation.p0 = p0;
  s.gmres.tolerance = gmres_tol > 0.0 ? gmres_tol : epsilon;
  s.gmres.max_iterations = gmres_max_iter;
  s.gmres.restart = gmres_restart;
  if (!cache.empty()) {
    s.engine.cache_file = cache;
    s.engine.cache_key = {mesh_hash(mesh_data), k, epsilon, p0, max_leaf};
  }
  return s;
}

}  // namespace fdbem::cli
