#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "fdbem/bem_solver.hpp"

namespace fdbem::cli {

// Bad configuration or input; reported with exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Problem { Pulsating, PlaneWave, PointSource };

struct RunConfig {
  std::filesystem::path mesh;  // empty: generated sphere
  int sphere_subdivisions = 3;
  double sphere_radius = 1.0;
  double k = kPi;
  double epsilon = 1e-3;
  int p0 = 1;
  int max_leaf = 32;
  Problem problem = Problem::Pulsating;
  Vec3 direction = Vec3(1, 0, 0);
  Vec3 source = Vec3(-2, 0, 0);
  double gmres_tol = 0.0;  // 0: epsilon
  int gmres_max_iter = 500;
  int gmres_restart = 0;
  int threads = 1;
  std::filesystem::path csv = "fdbem_surface.csv";
  std::filesystem::path summary = "fdbem_summary.txt";
  std::filesystem::path cache;  // operator cache, off when empty
  int bench_n_min = 3;
  int bench_n_max = 5;
  std::filesystem::path bench_csv;

  SolverConfig solver_config(const TriMesh& mesh) const;
};

using Overrides = std::map<std::string, std::string>;

// Keys accepted in config files and as --key overrides.
const std::map<std::string, std::string>& config_keys();

// "key = value" lines; '#' starts a comment. Throws ConfigError.
Overrides read_config_file(const std::filesystem::path& path);

// Applies the pairs in order and validates the result. Throws ConfigError.
RunConfig make_config(const Overrides& pairs);

// Number with an optional "pi" factor: "2.5", "pi", "2pi", "0.5*pi".
double parse_wavenumber(const std::string& text);

std::string to_string(Problem p);

}  // namespace fdbem::cli
