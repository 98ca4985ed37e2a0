#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fdbem/sphere_series.hpp"
#include "run_config.hpp"

using namespace fdbem;
using namespace fdbem::cli;
namespace fs = std::filesystem;

namespace {

class Workdir {
 public:
  Workdir() : dir_(fs::temp_directory_path() / ("fdbem_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Workdir() { fs::remove_all(dir_); }
  fs::path operator/(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
};

// Runs the CLI with stdout and stderr captured; returns the exit status.
int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(FDBEM_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(std::stod(cell));
  return out;
}

std::string summary_value(const fs::path& summary, const std::string& key) {
  for (const auto& l : lines(summary)) {
    if (l.rfind(key + ": ", 0) == 0) return l.substr(key.size() + 2);
  }
  return {};
}

std::string outputs(const Workdir& w, const std::string& tag) {
  return " --csv " + (w / (tag + ".csv")).string() + " --summary " +
         (w / (tag + ".txt")).string();
}

}  // namespace

TEST(RunConfig, Defaults) {
  const RunConfig c = make_config({});
  EXPECT_EQ(c.sphere_subdivisions, 3);
  EXPECT_DOUBLE_EQ(c.k, kPi);
  EXPECT_DOUBLE_EQ(c.epsilon, 1e-3);
  EXPECT_EQ(c.p0, 1);
  EXPECT_EQ(c.threads, 1);
  EXPECT_EQ(c.problem, Problem::Pulsating);
  EXPECT_DOUBLE_EQ(c.solver_config(generate_sphere_mesh(0, 1.0)).gmres.tolerance, 1e-3);
}

TEST(RunConfig, WavenumberForms) {
  EXPECT_DOUBLE_EQ(parse_wavenumber("2.5"), 2.5);
  EXPECT_DOUBLE_EQ(parse_wavenumber("pi"), kPi);
  EXPECT_DOUBLE_EQ(parse_wavenumber("2pi"), 2.0 * kPi);
  EXPECT_DOUBLE_EQ(parse_wavenumber("0.5*pi"), 0.5 * kPi);
  EXPECT_THROW(parse_wavenumber("fast"), ConfigError);
}

TEST(RunConfig, RejectsInvalidValues) {
  EXPECT_THROW(make_config({{"nope", "1"}}), ConfigError);
  EXPECT_THROW(make_config({{"k", "-1"}}), ConfigError);
  EXPECT_THROW(make_config({{"epsilon", "0"}}), ConfigError);
  EXPECT_THROW(make_config({{"max_leaf", "0"}}), ConfigError);
  EXPECT_THROW(make_config({{"problem", "dipole"}}), ConfigError);
  EXPECT_THROW(make_config({{"direction", "1 0"}}), ConfigError);
  EXPECT_THROW(make_config({{"direction", "0 0 0"}}), ConfigError);
  EXPECT_THROW(make_config({{"threads", "0"}}), ConfigError);
  EXPECT_THROW(make_config({{"bench_n_min", "5"}, {"bench_n_max", "4"}}), ConfigError);
}

TEST(RunConfig, FileParsing) {
  Workdir w;
  {
    std::ofstream f(w / "run.cfg");
    f << "# comment\n\nk = 2pi   # trailing\nproblem=plane_wave\ndirection = 0 0 1\n";
  }
  const RunConfig c = make_config(read_config_file(w / "run.cfg"));
  EXPECT_DOUBLE_EQ(c.k, 2.0 * kPi);
  EXPECT_EQ(c.problem, Problem::PlaneWave);
  EXPECT_EQ(c.direction, Vec3(0, 0, 1));
  EXPECT_THROW(read_config_file(w / "missing.cfg"), ConfigError);
  {
    std::ofstream f(w / "bad.cfg");
    f << "k 3\n";
  }
  EXPECT_THROW(read_config_file(w / "bad.cfg"), ConfigError);
}

TEST(Cli, MissingMeshIsUsageError) {
  Workdir w;
  EXPECT_EQ(run_cli("solve --mesh /nonexistent/body.off" + outputs(w, "m"), w / "log"), 2);
  EXPECT_NE(slurp(w / "log").find("mesh not found"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  Workdir w;
  EXPECT_EQ(run_cli("", w / "log"), 2);
  EXPECT_EQ(run_cli("solve --bogus 1", w / "log"), 2);
  EXPECT_EQ(run_cli("solve --set k=-3", w / "log"), 2);
  EXPECT_EQ(run_cli("solve --config /nonexistent.cfg", w / "log"), 2);
  EXPECT_EQ(run_cli("verify --level everything", w / "log"), 2);
  EXPECT_EQ(run_cli("benchmark --bench_n_max 7", w / "log"), 2);
}

TEST(Cli, NonConvergenceExitCode) {
  Workdir w;
  EXPECT_EQ(run_cli("solve --sphere_subdivisions 2 --k 0.5pi --gmres_max_iter 1 --gmres_tol 1e-12" +
                        outputs(w, "nc"),
                    w / "log"),
            3);
  EXPECT_EQ(summary_value(w / "nc.txt", "converged"), "no");
}

TEST(Cli, VerifyKernelsPasses) {
  Workdir w;
  EXPECT_EQ(run_cli("verify --level kernels", w / "log"), 0);
  const std::string log = slurp(w / "log");
  EXPECT_NE(log.find("static axial HYPER vs -1/(2pi)"), std::string::npos);
  EXPECT_EQ(log.find("FAIL"), std::string::npos);
}

TEST(Cli, VerifyFailureExitCode) {
  // A loose truncation threshold also loosens GMRES, so the pinned solve bounds fail.
  Workdir w;
  EXPECT_EQ(run_cli("verify --level solve --epsilon 0.3", w / "log"), 1);
  EXPECT_NE(slurp(w / "log").find("FAIL"), std::string::npos);
}

TEST(Cli, SolveArtifacts) {
  Workdir w;
  ASSERT_EQ(run_cli("solve --sphere_subdivisions 2 --k 0.5pi" + outputs(w, "a"), w / "log"), 0);
  const auto rows = lines(w / "a.csv");
  ASSERT_EQ(rows.size(), 129u);
  EXPECT_EQ(rows[0], "id,cx,cy,cz,re_u,im_u,abs_u");
  EXPECT_EQ(summary_value(w / "a.txt", "N"), "128");

  // Summary L2 matches the value recomputed from the CSV.
  const Complex exact = pulsating_sphere_exact(0.5 * kPi);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto v = split_numbers(rows[i]);
    ASSERT_EQ(v.size(), 7u);
    EXPECT_EQ(v[0], static_cast<double>(i - 1));
    num += std::norm(Complex(v[4], v[5]) - exact);
    den += std::norm(exact);
  }
  const double l2 = std::stod(summary_value(w / "a.txt", "L2-error"));
  EXPECT_NEAR(l2, std::sqrt(num / den), 1e-12);
  EXPECT_LE(l2, 0.1);
}

TEST(Cli, DeterministicCsv) {
  Workdir w;
  const std::string args = "solve --sphere_subdivisions 2 --k pi --problem plane_wave";
  ASSERT_EQ(run_cli(args + outputs(w, "r1"), w / "log"), 0);
  ASSERT_EQ(run_cli(args + outputs(w, "r2"), w / "log"), 0);
  EXPECT_EQ(slurp(w / "r1.csv"), slurp(w / "r2.csv"));
}

TEST(Cli, ConfigFileAndOverrides) {
  Workdir w;
  {
    std::ofstream f(w / "run.cfg");
    f << "sphere_subdivisions = 1\nk = pi\nproblem = point_source\nsource = 0 0 -3\n";
  }
  ASSERT_EQ(run_cli("solve --config " + (w / "run.cfg").string() +
                        " --set sphere_subdivisions=2 --k 0.25pi" + outputs(w, "c"),
                    w / "log"),
            0);
  EXPECT_EQ(summary_value(w / "c.txt", "N"), "128");
  EXPECT_EQ(summary_value(w / "c.txt", "problem"), "point_source");
  EXPECT_DOUBLE_EQ(std::stod(summary_value(w / "c.txt", "k")), 0.25 * kPi);
  EXPECT_EQ(summary_value(w / "c.txt", "L2-error"), "n/a");
}

TEST(Cli, MeshFileInput) {
  Workdir w;
  save_mesh(generate_sphere_mesh(2, 1.0), w / "s.off", MeshFormat::OFF);
  ASSERT_EQ(run_cli("solve --mesh " + (w / "s.off").string() + outputs(w, "f"), w / "log"), 0);
  EXPECT_EQ(lines(w / "f.csv").size(), 129u);
}

TEST(Cli, BenchmarkRowPairing) {
  Workdir w;
  ASSERT_EQ(run_cli("benchmark --bench_n_min 2 --bench_n_max 4 --bench_csv " +
                        (w / "b.csv").string(),
                    w / "log"),
            0);
  const auto rows = lines(w / "b.csv");
  ASSERT_EQ(rows.size(), 4u);
  for (int n = 2; n <= 4; ++n) {
    const auto v = split_numbers(rows[n - 1]);
    EXPECT_EQ(v[0], n);
    EXPECT_EQ(v[1], 8 * std::pow(4.0, n));
    EXPECT_DOUBLE_EQ(v[2], kPi * std::pow(2.0, n - 3));
  }
  EXPECT_NE(slurp(w / "log").find("T_it ~ N^"), std::string::npos);
}

TEST(Cli, SingleRowBenchmarkMatchesSolve) {
  Workdir w;
  ASSERT_EQ(run_cli("benchmark --bench_n_min 2 --bench_n_max 2" + outputs(w, "b"), w / "log"), 0);
  ASSERT_EQ(run_cli("solve --sphere_subdivisions 2 --k 0.5pi" + outputs(w, "s"), w / "log"), 0);
  EXPECT_EQ(slurp(w / "b.csv"), slurp(w / "s.csv"));
  EXPECT_EQ(summary_value(w / "b.txt", "L2-error"), summary_value(w / "s.txt", "L2-error"));
}
