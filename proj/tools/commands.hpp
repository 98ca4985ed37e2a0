#pragma once

#include <string>

#include "run_config.hpp"

namespace fdbem::cli {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kUsage = 2, kNotConverged = 3 };

int cmd_solve(const RunConfig& cfg);
// level: kernels, operators, matvec, solve or all.
int cmd_verify(const RunConfig& cfg, const std::string& level);
int cmd_benchmark(const RunConfig& cfg);

}  // namespace fdbem::cli
