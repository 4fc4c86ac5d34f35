#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace varcurve::cli {

/// Exit codes of `varcurve solve`.
enum ExitCode : int { kConverged = 0, kConfigError = 1, kIterLimit = 2, kDegenerate = 3 };

/// Solve one config; writes the report JSON and minimizer curve file into out_dir.
int cmd_solve(const std::filesystem::path& config, const std::filesystem::path& out_dir, std::ostream& out,
              std::ostream& err);

/// One solve per value of `param` ("tau" or "winding"); writes sweep_<param>.csv
/// with columns value,objective,length,residual,iterations,verdict,error.
/// Failed runs are recorded in the table. Exit 1 on config errors or an empty list.
int cmd_sweep(const std::filesystem::path& config, const std::string& param, const std::vector<double>& values,
              const std::filesystem::path& out_dir, int jobs, std::ostream& out, std::ostream& err);

/// Run a verification suite (gradient | convergence | oracle); exit 0 iff every case passes.
int cmd_check(const std::string& suite, std::ostream& out, std::ostream& err);

/// Write the seed curve of a config (no solve) as seed.csv in out_dir.
int cmd_seed(const std::filesystem::path& config, const std::filesystem::path& out_dir, std::ostream& out,
             std::ostream& err);

/// Comma-separated numbers; empty input yields an empty list. Throws ConfigError.
std::vector<double> parse_values(std::string_view csv);

/// Full command line front end.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace varcurve::cli
