#include "varcurve/cli.hpp"

#include <atomic>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "varcurve/checks.hpp"
#include "varcurve/config.hpp"
#include "varcurve/curve_io.hpp"
#include "varcurve/error.hpp"

namespace varcurve::cli {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
  if (!f) throw ConfigError("write failed: " + path.string());
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::converged: return kConverged;
    case Verdict::iter_limit: return kIterLimit;
    case Verdict::degenerate: return kDegenerate;
  }
  return kConfigError;
}

struct SweepRow {
  double value = 0.0;
  std::optional<SolveReport> report;
  std::string error;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::vector<double> parse_values(std::string_view csv) {
  std::vector<double> out;
  while (!csv.empty()) {
    const auto comma = csv.find(',');
    const std::string_view item = csv.substr(0, comma);
    if (item.find_first_not_of(" \t") != std::string_view::npos) out.push_back(parse_double(item));
    if (comma == std::string_view::npos) break;
    csv.remove_prefix(comma + 1);
  }
  return out;
}

int cmd_solve(const fs::path& config, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = load_config(config);
    const SolveReport report = run(cfg);
    write_text(out_dir / cfg.curve_name, format_curve(report.minimizer));
    write_text(out_dir / cfg.report_name, report_json(cfg, report, cfg.curve_name));
    out << "verdict " << to_string(report.verdict) << " iterations " << report.iterations << " objective "
        << format_double(report.objective) << " residual " << format_double(report.residual) << '\n';
    if (!report.message.empty()) err << report.message << '\n';
    return exit_code(report.verdict);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

int cmd_sweep(const fs::path& config, const std::string& param, const std::vector<double>& values,
              const fs::path& out_dir, int jobs, std::ostream& out, std::ostream& err) {
  if (values.empty()) {
    err << "error: sweep needs at least one value\n";
    return kConfigError;
  }
  if (param != "tau" && param != "winding") {
    err << "error: unknown sweep parameter '" << param << "' (expected tau or winding)\n";
    return kConfigError;
  }
  RunConfig base;
  try {
    base = load_config(config);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      rows[i].value = values[i];
      try {
        rows[i].report = run(with_parameter(base, param, values[i]));
      } catch (const Error& e) {
        rows[i].error = e.what();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(values.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::ostringstream table;
  table << "value,objective,length,residual,iterations,verdict,error\n";
  for (const auto& r : rows) {
    table << format_double(r.value) << ',';
    if (r.report) {
      table << format_double(r.report->objective) << ',' << format_double(length(r.report->minimizer)) << ','
            << format_double(r.report->residual) << ',' << r.report->iterations << ','
            << to_string(r.report->verdict) << ',' << csv_escape(r.report->message) << '\n';
    } else {
      table << ",,,,failed," << csv_escape(r.error) << '\n';
    }
  }
  try {
    write_text(out_dir / ("sweep_" + param + ".csv"), table.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  out << table.str();
  return 0;
}

int cmd_check(const std::string& suite, std::ostream& out, std::ostream& err) {
  checks::SuiteResult result;
  try {
    result = checks::run_suite(suite);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  for (const auto& c : result.cases) {
    out << (c.passed ? "PASS " : "FAIL ") << c.id << " value=" << format_double(c.value)
        << " limit=" << format_double(c.limit);
    if (!c.detail.empty()) out << ' ' << c.detail;
    out << '\n';
  }
  out << suite << ": " << result.cases.size() - static_cast<std::size_t>(result.failures()) << '/'
      << result.cases.size() << " passed\n";
  return result.passed() ? 0 : 1;
}

int cmd_seed(const fs::path& config, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = load_config(config);
    const fs::path path = out_dir / "seed.csv";
    write_text(path, format_curve(seed_curve(cfg)));
    out << path.string() << '\n';
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational curves on Riemannian manifolds"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  std::string param;
  std::string values;
  std::string suite;
  int jobs = 1;

  auto* solve = app.add_subcommand("solve", "Solve a configured problem");
  solve->add_option("--config", config, "JSON config")->required();
  solve->add_option("--out", out_dir, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "One solve per parameter value");
  sweep->add_option("--config", config, "JSON config")->required();
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--param", param, "tau or winding")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--jobs", jobs, "Concurrent solves")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "Run a verification suite");
  check->add_option("suite", suite, "gradient, convergence or oracle")->required();

  auto* seed_cmd = app.add_subcommand("seed", "Write the seed curve without solving");
  seed_cmd->add_option("--config", config, "JSON config")->required();
  seed_cmd->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kConfigError;
  }

  if (*solve) return cmd_solve(config, out_dir, out, err);
  if (*sweep) {
    std::vector<double> list;
    try {
      list = parse_values(values);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kConfigError;
    }
    return cmd_sweep(config, param, list, out_dir, jobs, out, err);
  }
  if (*check) return cmd_check(suite, out, err);
  return cmd_seed(config, out_dir, out, err);
}

}  // namespace varcurve::cli
