#include "varcurve/curve_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "varcurve/error.hpp"

namespace varcurve {

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::string format_curve(const DiscreteCurve& x) {
  nlohmann::ordered_json header;
  header["manifold"] = x.manifold().id();
  header["domain_kind"] = to_string(x.domain());
  header["n_samples"] = x.sample_count();
  std::ostringstream os;
  os << header.dump() << '\n';
  os << 't';
  for (int i = 0; i < x.manifold().ambient_dim(); ++i) os << ",x" << i;
  os << '\n';
  for (int j = 0; j < x.sample_count(); ++j) {
    os << format_double(x.time(j));
    for (int i = 0; i < x.manifold().ambient_dim(); ++i) os << ',' << format_double(x.samples()(i, j));
    os << '\n';
  }
  return os.str();
}

DiscreteCurve parse_curve(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("curve file: missing header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("curve file: bad header: ") + e.what());
  }
  if (!header.contains("manifold") || !header.contains("domain_kind") || !header.contains("n_samples")) {
    throw ConfigError("curve file: header needs manifold, domain_kind and n_samples");
  }
  const ManifoldPtr m = make_manifold(header["manifold"].get<std::string>());
  const DomainKind domain = domain_from_string(header["domain_kind"].get<std::string>());
  const int count = header["n_samples"].get<int>();
  if (count < 1) throw ConfigError("curve file: n_samples must be positive");
  if (!std::getline(is, line)) throw ConfigError("curve file: missing column header");

  Eigen::MatrixXd s(m->ambient_dim(), count);
  for (int j = 0; j < count; ++j) {
    if (!std::getline(is, line)) throw ConfigError("curve file: fewer rows than n_samples");
    std::string_view rest(line);
    int col = -1;  // column -1 is t
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view field = rest.substr(0, comma);
      const double v = parse_double(field);
      if (col >= m->ambient_dim()) throw ConfigError("curve file: too many columns in row " + std::to_string(j));
      if (col >= 0) s(col, j) = v;
      ++col;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (col != m->ambient_dim()) throw ConfigError("curve file: too few columns in row " + std::to_string(j));
  }
  try {
    return DiscreteCurve(m, domain, std::move(s));
  } catch (const UsageError& e) {
    throw ConfigError(std::string("curve file: ") + e.what());
  }
}

void write_curve(const std::filesystem::path& path, const DiscreteCurve& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << format_curve(x);
  if (!out) throw ConfigError("write failed: " + path.string());
}

DiscreteCurve read_curve(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_curve(os.str());
}

}  // namespace varcurve
