#include "concmeas_cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "concmeas/errors.hpp"

namespace concmeas::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_items(const std::string& key, std::string value) {
  value = trim(value);
  if (!value.empty() && value.front() == '[') {
    if (value.back() != ']') throw ConfigError(key, "unbalanced brackets");
    value = value.substr(1, value.size() - 2);
  }
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key, "empty list item");
    items.push_back(item);
  }
  if (items.empty()) throw ConfigError(key, "list must not be empty");
  return items;
}

int parse_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  errno = 0;
  const long n = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE || n < std::numeric_limits<int>::min() ||
      n > std::numeric_limits<int>::max())
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  return static_cast<int>(n);
}

void require_increasing(const std::string& key, const std::vector<int>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw ConfigError(key, "must be strictly increasing");
}

double get_real(const std::map<std::string, std::string>& e, const std::string& key, double fallback) {
  const auto it = e.find(key);
  return it == e.end() ? fallback : parse_real(key, it->second);
}

std::optional<double> find_real(const std::map<std::string, std::string>& e, const std::string& key) {
  const auto it = e.find(key);
  if (it == e.end()) return std::nullopt;
  return parse_real(key, it->second);
}

void reject_unused(const std::map<std::string, std::string>& e, const std::vector<std::string>& keys, const std::string& kind) {
  for (const std::string& k : keys)
    if (e.count(k)) throw ConfigError(k, "not used by kind '" + kind + "'");
}

double require_real(const std::map<std::string, std::string>& e, const std::string& key, const std::string& kind) {
  const auto v = find_real(e, key);
  if (!v) throw ConfigError(key, "required for kind '" + kind + "'");
  return *v;
}

PotentialSpec build_potential(const std::map<std::string, std::string>& e) {
  const auto it = e.find("potential.kind");
  const std::string kind = it == e.end() ? "harmonic" : lower(trim(it->second));
  PotentialSpec spec = PotentialSpec::harmonic();
  if (kind == "harmonic") {
    reject_unused(e, {"potential.beta", "potential.alpha", "potential.gamma"}, kind);
  } else if (kind == "monomial") {
    reject_unused(e, {"potential.alpha", "potential.gamma"}, kind);
    spec = PotentialSpec::monomial(require_real(e, "potential.beta", kind));
  } else if (kind == "monomial_log") {
    reject_unused(e, {"potential.beta", "potential.gamma"}, kind);
    spec = PotentialSpec::monomial_log(require_real(e, "potential.alpha", kind));
  } else if (kind == "exponential") {
    reject_unused(e, {"potential.beta", "potential.alpha"}, kind);
    spec = PotentialSpec::exponential(require_real(e, "potential.gamma", kind));
  } else {
    throw ConfigError("potential.kind", "expected harmonic, monomial, monomial_log or exponential, got '" + kind + "'");
  }
  if (const auto xi0 = find_real(e, "potential.xi0")) spec = spec.with_xi0(*xi0);

  const auto pk = e.find("perturbation.kind");
  const std::string pkind = pk == e.end() ? "zero" : lower(trim(pk->second));
  if (pkind == "zero") {
    reject_unused(e, {"perturbation.gamma", "perturbation.support_radius", "perturbation.amplitude"}, pkind);
    return spec;
  }
  const double amp = get_real(e, "perturbation.amplitude", 1.0);
  if (!std::isfinite(amp)) throw ConfigError("perturbation.amplitude", "must be finite");
  if (pkind == "compact_bump" || pkind == "compact_indicator") {
    reject_unused(e, {"perturbation.gamma"}, pkind);
    const double r = require_real(e, "perturbation.support_radius", pkind);
    return spec.with_perturbation(pkind == "compact_bump" ? PerturbationSpec::compact_bump(r, amp)
                                                          : PerturbationSpec::compact_indicator(r, amp));
  }
  if (pkind == "poly_bounded") {
    reject_unused(e, {"perturbation.support_radius"}, pkind);
    return spec.with_perturbation(PerturbationSpec::poly_bounded(require_real(e, "perturbation.gamma", pkind), amp));
  }
  throw ConfigError("perturbation.kind", "expected zero, compact_bump, compact_indicator or poly_bounded, got '" + pkind + "'");
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "potential.kind",         "potential.beta",          "potential.alpha",
      "potential.gamma",        "potential.xi0",           "perturbation.kind",
      "perturbation.gamma",     "perturbation.support_radius", "perturbation.amplitude",
      "grid.points",            "grid.xmax_margin",        "solver.tolerance",
      "experiment.command",     "experiment.k_list",       "experiment.n_list",
      "experiment.alpha_list",  "experiment.epsilon_list", "experiment.beta_override",
      "experiment.output_dir",
  };
  return keys;
}

double parse_real(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  const std::string l = lower(v);
  if (l == "inf" || l == "infinity" || l == "+inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || std::isnan(d)) throw ConfigError(key, "expected a number, got '" + v + "'");
  return d;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const std::string& item : split_items(key, value)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(key, item));
      continue;
    }
    const int lo = parse_int(key, item.substr(0, dots));
    const int hi = parse_int(key, item.substr(dots + 2));
    if (hi < lo) throw ConfigError(key, "range '" + item + "' is empty");
    for (int k = lo; k <= hi; ++k) out.push_back(k);
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const std::string& item : split_items(key, value)) out.push_back(parse_real(key, item));
  return out;
}

std::map<std::string, std::string> parse_entries(const std::string& text) {
  const auto& keys = known_keys();
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no), "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(key, "unknown key");
    if (value.empty()) throw ConfigError(key, "empty value");
    if (!out.emplace(key, value).second) throw ConfigError(key, "duplicate key");
  }
  return out;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  cfg.entries = parse_entries(text);
  const auto& e = cfg.entries;
  cfg.potential = build_potential(e);

  if (const auto it = e.find("grid.points"); it != e.end()) {
    cfg.grid.points = parse_int(it->first, it->second);
    if (cfg.grid.points < 0) throw ConfigError("grid.points", "must be >= 0 (0 selects automatically)");
  }
  cfg.grid.xmax_margin = get_real(e, "grid.xmax_margin", cfg.grid.xmax_margin);
  if (!(cfg.grid.xmax_margin > 1.0) || !std::isfinite(cfg.grid.xmax_margin))
    throw ConfigError("grid.xmax_margin", "must be a finite number above 1");
  cfg.grid.tolerance = get_real(e, "solver.tolerance", cfg.grid.tolerance);
  if (!(cfg.grid.tolerance > 0.0) || !std::isfinite(cfg.grid.tolerance)) throw ConfigError("solver.tolerance", "must be positive");

  Experiment& x = cfg.experiment;
  if (const auto it = e.find("experiment.command"); it != e.end()) x.command = lower(it->second);
  if (const auto it = e.find("experiment.k_list"); it != e.end()) {
    x.k_list = parse_int_list(it->first, it->second);
    require_increasing(it->first, x.k_list);
    if (x.k_list.front() < 0) throw ConfigError(it->first, "indices must be >= 0");
  }
  if (const auto it = e.find("experiment.n_list"); it != e.end()) {
    x.n_list = parse_int_list(it->first, it->second);
    require_increasing(it->first, x.n_list);
    if (x.n_list.front() < 1 || x.n_list.back() > 60) throw ConfigError(it->first, "degrees must lie in [1, 60]");
  }
  if (const auto it = e.find("experiment.alpha_list"); it != e.end()) {
    x.alpha_list = parse_real_list(it->first, it->second);
    for (double a : x.alpha_list)
      if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError(it->first, "every alpha must be positive and finite");
  }
  if (const auto it = e.find("experiment.epsilon_list"); it != e.end()) {
    x.epsilon_list = parse_real_list(it->first, it->second);
    for (double eps : x.epsilon_list)
      if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError(it->first, "every epsilon must lie in (0, 1]");
  }
  if (const auto b = find_real(e, "experiment.beta_override")) {
    if (!(*b > 0.0)) throw ConfigError("experiment.beta_override", "must be positive");
    x.beta_override = *b;
  }
  if (const auto it = e.find("experiment.output_dir"); it != e.end()) x.output_dir = it->second;
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace concmeas::cli
