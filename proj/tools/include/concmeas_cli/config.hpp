#pragma once

/// Flat key=value run configuration.
///
/// One `section.key = value` pair per line; `#` starts a comment. Any
/// rejected entry raises ConfigError naming the key.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "concmeas/eigensolver.hpp"
#include "concmeas/potential.hpp"

namespace concmeas::cli {

struct Experiment {
  std::string command;              ///< empty when the file does not pin one
  std::vector<int> k_list;          ///< strictly increasing, >= 0
  std::vector<int> n_list;          ///< strictly increasing, in [1, 60]
  std::vector<double> alpha_list{1.0, 2.0, 4.0};
  std::vector<double> epsilon_list{0.25, 0.5, 1.0};
  std::optional<double> beta_override;
  std::string output_dir;
};

struct RunConfig {
  PotentialSpec potential = PotentialSpec::harmonic();
  GridConfig grid;
  Experiment experiment;
  std::map<std::string, std::string> entries;  ///< raw key/value pairs as read
};

/// Every key the parser accepts.
const std::vector<std::string>& known_keys();

/// Raw key/value pairs; every key must be known and appear once.
std::map<std::string, std::string> parse_entries(const std::string& text);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// "0..5", "[10, 20, 40]" and mixtures such as "0..3, 7".
std::vector<int> parse_int_list(const std::string& key, const std::string& value);
std::vector<double> parse_real_list(const std::string& key, const std::string& value);
/// Accepts "inf" and "infinity" in any case.
double parse_real(const std::string& key, const std::string& value);

}  // namespace concmeas::cli
