#include "concmeas_cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>

#include "CLI11.hpp"
#include "concmeas/eigensolver.hpp"
#include "concmeas/errors.hpp"
#include "concmeas/measures.hpp"
#include "concmeas/orthopoly.hpp"
#include "concmeas/turning.hpp"
#include "concmeas/wkb.hpp"
#include "json.hpp"

namespace concmeas::cli {

namespace {

using Json = nlohmann::ordered_json;

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const char* header) : file_(std::fopen(path.string().c_str(), "w"), &std::fclose) {
    if (!file_) throw NumericError(ErrorKind::Evaluation, "cannot write " + path.string());
    std::fprintf(file_.get(), "%s\n", header);
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      std::fprintf(file_.get(), first ? "%.17g" : ",%.17g", v);
      first = false;
    }
    std::fputc('\n', file_.get());
  }
  std::FILE* get() { return file_.get(); }

 private:
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file_;
};

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw NumericError(ErrorKind::Evaluation, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json real(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json report_json(const ConvergenceReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json errs = Json::array();
    for (double e : row.errors) errs.push_back(real(e));
    rows.push_back({{"f", row.f_name}, {"errors", errs}, {"trend", row.trend}});
  }
  return {{"potential", r.potential}, {"beta", real(r.beta)}, {"family", r.family}, {"k_list", r.k_list}, {"rows", rows}};
}

const std::vector<int>& require_k_list(const RunConfig& cfg) {
  if (cfg.experiment.k_list.empty()) throw ConfigError("experiment.k_list", "required for this command");
  return cfg.experiment.k_list;
}

double limit_beta(const RunConfig& cfg) {
  return cfg.experiment.beta_override ? *cfg.experiment.beta_override : infer_beta(cfg.potential);
}

}  // namespace

void cmd_solve(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  const auto pairs = solve_indices(cfg.potential, require_k_list(cfg), cfg.grid);
  CsvWriter ev(out_dir / "eigenvalues.csv", "k,lambda,parity");
  for (const auto& p : pairs)
    std::fprintf(ev.get(), "%d,%.17g,%s\n", p.k, p.lambda, p.parity == Parity::Even ? "even" : "odd");
  for (const auto& p : pairs) {
    CsvWriter psi(out_dir / ("psi_" + std::to_string(p.k) + ".csv"), "x,psi");
    const double sign = p.parity == Parity::Even ? 1.0 : -1.0;
    for (std::size_t i = p.psi.size() - 1; i > 0; --i) psi.row({-p.x(i), sign * p.psi[i]});
    for (std::size_t i = 0; i < p.psi.size(); ++i) psi.row({p.x(i), p.psi[i]});
  }
}

void cmd_measure(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  const auto& ks = require_k_list(cfg);
  const double beta = limit_beta(cfg);
  const auto pairs = solve_indices(cfg.potential, ks, cfg.grid);
  const auto grid = default_measure_grid();
  std::vector<DensityOnGrid> ds;
  for (const auto& p : pairs) {
    ds.push_back(rescaled_measure(p, turning_point(cfg.potential, p.lambda), grid));
    CsvWriter out(out_dir / ("density_k" + std::to_string(p.k) + ".csv"), "x,density");
    for (std::size_t i = 0; i < grid.size(); ++i) out.row({grid[i], ds.back().values[i]});
  }
  const LimitDensity mu = make_limit_density(beta);
  CsvWriter lim(out_dir / "limit_density.csv", "x,density");
  for (double x : grid) lim.row({x, mu(x)});
  write_json(out_dir / "convergence.json", report_json(weak_convergence_report(cfg.potential.name(), ks, ds, mu, default_panel())));
}

void cmd_zeros(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  const auto& ks = require_k_list(cfg);
  if (ks.front() < 1) throw ConfigError("experiment.k_list", "zero counting needs k >= 1");
  const double beta = limit_beta(cfg);
  const auto pairs = solve_indices(cfg.potential, ks, cfg.grid);
  CsvWriter out(out_dir / "zeros.csv", "k,epsilon,ratio,limit");
  for (const auto& p : pairs) {
    const double xl = turning_point(cfg.potential, p.lambda);
    for (double eps : cfg.experiment.epsilon_list)
      out.row({static_cast<double>(p.k), eps, count_zeros(p, eps, xl) / static_cast<double>(p.k), zero_distribution_limit(beta, eps)});
  }
}

void cmd_asymptotics(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  const auto& ks = require_k_list(cfg);
  const auto pairs = solve_indices(cfg.potential, ks, cfg.grid);
  const bool finite_beta = std::isfinite(limit_beta(cfg));
  std::vector<double> residuals(pairs.size(), std::numeric_limits<double>::quiet_NaN());
  if (finite_beta) residuals = eigenvalue_asymptotics_residual(cfg.potential, pairs);

  Json entries = Json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    const PhaseContext ctx(cfg.potential, p.lambda);
    const double jk = JK_integral(ctx);
    const double jw = JW_integral(ctx);
    Json c = nullptr;
    Json sup = nullptr;
    try {
      c = real(envelope_constant(jk, jw));
    } catch (const NumericError& e) {
      if (e.kind() != ErrorKind::AsymptoticRegime) throw;
    }
    try {
      sup = real(envelope_residual_sup(ctx, p));
    } catch (const NumericError& e) {
      if (e.kind() != ErrorKind::Domain) throw;
    }
    entries.push_back({{"k", p.k},
                       {"lambda", real(p.lambda)},
                       {"J_K", real(jk)},
                       {"J_W", real(jw)},
                       {"kappa", real(kappa(cfg.potential, p.lambda))},
                       {"C", c},
                       {"sup_residual", sup},
                       {"eigenvalue_residual", real(residuals[i])}});
  }
  write_json(out_dir / "asymptotics.json", Json{{"potential", cfg.potential.name()}, {"entries", entries}});
}

void cmd_orthopoly(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  const auto& ns = cfg.experiment.n_list;
  if (ns.empty()) throw ConfigError("experiment.n_list", "required for this command");
  const auto& alphas = cfg.experiment.alpha_list;
  const FreudReport rep = arcsine_convergence_report(alphas, ns, default_panel());
  Json per_alpha = Json::array();
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const FreudSystem sys = build_recurrence(alphas[a], ns.back());
    Json entry = report_json(rep.per_alpha[a]);
    entry["alpha"] = alphas[a];
    entry["orthonormality_drift"] = real(sys.orthonormality_drift);
    entry["growth_slope"] = sys.n_max >= 4 ? real(freud_growth_slope(sys, sys.n_max / 2)) : Json(nullptr);
    per_alpha.push_back(entry);
  }
  Json spread = Json::object();
  for (std::size_t j = 0; j < rep.f_names.size(); ++j) {
    Json col = Json::array();
    for (std::size_t i = 0; i < ns.size(); ++i) col.push_back(real(rep.spread[i][j]));
    spread[rep.f_names[j]] = col;
  }
  write_json(out_dir / "freud.json", Json{{"family", "freud"}, {"n_list", ns}, {"alpha_list", alphas}, {"per_alpha", per_alpha}, {"spread", spread}});
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"solve", "measure", "zeros", "asymptotics", "orthopoly"};
  return names;
}

void run_command(const std::string& command, const RunConfig& cfg, const std::filesystem::path& out_dir) {
  if (!cfg.experiment.command.empty() && cfg.experiment.command != command)
    throw ConfigError("experiment.command", "config is for '" + cfg.experiment.command + "', not '" + command + "'");
  std::filesystem::create_directories(out_dir);
  if (command == "solve") return cmd_solve(cfg, out_dir);
  if (command == "measure") return cmd_measure(cfg, out_dir);
  if (command == "zeros") return cmd_zeros(cfg, out_dir);
  if (command == "asymptotics") return cmd_asymptotics(cfg, out_dir);
  if (command == "orthopoly") return cmd_orthopoly(cfg, out_dir);
  throw ConfigError("command", "unknown command '" + command + "'");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Eigenfunction measures of even single-well potentials"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out;
  const std::vector<std::string> about{"eigenvalues and eigenfunctions", "rescaled measures against the limit density",
                                       "zero counts against the limit law", "WKB error integrals and envelope residuals",
                                       "Freud polynomial densities against the arcsine law"};
  for (std::size_t i = 0; i < command_names().size(); ++i) {
    CLI::App* sub = app.add_subcommand(command_names()[i], about[i]);
    sub->add_option("--config", config_path, "key=value configuration file")->required();
    sub->add_option("--out", out, "output directory (overrides experiment.output_dir)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = load_config(config_path);
    std::filesystem::path dir = out.empty() ? (cfg.experiment.output_dir.empty() ? "." : cfg.experiment.output_dir) : out;
    run_command(command, cfg, dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace concmeas::cli
