// jchsim: batch driver for the three-level JCH simulation library.
//
// Every subcommand reads a JSON run configuration, resolves defaults, and
// emits CSV (or JSON, when --out ends in .json) whose header embeds the
// resolved config, so any output regenerates byte-identically from itself.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "jch/basis.hpp"
#include "jch/cmft.hpp"
#include "jch/eigensolver.hpp"
#include "jch/errors.hpp"
#include "jch/hamiltonian.hpp"
#include "jch/observables.hpp"
#include "jch/parallel.hpp"

using nlohmann::json;

namespace {

constexpr std::size_t kDefaultMaxDim = 5'000'000;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<double> parse_grid(const json& j, const std::string& field) {
  if (!j.contains(field)) throw jch::ConfigError("missing grid field: " + field);
  const json& g = j.at(field);
  std::vector<double> out;
  if (g.is_array()) {
    for (const auto& v : g) out.push_back(v.get<double>());
  } else if (g.is_object()) {
    const double lo = g.at("min").get<double>();
    const double hi = g.at("max").get<double>();
    const int n = g.at("points").get<int>();
    if (n < 1) throw jch::ConfigError(field + ": points must be >= 1");
    for (int i = 0; i < n; ++i)
      out.push_back(n == 1 ? lo : lo + i * (hi - lo) / (n - 1));
  } else {
    throw jch::ConfigError(field + ": expected array or {min,max,points}");
  }
  if (out.empty()) throw jch::ConfigError(field + ": empty grid");
  return out;
}

// Reads cfg[field] with a default, writing the resolved value back so the
// echoed config is complete.
template <class T>
T resolve(json& cfg, const std::string& field, T def) {
  if (!cfg.contains(field)) cfg[field] = def;
  try {
    return cfg.at(field).get<T>();
  } catch (const json::exception& e) {
    throw jch::ConfigError("field '" + field + "': " + e.what());
  }
}

jch::ModelParams resolve_model(json& cfg) {
  jch::ModelParams p;
  p.beta01 = resolve(cfg, "beta01", 1.0);
  p.beta12 = resolve(cfg, "beta12", 0.0);
  p.delta = resolve(cfg, "delta", 0.0);
  p.kappa = resolve(cfg, "kappa", 0.0);
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw jch::ConfigError(e.what());
  }
  return p;
}

jch::Boundary resolve_boundary(json& cfg) {
  const auto name = resolve<std::string>(cfg, "boundary", "open");
  if (name == "open") return jch::Boundary::open;
  if (name == "periodic") return jch::Boundary::periodic;
  throw jch::ConfigError("field 'boundary': expected \"open\" or \"periodic\"");
}

jch::SolverOptions resolve_solver(json& cfg, unsigned seed) {
  if (!cfg.contains("solver")) cfg["solver"] = json::object();
  json& s = cfg["solver"];
  jch::SolverOptions opts;
  opts.tol = resolve(s, "tol", 1e-10);
  opts.max_iter = resolve(s, "max_iter", 5000);
  opts.krylov_dim = resolve(s, "krylov_dim", 200);
  opts.seed = seed;
  return opts;
}

jch::CMFTOptions resolve_cmft(json& cfg, unsigned seed) {
  if (!cfg.contains("cmft")) cfg["cmft"] = json::object();
  json& c = cfg["cmft"];
  jch::CMFTOptions opts;
  opts.tol_psi = resolve(c, "tol_psi", 1e-8);
  opts.max_sweeps = resolve(c, "max_sweeps", 500);
  opts.mixing = resolve(c, "mixing", 0.5);
  opts.psi_seed = resolve(c, "psi_seed", 0.1);
  opts.n_max = resolve(c, "n_max", 6);
  opts.psi_tol = resolve(c, "psi_tol", 1e-4);
  opts.rho_tol = resolve(c, "rho_tol", 1e-3);
  opts.dmu = resolve(c, "dmu", 1e-3);
  opts.solver_seed = seed;
  return opts;
}

void guard_dimension(int L, int N, int n_max, std::size_t max_dim) {
  const auto dim = jch::sector_dimension(L, N, n_max);
  if (max_dim > 0 && dim > max_dim)
    throw jch::ResourceGuardError("sector L=" + std::to_string(L) + " N=" + std::to_string(N) +
                                  " has dimension " + std::to_string(dim) +
                                  ", over the budget of " + std::to_string(max_dim));
}

// --- subcommand implementations -------------------------------------------

Table cmd_single_cavity(json& cfg, unsigned /*seed*/, int workers) {
  const auto grid = parse_grid(cfg, "beta12_grid");
  const double delta = resolve(cfg, "delta", 0.4);
  const double mu = resolve(cfg, "mu", -1.0);
  const int n_levels = resolve(cfg, "n_levels", 5);
  if (n_levels < 1) throw jch::ConfigError("n_levels must be >= 1");

  Table t;
  t.header = {"beta12", "n", "E", "E_shifted"};
  std::vector<std::vector<std::vector<std::string>>> chunks(grid.size());
  jch::parallel_for(grid.size(), workers, [&](std::size_t g) {
    jch::ModelParams p;
    p.beta12 = grid[g];
    p.delta = delta;
    for (int n = 1; n <= n_levels; ++n) {
      const auto levels = jch::single_cavity_spectrum(n, p, mu);
      chunks[g].push_back({fmt17(grid[g]), std::to_string(n), fmt17(levels.front().energy),
                           fmt17(levels.front().shifted)});
    }
  });
  for (auto& c : chunks)
    for (auto& row : c) t.rows.push_back(std::move(row));
  return t;
}

Table cmd_rho_mu(json& cfg, unsigned seed, int workers) {
  const auto mu_grid = parse_grid(cfg, "mu_grid");

  Table t;
  if (cfg.contains("cluster")) {
    const auto geom = jch::ClusterGeometry::by_name(cfg.at("cluster").get<std::string>());
    const auto params = resolve_model(cfg);
    const auto copts = resolve_cmft(cfg, seed);
    t.header = {"mu", "rho", "psi_bar", "converged"};
    std::vector<jch::CMFTResult> results(mu_grid.size());
    jch::parallel_for(mu_grid.size(), workers, [&](std::size_t i) {
      results[i] = jch::self_consistent(geom, params, mu_grid[i], copts);
    });
    for (std::size_t i = 0; i < mu_grid.size(); ++i)
      t.rows.push_back({fmt17(mu_grid[i]), fmt17(results[i].rho), fmt17(results[i].psi_bar),
                        results[i].converged ? "1" : "0"});
    return t;
  }

  const int L = resolve(cfg, "L", 6);
  const int n_top = resolve(cfg, "N_top", 2 * L);
  const auto params = resolve_model(cfg);
  jch::EnergyTableOptions opts;
  opts.n_max = resolve(cfg, "n_max", -1);
  opts.boundary = resolve_boundary(cfg);
  opts.solver = resolve_solver(cfg, seed);
  opts.workers = workers;
  opts.max_dim = resolve<std::size_t>(cfg, "max_dim", kDefaultMaxDim);

  const auto table = jch::build_energy_table(L, 0, n_top, params, opts);
  const auto steps = jch::staircase(table, mu_grid);
  t.header = {"mu", "N", "rho", "delta_N"};
  for (const auto& s : steps)
    t.rows.push_back({fmt17(s.mu), std::to_string(s.N), fmt17(s.rho), std::to_string(s.delta_N)});
  return t;
}

Table cmd_correlations(json& cfg, unsigned seed, int workers) {
  const int L = resolve(cfg, "L", 8);
  const int N = resolve(cfg, "N", L);
  const auto params = resolve_model(cfg);
  const int n_max = [&] {
    const int v = resolve(cfg, "n_max", -1);
    return v >= 0 ? v : N;
  }();
  const int i0 = [&] {
    const int v = resolve(cfg, "i0", -1);
    return v >= 0 ? v : L / 4;
  }();
  const int j_max = [&] {
    const int v = resolve(cfg, "j_max", -1);
    return v >= 0 ? v : 3 * L / 4;
  }();
  guard_dimension(L, N, n_max, resolve<std::size_t>(cfg, "max_dim", kDefaultMaxDim));

  const jch::SectorBasis basis(L, N, n_max);
  const auto h = jch::build_chain(basis, params, resolve_boundary(cfg));
  const auto gs = jch::ground_state(h, resolve_solver(cfg, seed));
  if (!gs.converged)
    throw jch::ConvergenceError("ground state did not converge (residual " +
                                std::to_string(gs.residual) + ")");

  const std::vector<jch::CorrelationKind> kinds = {
      jch::CorrelationKind::photon, jch::CorrelationKind::photon_pair,
      jch::CorrelationKind::atom, jch::CorrelationKind::atom_pair,
      jch::CorrelationKind::atom_photon};
  std::vector<std::vector<std::pair<int, double>>> series(kinds.size());
  jch::parallel_for(kinds.size(), workers, [&](std::size_t k) {
    series[k] = jch::correlation_series(gs, basis, kinds[k], i0, j_max);
  });

  Table t;
  t.header = {"kind", "distance", "i", "j", "value"};
  for (std::size_t k = 0; k < kinds.size(); ++k)
    for (const auto& [d, v] : series[k])
      t.rows.push_back({jch::correlation_name(kinds[k]), std::to_string(d), std::to_string(i0),
                        std::to_string(i0 + d), fmt17(v)});
  return t;
}

Table cmd_fidelity(json& cfg, unsigned seed, int workers) {
  const int L = resolve(cfg, "L", 6);
  const int N = resolve(cfg, "N", 9);
  auto params = resolve_model(cfg);
  const int n_max = [&] {
    const int v = resolve(cfg, "n_max", -1);
    return v >= 0 ? v : N;
  }();
  const double dkappa = resolve(cfg, "dkappa", 1e-3);
  const auto kappa_grid = parse_grid(cfg, "kappa_grid");
  guard_dimension(L, N, n_max, resolve<std::size_t>(cfg, "max_dim", kDefaultMaxDim));
  const auto solver = resolve_solver(cfg, seed);
  const auto boundary = resolve_boundary(cfg);

  const jch::SectorBasis basis(L, N, n_max);
  std::vector<double> chi(kappa_grid.size());
  jch::parallel_for(kappa_grid.size(), workers, [&](std::size_t i) {
    auto p = params;
    p.kappa = kappa_grid[i];
    const auto gs1 = jch::ground_state(jch::build_chain(basis, p, boundary), solver);
    p.kappa = kappa_grid[i] + dkappa;
    const auto gs2 = jch::ground_state(jch::build_chain(basis, p, boundary), solver);
    if (!gs1.converged || !gs2.converged)
      throw jch::ConvergenceError("fidelity solve at kappa=" + std::to_string(kappa_grid[i]) +
                                  " did not converge");
    chi[i] = jch::fidelity_susceptibility(gs1, gs2, dkappa);
  });

  std::size_t peak = 0;
  for (std::size_t i = 1; i < chi.size(); ++i)
    if (chi[i] > chi[peak]) peak = i;

  Table t;
  t.header = {"kappa", "chi_fs", "is_max"};
  for (std::size_t i = 0; i < kappa_grid.size(); ++i)
    t.rows.push_back({fmt17(kappa_grid[i]), fmt17(chi[i]), i == peak ? "1" : "0"});
  return t;
}

Table cmd_cmft_scan(json& cfg, unsigned seed, int workers) {
  const auto geom =
      jch::ClusterGeometry::by_name(resolve<std::string>(cfg, "cluster", "2x2"));
  const auto params = resolve_model(cfg);
  const auto copts = resolve_cmft(cfg, seed);
  const auto mu_grid = parse_grid(cfg, "mu_grid");

  std::vector<jch::CMFTResult> results(mu_grid.size());
  jch::parallel_for(mu_grid.size(), workers, [&](std::size_t i) {
    results[i] = jch::self_consistent(geom, params, mu_grid[i], copts);
  });

  Table t;
  t.header = {"mu", "psi_bar", "rho", "energy", "iterations", "converged",
              "gamma_photon", "gamma_photon_pair", "gamma_atom", "gamma_atom_pair",
              "gamma_atom_photon", "pair_ratio"};
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    const auto& r = results[i];
    t.rows.push_back({fmt17(mu_grid[i]), fmt17(r.psi_bar), fmt17(r.rho), fmt17(r.energy),
                      std::to_string(r.iterations), r.converged ? "1" : "0",
                      fmt17(r.correlation(jch::CorrelationKind::photon)),
                      fmt17(r.correlation(jch::CorrelationKind::photon_pair)),
                      fmt17(r.correlation(jch::CorrelationKind::atom)),
                      fmt17(r.correlation(jch::CorrelationKind::atom_pair)),
                      fmt17(r.correlation(jch::CorrelationKind::atom_photon)),
                      fmt17(r.pair_ratio())});
  }
  return t;
}

Table cmd_phase_diagram(json& cfg, unsigned seed, int workers) {
  const auto geom =
      jch::ClusterGeometry::by_name(resolve<std::string>(cfg, "cluster", "2x2"));
  const auto params = resolve_model(cfg);
  const auto copts = resolve_cmft(cfg, seed);
  const auto kappa_grid = parse_grid(cfg, "kappa_grid");
  const auto mu_grid = parse_grid(cfg, "mu_grid");

  const auto points = jch::phase_scan(geom, params, kappa_grid, mu_grid, copts, workers);

  Table t;
  t.header = {"kappa", "mu", "label", "psi_bar", "rho", "pair_ratio", "local_dn"};
  for (const auto& p : points)
    t.rows.push_back({fmt17(p.kappa), fmt17(p.mu), jch::phase_name(p.label), fmt17(p.psi_bar),
                      fmt17(p.rho), fmt17(p.pair_ratio), std::to_string(p.local_dn)});
  return t;
}

// --- output ----------------------------------------------------------------

void write_output(const Table& t, const json& cfg, const std::string& out_path) {
  std::ostringstream body;
  const bool as_json = out_path.size() > 5 && out_path.substr(out_path.size() - 5) == ".json";
  if (as_json) {
    json doc;
    doc["config"] = cfg;
    doc["columns"] = t.header;
    doc["results"] = json::array();
    for (const auto& row : t.rows) doc["results"].push_back(row);
    body << doc.dump(2) << "\n";
  } else {
    body << "# config: " << cfg.dump() << "\n";
    for (std::size_t c = 0; c < t.header.size(); ++c)
      body << (c ? "," : "") << t.header[c];
    body << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) body << (c ? "," : "") << row[c];
      body << "\n";
    }
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << body.str();
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw jch::ConfigError("cannot open output path: " + out_path);
    f << body.str();
  }
}

int run(const std::string& command, const std::string& config_path,
        const std::string& out_path, int workers, long long seed_override) {
  json cfg;
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) throw jch::ConfigError("cannot open config: " + config_path);
    try {
      f >> cfg;
    } catch (const json::exception& e) {
      throw jch::ConfigError(std::string("config parse error: ") + e.what());
    }
  } else {
    cfg = json::object();
  }
  if (!cfg.is_object()) throw jch::ConfigError("config root must be a JSON object");
  if (cfg.contains("command") && cfg.at("command") != command)
    throw jch::ConfigError("config 'command' does not match the subcommand");
  cfg["command"] = command;
  if (seed_override >= 0) cfg["seed"] = static_cast<unsigned>(seed_override);
  const unsigned seed = resolve<unsigned>(cfg, "seed", 12345u);

  Table t;
  if (command == "single-cavity") t = cmd_single_cavity(cfg, seed, workers);
  else if (command == "rho-mu") t = cmd_rho_mu(cfg, seed, workers);
  else if (command == "correlations") t = cmd_correlations(cfg, seed, workers);
  else if (command == "fidelity") t = cmd_fidelity(cfg, seed, workers);
  else if (command == "cmft-scan") t = cmd_cmft_scan(cfg, seed, workers);
  else if (command == "phase-diagram") t = cmd_phase_diagram(cfg, seed, workers);
  else throw jch::ConfigError("unknown command: " + command);

  write_output(t, cfg, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground-state simulations of the three-level JCH lattice model"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  int workers = 1;
  long long seed = -1;
  app.add_option("--config", config_path, "JSON run configuration")->capture_default_str();
  app.add_option("--out", out_path, "output path (.csv default, .json for JSON; '-' = stdout)");
  app.add_option("--workers", workers, "worker thread count")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "override the config RNG seed");

  for (const char* name : {"single-cavity", "rho-mu", "correlations", "fidelity",
                           "cmft-scan", "phase-diagram"})
    app.add_subcommand(name)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    return run(command, config_path, out_path, workers, seed);
  } catch (const jch::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const jch::EmptySectorError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const jch::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const jch::ResourceGuardError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
