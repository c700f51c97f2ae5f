// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jch/basis.hpp"
#include "jch/cmft.hpp"
#include "jch/eigensolver.hpp"
#include "jch/hamiltonian.hpp"
#include "jch/observables.hpp"

using namespace jch;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

ModelParams working_point(double kappa = 0.0) {
  ModelParams p;
  p.beta12 = std::sqrt(2.0);
  p.delta = 0.4;
  p.kappa = kappa;
  return p;
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(lo) * f(mid) <= 0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Independent oracle: most negative root of l^3 + 0.4 l^2 - 4 l - 0.8, the
// characteristic cubic of the charge-2 cavity block at beta12 = sqrt(2),
// delta = 0.4.
double e2_oracle() {
  return bisect([](double x) { return x * x * x + 0.4 * x * x - 4 * x - 0.8; }, -3.0, -1.0);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo + i * (hi - lo) / (n - 1));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// --- criteria ---------------------------------------------------------------

void criterion_1() {
  const auto p = working_point();
  const double e1 = single_cavity_ground_energy(1, p);
  const double e2 = single_cavity_ground_energy(2, p);
  const double oracle = e2_oracle();
  const bool ok = std::abs(e1 + 1.0) <= 1e-12 && std::abs(e2 - oracle) <= 1e-10;
  report(1, "single-cavity exactness", ok,
         "E1=" + fmt(e1) + ", E2=" + fmt(e2) + ", oracle=" + fmt(oracle));
}

void criterion_2() {
  const auto p = working_point();
  const double binding =
      single_cavity_ground_energy(2, p) - 2 * single_cavity_ground_energy(1, p);
  const double oracle_binding = e2_oracle() + 2.0;  // E1 = -1 exactly
  ModelParams two_level;
  const double binding0 =
      single_cavity_ground_energy(2, two_level) - 2 * single_cavity_ground_energy(1, two_level);
  const bool ok = binding < 0 && std::abs(binding - oracle_binding) <= 1e-8 && binding0 > 0;
  report(2, "pair binding", ok,
         "E2-2E1=" + fmt(binding) + " (oracle " + fmt(oracle_binding) + "), beta12=0 gives " +
             fmt(binding0));
}

void criterion_3() {
  const auto p = working_point();
  const double oracle = e2_oracle() / 2;

  // staircase route: atomic-limit table, boundary located by bisection on
  // the argmin switch
  EnergyTable table;
  table.L = 1;
  table.energies[0] = 0.0;
  for (int n = 1; n <= 4; ++n) table.energies[n] = single_cavity_ground_energy(n, p);
  auto rho_at = [&](double mu) { return staircase(table, {mu}).front().rho; };
  const double mu_star =
      bisect([&](double mu) { return rho_at(mu) - 1.0; }, -1.2, -0.95);
  bool n1_never = true;
  for (const auto& s : staircase(table, linspace(-1.3, -0.8, 2001)))
    if (s.N == 1) n1_never = false;

  // CMFT route (atomic limit is cluster-independent; 1x1 keeps it exact)
  const auto geom = ClusterGeometry::single_site();
  CMFTOptions opts;
  auto cmft_rho = [&](double mu) { return self_consistent(geom, p, mu, opts).rho; };
  const double mu_cmft =
      bisect([&](double mu) { return cmft_rho(mu) - 1.0; }, -1.2, -0.95);
  const bool no_middle = std::abs(cmft_rho(mu_cmft - 1e-7) - 0.0) < 1e-6 &&
                         std::abs(cmft_rho(mu_cmft + 1e-7) - 2.0) < 1e-6;

  const bool ok = std::abs(mu_star - oracle) <= 1e-8 && n1_never &&
                  std::abs(mu_cmft - oracle) <= 1e-8 && no_middle;
  report(3, "atomic-limit vacuum->MI(2) boundary", ok,
         "staircase mu*=" + fmt(mu_star) + ", cmft mu*=" + fmt(mu_cmft) + ", oracle=" +
             fmt(oracle) + (n1_never ? ", N=1 never selected" : ", N=1 SELECTED"));
}

void criterion_4() {
  EnergyTableOptions topt;
  topt.workers = 1;  // the large sectors dominate memory; keep one at a time
  const auto grid = linspace(-1.2, -0.85, 3501);

  const auto table_psf = build_energy_table(6, 0, 12, working_point(0.01), topt);
  bool all_even = true;
  int reached = 0;
  for (const auto& s : staircase(table_psf, grid)) {
    if (s.delta_N != 0 && s.N <= 12 && s.delta_N != 2) all_even = false;
    reached = std::max(reached, s.N);
  }

  const auto table_sf = build_energy_table(6, 0, 12, working_point(0.06), topt);
  bool any_single = false;
  for (const auto& s : staircase(table_sf, grid))
    if (s.delta_N == 1 && s.N <= 12) any_single = true;

  const bool ok = all_even && reached == 12 && any_single;
  report(4, "PSF staircase signature (L=6)", ok,
         std::string("kappa=0.01 steps all dN=2: ") + (all_even ? "yes" : "no") +
             ", top N=" + std::to_string(reached) + ", kappa=0.06 has a dN=1 step: " +
             (any_single ? "yes" : "no"));
}

void criterion_5() {
  const int L = 8, N = 8, i0 = 2, j_max = 6;
  auto series_at = [&](double kappa) {
    const SectorBasis basis(L, N, N);
    const auto gs = ground_state(build_chain(basis, working_point(kappa)));
    if (!gs.converged) throw std::runtime_error("criterion 5: solve unconverged");
    std::vector<std::vector<std::pair<int, double>>> s;
    for (auto kind : {CorrelationKind::photon, CorrelationKind::photon_pair,
                      CorrelationKind::atom, CorrelationKind::atom_pair})
      s.push_back(correlation_series(gs, basis, kind, i0, j_max));
    return s;
  };

  const auto psf = series_at(0.01);
  bool pair_dominates = true;
  for (int d = 3; d <= j_max - i0; ++d) {
    if (std::abs(psf[1][d].second) <= std::abs(psf[0][d].second)) pair_dominates = false;
    if (std::abs(psf[3][d].second) <= std::abs(psf[2][d].second)) pair_dominates = false;
  }
  const double ratio = std::abs(psf[1][3].second) / std::abs(psf[0][3].second);

  const auto sf = series_at(0.06);
  const bool single_leads_short =
      std::abs(sf[0][1].second) > std::abs(sf[1][1].second) &&
      std::abs(sf[2][1].second) > std::abs(sf[3][1].second);

  const bool ok = pair_dominates && single_leads_short;
  report(5, "correlation dominance (L=8, rho=1)", ok,
         "pair/single ratio at d=3, kappa=0.01: " + fmt(ratio) +
             "; kappa=0.06 single leads at d=1: " + (single_leads_short ? "yes" : "no"));
}

void criterion_6() {
  const int L = 6, N = 9;
  const SectorBasis basis(L, N, N);
  std::vector<double> warm;  // ground vector of the previous kappa point
  auto chi_scan = [&](double dkappa, const std::vector<double>& kappas) {
    std::vector<double> chi;
    for (const double k : kappas) {
      // periodic boundary: at L = 6 the open-chain edge effects push the
      // crossover peak below the scanned window
      SolverOptions so1;
      if (!warm.empty()) so1.start = &warm;
      const auto g1 =
          ground_state(build_chain(basis, working_point(k), Boundary::periodic), so1);
      SolverOptions so2;
      so2.start = &g1.vector;
      const auto g2 = ground_state(
          build_chain(basis, working_point(k + dkappa), Boundary::periodic), so2);
      if (!g1.converged || !g2.converged)
        throw std::runtime_error("criterion 6: solve unconverged");
      chi.push_back(fidelity_susceptibility(g1, g2, dkappa));
      warm = g2.vector;
    }
    return chi;
  };

  const auto kappas = linspace(0.01, 0.08, 15);
  const auto chi = chi_scan(1e-3, kappas);
  std::size_t peak = 0;
  for (std::size_t i = 1; i < chi.size(); ++i)
    if (chi[i] > chi[peak]) peak = i;
  const bool interior = peak > 0 && peak + 1 < chi.size();

  // single interior maximum: increasing up to the peak, decreasing after
  bool unimodal = true;
  for (std::size_t i = 1; i <= peak; ++i)
    if (chi[i] < chi[i - 1]) unimodal = false;
  for (std::size_t i = peak + 1; i < chi.size(); ++i)
    if (chi[i] > chi[i - 1]) unimodal = false;

  const auto chi_half = chi_scan(5e-4, kappas);
  std::size_t peak_half = 0;
  for (std::size_t i = 1; i < chi_half.size(); ++i)
    if (chi_half[i] > chi_half[peak_half]) peak_half = i;
  const double shift = std::abs(kappas[peak] - kappas[peak_half]) / kappas[peak];

  const bool ok = interior && unimodal && shift < 0.10;
  report(6, "fidelity susceptibility peak (L=6, rho=1.5)", ok,
         "peak at kappa=" + fmt(kappas[peak]) + ", unimodal: " + (unimodal ? "yes" : "no") +
             ", peak shift on halving dkappa: " + fmt(shift * 100) + "%");
}

void criterion_7() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool lanczos_ok = true;
  double worst = 0.0;
  const std::vector<std::array<int, 3>> sectors = {
      {3, 3, 3}, {4, 4, 2}, {2, 5, 5}, {5, 3, 2}, {4, 5, 3}, {3, 5, 4}, {6, 3, 1}, {2, 6, 6}};
  for (const auto& [L, N, n_max] : sectors) {
    ModelParams p;
    p.beta12 = 2.0 * u(rng);
    p.delta = 2.0 * u(rng) - 1.0;
    p.kappa = 0.3 * u(rng);
    const SectorBasis basis(L, N, n_max);
    if (basis.dimension() > 2000) throw std::runtime_error("criterion 7: sector too large");
    const auto h = build_chain(basis, p);
    const auto gs = ground_state(h);
    const double dense = dense_spectrum(h).front();
    worst = std::max(worst, std::abs(gs.energy - dense));
    if (!gs.converged || std::abs(gs.energy - dense) > 1e-9) lanczos_ok = false;
  }

  bool commutator_ok = true;
  double worst_comm = 0.0;
  for (int L = 2; L <= 3; ++L)
    for (int n_max = 1; n_max <= 3 - (L - 2); ++n_max) {
      ModelParams p;
      p.beta12 = 2.0 * u(rng);
      p.delta = 2.0 * u(rng) - 1.0;
      p.kappa = 0.3 * u(rng);
      const FullBasis full(L, n_max);
      std::vector<std::pair<int, int>> bonds;
      for (int s = 0; s + 1 < L; ++s) bonds.emplace_back(s, s + 1);
      const auto h = build_bonds(full, p, bonds);
      const auto norm = charge_commutator_norm(h, charge_operator(full));
      worst_comm = std::max(worst_comm, norm / h.norm_inf());
      if (norm > 1e-12 * h.norm_inf()) commutator_ok = false;
    }

  const bool ok = lanczos_ok && commutator_ok;
  report(7, "oracle equivalence", ok,
         "max |Lanczos - dense| = " + fmt(worst) +
             ", max relative commutator norm = " + fmt(worst_comm));
}

void criterion_8() {
  const auto geom = ClusterGeometry::plaquette();
  CMFTOptions opts;  // tol_psi = 1e-8
  opts.n_max = 4;    // occupations stay near 2 per site in all scanned phases

  const auto vac = phase_point(geom, working_point(), 0.01, -1.20, opts);
  const auto mi2 = phase_point(geom, working_point(), 0.01, -0.90, opts);

  // The PSF plateaus of the 4-site cluster sit in a narrow strip between the
  // vacuum and MI(2) lobes (pair-addition steps split by ~kappa^2).
  opts.dmu = 5e-4;
  bool found_psf = false;
  double psf_mu = 0.0, psf_ratio = 0.0;
  for (const double mu : linspace(-1.0580, -1.0545, 8)) {
    const auto pt = phase_point(geom, working_point(), 0.01, mu, opts);
    if (pt.label == Phase::psf) {
      found_psf = true;
      psf_mu = mu;
      psf_ratio = pt.pair_ratio;
      break;
    }
  }

  const ModelParams sf_params = working_point(0.1);
  const auto sf = self_consistent(geom, sf_params, -0.8, opts);

  // fixed-point re-measurement at the SF point
  double remeasure_err = 1.0;
  if (sf.converged) {
    const FullBasis basis(geom.n_sites, opts.n_max);
    const auto h = build_cluster_gc(geom, sf_params, -0.8, sf.psi, basis);
    SolverOptions sopt;
    sopt.start = &sf.ground_vector;
    const auto gs = ground_state(h, sopt);
    const auto psi = measure_order_parameters(gs.vector, basis);
    remeasure_err = 0.0;
    for (int s = 0; s < geom.n_sites; ++s)
      remeasure_err = std::max(remeasure_err, std::abs(psi[s] - sf.psi[s]));
  }

  const bool ok = vac.label == Phase::vacuum && mi2.label == Phase::mi2 && found_psf &&
                  sf.converged && sf.psi_bar > 1e-4 && remeasure_err < 1e-8;
  report(8, "CMFT phase ordering and SF onset", ok,
         std::string("mu=-1.2: ") + phase_name(vac.label) + ", mu=-0.9: " +
             phase_name(mi2.label) +
             (found_psf ? ", PSF at mu=" + fmt(psf_mu) + " (ratio " + fmt(psf_ratio) + ")"
                        : ", no PSF found") +
             ", kappa=0.1 psi_bar=" + fmt(sf.psi_bar) + ", re-measure err=" +
             fmt(remeasure_err));
}

// --- criterion 9: CLI determinism -------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const int rc = std::system((std::string(JCHSIM_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

void criterion_9() {
  bool ok = true;
  std::string detail;

  const struct {
    const char* name;
    const char* command;
    const char* config;
  } cases[] = {
      {"sc", "single-cavity",
       R"({"beta12_grid": {"min": 0.0, "max": 2.0, "points": 9}, "delta": 0.4, "mu": -1.0})"},
      {"fid", "fidelity",
       R"({"L": 4, "N": 4, "beta12": 1.4142135623730951, "delta": 0.4,
           "kappa_grid": {"min": 0.02, "max": 0.06, "points": 3}, "seed": 3})"},
      {"cm", "cmft-scan",
       R"({"cluster": "2x1", "beta12": 1.4142135623730951, "delta": 0.4, "kappa": 0.05,
           "mu_grid": [-1.2, -0.9], "cmft": {"n_max": 3}})"},
  };

  for (const auto& c : cases) {
    const std::string cfg = std::string("/tmp/accept9_") + c.name + ".json";
    const std::string out1 = std::string("/tmp/accept9_") + c.name + "_w1.csv";
    const std::string out4 = std::string("/tmp/accept9_") + c.name + "_w4.csv";
    {
      std::ofstream f(cfg);
      f << c.config;
    }
    if (run_cli(std::string(c.command) + " --config " + cfg + " --out " + out1 +
                " --workers 1") != 0 ||
        run_cli(std::string(c.command) + " --config " + cfg + " --out " + out4 +
                " --workers 4") != 0) {
      ok = false;
      detail += std::string(c.name) + ": run failed; ";
      continue;
    }
    const auto body1 = read_file(out1);
    if (body1.empty() || body1 != read_file(out4)) {
      ok = false;
      detail += std::string(c.name) + ": worker mismatch; ";
      continue;
    }
    // regenerate from the embedded config header
    const auto nl = body1.find('\n');
    const std::string echoed = body1.substr(std::string("# config: ").size(),
                                            nl - std::string("# config: ").size());
    const std::string cfg2 = std::string("/tmp/accept9_") + c.name + "_echo.json";
    const std::string out2 = std::string("/tmp/accept9_") + c.name + "_echo.csv";
    {
      std::ofstream f(cfg2);
      f << echoed;
    }
    if (run_cli(std::string(c.command) + " --config " + cfg2 + " --out " + out2) != 0 ||
        body1 != read_file(out2)) {
      ok = false;
      detail += std::string(c.name) + ": regeneration mismatch; ";
      continue;
    }
    detail += std::string(c.name) + ": ok; ";
  }
  report(9, "CLI determinism and regeneration", ok, detail);
}

void timed(void (*fn)(), const char* name) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fn();
  } catch (const std::exception& e) {
    report(-1, name, false, std::string("exception: ") + e.what());
  }
  const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
  std::printf("      (%s: %.1f s)\n", name, dt.count());
  std::fflush(stdout);
}

}  // namespace

int main() {
  timed(criterion_1, "criterion 1");
  timed(criterion_2, "criterion 2");
  timed(criterion_3, "criterion 3");
  timed(criterion_4, "criterion 4");
  timed(criterion_5, "criterion 5");
  timed(criterion_6, "criterion 6");
  timed(criterion_7, "criterion 7");
  timed(criterion_8, "criterion 8");
  timed(criterion_9, "criterion 9");
  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
