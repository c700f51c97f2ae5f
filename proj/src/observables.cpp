#include "jch/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jch/errors.hpp"
#include "jch/parallel.hpp"

namespace jch {

double EnergyTable::at(int N) const {
  const auto it = energies.find(N);
  if (it == energies.end())
    throw std::out_of_range("EnergyTable: missing entry N=" + std::to_string(N));
  return it->second;
}

EnergyTable build_energy_table(int L, int N_lo, int N_hi, const ModelParams& params,
                               const EnergyTableOptions& opts) {
  if (N_lo < 0 || N_hi < N_lo)
    throw std::invalid_argument("build_energy_table: invalid N range");
  const int count = N_hi - N_lo + 1;
  std::vector<double> energies(count);
  parallel_for(count, opts.workers, [&](std::size_t idx) {
    const int N = N_lo + static_cast<int>(idx);
    if (N == 0) {  // vacuum sector is one state with zero energy
      energies[idx] = 0.0;
      return;
    }
    const int n_max = opts.n_max >= 0 ? opts.n_max : N;
    if (opts.max_dim > 0 && sector_dimension(L, N, n_max) > opts.max_dim)
      throw ResourceGuardError("sector L=" + std::to_string(L) + " N=" + std::to_string(N) +
                               " exceeds the dimension budget of " +
                               std::to_string(opts.max_dim));
    const SectorBasis basis(L, N, n_max);
    const auto h = build_chain(basis, params, opts.boundary);
    const auto gs = ground_state(h, opts.solver);
    if (!gs.converged)
      throw ConvergenceError("sector N=" + std::to_string(N) + " did not converge (residual " +
                             std::to_string(gs.residual) + ")");
    energies[idx] = gs.energy;
  });
  EnergyTable table;
  table.L = L;
  for (int i = 0; i < count; ++i) table.energies[N_lo + i] = energies[i];
  return table;
}

std::pair<double, double> chemical_potentials(const EnergyTable& table, int N) {
  const double e_minus = table.at(N - 1);
  const double e = table.at(N);
  const double e_plus = table.at(N + 1);
  return {e - e_minus, e_plus - e};
}

Extrapolation extrapolate_gap(const std::vector<std::pair<int, double>>& values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("extrapolate_gap: need at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [L, mu] : values) {
    const double x = 1.0 / L;
    sx += x;
    sy += mu;
    sxx += x * x;
    sxy += x * mu;
  }
  const double det = n * sxx - sx * sx;
  Extrapolation fit;
  if (std::abs(det) < 1e-300) {  // all sizes equal: degenerate in 1/L
    fit.intercept = sy / n;
    fit.slope = 0.0;
  } else {
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
  }
  double ss = 0.0;
  for (const auto& [L, mu] : values) {
    const double r = mu - (fit.intercept + fit.slope / L);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

std::vector<StaircaseStep> staircase(const EnergyTable& table,
                                     const std::vector<double>& mu_grid) {
  if (table.energies.empty()) throw std::invalid_argument("staircase: empty table");
  if (table.L < 1) throw std::invalid_argument("staircase: invalid L");
  std::vector<StaircaseStep> out;
  out.reserve(mu_grid.size());
  int prev_n = -1;
  for (const double mu : mu_grid) {
    int best_n = table.energies.begin()->first;
    double best = table.energies.begin()->second - mu * best_n;
    for (const auto& [N, E] : table.energies) {
      const double g = E - mu * N;
      if (g <= best) {  // ties resolve toward larger N (map is ascending)
        best = g;
        best_n = N;
      }
    }
    StaircaseStep step{mu, best_n, static_cast<double>(best_n) / table.L, 0};
    if (prev_n >= 0) step.delta_N = best_n - prev_n;
    prev_n = best_n;
    out.push_back(step);
  }
  return out;
}

const char* correlation_name(CorrelationKind k) {
  switch (k) {
    case CorrelationKind::photon: return "photon";
    case CorrelationKind::photon_pair: return "photon-pair";
    case CorrelationKind::atom: return "atom";
    case CorrelationKind::atom_pair: return "atom-pair";
    case CorrelationKind::atom_photon: return "atom-photon";
  }
  return "?";
}

CorrelationKind correlation_from_name(const std::string& name) {
  for (auto k : {CorrelationKind::photon, CorrelationKind::photon_pair,
                 CorrelationKind::atom, CorrelationKind::atom_pair,
                 CorrelationKind::atom_photon})
    if (name == correlation_name(k)) return k;
  throw std::invalid_argument("unknown correlation kind: " + name);
}

int operator_charge(CorrelationKind k) {
  switch (k) {
    case CorrelationKind::photon:
    case CorrelationKind::atom: return 1;
    default: return 2;
  }
}

double local_action(CorrelationKind k, const LocalState& s, LocalState& to) {
  switch (k) {
    case CorrelationKind::photon:
      if (s.n_p < 1) return 0.0;
      to = {s.n_p - 1, s.level};
      return std::sqrt(s.n_p);
    case CorrelationKind::photon_pair:
      if (s.n_p < 2) return 0.0;
      to = {s.n_p - 2, s.level};
      return std::sqrt(static_cast<double>(s.n_p) * (s.n_p - 1));
    case CorrelationKind::atom:
      if (s.level != Level::e1) return 0.0;
      to = {s.n_p, Level::g};
      return 1.0;
    case CorrelationKind::atom_pair:
      if (s.level != Level::e2) return 0.0;
      to = {s.n_p, Level::g};
      return 1.0;
    case CorrelationKind::atom_photon:
      if (s.level != Level::e1 || s.n_p < 1) return 0.0;
      to = {s.n_p - 1, Level::g};
      return std::sqrt(s.n_p);
  }
  return 0.0;
}

namespace {

// O_site |psi>, mapped into the charge-(N - q) sector basis.
std::vector<double> apply_site_op(const std::vector<double>& psi,
                                  const SectorBasis& basis, const SectorBasis& target,
                                  CorrelationKind kind, int site) {
  const int L = basis.sites();
  std::vector<double> out(target.dimension(), 0.0);
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    if (psi[i] == 0.0) continue;
    const ConfigKey key = basis.config(i);
    const LocalState s = local_state_from_code(site_code(key, site, L));
    LocalState to;
    const double amp = local_action(kind, s, to);
    if (amp == 0.0) continue;
    const ConfigKey k2 = set_site_code(key, site, local_code(to), L);
    if (const auto j = target.find(k2)) out[*j] += amp * psi[i];
  }
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double correlation(const GroundState& gs, const SectorBasis& basis,
                   CorrelationKind kind, int i, int j) {
  const int L = basis.sites();
  if (i < 0 || i >= L || j < 0 || j >= L)
    throw std::out_of_range("correlation: site index out of range");
  const int q = operator_charge(kind);
  const int target_charge = basis.charge() - q;
  if (target_charge < 0) return 0.0;
  const SectorBasis target(L, target_charge, basis.max_photons());
  const auto oi = apply_site_op(gs.vector, basis, target, kind, i);
  if (i == j) return dot(oi, oi);
  const auto oj = apply_site_op(gs.vector, basis, target, kind, j);
  return dot(oi, oj);
}

std::vector<std::pair<int, double>> correlation_series(const GroundState& gs,
                                                       const SectorBasis& basis,
                                                       CorrelationKind kind, int i0,
                                                       int j_max) {
  const int L = basis.sites();
  if (i0 < 0 || i0 >= L || j_max < i0 || j_max >= L)
    throw std::out_of_range("correlation_series: site range invalid");
  const int q = operator_charge(kind);
  const int target_charge = basis.charge() - q;
  std::vector<std::pair<int, double>> out;
  if (target_charge < 0) {
    for (int j = i0; j <= j_max; ++j) out.emplace_back(j - i0, 0.0);
    return out;
  }
  const SectorBasis target(L, target_charge, basis.max_photons());
  const auto oi = apply_site_op(gs.vector, basis, target, kind, i0);
  for (int j = i0; j <= j_max; ++j) {
    if (j == i0) {
      out.emplace_back(0, dot(oi, oi));
    } else {
      const auto oj = apply_site_op(gs.vector, basis, target, kind, j);
      out.emplace_back(j - i0, dot(oi, oj));
    }
  }
  return out;
}

double fidelity_susceptibility(const GroundState& gs1, const GroundState& gs2,
                               double dkappa) {
  if (dkappa <= 0.0) throw std::invalid_argument("fidelity_susceptibility: dkappa must be > 0");
  if (gs1.vector.size() != gs2.vector.size())
    throw std::invalid_argument("fidelity_susceptibility: states live in different bases");
  const double overlap = std::abs(dot(gs1.vector, gs2.vector));
  if (overlap < 1e-12)
    throw std::runtime_error(
        "fidelity_susceptibility: states orthogonal - dkappa too large or level crossing");
  return -2.0 * std::log(overlap) / (dkappa * dkappa);
}

std::vector<CavityLevel> single_cavity_spectrum(int n, const ModelParams& params,
                                                double mu) {
  if (n < 0) throw std::invalid_argument("single_cavity_spectrum: n must be >= 0");
  if (n == 0) return {{0.0, 0.0}};
  const SectorBasis basis(1, n, n);
  const auto h = build_chain(basis, params);
  const auto evals = dense_spectrum(h);
  std::vector<CavityLevel> out;
  out.reserve(evals.size());
  for (const double e : evals) out.push_back({e, e - mu * n});
  return out;
}

double single_cavity_ground_energy(int n, const ModelParams& params) {
  return single_cavity_spectrum(n, params, 0.0).front().energy;
}

}  // namespace jch
