#include "jch/cmft.hpp"

#include <cmath>
#include <stdexcept>

#include "jch/eigensolver.hpp"
#include "jch/parallel.hpp"

namespace jch {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// O_site |v> within the full (mixed-charge) basis.
std::vector<double> apply_site_op_full(const std::vector<double>& v, const FullBasis& basis,
                                       CorrelationKind kind, int site) {
  const int L = basis.sites();
  std::vector<double> out(basis.dimension(), 0.0);
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    if (v[i] == 0.0) continue;
    const ConfigKey key = basis.config(i);
    const LocalState s = local_state_from_code(site_code(key, site, L));
    LocalState to;
    const double amp = local_action(kind, s, to);
    if (amp == 0.0) continue;
    const ConfigKey k2 = set_site_code(key, site, local_code(to), L);
    if (const auto j = basis.find(k2)) out[*j] += amp * v[i];
  }
  return out;
}

// <a_site> for a real ground vector.
double measure_psi(const std::vector<double>& v, const FullBasis& basis, int site) {
  return dot(v, apply_site_op_full(v, basis, CorrelationKind::photon, site));
}

double measure_rho(const std::vector<double>& v, const FullBasis& basis) {
  double total = 0.0;
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    if (v[i] == 0.0) continue;
    total += v[i] * v[i] * basis.config_charge(i);
  }
  return total / basis.sites();
}

void measure_correlations(CMFTResult& r, const ClusterGeometry& geom,
                          const FullBasis& basis) {
  // Nearest-neighbor Gamma averaged over the internal bonds; the 1x1 cluster
  // has none and falls back to the cut-bond mirror pairs (on-site moments).
  const auto& bonds =
      geom.internal_bonds.empty() ? geom.cut_bonds : geom.internal_bonds;
  for (auto kind : {CorrelationKind::photon, CorrelationKind::photon_pair,
                    CorrelationKind::atom, CorrelationKind::atom_pair,
                    CorrelationKind::atom_photon}) {
    double acc = 0.0;
    for (const auto& [i, j] : bonds) {
      const auto oi = apply_site_op_full(r.ground_vector, basis, kind, i);
      const auto oj =
          i == j ? oi : apply_site_op_full(r.ground_vector, basis, kind, j);
      acc += dot(oi, oj);
    }
    r.cluster_correlations[static_cast<int>(kind)] = acc / bonds.size();
  }
}

}  // namespace

std::vector<double> measure_order_parameters(const std::vector<double>& v,
                                             const FullBasis& basis) {
  std::vector<double> psi(basis.sites());
  for (int s = 0; s < basis.sites(); ++s) psi[s] = measure_psi(v, basis, s);
  return psi;
}

double CMFTResult::pair_ratio() const {
  const double pair = std::abs(correlation(CorrelationKind::photon_pair)) +
                      std::abs(correlation(CorrelationKind::atom_pair));
  const double single = std::abs(correlation(CorrelationKind::photon)) +
                        std::abs(correlation(CorrelationKind::atom));
  if (single < 1e-300) return pair > 0.0 ? 1e300 : 0.0;
  return pair / single;
}

CMFTResult run_branch(const ClusterGeometry& geom, const ModelParams& params, double mu,
                      std::vector<double> psi, const CMFTOptions& opts) {
  if (opts.tol_psi <= 0.0) throw std::invalid_argument("cmft: tol_psi must be > 0");
  if (opts.mixing <= 0.0 || opts.mixing > 1.0)
    throw std::invalid_argument("cmft: mixing must be in (0, 1]");
  if (opts.max_sweeps < 1) throw std::invalid_argument("cmft: max_sweeps must be >= 1");
  if (static_cast<int>(psi.size()) != geom.n_sites)
    throw std::invalid_argument("cmft: psi0 size mismatch");

  const FullBasis basis(geom.n_sites, opts.n_max);
  CMFTResult result;
  std::vector<double> warm;

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    const auto h = build_cluster_gc(geom, params, mu, psi, basis);
    SolverOptions sopt;
    sopt.seed = opts.solver_seed;
    if (!warm.empty()) sopt.start = &warm;
    const auto gs = ground_state(h, sopt);
    warm = gs.vector;

    std::vector<double> psi_new(geom.n_sites);
    double err = 0.0;
    for (int s = 0; s < geom.n_sites; ++s) {
      psi_new[s] = measure_psi(gs.vector, basis, s);
      err = std::max(err, std::abs(psi_new[s] - psi[s]));
    }

    result.iterations = sweep;
    result.energy = gs.energy;
    result.ground_vector = gs.vector;
    if (err < opts.tol_psi && gs.converged) {
      // Return the input psi of the final sweep: rebuilding H with it and
      // re-measuring reproduces psi within tol_psi by construction.
      result.psi = psi;
      result.converged = true;
      break;
    }
    for (int s = 0; s < geom.n_sites; ++s)
      psi[s] = (1.0 - opts.mixing) * psi[s] + opts.mixing * psi_new[s];
    result.psi = psi;
  }

  result.psi_bar = 0.0;
  for (const double p : result.psi) result.psi_bar += std::abs(p);
  result.psi_bar /= geom.n_sites;
  result.rho = measure_rho(result.ground_vector, basis);
  measure_correlations(result, geom, basis);
  return result;
}

CMFTResult self_consistent(const ClusterGeometry& geom, const ModelParams& params,
                           double mu, const CMFTOptions& opts) {
  auto zero = run_branch(geom, params, mu, std::vector<double>(geom.n_sites, 0.0), opts);
  auto seeded =
      run_branch(geom, params, mu, std::vector<double>(geom.n_sites, opts.psi_seed), opts);
  if (seeded.converged && (!zero.converged || seeded.energy < zero.energy - 1e-12))
    return seeded;
  return zero;
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::vacuum: return "Vacuum";
    case Phase::mi2: return "MI(2)";
    case Phase::sf: return "SF";
    case Phase::psf: return "PSF";
    case Phase::unknown: return "Unknown";
    case Phase::unconverged: return "Unconverged";
  }
  return "?";
}

PhasePoint classify_phase(const CMFTResult& at, const CMFTResult& below,
                          const CMFTResult& above, double kappa, double mu,
                          const CMFTOptions& opts) {
  PhasePoint p;
  p.kappa = kappa;
  p.mu = mu;
  p.psi_bar = at.psi_bar;
  p.rho = at.rho;
  p.pair_ratio = at.pair_ratio();

  if (!at.converged || !below.converged || !above.converged) {
    p.label = Phase::unconverged;
    return p;
  }

  // Cluster charge is quantized; the local scan detects step edges and,
  // when a step falls inside [mu-dmu, mu+dmu], its parity.
  const int sites = static_cast<int>(at.psi.size());
  const int n_lo = static_cast<int>(std::lround(below.rho * sites));
  const int n_hi = static_cast<int>(std::lround(above.rho * sites));
  p.local_dn = n_hi - n_lo;

  if (p.psi_bar > opts.psi_tol) {
    p.label = Phase::sf;
  } else if (at.rho < opts.rho_tol && p.local_dn == 0) {
    p.label = Phase::vacuum;
  } else if (std::abs(at.rho - 2.0) < opts.rho_tol && p.local_dn == 0) {
    p.label = Phase::mi2;
  } else if (p.local_dn % 2 == 0 && p.pair_ratio > 1.0) {
    // psi = 0 at fractional density: insulating in the mean-field sense but
    // compressible along mu through even steps, pair correlations dominant.
    p.label = Phase::psf;
  } else {
    p.label = Phase::unknown;
  }
  return p;
}

PhasePoint phase_point(const ClusterGeometry& geom, ModelParams params, double kappa,
                       double mu, const CMFTOptions& opts) {
  params.kappa = kappa;
  const auto at = self_consistent(geom, params, mu, opts);
  const auto below = self_consistent(geom, params, mu - opts.dmu, opts);
  const auto above = self_consistent(geom, params, mu + opts.dmu, opts);
  return classify_phase(at, below, above, kappa, mu, opts);
}

std::vector<PhasePoint> phase_scan(const ClusterGeometry& geom, const ModelParams& base,
                                   const std::vector<double>& kappa_grid,
                                   const std::vector<double>& mu_grid,
                                   const CMFTOptions& opts, int workers) {
  const std::size_t n = kappa_grid.size() * mu_grid.size();
  std::vector<PhasePoint> out(n);
  parallel_for(n, workers, [&](std::size_t idx) {
    const double kappa = kappa_grid[idx / mu_grid.size()];
    const double mu = mu_grid[idx % mu_grid.size()];
    out[idx] = phase_point(geom, base, kappa, mu, opts);
  });
  return out;
}

}  // namespace jch
