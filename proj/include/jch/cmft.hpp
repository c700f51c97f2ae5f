#ifndef JCH_CMFT_HPP
#define JCH_CMFT_HPP

#include <array>
#include <string>
#include <vector>

#include "jch/hamiltonian.hpp"
#include "jch/observables.hpp"

namespace jch {

struct CMFTOptions {
  double tol_psi = 1e-8;
  int max_sweeps = 500;
  double mixing = 0.5;
  double psi_seed = 0.1;  // initial value of the seeded branch
  int n_max = 6;
  double psi_tol = 1e-4;  // SF detection threshold on |psi|
  double rho_tol = 1e-3;
  double dmu = 1e-3;      // local mu offset used by classification scans
  unsigned solver_seed = 12345;
};

// Converged fixed point for one (kappa, mu) point. cluster_correlations are
// nearest-neighbor Gamma values averaged over the internal bonds, indexed by
// CorrelationKind.
struct CMFTResult {
  std::vector<double> psi;
  double psi_bar = 0.0;  // mean |psi_i|
  double rho = 0.0;      // (1/L_c) sum_i <n_i>, weighted charge
  double energy = 0.0;   // grand-canonical ground energy
  int iterations = 0;
  bool converged = false;
  std::array<double, 5> cluster_correlations{};  // indexed by CorrelationKind
  std::vector<double> ground_vector;             // over FullBasis(L_c, n_max)

  double correlation(CorrelationKind k) const {
    return cluster_correlations[static_cast<int>(k)];
  }
  // (|Gamma_pp| + |Gamma_ap|) / (|Gamma_p| + |Gamma_a|), the pair-dominance
  // diagnostic used for PSF detection.
  double pair_ratio() const;
};

// <a_i> for each cluster site of a real ground vector over the full basis.
std::vector<double> measure_order_parameters(const std::vector<double>& v,
                                             const FullBasis& basis);

// Single fixed-point branch from the given initial psi. Exposed for tests;
// most callers want self_consistent.
CMFTResult run_branch(const ClusterGeometry& geom, const ModelParams& params, double mu,
                      std::vector<double> psi0, const CMFTOptions& opts = {});

// Runs both the seeded (psi_seed) and the zero branch, returns the fixed
// point with lower grand energy.
CMFTResult self_consistent(const ClusterGeometry& geom, const ModelParams& params,
                           double mu, const CMFTOptions& opts = {});

enum class Phase { vacuum, mi2, sf, psf, unknown, unconverged };

const char* phase_name(Phase p);

struct PhasePoint {
  double kappa = 0.0;
  double mu = 0.0;
  Phase label = Phase::unknown;
  double psi_bar = 0.0;
  double rho = 0.0;
  double pair_ratio = 0.0;
  int local_dn = 0;  // cluster charge change across the mu +- dmu scan
};

// Classification from the converged point plus its mu +- dmu neighbors.
// Unconverged input is refused (label = unconverged, diagnostics kept).
PhasePoint classify_phase(const CMFTResult& at, const CMFTResult& below,
                          const CMFTResult& above, double kappa, double mu,
                          const CMFTOptions& opts = {});

// Full classification at one (kappa, mu): solves at mu and mu +- dmu.
PhasePoint phase_point(const ClusterGeometry& geom, ModelParams params, double kappa,
                       double mu, const CMFTOptions& opts = {});

// Sweep over the (kappa, mu) grid, parallel over points; output ordered by
// (kappa, mu) regardless of worker count.
std::vector<PhasePoint> phase_scan(const ClusterGeometry& geom, const ModelParams& base,
                                   const std::vector<double>& kappa_grid,
                                   const std::vector<double>& mu_grid,
                                   const CMFTOptions& opts = {}, int workers = 1);

}  // namespace jch

#endif
