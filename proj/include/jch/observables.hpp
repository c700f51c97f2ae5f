#ifndef JCH_OBSERVABLES_HPP
#define JCH_OBSERVABLES_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "jch/basis.hpp"
#include "jch/eigensolver.hpp"
#include "jch/hamiltonian.hpp"

namespace jch {

// Canonical ground energies E_N at fixed model parameters.
struct EnergyTable {
  int L = 0;
  std::map<int, double> energies;  // N -> E_N

  double at(int N) const;
  bool has(int N) const { return energies.count(N) != 0; }
};

struct EnergyTableOptions {
  int n_max = -1;  // photon truncation; -1 means per-sector default N
  Boundary boundary = Boundary::open;
  SolverOptions solver;
  int workers = 1;
  std::size_t max_dim = 0;  // 0 disables the dimension guard
};

// Ground energies E_N for N = N_lo ... N_hi by independent sector solves,
// parallel over N. Throws ConvergenceError naming the failing sector and
// ResourceGuardError when a sector exceeds max_dim.
EnergyTable build_energy_table(int L, int N_lo, int N_hi, const ModelParams& params,
                               const EnergyTableOptions& opts = {});

// mu^- = E_N - E_{N-1}, mu^+ = E_{N+1} - E_N.
std::pair<double, double> chemical_potentials(const EnergyTable& table, int N);

struct Extrapolation {
  double intercept = 0.0;  // L -> infinity value
  double slope = 0.0;      // coefficient of 1/L
  double residual = 0.0;   // rms fit residual
};

// Least-squares linear fit of mu against 1/L; needs >= 2 sizes.
Extrapolation extrapolate_gap(const std::vector<std::pair<int, double>>& values);

struct StaircaseStep {
  double mu = 0.0;
  int N = 0;
  double rho = 0.0;
  int delta_N = 0;  // jump entering at this grid point (0 if none)
};

// rho(mu) = argmin_N (E_N - mu N) / L over the table, evaluated on the grid.
// Ties resolve toward larger N.
std::vector<StaircaseStep> staircase(const EnergyTable& table,
                                     const std::vector<double>& mu_grid);

enum class CorrelationKind { photon, photon_pair, atom, atom_pair, atom_photon };

const char* correlation_name(CorrelationKind k);
CorrelationKind correlation_from_name(const std::string& name);

// Charge removed by the operator O of a correlation kind.
int operator_charge(CorrelationKind k);

// Local action of O on one site: fills `to` and returns the amplitude,
// 0 when the state is annihilated.
double local_action(CorrelationKind k, const LocalState& s, LocalState& to);

// <O_i^dag O_j> in the given canonical ground state, with O one of
// a, a^2, sigma_01, sigma_02, a*sigma_01.
double correlation(const GroundState& gs, const SectorBasis& basis,
                   CorrelationKind kind, int i, int j);

// Series Gamma(i0, i0+d) for d = 0 ... j_max - i0.
std::vector<std::pair<int, double>> correlation_series(const GroundState& gs,
                                                       const SectorBasis& basis,
                                                       CorrelationKind kind, int i0,
                                                       int j_max);

// chi_FS = -2 ln|<psi1|psi2>| / dkappa^2. Throws if the overlap is below
// 1e-12 (dkappa too large or a level crossing).
double fidelity_susceptibility(const GroundState& gs1, const GroundState& gs2,
                               double dkappa);

struct CavityLevel {
  double energy = 0.0;   // E (canonical block eigenvalue)
  double shifted = 0.0;  // E - mu * n
};

// All eigenvalues of the charge-n single-cavity block, ascending, with the
// grand-canonical shift attached. front() is the polariton energy E_n.
std::vector<CavityLevel> single_cavity_spectrum(int n, const ModelParams& params,
                                                double mu);

// Ground energy of the charge-n single cavity (lowest entry of the above).
double single_cavity_ground_energy(int n, const ModelParams& params);

}  // namespace jch

#endif
