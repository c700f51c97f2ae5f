#ifndef JCH_HAMILTONIAN_HPP
#define JCH_HAMILTONIAN_HPP

#include <string>
#include <utility>
#include <vector>

#include "jch/basis.hpp"
#include "jch/sparse.hpp"

namespace jch {

// Couplings of the three-level ladder model. beta01 is the global energy
// scale (1 by convention); delta is the detuning of the upper transition.
struct ModelParams {
  double beta01 = 1.0;
  double beta12 = 0.0;
  double delta = 0.0;
  double kappa = 0.0;

  void validate() const;
};

enum class Boundary { open, periodic };

// Cluster embedded in a 2D square lattice (coordination z = 4). Cut bonds
// point to the mirror site of the neighboring cluster under cluster
// periodicity, which supplies the mean-field order parameter on that bond.
struct ClusterGeometry {
  std::string name;
  int n_sites = 0;
  std::vector<std::pair<int, int>> internal_bonds;
  std::vector<std::pair<int, int>> cut_bonds;  // (cluster site, mirror site)

  static ClusterGeometry single_site();  // 1x1: 0 internal, 4 cut
  static ClusterGeometry dimer();        // 2x1: 1 internal, 3 cut per site
  static ClusterGeometry plaquette();    // 2x2: 2 internal + 2 cut per site
  static ClusterGeometry by_name(const std::string& name);
};

// Canonical chain Hamiltonian in the fixed-charge sector basis.
SparseOperator build_chain(const SectorBasis& basis, const ModelParams& params,
                           Boundary boundary = Boundary::open);

// Chain Hamiltonian with arbitrary bonds, over any basis type. Used for the
// cluster cross-checks.
SparseOperator build_bonds(const FullBasis& basis, const ModelParams& params,
                           const std::vector<std::pair<int, int>>& bonds);

// Grand-canonical cluster Hamiltonian with mean-field boundary terms:
// H_C - mu * sum_i n_i - kappa * sum_cut [(a^dag_i + a_i) psi_nbr - psi_i psi_nbr].
SparseOperator build_cluster_gc(const ClusterGeometry& geom, const ModelParams& params,
                                double mu, const std::vector<double>& psi,
                                const FullBasis& basis);

// Diagonal charge operator over the full basis with per-level weights
// (w_g = 0 implied). weights = {1, 2} is the conserved charge.
SparseOperator charge_operator(const FullBasis& basis, int w_e1 = 1, int w_e2 = 2);

// Max norm of [H, N] applied to a few seeded random unit vectors.
double charge_commutator_norm(const SparseOperator& h, const SparseOperator& charge,
                              unsigned seed = 7, int n_vectors = 4);

}  // namespace jch

#endif
