#include "jch/hamiltonian.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace jch {

void ModelParams::validate() const {
  if (beta01 <= 0.0) throw std::invalid_argument("ModelParams: beta01 must be > 0");
  if (beta12 < 0.0) throw std::invalid_argument("ModelParams: beta12 must be >= 0");
  if (kappa < 0.0) throw std::invalid_argument("ModelParams: kappa must be >= 0");
}

ClusterGeometry ClusterGeometry::single_site() {
  return {"1x1", 1, {}, {{0, 0}, {0, 0}, {0, 0}, {0, 0}}};
}

ClusterGeometry ClusterGeometry::dimer() {
  // Two sites along x; each site keeps its x cut bond plus two y cut bonds
  // to its own mirror image.
  return {"2x1", 2, {{0, 1}}, {{0, 1}, {1, 0}, {0, 0}, {0, 0}, {1, 1}, {1, 1}}};
}

ClusterGeometry ClusterGeometry::plaquette() {
  // Site index s = x + 2y: 0=(0,0), 1=(1,0), 2=(0,1), 3=(1,1).
  return {"2x2",
          4,
          {{0, 1}, {2, 3}, {0, 2}, {1, 3}},
          {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {0, 2}, {2, 0}, {1, 3}, {3, 1}}};
}

ClusterGeometry ClusterGeometry::by_name(const std::string& name) {
  if (name == "1x1") return single_site();
  if (name == "2x1") return dimer();
  if (name == "2x2") return plaquette();
  throw std::invalid_argument("unknown cluster shape: " + name);
}

namespace {

// Adds all Eq.-of-motion terms generated from row configuration `i` of
// `basis`: atomic ladder couplings on every site, photon hopping on the
// given bonds (both directions), and the -delta * P2 diagonal. Both raising
// and lowering directions are emitted from each row, so the assembled
// matrix is symmetric entry by entry.
template <class BasisT>
void add_model_terms(TripletBuffer& buf, const BasisT& basis, const ModelParams& p,
                     const std::vector<std::pair<int, int>>& bonds) {
  const int L = basis.sites();
  const int n_max = basis.max_photons();
  const std::size_t dim = basis.dimension();

  for (std::size_t i = 0; i < dim; ++i) {
    const ConfigKey key = basis.config(i);
    double diag = 0.0;

    for (int s = 0; s < L; ++s) {
      const LocalState ls = local_state_from_code(site_code(key, s, L));
      if (ls.level == Level::e2) diag -= p.delta;

      auto connect = [&](LocalState to, double amp) {
        const ConfigKey k2 = set_site_code(key, s, local_code(to), L);
        if (const auto j = basis.find(k2)) buf.add(i, *j, amp);
      };

      // beta01 (sigma1^dag a + h.c.): (n,g) <-> (n-1,e1)
      if (ls.level == Level::g && ls.n_p >= 1)
        connect({ls.n_p - 1, Level::e1}, p.beta01 * std::sqrt(ls.n_p));
      if (ls.level == Level::e1 && ls.n_p + 1 <= n_max)
        connect({ls.n_p + 1, Level::g}, p.beta01 * std::sqrt(ls.n_p + 1));

      // beta12 (sigma2^dag a + h.c.): (n,e1) <-> (n-1,e2)
      if (ls.level == Level::e1 && ls.n_p >= 1)
        connect({ls.n_p - 1, Level::e2}, p.beta12 * std::sqrt(ls.n_p));
      if (ls.level == Level::e2 && ls.n_p + 1 <= n_max)
        connect({ls.n_p + 1, Level::e1}, p.beta12 * std::sqrt(ls.n_p + 1));
    }

    // -kappa (a^dag_u a_v + h.c.): photon moves v -> u on each bond.
    for (const auto& [b0, b1] : bonds) {
      for (const auto [u, v] : {std::pair{b0, b1}, std::pair{b1, b0}}) {
        const LocalState su = local_state_from_code(site_code(key, u, L));
        const LocalState sv = local_state_from_code(site_code(key, v, L));
        if (sv.n_p >= 1 && su.n_p + 1 <= n_max) {
          ConfigKey k2 = set_site_code(key, u, local_code({su.n_p + 1, su.level}), L);
          k2 = set_site_code(k2, v, local_code({sv.n_p - 1, sv.level}), L);
          // one sqrt of the integer product keeps the matrix bitwise symmetric
          if (const auto j = basis.find(k2))
            buf.add(i, *j, -p.kappa * std::sqrt(double(sv.n_p) * (su.n_p + 1)));
        }
      }
    }

    buf.add(i, i, diag);
  }
}

}  // namespace

SparseOperator build_chain(const SectorBasis& basis, const ModelParams& params,
                           Boundary boundary) {
  params.validate();
  const int L = basis.sites();
  std::vector<std::pair<int, int>> bonds;
  for (int s = 0; s + 1 < L; ++s) bonds.emplace_back(s, s + 1);
  if (boundary == Boundary::periodic && L > 2) bonds.emplace_back(L - 1, 0);

  TripletBuffer buf(basis.dimension());
  add_model_terms(buf, basis, params, bonds);
  return std::move(buf).build();
}

SparseOperator build_bonds(const FullBasis& basis, const ModelParams& params,
                           const std::vector<std::pair<int, int>>& bonds) {
  params.validate();
  TripletBuffer buf(basis.dimension());
  add_model_terms(buf, basis, params, bonds);
  return std::move(buf).build();
}

SparseOperator build_cluster_gc(const ClusterGeometry& geom, const ModelParams& params,
                                double mu, const std::vector<double>& psi,
                                const FullBasis& basis) {
  params.validate();
  if (basis.sites() != geom.n_sites)
    throw std::invalid_argument("build_cluster_gc: basis/geometry site mismatch");
  if (static_cast<int>(psi.size()) != geom.n_sites)
    throw std::invalid_argument("build_cluster_gc: psi must have one entry per site");

  const int L = geom.n_sites;
  const int n_max = basis.max_photons();
  TripletBuffer buf(basis.dimension());
  add_model_terms(buf, basis, params, geom.internal_bonds);

  // Constant mean-field energy shift +kappa * sum_cut psi_i psi_nbr.
  double const_shift = 0.0;
  for (const auto& [s, m] : geom.cut_bonds) const_shift += params.kappa * psi[s] * psi[m];

  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const ConfigKey key = basis.config(i);
    double diag = const_shift;
    for (int s = 0; s < L; ++s)
      diag -= mu * local_state_from_code(site_code(key, s, L)).charge();
    buf.add(i, i, diag);

    // -kappa * psi_nbr * (a^dag_s + a_s) on each cut bond.
    for (const auto& [s, m] : geom.cut_bonds) {
      if (psi[m] == 0.0) continue;
      const LocalState ls = local_state_from_code(site_code(key, s, L));
      if (ls.n_p + 1 <= n_max) {
        const ConfigKey k2 = set_site_code(key, s, local_code({ls.n_p + 1, ls.level}), L);
        if (const auto j = basis.find(k2))
          buf.add(i, *j, -params.kappa * psi[m] * std::sqrt(ls.n_p + 1));
      }
      if (ls.n_p >= 1) {
        const ConfigKey k2 = set_site_code(key, s, local_code({ls.n_p - 1, ls.level}), L);
        if (const auto j = basis.find(k2))
          buf.add(i, *j, -params.kappa * psi[m] * std::sqrt(ls.n_p));
      }
    }
  }
  return std::move(buf).build();
}

SparseOperator charge_operator(const FullBasis& basis, int w_e1, int w_e2) {
  TripletBuffer buf(basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    double c = 0.0;
    for (int s = 0; s < basis.sites(); ++s) {
      const LocalState ls = basis.site_state(i, s);
      c += ls.n_p;
      if (ls.level == Level::e1) c += w_e1;
      if (ls.level == Level::e2) c += w_e2;
    }
    buf.add(i, i, c);
  }
  return std::move(buf).build();
}

double charge_commutator_norm(const SparseOperator& h, const SparseOperator& charge,
                              unsigned seed, int n_vectors) {
  if (h.dim() != charge.dim())
    throw std::invalid_argument("charge_commutator_norm: dimension mismatch");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  const std::size_t n = h.dim();
  double worst = 0.0;
  std::vector<double> v(n), hv(n), nv(n), a(n), b(n);
  for (int k = 0; k < n_vectors; ++k) {
    double norm = 0.0;
    for (auto& x : v) {
      x = dist(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
    h.apply(v, hv);
    charge.apply(v, nv);
    charge.apply(hv, a);  // N H v
    h.apply(nv, b);       // H N v
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(b[i] - a[i]));
  }
  return worst;
}

}  // namespace jch
