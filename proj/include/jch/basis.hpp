#ifndef JCH_BASIS_HPP
#define JCH_BASIS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace jch {

// Atomic level of the three-level ladder. Only g<->e1 and e1<->e2
// transitions exist.
enum class Level : std::uint8_t { g = 0, e1 = 1, e2 = 2 };

// Conserved-charge weight of an atomic level: a level-k excitation costs
// k photons to create, so it carries charge k.
inline int level_weight(Level l) { return static_cast<int>(l); }

// One cavity's configuration: photon count plus atomic level.
struct LocalState {
  int n_p = 0;
  Level level = Level::g;

  int charge() const { return n_p + level_weight(level); }

  friend bool operator==(const LocalState&, const LocalState&) = default;
};

// Local states ordered by (n_p, level) with g < e1 < e2. The ordinal of a
// state in this list is its local code: code = 3*n_p + level.
std::vector<LocalState> local_states(int n_max);

inline int local_code(const LocalState& s) {
  return 3 * s.n_p + static_cast<int>(s.level);
}
inline LocalState local_state_from_code(int code) {
  return {code / 3, static_cast<Level>(code % 3)};
}

// Packed many-body configuration: 6 bits per site, site 0 in the most
// significant position so that numeric order equals lexicographic order
// over (site0, site1, ...). Supports n_max <= 19 and L <= 10.
using ConfigKey = std::uint64_t;

constexpr int kBitsPerSite = 6;
constexpr int kMaxSites = 10;
constexpr int kMaxPhotons = 19;

ConfigKey pack_config(const std::vector<LocalState>& sites);
std::vector<LocalState> unpack_config(ConfigKey key, int L);

inline int site_code(ConfigKey key, int site, int L) {
  return static_cast<int>((key >> (kBitsPerSite * (L - 1 - site))) & 0x3f);
}
inline ConfigKey set_site_code(ConfigKey key, int site, int code, int L) {
  const int shift = kBitsPerSite * (L - 1 - site);
  key &= ~(ConfigKey(0x3f) << shift);
  return key | (ConfigKey(code) << shift);
}

class EmptySectorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number of charge-N configurations of L sites without materializing them:
// dynamic programming over the per-site charge multiplicities 1,2,3,3,...
std::uint64_t sector_dimension(int L, int N, int n_max);

// Enumerated many-body basis of a fixed-polariton-charge sector. Configs are
// stored as packed keys in strictly increasing (lexicographic) order;
// lookup is binary search on the sorted keys. Immutable after construction.
class SectorBasis {
 public:
  SectorBasis(int L, int N, int n_max);

  int sites() const { return L_; }
  int charge() const { return N_; }
  int max_photons() const { return n_max_; }
  std::size_t dimension() const { return configs_.size(); }

  ConfigKey config(std::size_t ordinal) const { return configs_[ordinal]; }
  LocalState site_state(std::size_t ordinal, int site) const {
    return local_state_from_code(site_code(configs_[ordinal], site, L_));
  }

  // Ordinal of a configuration, or nullopt if it is not in the sector
  // (wrong charge or beyond the photon truncation).
  std::optional<std::size_t> find(ConfigKey key) const;

  const std::vector<ConfigKey>& configs() const { return configs_; }

 private:
  int L_, N_, n_max_;
  std::vector<ConfigKey> configs_;
};

// All configurations of L sites with photon truncation n_max, mixed charges.
// Ordinals are mixed-radix numbers (base 3*(n_max+1) per site), so lookup is
// arithmetic. Used by the grand-canonical cluster and as a test oracle.
class FullBasis {
 public:
  FullBasis(int L, int n_max);

  int sites() const { return L_; }
  int max_photons() const { return n_max_; }
  std::size_t dimension() const { return dim_; }

  ConfigKey config(std::size_t ordinal) const;
  LocalState site_state(std::size_t ordinal, int site) const;
  std::optional<std::size_t> find(ConfigKey key) const;

  // Total polariton charge of the configuration at `ordinal`.
  int config_charge(std::size_t ordinal) const;

 private:
  int L_, n_max_, local_dim_;
  std::size_t dim_;
};

}  // namespace jch

#endif
