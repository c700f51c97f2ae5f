#include "jch/basis.hpp"

#include <algorithm>
#include <string>

namespace jch {

std::vector<LocalState> local_states(int n_max) {
  if (n_max < 0) throw std::invalid_argument("local_states: n_max must be >= 0");
  std::vector<LocalState> out;
  out.reserve(3 * (n_max + 1));
  for (int n = 0; n <= n_max; ++n)
    for (int l = 0; l < 3; ++l) out.push_back({n, static_cast<Level>(l)});
  return out;
}

ConfigKey pack_config(const std::vector<LocalState>& sites) {
  ConfigKey key = 0;
  const int L = static_cast<int>(sites.size());
  for (int i = 0; i < L; ++i) key = set_site_code(key, i, local_code(sites[i]), L);
  return key;
}

std::vector<LocalState> unpack_config(ConfigKey key, int L) {
  std::vector<LocalState> out(L);
  for (int i = 0; i < L; ++i) out[i] = local_state_from_code(site_code(key, i, L));
  return out;
}

namespace {

// States of a single site carrying charge c: (c,g), (c-1,e1), (c-2,e2),
// subject to the photon truncation.
int charge_multiplicity(int c, int n_max) {
  int m = 0;
  for (int w = 0; w < 3; ++w) {
    const int n_p = c - w;
    if (n_p >= 0 && n_p <= n_max) ++m;
  }
  return m;
}

void check_limits(int L, int N, int n_max) {
  if (L < 1 || L > kMaxSites)
    throw std::invalid_argument("basis: L must be in [1, " + std::to_string(kMaxSites) + "]");
  if (N < 0) throw std::invalid_argument("basis: N must be >= 0");
  if (n_max < 0 || n_max > kMaxPhotons)
    throw std::invalid_argument("basis: n_max must be in [0, " + std::to_string(kMaxPhotons) + "]");
}

}  // namespace

std::uint64_t sector_dimension(int L, int N, int n_max) {
  if (L < 1 || N < 0 || n_max < 0) return 0;
  std::vector<std::uint64_t> dp(N + 1, 0);
  dp[0] = 1;
  for (int site = 0; site < L; ++site) {
    std::vector<std::uint64_t> next(N + 1, 0);
    for (int tot = 0; tot <= N; ++tot) {
      if (dp[tot] == 0) continue;
      for (int c = 0; tot + c <= N && c <= n_max + 2; ++c) {
        const int m = charge_multiplicity(c, n_max);
        if (m) next[tot + c] += m * dp[tot];
      }
    }
    dp = std::move(next);
  }
  return dp[N];
}

SectorBasis::SectorBasis(int L, int N, int n_max) : L_(L), N_(N), n_max_(n_max) {
  check_limits(L, N, n_max);
  const std::uint64_t dim = sector_dimension(L, N, n_max);
  if (dim == 0)
    throw EmptySectorError("empty sector: N=" + std::to_string(N) + " exceeds L*(n_max+2)=" +
                           std::to_string(static_cast<long>(L) * (n_max + 2)));
  configs_.reserve(dim);

  // Depth-first enumeration in increasing local-code order per site, which
  // yields strictly increasing packed keys. Prune by the remaining charge
  // range attainable on the remaining sites.
  std::vector<LocalState> stack(L);
  const auto locals = local_states(n_max);
  const int max_site_charge = n_max + 2;

  auto recurse = [&](auto&& self, int site, int remaining) -> void {
    if (site == L) {
      if (remaining == 0) configs_.push_back(pack_config(stack));
      return;
    }
    const int sites_left = L - site - 1;
    for (const auto& s : locals) {
      const int rem = remaining - s.charge();
      if (rem < 0) continue;  // charge is not monotone in local code
      if (rem > sites_left * max_site_charge) continue;
      stack[site] = s;
      self(self, site + 1, rem);
    }
  };
  recurse(recurse, 0, N);
}

std::optional<std::size_t> SectorBasis::find(ConfigKey key) const {
  const auto it = std::lower_bound(configs_.begin(), configs_.end(), key);
  if (it == configs_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - configs_.begin());
}

FullBasis::FullBasis(int L, int n_max) : L_(L), n_max_(n_max) {
  check_limits(L, 0, n_max);
  local_dim_ = 3 * (n_max + 1);
  dim_ = 1;
  for (int i = 0; i < L; ++i) dim_ *= local_dim_;
}

ConfigKey FullBasis::config(std::size_t ordinal) const {
  ConfigKey key = 0;
  for (int site = L_ - 1; site >= 0; --site) {
    key = set_site_code(key, site, static_cast<int>(ordinal % local_dim_), L_);
    ordinal /= local_dim_;
  }
  return key;
}

LocalState FullBasis::site_state(std::size_t ordinal, int site) const {
  std::size_t div = 1;
  for (int i = 0; i < L_ - 1 - site; ++i) div *= local_dim_;
  return local_state_from_code(static_cast<int>((ordinal / div) % local_dim_));
}

std::optional<std::size_t> FullBasis::find(ConfigKey key) const {
  std::size_t ordinal = 0;
  for (int site = 0; site < L_; ++site) {
    const int code = site_code(key, site, L_);
    if (code >= local_dim_) return std::nullopt;
    ordinal = ordinal * local_dim_ + code;
  }
  return ordinal;
}

int FullBasis::config_charge(std::size_t ordinal) const {
  int c = 0;
  for (int site = 0; site < L_; ++site) c += site_state(ordinal, site).charge();
  return c;
}

}  // namespace jch
