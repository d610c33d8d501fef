#include "wb/order.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

namespace wb {

Preorder::Preorder(std::size_t n) : n_(n), le_(n * n, 0) {
  for (std::size_t i = 0; i < n; ++i) le_[i * n + i] = 1;
}

Preorder::Preorder(std::size_t n, std::vector<std::uint8_t> le)
    : n_(n), le_(std::move(le)) {
  if (le_.size() != n * n) throw StructuralError("le matrix has wrong size");
  for (auto& b : le_) b = b ? 1 : 0;
}

bool Preorder::is_reflexive() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (!le(i, i)) return false;
  }
  return true;
}

bool Preorder::is_transitive() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (!le(i, j)) continue;
      for (std::size_t k = 0; k < n_; ++k) {
        if (le(j, k) && !le(i, k)) return false;
      }
    }
  }
  return true;
}

bool Preorder::is_antisymmetric() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (le(i, j) && le(j, i)) return false;
    }
  }
  return true;
}

std::vector<std::size_t> Preorder::up(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j) {
    if (le(i, j)) out.push_back(j);
  }
  return out;
}

Preorder chain_order(std::size_t n) {
  Preorder p(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) p.set(i, j, true);
  }
  return p;
}

Preorder antichain(std::size_t n) { return Preorder(n); }

Preorder cluster(std::size_t n) {
  return Preorder(n, std::vector<std::uint8_t>(n * n, 1));
}

Preorder disjoint_union(const Preorder& a, const Preorder& b) {
  const std::size_t n = a.size() + b.size();
  Preorder p(n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) p.set(i, j, a.le(i, j));
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      p.set(a.size() + i, a.size() + j, b.le(i, j));
    }
  }
  return p;
}

Preorder permute(const Preorder& p, std::span<const std::size_t> perm) {
  const std::size_t n = perm.size();
  std::vector<std::uint8_t> le(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) le[i * n + j] = p.le(perm[i], perm[j]);
  }
  return Preorder(n, std::move(le));
}

Preorder induced(const Preorder& p, std::span<const std::size_t> points) {
  return permute(p, points);
}

CanonicalForm canonical_form(const Preorder& p) {
  const std::size_t n = p.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::uint8_t> best;
  std::vector<std::size_t> best_perm = perm;
  std::vector<std::uint8_t> code(n * n);
  bool first = true;
  do {
    // Build the code, abandoning as soon as it exceeds the best so far.
    bool worse = false;
    bool better = first;
    for (std::size_t i = 0; i < n && !worse; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint8_t bit = p.le(perm[i], perm[j]);
        code[i * n + j] = bit;
        if (!better) {
          const std::uint8_t b = best[i * n + j];
          if (bit > b) {
            worse = true;
            break;
          }
          if (bit < b) better = true;
        }
      }
    }
    if (!worse && better) {
      best = code;
      best_perm = perm;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, best_perm, Preorder(n, best)};
}

namespace {

std::vector<Preorder> enumerate_orders(std::size_t max_size, bool posets) {
  std::vector<Preorder> out;
  for (std::size_t n = 1; n <= max_size; ++n) {
    // Pairs that may be set. Every poset has a natural labeling, so for
    // posets only pairs i < j are needed.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        if (posets && i > j) continue;
        pairs.emplace_back(i, j);
      }
    }
    std::set<std::vector<std::uint8_t>> seen;
    std::vector<Preorder> level;
    const std::uint64_t total = std::uint64_t{1} << pairs.size();
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      Preorder p(n);
      for (std::size_t b = 0; b < pairs.size(); ++b) {
        if (bits >> b & 1) p.set(pairs[b].first, pairs[b].second, true);
      }
      if (!p.is_transitive()) continue;
      auto cf = canonical_form(p);
      if (seen.insert(cf.code).second) level.push_back(std::move(cf.order));
    }
    std::sort(level.begin(), level.end(),
              [](const Preorder& a, const Preorder& b) {
                return a.matrix() < b.matrix();
              });
    for (auto& p : level) out.push_back(std::move(p));
  }
  return out;
}

std::string set_label(std::uint32_t mask, std::size_t n) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask >> i & 1) {
      if (!first) s += ",";
      s += std::to_string(i);
      first = false;
    }
  }
  return s + "}";
}

std::uint32_t full_mask(std::size_t n) {
  return n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
}

std::vector<std::uint32_t> up_masks(const Preorder& p) {
  std::vector<std::uint32_t> up(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p.le(i, j)) up[i] |= std::uint32_t{1} << j;
    }
  }
  return up;
}

// {w : up(w) subset of s}
std::uint32_t interior_of(const std::vector<std::uint32_t>& up,
                          std::uint32_t s) {
  std::uint32_t out = 0;
  for (std::size_t w = 0; w < up.size(); ++w) {
    if ((up[w] & ~s) == 0) out |= std::uint32_t{1} << w;
  }
  return out;
}

void require_small(const Preorder& p, std::size_t limit) {
  if (!p.is_valid()) throw StructuralError("relation is not a preorder");
  if (p.size() > limit) {
    throw BudgetExceeded("dual algebra", double(std::uint64_t{1} << p.size()),
                         double(kMaxCarrier));
  }
}

}  // namespace

std::vector<Preorder> enumerate_posets(std::size_t max_size,
                                       std::size_t ceiling) {
  if (max_size > ceiling) {
    throw CeilingExceeded("poset size " + std::to_string(max_size) +
                          " exceeds ceiling " + std::to_string(ceiling));
  }
  return enumerate_orders(max_size, true);
}

std::vector<Preorder> enumerate_preorders(std::size_t max_size,
                                          std::size_t ceiling) {
  if (max_size > ceiling) {
    throw CeilingExceeded("preorder size " + std::to_string(max_size) +
                          " exceeds ceiling " + std::to_string(ceiling));
  }
  return enumerate_orders(max_size, false);
}

std::vector<std::uint32_t> upset_masks(const Preorder& p) {
  if (p.size() > 30) throw Error("too many points for mask up-sets");
  // Grow up-sets by adding points whose up-set is already included.
  const auto up = up_masks(p);
  std::set<std::uint32_t> found{0};
  std::vector<std::uint32_t> frontier{0};
  while (!frontier.empty()) {
    std::vector<std::uint32_t> next;
    for (auto s : frontier) {
      for (std::size_t w = 0; w < p.size(); ++w) {
        if (s >> w & 1) continue;
        const std::uint32_t t = s | up[w];
        if (found.insert(t).second) next.push_back(t);
      }
    }
    frontier = std::move(next);
  }
  return {found.begin(), found.end()};
}

bool is_upset_mask(const Preorder& p, std::uint32_t mask) {
  const auto up = up_masks(p);
  for (std::size_t w = 0; w < p.size(); ++w) {
    if ((mask >> w & 1) && (up[w] & ~mask)) return false;
  }
  return true;
}

AlgebraPtr heyting_dual(const Preorder& poset) {
  require_small(poset, 30);
  if (!poset.is_antisymmetric()) {
    throw StructuralError("heyting_dual needs a poset");
  }
  const auto ups = upset_masks(poset);
  const std::size_t k = ups.size();
  if (k > kMaxCarrier) {
    throw BudgetExceeded("heyting dual", double(k), double(kMaxCarrier));
  }
  std::unordered_map<std::uint32_t, Elem> index;
  for (std::size_t i = 0; i < k; ++i) index[ups[i]] = Elem(i);
  const auto up = up_masks(poset);
  const std::uint32_t full = full_mask(poset.size());
  OperationTables t;
  t.join.resize(k * k);
  t.meet.resize(k * k);
  t.imp.resize(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      t.join[i * k + j] = index.at(ups[i] | ups[j]);
      t.meet[i * k + j] = index.at(ups[i] & ups[j]);
      t.imp[i * k + j] = index.at(interior_of(up, (~ups[i] & full) | ups[j]));
    }
  }
  std::vector<std::string> names;
  for (auto m : ups) names.push_back(set_label(m, poset.size()));
  return make_algebra(Signature::Heyting, k, Elem{0}, Elem(k - 1), std::move(t),
                      std::move(names));
}

namespace {

AlgebraPtr powerset_algebra(Signature sig, const Preorder& q) {
  const std::size_t n = q.size();
  const std::size_t k = std::size_t{1} << n;
  const std::uint32_t full = full_mask(n);
  OperationTables t;
  t.join.resize(k * k);
  t.meet.resize(k * k);
  t.compl_.resize(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    for (std::uint32_t j = 0; j < k; ++j) {
      t.join[i * k + j] = Elem(i | j);
      t.meet[i * k + j] = Elem(i & j);
    }
    t.compl_[i] = Elem(~i & full);
  }
  if (sig == Signature::Interior) {
    const auto up = up_masks(q);
    t.g.resize(k);
    for (std::uint32_t i = 0; i < k; ++i) t.g[i] = Elem(interior_of(up, i));
  }
  std::vector<std::string> names;
  for (std::uint32_t i = 0; i < k; ++i) names.push_back(set_label(i, n));
  return make_algebra(sig, k, Elem{0}, Elem(k - 1), std::move(t),
                      std::move(names));
}

}  // namespace

AlgebraPtr interior_dual(const Preorder& q) {
  require_small(q, 13);
  return powerset_algebra(Signature::Interior, q);
}

AlgebraPtr boolean_powerset(std::size_t n) {
  Preorder q(n);
  require_small(q, 13);
  return powerset_algebra(Signature::Boolean, q);
}

AlgebraPtr dual_algebra(Signature sig, const Preorder& p) {
  switch (sig) {
    case Signature::Heyting: return heyting_dual(p);
    case Signature::Interior: return interior_dual(p);
    case Signature::Boolean: return boolean_powerset(p.size());
    case Signature::BoundedLattice: break;
  }
  throw SignatureMismatch("no dual algebra for bounded lattices");
}

std::uint32_t dual_element_mask(Signature sig, const Preorder& p, Elem x) {
  if (sig == Signature::Heyting) return upset_masks(p).at(x);
  return x;
}

Elem dual_element_of_mask(Signature sig, const Preorder& p,
                          std::uint32_t mask) {
  if (sig == Signature::Heyting) {
    const auto ups = upset_masks(p);
    auto it = std::lower_bound(ups.begin(), ups.end(), mask);
    if (it == ups.end() || *it != mask) throw Error("mask is not an up-set");
    return Elem(it - ups.begin());
  }
  return Elem(mask);
}

}  // namespace wb
