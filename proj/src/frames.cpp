#include "wb/frames.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace wb {

Elem DualFrame::element_of(const PointSet& s) const {
  auto it = element_of_set.find(s);
  if (it == element_of_set.end()) throw Error("set is not an element");
  return it->second;
}

std::vector<Elem> join_irreducibles(const FiniteAlgebra& a) {
  std::vector<Elem> out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j == a.bot()) continue;
    Elem below = a.bot();
    for (std::size_t x = 0; x < a.size(); ++x) {
      if (x != j && a.leq(Elem(x), Elem(j))) below = a.join(below, Elem(x));
    }
    if (below != j) out.push_back(Elem(j));
  }
  return out;
}

std::vector<Elem> atoms(const FiniteAlgebra& a) {
  std::vector<Elem> out;
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (x == a.bot()) continue;
    bool minimal = true;
    for (std::size_t y = 0; y < a.size() && minimal; ++y) {
      if (y != x && y != a.bot() && a.leq(Elem(y), Elem(x))) minimal = false;
    }
    if (minimal) out.push_back(Elem(x));
  }
  return out;
}

DualFrame dual_frame(const FiniteAlgebra& a) {
  DualFrame d;
  d.signature = a.signature();
  const bool lattice_side = a.signature() == Signature::Heyting ||
                            a.signature() == Signature::BoundedLattice;
  d.point_element = lattice_side ? join_irreducibles(a) : atoms(a);
  const std::size_t n = d.point_element.size();
  d.frame = Preorder(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      bool rel;
      if (lattice_side) {
        rel = a.leq(d.point_element[q], d.point_element[p]);
      } else if (a.signature() == Signature::Interior) {
        const Elem cq = a.compl_(a.g(a.compl_(d.point_element[q])));
        rel = a.leq(d.point_element[p], cq);
      } else {
        rel = p == q;
      }
      d.frame.set(p, q, rel);
    }
  }
  d.element_set.assign(a.size(), PointSet(n));
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t p = 0; p < n; ++p) {
      if (a.leq(d.point_element[p], Elem(x))) d.element_set[x].set(p);
    }
    d.element_of_set.emplace(d.element_set[x], Elem(x));
  }
  return d;
}

std::vector<std::size_t> dual_map(const Homomorphism& h, const DualFrame& dom,
                                  const DualFrame& cod) {
  const auto& A = *h.dom;
  const auto& C = *h.cod;
  const bool lattice_side = A.signature() == Signature::Heyting ||
                            A.signature() == Signature::BoundedLattice;
  std::vector<std::size_t> f(cod.point_element.size());
  for (std::size_t q = 0; q < f.size(); ++q) {
    const Elem jq = cod.point_element[q];
    std::optional<std::size_t> found;
    if (lattice_side) {
      Elem m = A.top();
      for (std::size_t x = 0; x < A.size(); ++x) {
        if (C.leq(jq, h.map[x])) m = A.meet(m, Elem(x));
      }
      for (std::size_t p = 0; p < dom.point_element.size(); ++p) {
        if (dom.point_element[p] == m) found = p;
      }
    } else {
      for (std::size_t p = 0; p < dom.point_element.size(); ++p) {
        if (C.leq(jq, h.map[dom.point_element[p]])) found = p;
      }
    }
    if (!found) throw Error("dual_map: no dual point");
    f[q] = *found;
  }
  return f;
}

std::vector<Elem> hom_from_dual_map(std::span<const std::size_t> f,
                                    const DualFrame& dom,
                                    const DualFrame& cod) {
  std::vector<Elem> h(dom.element_set.size());
  for (std::size_t x = 0; x < h.size(); ++x) {
    PointSet s(cod.point_element.size());
    for (std::size_t q = 0; q < f.size(); ++q) {
      if (dom.element_set[x].test(f[q])) s.set(q);
    }
    h[x] = cod.element_of(s);
  }
  return h;
}

Contraction contract(std::span<const Model> parts) {
  Contraction out;
  std::size_t total = 0;
  for (const auto& m : parts) {
    out.offset.push_back(total);
    total += m.frame.size();
  }
  // Up lists in global numbering.
  std::vector<std::vector<std::size_t>> up(total);
  std::vector<std::uint32_t> color(total);
  for (std::size_t pi = 0; pi < parts.size(); ++pi) {
    const auto& m = parts[pi];
    const std::size_t base = out.offset[pi];
    for (std::size_t i = 0; i < m.frame.size(); ++i) {
      color[base + i] = m.color[i];
      for (std::size_t j = 0; j < m.frame.size(); ++j) {
        if (m.frame.le(i, j)) up[base + i].push_back(base + j);
      }
    }
  }
  std::vector<std::size_t> cls(total);
  std::size_t count = 0;
  {
    std::map<std::uint32_t, std::size_t> ids;
    for (std::size_t x = 0; x < total; ++x) {
      auto [it, fresh] = ids.emplace(color[x], ids.size());
      cls[x] = it->second;
    }
    count = ids.size();
  }
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(total);
    std::vector<std::size_t> sig;
    for (std::size_t x = 0; x < total; ++x) {
      sig.clear();
      for (std::size_t y : up[x]) sig.push_back(cls[y]);
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      sig.push_back(cls[x]);
      auto [it, fresh] = ids.emplace(sig, ids.size());
      next[x] = it->second;
    }
    cls = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  std::vector<std::size_t> rep(count, SIZE_MAX);
  for (std::size_t x = 0; x < total; ++x) {
    if (rep[cls[x]] == SIZE_MAX) rep[cls[x]] = x;
  }
  out.model.frame = Preorder(count);
  out.model.color.resize(count);
  for (std::size_t c = 0; c < count; ++c) {
    out.model.color[c] = color[rep[c]];
    for (std::size_t y : up[rep[c]]) out.model.frame.set(c, cls[y], true);
  }
  out.class_of = std::move(cls);
  return out;
}

PointSet up_set(const Preorder& p, std::size_t w) {
  PointSet s(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (p.le(w, v)) s.set(v);
  }
  return s;
}

PointSet box(const Preorder& p, const std::vector<PointSet>& ups,
             const PointSet& s) {
  PointSet out(p.size());
  for (std::size_t w = 0; w < p.size(); ++w) {
    if (ups[w].is_subset_of(s)) out.set(w);
  }
  return out;
}

PointSet persistent_part(const Model& m) {
  const std::size_t n = m.frame.size();
  PointSet local(n);
  for (std::size_t v = 0; v < n; ++v) {
    bool ok = true;
    for (std::size_t u = 0; u < n && ok; ++u) {
      if (m.frame.le(v, u) && (m.color[v] & ~m.color[u])) ok = false;
    }
    if (ok) local.set(v);
  }
  std::vector<PointSet> ups;
  for (std::size_t w = 0; w < n; ++w) ups.push_back(up_set(m.frame, w));
  return box(m.frame, ups, local);
}

UniversalModel universal_model(std::span<const Preorder> frames, unsigned k,
                               bool persistent, std::size_t raw_budget) {
  if (k > 16) throw Error("too many generators");
  std::vector<Model> parts;
  double raw = 0;
  std::vector<std::vector<std::uint32_t>> choices;
  for (const auto& f : frames) {
    std::vector<std::uint32_t> subsets;
    if (persistent) {
      subsets = upset_masks(f);
    } else {
      if (f.size() > 20) throw Error("frame too large for colorings");
      for (std::uint32_t s = 0; s < (std::uint32_t{1} << f.size()); ++s) {
        subsets.push_back(s);
      }
    }
    double count = 1;
    for (unsigned i = 0; i < k; ++i) count *= double(subsets.size());
    raw += count * double(f.size());
    choices.push_back(std::move(subsets));
  }
  if (raw > double(raw_budget)) {
    throw BudgetExceeded("universal model", raw, double(raw_budget));
  }
  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    const auto& f = frames[fi];
    const auto& subsets = choices[fi];
    std::vector<std::size_t> pick(k, 0);
    while (true) {
      Model m{f, std::vector<std::uint32_t>(f.size(), 0)};
      for (unsigned i = 0; i < k; ++i) {
        for (std::size_t w = 0; w < f.size(); ++w) {
          if (subsets[pick[i]] >> w & 1) m.color[w] |= std::uint32_t{1} << i;
        }
      }
      parts.push_back(std::move(m));
      unsigned i = 0;
      while (i < k && ++pick[i] == subsets.size()) pick[i++] = 0;
      if (i == k) break;
    }
  }
  auto c = contract(parts);
  return {std::move(c.model), k, persistent};
}

std::optional<std::vector<std::size_t>> embed_into(const Model& part,
                                                   const Model& universal) {
  std::vector<Model> parts{universal, part};
  auto c = contract(parts);
  std::vector<std::size_t> where(c.model.frame.size(), SIZE_MAX);
  for (std::size_t u = 0; u < universal.frame.size(); ++u) {
    where[c.class_of[u]] = u;
  }
  std::vector<std::size_t> out(part.frame.size());
  for (std::size_t i = 0; i < part.frame.size(); ++i) {
    const std::size_t w = where[c.class_of[c.offset[1] + i]];
    if (w == SIZE_MAX) return std::nullopt;
    out[i] = w;
  }
  return out;
}

std::vector<std::vector<std::size_t>> upsets_up_to(const Preorder& p,
                                                   std::size_t max_points,
                                                   const PointSet* within) {
  const std::size_t n = p.size();
  std::vector<PointSet> ups;
  std::vector<std::size_t> candidates;
  for (std::size_t w = 0; w < n; ++w) {
    ups.push_back(up_set(p, w));
    if (ups[w].count() > max_points) continue;
    if (within && !ups[w].is_subset_of(*within)) continue;
    candidates.push_back(w);
  }
  std::set<PointSet> seen;
  std::vector<PointSet> frontier{PointSet(n)};
  seen.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<PointSet> next;
    for (const auto& s : frontier) {
      for (std::size_t w : candidates) {
        if (s.test(w)) continue;
        PointSet t = s | ups[w];
        if (t.count() > max_points) continue;
        if (seen.insert(t).second) next.push_back(std::move(t));
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::vector<std::size_t>> out;
  for (const auto& s : seen) {
    std::vector<std::size_t> pts;
    for (auto i = s.find_first(); i != PointSet::npos; i = s.find_next(i)) {
      pts.push_back(i);
    }
    out.push_back(std::move(pts));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_pmorphism(const Preorder& from, const Preorder& to,
                  std::span<const std::size_t> f) {
  if (f.size() != from.size()) return false;
  for (std::size_t x = 0; x < from.size(); ++x) {
    PointSet image(to.size());
    for (std::size_t y = 0; y < from.size(); ++y) {
      if (from.le(x, y)) image.set(f[y]);
    }
    if (image != up_set(to, f[x])) return false;
  }
  return true;
}

namespace {

struct Clusters {
  std::vector<std::size_t> id;                    // cluster of each point
  std::vector<std::vector<std::size_t>> members;  // ascending
};

Clusters clusters_of(const Preorder& p) {
  Clusters c;
  c.id.assign(p.size(), SIZE_MAX);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (c.id[i] != SIZE_MAX) continue;
    c.id[i] = c.members.size();
    c.members.push_back({i});
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p.le(i, j) && p.le(j, i)) {
        c.id[j] = c.id[i];
        c.members.back().push_back(j);
      }
    }
  }
  return c;
}

class PMorphSearch {
 public:
  PMorphSearch(const Preorder& from, const Preorder& to,
               std::span<const std::optional<std::size_t>> fixed,
               const std::function<bool(std::span<const std::size_t>)>& visit,
               std::size_t budget)
      : from_(from), to_(to), fixed_(fixed), visit_(visit), budget_(budget) {
    fc_ = clusters_of(from);
    tc_ = clusters_of(to);
    for (std::size_t w = 0; w < to.size(); ++w) to_up_.push_back(up_set(to, w));
    for (const auto& mem : tc_.members) {
      PointSet strict = to_up_[mem[0]];
      for (auto m : mem) strict.reset(m);
      to_strict_.push_back(std::move(strict));
    }
    // Successor clusters first: larger up-sets come later.
    order_.resize(fc_.members.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::vector<std::size_t> upsize(fc_.members.size());
    strict_up_.resize(fc_.members.size());
    for (std::size_t c = 0; c < fc_.members.size(); ++c) {
      const std::size_t x = fc_.members[c][0];
      for (std::size_t y = 0; y < from.size(); ++y) {
        if (from.le(x, y) && fc_.id[y] != c) strict_up_[c].push_back(y);
      }
      upsize[c] = strict_up_[c].size();
    }
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) {
                       return upsize[a] < upsize[b];
                     });
    f_.assign(from.size(), SIZE_MAX);
  }

  void run() {
    if (from_.size() > 0 && to_.size() == 0) return;
    recurse(0);
  }

 private:
  std::optional<std::size_t> fixed_at(std::size_t x) const {
    if (x < fixed_.size()) return fixed_[x];
    return std::nullopt;
  }

  bool recurse(std::size_t oi) {
    if (budget_ && ++nodes_ > budget_) {
      throw BudgetExceeded("p-morphism search", double(nodes_), double(budget_));
    }
    if (oi == order_.size()) return visit_(f_);
    const std::size_t c = order_[oi];
    const auto& mem = fc_.members[c];
    PointSet s(to_.size());
    for (std::size_t y : strict_up_[c]) s.set(f_[y]);
    for (std::size_t k = 0; k < tc_.members.size(); ++k) {
      const auto& kmem = tc_.members[k];
      if (!to_strict_[k].is_subset_of(s)) continue;
      if (!s.is_subset_of(to_up_[kmem[0]])) continue;
      // Members of K not reached through successors must be hit by C.
      std::vector<std::size_t> need;
      for (auto t : kmem) {
        if (!s.test(t)) need.push_back(t);
      }
      if (need.size() > mem.size()) continue;
      bool fixed_ok = true;
      for (auto x : mem) {
        auto fx = fixed_at(x);
        if (fx && tc_.id[*fx] != k) fixed_ok = false;
      }
      if (!fixed_ok) continue;
      if (!assign_cluster(oi, mem, kmem, need, 0)) return false;
    }
    return true;
  }

  bool assign_cluster(std::size_t oi, const std::vector<std::size_t>& mem,
                      const std::vector<std::size_t>& kmem,
                      const std::vector<std::size_t>& need, std::size_t i) {
    if (i == mem.size()) {
      for (auto t : need) {
        bool hit = false;
        for (auto x : mem) hit = hit || f_[x] == t;
        if (!hit) return true;
      }
      return recurse(oi + 1);
    }
    const std::size_t x = mem[i];
    auto fx = fixed_at(x);
    for (auto t : kmem) {
      if (fx && *fx != t) continue;
      f_[x] = t;
      if (!assign_cluster(oi, mem, kmem, need, i + 1)) {
        f_[x] = SIZE_MAX;
        return false;
      }
    }
    f_[x] = SIZE_MAX;
    return true;
  }

  const Preorder& from_;
  const Preorder& to_;
  std::span<const std::optional<std::size_t>> fixed_;
  const std::function<bool(std::span<const std::size_t>)>& visit_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  Clusters fc_, tc_;
  std::vector<PointSet> to_up_, to_strict_;
  std::vector<std::vector<std::size_t>> strict_up_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> f_;
};

}  // namespace

void for_each_pmorphism(
    const Preorder& from, const Preorder& to,
    std::span<const std::optional<std::size_t>> fixed,
    const std::function<bool(std::span<const std::size_t>)>& visit,
    std::size_t node_budget) {
  PMorphSearch search(from, to, fixed, visit, node_budget);
  search.run();
}

std::optional<std::vector<std::size_t>> find_pmorphism(
    const Preorder& from, const Preorder& to,
    std::span<const std::optional<std::size_t>> fixed,
    std::size_t node_budget) {
  std::optional<std::vector<std::size_t>> found;
  for_each_pmorphism(
      from, to, fixed,
      [&](std::span<const std::size_t> f) {
        found.emplace(f.begin(), f.end());
        return false;
      },
      node_budget);
  return found;
}

}  // namespace wb
