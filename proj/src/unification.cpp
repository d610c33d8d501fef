#include "wb/unification.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "wb/functors.hpp"

namespace wb {

QuasiOrderedSet::QuasiOrderedSet(std::size_t n) : n_(n), ge_(n * n, 0) {
  for (std::size_t i = 0; i < n; ++i) ge_[i * n + i] = 1;
}

QuasiOrderedSet::QuasiOrderedSet(std::size_t n, std::vector<std::uint8_t> ge)
    : n_(n), ge_(std::move(ge)) {
  if (ge_.size() != n * n) throw StructuralError("order matrix has wrong size");
}

bool QuasiOrderedSet::is_valid() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (!ge(i, i)) return false;
    for (std::size_t j = 0; j < n_; ++j) {
      if (!ge(i, j)) continue;
      for (std::size_t k = 0; k < n_; ++k) {
        if (ge(j, k) && !ge(i, k)) return false;
      }
    }
  }
  return true;
}

QuasiOrderedSet QuasiOrderedSet::permuted(
    const std::vector<std::size_t>& perm) const {
  QuasiOrderedSet out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) out.set(i, j, ge(perm[i], perm[j]));
  }
  return out;
}

ThetaClasses theta_classes(const QuasiOrderedSet& q) {
  const std::size_t n = q.size();
  ThetaClasses t;
  t.class_of.assign(n, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    if (t.class_of[i] != SIZE_MAX) continue;
    const std::size_t c = t.members.size();
    t.members.emplace_back();
    for (std::size_t j = i; j < n; ++j) {
      if (t.class_of[j] == SIZE_MAX && q.equivalent(i, j)) {
        t.class_of[j] = c;
        t.members[c].push_back(j);
      }
    }
  }
  const std::size_t c = t.members.size();
  t.below.assign(c * c, 0);
  for (std::size_t a = 0; a < c; ++a) {
    for (std::size_t b = 0; b < c; ++b) {
      t.below[a * c + b] = q.ge(t.members[b][0], t.members[a][0]);
    }
  }
  return t;
}

bool is_mu_set(const QuasiOrderedSet& q, const std::vector<std::size_t>& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i == j) continue;
      if (m[i] == m[j] || q.ge(m[i], m[j])) return false;
    }
  }
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (std::none_of(m.begin(), m.end(),
                     [&](std::size_t y) { return q.ge(y, x); })) {
      return false;
    }
  }
  return true;
}

std::optional<std::vector<std::size_t>> mu_set(const QuasiOrderedSet& q) {
  const auto t = theta_classes(q);
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < t.count(); ++a) {
    bool maximal = true;
    for (std::size_t b = 0; b < t.count() && maximal; ++b) {
      if (b != a && t.le(a, b)) maximal = false;
    }
    if (maximal) out.push_back(t.members[a][0]);
  }
  std::sort(out.begin(), out.end());
  if (!is_mu_set(q, out)) return std::nullopt;
  return out;
}

std::string UnificationType::name() const {
  if (unitary()) return "1";
  return "omega(" + std::to_string(mu_size) + ")";
}

UnificationType classify_type(const QuasiOrderedSet& q) {
  if (q.size() == 0) throw Error("type of an empty quasiorder");
  auto mu = mu_set(q);
  if (!mu) throw Error("no mu-set in a finite quasiorder");
  return {mu->size()};
}

bool unifiable(const AlgebraPtr& a, AlgebraPtr m) {
  if (!m) m = two_element(a->signature());
  require_same_signature(*a, *m);
  HomConstraints c;
  c.onto = true;
  return find_hom(*a, *m, c).has_value();
}

std::string UnifierSet::key(std::size_t i) const {
  const auto& u = unifiers[i];
  std::string s = targets[u.target].key + "|";
  for (std::size_t x = 0; x < u.u.map.size(); ++x) {
    if (x) s += ",";
    s += std::to_string(u.u.map[x]);
  }
  return s;
}

std::string target_key(Signature sig, const Preorder& canonical_frame) {
  std::string s(signature_name(sig));
  s += ":" + std::to_string(canonical_frame.size()) + ":";
  for (auto b : canonical_frame.matrix()) s += b ? '1' : '0';
  return s;
}

namespace {

PointSet to_set(std::size_t n, const std::vector<std::size_t>& pts) {
  PointSet s(n);
  for (auto p : pts) s.set(p);
  return s;
}

Term color_term(Signature sig, unsigned k, std::uint32_t color) {
  std::vector<Term> parts;
  for (unsigned i = 0; i < k; ++i) {
    const Term x = Term::var(i);
    if (color >> i & 1) {
      parts.push_back(x);
    } else if (sig == Signature::Heyting) {
      parts.push_back(imp(x, Term::bot()));
    } else {
      parts.push_back(compl_(x));
    }
  }
  return meet_all(parts);
}

// Formulas true exactly on the up-set of a point of a reduced poset model.
Term heyting_upset_term(const Model& m, unsigned k,
                        const std::vector<std::size_t>& pts) {
  const auto& f = m.frame;
  const std::size_t n = f.size();
  auto strictly = [&](std::size_t a, std::size_t b) {
    return a != b && f.le(a, b) && !f.le(b, a);
  };
  std::vector<std::vector<std::size_t>> cover(n);
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!strictly(w, v)) continue;
      bool immediate = true;
      for (std::size_t u = 0; u < n && immediate; ++u) {
        if (strictly(w, u) && strictly(u, v)) immediate = false;
      }
      if (immediate) cover[w].push_back(v);
    }
  }
  std::vector<std::optional<Term>> phi(n), psi(n);
  std::function<void(std::size_t)> build = [&](std::size_t w) {
    if (phi[w]) return;
    std::vector<Term> prop;
    for (unsigned i = 0; i < k; ++i) {
      if (m.color[w] >> i & 1) prop.push_back(Term::var(i));
    }
    if (cover[w].empty()) {
      phi[w] = color_term(Signature::Heyting, k, m.color[w]);
      psi[w] = imp(*phi[w], Term::bot());
      return;
    }
    std::vector<Term> up_phi, up_psi, newprop;
    for (auto v : cover[w]) {
      build(v);
      up_phi.push_back(*phi[v]);
      up_psi.push_back(*psi[v]);
    }
    for (unsigned i = 0; i < k; ++i) {
      if (m.color[w] >> i & 1) continue;
      if (std::all_of(cover[w].begin(), cover[w].end(),
                      [&](std::size_t v) { return m.color[v] >> i & 1; })) {
        newprop.push_back(Term::var(i));
      }
    }
    const Term succ = join_all(up_phi);
    phi[w] = meet(meet_all(prop),
                  imp(join(join_all(newprop), join_all(up_psi)), succ));
    psi[w] = imp(*phi[w], succ);
  };
  std::vector<Term> parts;
  for (auto w : pts) {
    bool minimal = true;
    for (auto v : pts) {
      if (strictly(v, w)) minimal = false;
    }
    if (!minimal) continue;
    build(w);
    parts.push_back(*phi[w]);
  }
  return join_all(parts);
}

// Characteristic formulas from rounds of partition refinement.
Term modal_upset_term(const Model& m, Signature sig, unsigned k,
                      const std::vector<std::size_t>& pts) {
  const auto& f = m.frame;
  const std::size_t n = f.size();
  std::vector<std::size_t> cls(n);
  std::vector<Term> chi;
  {
    std::map<std::uint32_t, std::size_t> ids;
    for (std::size_t w = 0; w < n; ++w) {
      auto [it, fresh] = ids.emplace(m.color[w], chi.size());
      if (fresh) chi.push_back(color_term(sig, k, m.color[w]));
      cls[w] = it->second;
    }
  }
  if (sig == Signature::Interior) {
    while (true) {
      std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t>
          ids;
      std::vector<std::size_t> next(n);
      std::vector<Term> next_chi;
      for (std::size_t w = 0; w < n; ++w) {
        std::set<std::size_t> seen;
        for (std::size_t v = 0; v < n; ++v) {
          if (f.le(w, v)) seen.insert(cls[v]);
        }
        std::vector<std::size_t> succ(seen.begin(), seen.end());
        auto [it, fresh] = ids.emplace(std::make_pair(cls[w], succ),
                                       next_chi.size());
        if (fresh) {
          std::vector<Term> parts{chi[cls[w]]}, any;
          for (auto c : succ) {
            parts.push_back(closure_of(chi[c]));
            any.push_back(chi[c]);
          }
          parts.push_back(g(join_all(any)));
          next_chi.push_back(meet_all(parts));
        }
        next[w] = it->second;
      }
      if (next_chi.size() == chi.size()) break;
      cls = std::move(next);
      chi = std::move(next_chi);
    }
  }
  std::set<std::size_t> used;
  std::vector<Term> parts;
  for (auto w : pts) {
    if (used.insert(cls[w]).second) parts.push_back(chi[cls[w]]);
  }
  return join_all(parts);
}

}  // namespace

Term upset_term(const Model& m, Signature sig, unsigned k,
                const std::vector<std::size_t>& pts) {
  Term t = sig == Signature::Heyting ? heyting_upset_term(m, k, pts)
                                     : modal_upset_term(m, sig, k, pts);
  if (evaluate(t, m) != to_set(m.frame.size(), pts)) {
    throw Error("model does not separate the points of an up-set");
  }
  return t;
}

std::vector<Elem> orbit_representative(const std::vector<Homomorphism>& autos,
                                       const std::vector<Elem>& map) {
  std::vector<Elem> best = map;
  std::vector<Elem> cand(map.size());
  for (const auto& a : autos) {
    for (std::size_t x = 0; x < map.size(); ++x) cand[x] = a.map[map[x]];
    if (cand < best) best = cand;
  }
  return best;
}

QuasiOrderedSet generality_order(const AlgebraPtr& a,
                                 const std::vector<AlgebraPtr>& targets,
                                 const std::vector<std::vector<Elem>>& maps) {
  const std::size_t n = maps.size();
  QuasiOrderedSet q(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      HomConstraints c;
      c.fixed.assign(targets[i]->size(), std::nullopt);
      bool consistent = true;
      for (std::size_t x = 0; x < a->size() && consistent; ++x) {
        auto& slot = c.fixed[maps[i][x]];
        if (slot && *slot != maps[j][x]) consistent = false;
        slot = maps[j][x];
      }
      if (consistent && find_hom(*targets[i], *targets[j], c)) q.set(i, j, true);
    }
  }
  return q;
}

namespace {

constexpr std::size_t kRetractionBudget = 2000000;

void finish(UnifierSet& us) {
  std::vector<AlgebraPtr> algs;
  std::vector<std::vector<Elem>> maps;
  for (const auto& u : us.unifiers) {
    algs.push_back(us.targets[u.target].algebra);
    maps.push_back(u.u.map);
  }
  us.order = generality_order(us.algebra, algs, maps);
}

std::vector<Equation> open_relations(unsigned k) {
  std::vector<Equation> out;
  for (unsigned i = 0; i < k; ++i) out.emplace_back(Term::var(i), g(Term::var(i)));
  return out;
}

}  // namespace

UnifierSet unifier_search(const AlgebraPtr& a, VarietyContext& ctx,
                          const SearchBound& bound, GeneratorMode mode) {
  const Signature sig = ctx.signature();
  require_same_signature(*ctx.spec().generators.front(), *a);
  if (!ctx.dualizable()) {
    throw SignatureMismatch("unifier search needs a dualizable signature");
  }
  if (mode == GeneratorMode::Open && sig != Signature::Interior) {
    throw SignatureMismatch("open generators need the interior signature");
  }
  UnifierSet us;
  us.algebra = a;
  us.variety = ctx.spec();
  us.bound = bound;
  us.mode = mode;
  const unsigned K = bound.max_generators;
  const UniversalModel* U = nullptr;
  try {
    U = &ctx.universal(K);
  } catch (const BudgetExceeded& e) {
    us.complete = false;
    us.notes.push_back(e.what());
    us.order = QuasiOrderedSet(0);
    return us;
  }
  const Preorder& frame = U->model.frame;
  PointSet within(frame.size());
  within.set();
  if (mode == GeneratorMode::Open) within = persistent_part(U->model);

  std::map<std::string, std::optional<Target>> found;
  for (const auto& pts : upsets_up_to(frame, bound.max_target_points, &within)) {
    if (pts.empty()) continue;
    const Preorder sub = induced(frame, pts);
    auto cf = canonical_form(sub);
    const std::string key = target_key(sig, cf.order);
    if (found.count(key)) continue;
    std::vector<std::optional<std::size_t>> fixed(frame.size());
    for (std::size_t i = 0; i < pts.size(); ++i) fixed[pts[i]] = i;
    std::optional<std::vector<std::size_t>> r;
    try {
      r = find_pmorphism(frame, sub, fixed, kRetractionBudget);
    } catch (const BudgetExceeded&) {
      us.complete = false;
      us.notes.push_back("projectivity unknown for target " + key);
      found.emplace(key, std::nullopt);
      continue;
    }
    if (!r) {
      found.emplace(key, std::nullopt);
      continue;
    }
    Target t;
    t.key = key;
    t.frame = cf.order;
    t.algebra = dual_algebra(sig, cf.order);
    t.points = pts;
    std::vector<std::size_t> pos(pts.size());
    for (std::size_t i = 0; i < cf.perm.size(); ++i) pos[cf.perm[i]] = i;
    for (auto& p : *r) p = pos[p];
    t.retraction = std::move(*r);
    t.presentation.variety = ctx.spec();
    t.presentation.k = K;
    if (mode == GeneratorMode::Open) t.presentation.relations = open_relations(K);
    t.presentation.relations.emplace_back(upset_term(U->model, sig, K, pts),
                                          Term::top());
    t.automorphisms = automorphisms(t.algebra);
    found.emplace(key, std::move(t));
  }
  for (auto& [key, t] : found) {
    if (!t) continue;
    const std::size_t ti = us.targets.size();
    std::set<std::vector<Elem>> reps;
    for (const auto& h : enumerate_homs(a, t->algebra, false)) {
      reps.insert(orbit_representative(t->automorphisms, h.map));
    }
    for (const auto& m : reps) {
      us.unifiers.push_back({ti, Homomorphism{a, t->algebra, m}});
    }
    us.targets.push_back(std::move(*t));
  }
  finish(us);
  return us;
}

UnifierSet unifier_search(const AlgebraPtr& a, const VarietySpec& v,
                          const SearchBound& bound, GeneratorMode mode) {
  VarietyContext ctx(v);
  return unifier_search(a, ctx, bound, mode);
}

std::string TypeVerdict::name() const {
  switch (kind) {
    case Kind::NotUnifiable: return "not unifiable";
    case Kind::Final: return type.name();
    case Kind::Inconclusive: return "inconclusive-at-bound";
  }
  return "inconclusive-at-bound";
}

TypeVerdict algebra_type(const AlgebraPtr& a, VarietyContext& ctx,
                         const SearchBound& bound, GeneratorMode mode,
                         UnifierSet* at_bound) {
  TypeVerdict v;
  UnifierSet us = unifier_search(a, ctx, bound, mode);
  const bool can = unifiable(a);
  if (!can) {
    v.kind = TypeVerdict::Kind::NotUnifiable;
    if (at_bound) *at_bound = std::move(us);
    return v;
  }
  if (us.unifiers.empty()) {
    v.reason = "no unifier within the bound";
    if (at_bound) *at_bound = std::move(us);
    return v;
  }
  v.mu = *mu_set(us.order);
  v.type = classify_type(us.order);
  SearchBound bigger = bound;
  ++bigger.max_generators;
  const UnifierSet next = unifier_search(a, ctx, bigger, mode);
  if (!us.complete || !next.complete) {
    v.reason = "search incomplete";
  } else {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < next.unifiers.size(); ++i) index[next.key(i)] = i;
    std::vector<std::size_t> images;
    for (auto i : v.mu) {
      auto it = index.find(us.key(i));
      if (it == index.end()) {
        v.reason = "unifier missing at the larger bound";
        break;
      }
      images.push_back(it->second);
    }
    if (v.reason.empty()) {
      if (is_mu_set(next.order, images)) {
        v.kind = TypeVerdict::Kind::Final;
      } else {
        v.reason = "mu-set changes with one more generator";
      }
    }
  }
  if (at_bound) *at_bound = std::move(us);
  return v;
}

CanonicalTarget canonical_target(const AlgebraPtr& a) {
  const Signature sig = a->signature();
  const DualFrame d = dual_frame(*a);
  auto cf = canonical_form(d.frame);
  CanonicalTarget t;
  t.key = target_key(sig, cf.order);
  t.frame = cf.order;
  t.algebra = dual_algebra(sig, cf.order);
  auto iso = is_isomorphic(a, t.algebra);
  if (!iso) throw Error("algebra is not isomorphic to its dual's algebra");
  t.iso = std::move(*iso);
  return t;
}

TauResult tau(const UnifierSet& us, VarietyContext& interior) {
  if (us.algebra->signature() != Signature::Heyting) {
    throw SignatureMismatch("tau needs a Heyting unifier set");
  }
  TauResult r;
  auto& img = r.image;
  const auto base = boolean_extension(us.algebra);
  img.algebra = base.extension;
  img.variety = interior.spec();
  img.bound = us.bound;
  img.mode = GeneratorMode::Open;
  img.complete = us.complete;
  img.notes = us.notes;

  std::vector<FreeBooleanExtension> ext;
  std::vector<Homomorphism> isos;
  std::set<std::string> keys;
  for (const auto& t : us.targets) {
    ext.push_back(boolean_extension(t.algebra));
    auto ct = canonical_target(ext.back().extension);
    if (!keys.insert(ct.key).second) {
      r.injective = false;
      r.problems.push_back("two targets share the image " + ct.key);
    }
    const auto proj = interior.projective(ct.algebra);
    if (proj.verdict == Verdict::False) {
      r.problems.push_back("image target not projective: " + ct.key);
    } else if (proj.verdict == Verdict::Unknown) {
      img.complete = false;
      img.notes.push_back("projectivity unknown for image " + ct.key);
    }
    Target it;
    it.key = ct.key;
    it.frame = ct.frame;
    it.algebra = ct.algebra;
    it.retraction = proj.retraction;
    it.presentation.variety = interior.spec();
    it.presentation.k = t.presentation.k;
    it.presentation.relations = open_relations(t.presentation.k);
    for (const auto& [l, rr] : t.presentation.relations) {
      it.presentation.relations.emplace_back(to_interior(l), to_interior(rr));
    }
    it.automorphisms = automorphisms(ct.algebra);
    isos.push_back(std::move(ct.iso));
    img.targets.push_back(std::move(it));
  }
  for (const auto& u : us.unifiers) {
    const auto bu = boolean_extension_hom(u.u, base, ext[u.target]);
    std::vector<Elem> map(bu.map.size());
    for (std::size_t x = 0; x < map.size(); ++x) {
      map[x] = isos[u.target].map[bu.map[x]];
    }
    const auto& t = img.targets[u.target];
    img.unifiers.push_back(
        {u.target, Homomorphism{img.algebra, t.algebra,
                                orbit_representative(t.automorphisms, map)}});
  }
  finish(img);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < img.unifiers.size(); ++i) {
    if (!seen.insert(img.key(i)).second) r.injective = false;
  }
  for (std::size_t i = 0; i < us.unifiers.size(); ++i) {
    for (std::size_t j = 0; j < us.unifiers.size(); ++j) {
      const bool in = us.order.ge(i, j);
      const bool out = img.order.ge(i, j);
      if (in && !out) r.order_preserving = false;
      if (out && !in) r.order_reflecting = false;
    }
  }
  if (!r.injective) r.problems.push_back("tau is not injective");
  if (!r.order_preserving) r.problems.push_back("tau does not preserve the order");
  return r;
}

}  // namespace wb
