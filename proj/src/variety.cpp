#include "wb/variety.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unordered_map>

namespace wb {

std::size_t configured_budget() {
  if (const char* env = std::getenv("WB_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return std::size_t(v);
  }
  return kDefaultBudget;
}

Signature VarietySpec::signature() const {
  if (generators.empty()) throw Error("variety without generators");
  return generators.front()->signature();
}

void VarietySpec::require_valid() const {
  if (generators.empty()) throw Error("variety without generators");
  for (const auto& g : generators) {
    require_same_signature(*generators.front(), *g);
    wb::require_valid(*g);
  }
}

VarietySpec variety_of(AlgebraPtr generator) {
  return VarietySpec{{std::move(generator)}};
}

double free_algebra_bound(const VarietySpec& v, unsigned k) {
  double log_bound = 0;
  for (const auto& m : v.generators) {
    const double size = double(m->size());
    log_bound += std::pow(size, double(k)) * std::log(size);
  }
  if (log_bound > 700) return HUGE_VAL;
  return std::round(std::exp(log_bound));
}

namespace {

struct TupleHash {
  std::size_t operator()(const std::vector<Elem>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Elem e : v) h = (h ^ e) * 1099511628211ull;
    return h;
  }
};

}  // namespace

FreeAlgebra free_algebra(const VarietySpec& v, unsigned k, std::size_t budget) {
  v.require_valid();
  const Signature sig = v.signature();
  const double bound = free_algebra_bound(v, k);
  if (bound > double(budget)) {
    throw BudgetExceeded("free algebra on " + std::to_string(k) + " generators",
                         bound, double(budget));
  }
  // One coordinate per generator algebra and assignment of the variables.
  std::vector<const FiniteAlgebra*> coord_alg;
  std::vector<std::vector<Elem>> coord_assign;
  for (const auto& m : v.generators) {
    std::size_t total = 1;
    for (unsigned i = 0; i < k; ++i) total *= m->size();
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::vector<Elem> alpha(k);
      std::size_t rest = idx;
      for (unsigned i = k; i-- > 0;) {
        alpha[i] = Elem(rest % m->size());
        rest /= m->size();
      }
      coord_alg.push_back(m.get());
      coord_assign.push_back(std::move(alpha));
    }
  }
  const std::size_t L = coord_alg.size();
  const std::size_t limit = std::min<std::size_t>(budget, kMaxCarrier);

  std::vector<std::vector<Elem>> tuples;
  std::vector<Term> terms;
  std::unordered_map<std::vector<Elem>, std::size_t, TupleHash> index;
  auto add = [&](std::vector<Elem> t, const Term& term) -> std::size_t {
    auto it = index.find(t);
    if (it != index.end()) return it->second;
    if (tuples.size() >= limit) {
      throw BudgetExceeded("free algebra on " + std::to_string(k) +
                               " generators",
                           double(tuples.size() + 1), double(limit));
    }
    index.emplace(t, tuples.size());
    tuples.push_back(std::move(t));
    terms.push_back(term);
    return tuples.size() - 1;
  };
  std::vector<Elem> t(L);
  for (std::size_t c = 0; c < L; ++c) t[c] = coord_alg[c]->bot();
  add(t, Term::bot());
  for (std::size_t c = 0; c < L; ++c) t[c] = coord_alg[c]->top();
  add(t, Term::top());
  std::vector<std::size_t> gens;
  for (unsigned i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < L; ++c) t[c] = coord_assign[c][i];
    gens.push_back(add(t, Term::var(i)));
  }
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    if (has_compl(sig)) {
      for (std::size_t c = 0; c < L; ++c) t[c] = coord_alg[c]->compl_(tuples[i][c]);
      add(t, compl_(terms[i]));
    }
    if (has_g(sig)) {
      for (std::size_t c = 0; c < L; ++c) t[c] = coord_alg[c]->g(tuples[i][c]);
      add(t, g(terms[i]));
    }
    for (std::size_t j = 0; j <= i; ++j) {
      for (int side = 0; side < 2; ++side) {
        const std::size_t x = side ? j : i;
        const std::size_t y = side ? i : j;
        for (std::size_t c = 0; c < L; ++c) {
          t[c] = coord_alg[c]->join(tuples[x][c], tuples[y][c]);
        }
        add(t, join(terms[x], terms[y]));
        for (std::size_t c = 0; c < L; ++c) {
          t[c] = coord_alg[c]->meet(tuples[x][c], tuples[y][c]);
        }
        add(t, meet(terms[x], terms[y]));
        if (has_imp(sig)) {
          for (std::size_t c = 0; c < L; ++c) {
            t[c] = coord_alg[c]->imp(tuples[x][c], tuples[y][c]);
          }
          add(t, imp(terms[x], terms[y]));
        }
      }
    }
  }
  // Canonical element order: lexicographic on tuples.
  const std::size_t n = tuples.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return tuples[a] < tuples[b]; });
  std::vector<Elem> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = Elem(i);
  for (auto& [key, val] : index) val = pos[val];

  OperationTables tab;
  auto bin = [&](auto op, std::vector<Elem>& dst) {
    dst.resize(n * n);
    std::vector<Elem> r(L);
    for (std::size_t x = 0; x < n; ++x) {
      const auto& tx = tuples[order[x]];
      for (std::size_t y = 0; y < n; ++y) {
        const auto& ty = tuples[order[y]];
        for (std::size_t c = 0; c < L; ++c) r[c] = op(*coord_alg[c], tx[c], ty[c]);
        dst[x * n + y] = Elem(index.at(r));
      }
    }
  };
  auto un = [&](auto op, std::vector<Elem>& dst) {
    dst.resize(n);
    std::vector<Elem> r(L);
    for (std::size_t x = 0; x < n; ++x) {
      const auto& tx = tuples[order[x]];
      for (std::size_t c = 0; c < L; ++c) r[c] = op(*coord_alg[c], tx[c]);
      dst[x] = Elem(index.at(r));
    }
  };
  bin([](const FiniteAlgebra& m, Elem a, Elem b) { return m.join(a, b); }, tab.join);
  bin([](const FiniteAlgebra& m, Elem a, Elem b) { return m.meet(a, b); }, tab.meet);
  if (has_imp(sig)) {
    bin([](const FiniteAlgebra& m, Elem a, Elem b) { return m.imp(a, b); }, tab.imp);
  }
  if (has_compl(sig)) {
    un([](const FiniteAlgebra& m, Elem a) { return m.compl_(a); }, tab.compl_);
  }
  if (has_g(sig)) {
    un([](const FiniteAlgebra& m, Elem a) { return m.g(a); }, tab.g);
  }
  FreeAlgebra out;
  out.algebra = make_algebra(sig, n, pos[0], pos[1], std::move(tab));
  for (auto gi : gens) out.generators.push_back(pos[gi]);
  out.terms.resize(n, Term::bot());
  for (std::size_t i = 0; i < n; ++i) out.terms[pos[i]] = terms[i];
  return out;
}

std::string_view route_name(Route r) {
  switch (r) {
    case Route::Auto: return "auto";
    case Route::Table: return "table";
    case Route::Dual: return "dual";
  }
  return "auto";
}

Presented present(const Presentation& p, Route route, std::size_t budget) {
  VarietyContext ctx(p.variety, budget);
  for (const auto& [l, r] : p.relations) {
    if (l.num_vars() > p.k || r.num_vars() > p.k) {
      throw Error("relation uses more than k variables");
    }
  }
  if (route == Route::Auto) {
    route = ctx.free_fits(p.k) || !ctx.dualizable() ? Route::Table : Route::Dual;
  }
  const Signature sig = ctx.signature();
  if (route == Route::Table) {
    const auto& F = ctx.free(p.k);
    std::vector<std::pair<Elem, Elem>> pairs;
    for (const auto& [l, r] : p.relations) {
      pairs.emplace_back(evaluate(l, *F.algebra, F.generators),
                         evaluate(r, *F.algebra, F.generators));
    }
    auto q = quotient(congruence_generated(F.algebra, pairs));
    Presented out{q.algebra, {}, q.canonical};
    for (Elem g : F.generators) out.generator_images.push_back(q.canonical.map[g]);
    return out;
  }
  const auto& U = ctx.universal(p.k).model;
  const std::size_t n = U.frame.size();
  PointSet agree(n);
  agree.set();
  for (const auto& [l, r] : p.relations) {
    agree &= ~(evaluate(l, U) ^ evaluate(r, U));
  }
  std::vector<PointSet> ups;
  for (std::size_t w = 0; w < n; ++w) ups.push_back(up_set(U.frame, w));
  const PointSet kept = box(U.frame, ups, agree);
  std::vector<std::size_t> pts;
  for (auto i = kept.find_first(); i != PointSet::npos; i = kept.find_next(i)) {
    pts.push_back(i);
  }
  const Preorder frame = induced(U.frame, pts);
  Presented out{dual_algebra(sig, frame), {}, std::nullopt};
  for (unsigned i = 0; i < p.k; ++i) {
    std::uint32_t mask = 0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (U.color[pts[j]] >> i & 1) mask |= std::uint32_t{1} << j;
    }
    out.generator_images.push_back(dual_element_of_mask(sig, frame, mask));
  }
  return out;
}

Satisfaction satisfies(const FiniteAlgebra& a, const Equation& identity) {
  const unsigned vars =
      std::max(identity.first.num_vars(), identity.second.num_vars());
  std::vector<Elem> assign(vars, 0);
  while (true) {
    if (evaluate(identity.first, a, assign) !=
        evaluate(identity.second, a, assign)) {
      return {false, assign};
    }
    unsigned i = vars;
    bool done = true;
    while (i > 0) {
      --i;
      if (++assign[i] < a.size()) {
        done = false;
        break;
      }
      assign[i] = 0;
    }
    if (done) return {true, {}};
  }
}

Equation grz_identity() {
  const Term x = Term::var(0);
  const Term lhs = g(join(x, closure_of(meet(x, compl_(g(x))))));
  return {meet(lhs, x), lhs};
}

Equation grz_identity_literal() {
  const Term x = Term::var(0);
  const Term lhs = g(join(x, g(meet(x, compl_(g(x))))));
  return {meet(lhs, x), lhs};
}

bool grz_check(const FiniteAlgebra& a) {
  return satisfies(a, grz_identity()).holds;
}

bool grz_literal_check(const FiniteAlgebra& a) {
  return satisfies(a, grz_identity_literal()).holds;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::False: return "false";
    case Verdict::True: return "true";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

Model colored_dual(const FiniteAlgebra& a, const std::vector<Elem>& gens) {
  const DualFrame d = dual_frame(a);
  Model m{d.frame, std::vector<std::uint32_t>(d.frame.size(), 0)};
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t p = 0; p < d.frame.size(); ++p) {
      if (d.element_set[gens[i]].test(p)) m.color[p] |= std::uint32_t{1} << i;
    }
  }
  return m;
}

VarietyContext::VarietyContext(VarietySpec v, std::size_t budget)
    : spec_(std::move(v)), budget_(budget) {
  spec_.require_valid();
}

bool VarietyContext::dualizable() const {
  return signature() != Signature::BoundedLattice;
}

const FreeAlgebra& VarietyContext::free(unsigned k) {
  auto it = free_.find(k);
  if (it == free_.end()) {
    it = free_.emplace(k, free_algebra(spec_, k, budget_)).first;
  }
  return it->second;
}

bool VarietyContext::free_fits(unsigned k) const {
  return free_algebra_bound(spec_, k) <= double(budget_);
}

const std::vector<Preorder>& VarietyContext::generator_frames() {
  if (!frames_) {
    frames_.emplace();
    for (const auto& g : spec_.generators) {
      frames_->push_back(dual_frame(*g).frame);
    }
  }
  return *frames_;
}

const UniversalModel& VarietyContext::universal(unsigned k) {
  auto it = universal_.find(k);
  if (it == universal_.end()) {
    if (!dualizable()) throw SignatureMismatch("no duality for bounded lattices");
    auto u = universal_model(generator_frames(), k,
                             signature() == Signature::Heyting);
    it = universal_.emplace(k, std::move(u)).first;
  }
  return it->second;
}

Route VarietyContext::pick(unsigned k, Route route) const {
  if (route != Route::Auto) return route;
  if (free_fits(k) || !dualizable()) return Route::Table;
  return Route::Dual;
}

bool VarietyContext::member_table(const AlgebraPtr& a,
                                  const std::vector<Elem>& gens) {
  const auto& F = free(unsigned(gens.size()));
  HomConstraints c;
  c.generators = F.generators;
  c.fixed.assign(F.algebra->size(), std::nullopt);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    auto& slot = c.fixed[F.generators[i]];
    if (slot && *slot != gens[i]) return false;
    slot = gens[i];
  }
  return find_hom(*F.algebra, *a, c).has_value();
}

bool VarietyContext::member_dual(const AlgebraPtr& a,
                                 const std::vector<Elem>& gens,
                                 std::vector<std::size_t>* where) {
  const Model w = colored_dual(*a, gens);
  auto e = embed_into(w, universal(unsigned(gens.size())).model);
  if (!e) return false;
  if (where) *where = std::move(*e);
  return true;
}

bool VarietyContext::member(const AlgebraPtr& a, Route route) {
  require_same_signature(*spec_.generators.front(), *a);
  const auto gens = minimal_generating_set(*a);
  route = pick(unsigned(gens.size()), route);
  if (route == Route::Table) return member_table(a, gens);
  return member_dual(a, gens, nullptr);
}

ProjectivityResult VarietyContext::projective(const AlgebraPtr& a,
                                              Route route) {
  require_same_signature(*spec_.generators.front(), *a);
  ProjectivityResult r;
  r.generating_set = minimal_generating_set(*a);
  const auto& gens = r.generating_set;
  r.generators = unsigned(gens.size());
  r.route = pick(r.generators, route);
  try {
    if (r.route == Route::Table) {
      const auto& F = free(r.generators);
      HomConstraints pc;
      pc.generators = F.generators;
      pc.fixed.assign(F.algebra->size(), std::nullopt);
      for (std::size_t i = 0; i < gens.size(); ++i) {
        auto& slot = pc.fixed[F.generators[i]];
        if (slot && *slot != gens[i]) {
          r.member = false;
          break;
        }
        slot = gens[i];
      }
      std::optional<std::vector<Elem>> p;
      if (r.member) p = find_hom(*F.algebra, *a, pc);
      if (!p) {
        r.member = false;
        r.verdict = Verdict::False;
        r.note = "not a member of the variety";
        return r;
      }
      HomConstraints sc;
      sc.generators = gens;
      sc.allowed.assign(a->size(), {});
      for (Elem x : gens) {
        auto& allowed = sc.allowed[x];
        for (std::size_t e = 0; e < p->size(); ++e) {
          if ((*p)[e] == x) allowed.push_back(Elem(e));
        }
      }
      auto s = find_hom(*a, *F.algebra, sc);
      if (s) {
        r.verdict = Verdict::True;
        r.section = std::move(*s);
      } else {
        r.verdict = Verdict::False;
      }
      return r;
    }
    std::vector<std::size_t> where;
    if (!member_dual(a, gens, &where)) {
      r.member = false;
      r.verdict = Verdict::False;
      r.note = "not a member of the variety";
      return r;
    }
    const auto& U = universal(r.generators).model;
    std::vector<std::optional<std::size_t>> fixed(U.frame.size());
    for (std::size_t p = 0; p < where.size(); ++p) {
      if (fixed[where[p]]) throw Error("dual frame does not embed injectively");
      fixed[where[p]] = p;
    }
    const Preorder target = dual_frame(*a).frame;
    auto ret = find_pmorphism(U.frame, target, fixed, 2000000);
    if (ret) {
      r.verdict = Verdict::True;
      r.retraction = std::move(*ret);
    } else {
      r.verdict = Verdict::False;
    }
  } catch (const BudgetExceeded& e) {
    r.verdict = Verdict::Unknown;
    r.note = e.what();
  }
  return r;
}

bool member(const AlgebraPtr& a, const VarietySpec& v, Route route) {
  VarietyContext ctx(v);
  return ctx.member(a, route);
}

ProjectivityResult is_projective(const AlgebraPtr& a, const VarietySpec& v,
                                 Route route) {
  VarietyContext ctx(v);
  return ctx.projective(a, route);
}

}  // namespace wb
