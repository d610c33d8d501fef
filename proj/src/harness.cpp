#include "wb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <thread>

#include "wb/functors.hpp"

namespace wb {

namespace {

struct Collector {
  std::size_t cases = 0;
  std::size_t skips = 0;
  std::vector<CaseFailure> failures;
  Json rows = Json::object();

  bool check(bool ok, const std::string& name, const std::string& message,
             std::vector<Witness> witnesses = {}) {
    ++cases;
    if (!ok) failures.push_back({name, message, std::move(witnesses)});
    return ok;
  }
  void skip(const std::string& name, const std::string& why) {
    ++skips;
    row("skipped", {{"case", name}, {"reason", why}});
  }
  void row(const std::string& key, Json value) {
    rows[key].push_back(std::move(value));
  }
};

using Task = std::pair<std::string, std::function<void(Collector&)>>;

std::vector<Collector> run_tasks(const std::vector<Task>& tasks, unsigned jobs) {
  std::vector<Collector> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        tasks[i].second(out[i]);
      } catch (const BudgetExceeded& e) {
        out[i].skip(tasks[i].first, e.what());
      } catch (const std::exception& e) {
        out[i].check(false, tasks[i].first, std::string("error: ") + e.what());
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(
      1, std::min<std::size_t>(jobs ? jobs : 1, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

void merge(SuiteReport& r, Collector& c) {
  r.cases += c.cases;
  r.skips += c.skips;
  for (auto& f : c.failures) r.failures.push_back(std::move(f));
  for (auto it = c.rows.begin(); it != c.rows.end(); ++it) {
    for (auto& v : it.value()) r.details[it.key()].push_back(std::move(v));
  }
}

void merge_all(SuiteReport& r, Collector& prep, std::vector<Collector> cs) {
  merge(r, prep);
  for (auto& c : cs) merge(r, c);
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::vector<CorpusItem> label_corpus(const std::vector<Preorder>& ps,
                                     const std::string& kind) {
  std::vector<CorpusItem> out;
  std::map<std::size_t, std::size_t> seen;
  for (const auto& p : ps) {
    const std::size_t idx = seen[p.size()]++;
    out.push_back({kind + "_" + std::to_string(p.size()) + "_" +
                       std::to_string(idx),
                   p});
  }
  return out;
}

struct Entry {
  std::string label;
  Preorder frame;
  AlgebraPtr algebra;
};

Witness algebra_witness(const std::string& label, const AlgebraPtr& a) {
  return {label, algebra_to_json(*a)};
}

Witness hom_witness(const std::string& label, const Homomorphism& h) {
  return {label, hom_to_json(h)};
}

// Builds, mutates and validates each corpus algebra; invalid ones are
// reported and dropped.
std::vector<Entry> prepare(const std::vector<CorpusItem>& items,
                           const std::string& prefix,
                           AlgebraPtr (*build)(const Preorder&),
                           const SuiteOptions& o, Collector& c) {
  std::vector<Entry> out;
  for (const auto& item : items) {
    const std::string label = prefix + "(" + item.label + ")";
    AlgebraPtr a = build(item.frame);
    if (o.mutate) a = o.mutate(label, a);
    const auto v = validate(*a);
    if (!c.check(v.empty(), label + "/valid",
                 v.empty() ? "" : v.front().describe(),
                 {algebra_witness(label, a)})) {
      continue;
    }
    out.push_back({label, item.frame, a});
  }
  return out;
}

AlgebraPtr build_heyting(const Preorder& p) { return heyting_dual(p); }
AlgebraPtr build_interior(const Preorder& p) { return interior_dual(p); }

std::vector<Entry> heyting_entries(std::size_t max, const SuiteOptions& o,
                                   Collector& c) {
  return prepare(poset_corpus(max, o.poset_ceiling), "heyting_dual",
                 build_heyting, o, c);
}

std::vector<Entry> interior_entries(std::size_t max, const SuiteOptions& o,
                                    Collector& c, bool posets_only = false) {
  const auto items = posets_only ? poset_corpus(max, o.poset_ceiling)
                                 : preorder_corpus(max, o.preorder_ceiling);
  return prepare(items, "interior_dual", build_interior, o, c);
}

std::vector<Elem> compose_maps(const std::vector<Elem>& second,
                               const std::vector<Elem>& first) {
  std::vector<Elem> out(first.size());
  for (std::size_t x = 0; x < first.size(); ++x) out[x] = second[first[x]];
  return out;
}

bool is_bijective(const AlgebraPtr& dom, const AlgebraPtr& cod,
                  const std::vector<Elem>& map) {
  Homomorphism h{dom, cod, map};
  return h.is_injective() && h.is_surjective();
}

bool is_iso_map(const Homomorphism& h) {
  return check_homomorphism(h).empty() && h.is_injective() && h.is_surjective();
}

std::string join_messages(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& m : v) s += (s.empty() ? "" : "; ") + m;
  return s;
}

std::size_t opens_count(const FiniteAlgebra& a) {
  std::size_t n = 0;
  for (std::size_t x = 0; x < a.size(); ++x) n += a.is_open(Elem(x));
  return n;
}

SuiteReport start(const std::string& name) {
  SuiteReport r;
  r.suite = name;
  return r;
}

void finish(SuiteReport& r, const Stopwatch& w) { r.ms = w.ms(); }

// Per interior algebra: O(A), B(O(A)), A* and the iso B(O(A)) -> A*.
struct InteriorSide {
  OpenAlgebra open;
  FreeBooleanExtension ext;
  StarAlgebra star;
  Homomorphism iso;
};

InteriorSide interior_side(const AlgebraPtr& a) {
  InteriorSide s;
  s.open = open_algebra(a);
  s.ext = boolean_extension(s.open.heyting);
  s.star = star_algebra(a);
  s.iso = extension_to_star(s.open, s.ext, s.star);
  return s;
}

}  // namespace

std::vector<CorpusItem> poset_corpus(std::size_t max_size, std::size_t ceiling) {
  return label_corpus(enumerate_posets(max_size, ceiling), "poset");
}

std::vector<CorpusItem> preorder_corpus(std::size_t max_size,
                                        std::size_t ceiling) {
  return label_corpus(enumerate_preorders(max_size, ceiling), "preorder");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "axioms", "roundtrips", "gl", "star", "grz", "fullness", "unification",
      "projectivity"};
  return names;
}

bool is_suite(const std::string& name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

SuiteReport suite_axioms(const SuiteOptions& o) {
  Stopwatch w;
  auto r = start("axioms");
  const std::size_t P = o.max_poset.value_or(5);
  const std::size_t Q = o.max_preorder.value_or(4);
  r.params = {{"max_poset", P}, {"max_preorder", Q}};
  Collector prep;
  const auto heyting = heyting_entries(P, o, prep);
  const auto interior = interior_entries(Q, o, prep);
  std::vector<Task> tasks;
  for (const auto& e : heyting) {
    tasks.push_back({e.label, [&e](Collector& c) {
      bool antichain = true;
      for (std::size_t i = 0; i < e.frame.size(); ++i) {
        for (std::size_t j = 0; j < e.frame.size(); ++j) {
          if (i != j && e.frame.le(i, j)) antichain = false;
        }
      }
      const bool full = e.algebra->size() == (std::size_t{1} << e.frame.size());
      c.check(full == antichain, e.label + "/powerset-iff-antichain",
              "carrier size and antichain disagree",
              {algebra_witness(e.label, e.algebra)});
    }});
  }
  for (const auto& e : interior) {
    tasks.push_back({e.label, [&e](Collector& c) {
      const auto ups = upset_masks(e.frame);
      std::vector<std::uint32_t> opens;
      for (std::size_t x = 0; x < e.algebra->size(); ++x) {
        if (e.algebra->is_open(Elem(x))) {
          opens.push_back(dual_element_mask(Signature::Interior, e.frame, Elem(x)));
        }
      }
      std::sort(opens.begin(), opens.end());
      c.check(opens == ups, e.label + "/opens-are-upsets",
              "open elements differ from the up-sets",
              {algebra_witness(e.label, e.algebra)});
    }});
  }
  merge_all(r, prep, run_tasks(tasks, o.jobs));
  r.details["algebras"] = heyting.size() + interior.size();
  r.details["heyting"] = heyting.size();
  r.details["interior"] = interior.size();
  finish(r, w);
  return r;
}

SuiteReport suite_roundtrips(const SuiteOptions& o) {
  Stopwatch w;
  auto r = start("roundtrips");
  const std::size_t P = o.max_poset.value_or(5);
  const std::size_t Q = o.max_preorder.value_or(3);
  const std::size_t PH = std::min<std::size_t>(P, 3);
  r.params = {{"max_poset", P}, {"max_preorder", Q}, {"max_poset_homs", PH}};
  Collector prep;
  const auto heyting = heyting_entries(P, o, prep);
  const auto interior = interior_entries(Q, o, prep);
  std::vector<InteriorSide> sides;
  for (const auto& e : interior) sides.push_back(interior_side(e.algebra));
  std::vector<FreeBooleanExtension> hext;
  std::vector<const Entry*> small;
  for (const auto& e : heyting) {
    if (e.frame.size() <= PH) {
      small.push_back(&e);
      hext.push_back(boolean_extension(e.algebra));
    }
  }
  std::vector<Task> tasks;
  for (const auto& e : heyting) {
    tasks.push_back({e.label, [&e](Collector& c) {
      const auto b = boolean_extension(e.algebra);
      const auto op = open_algebra(b.extension);
      std::vector<Elem> m(e.algebra->size());
      bool inside = true;
      for (std::size_t a = 0; a < m.size(); ++a) {
        const int j = op.index_of[b.eta[a]];
        if (j < 0) inside = false;
        else m[a] = Elem(j);
      }
      const bool iso = inside && check_homomorphism(*e.algebra, *op.heyting, m).empty() &&
                       is_bijective(e.algebra, op.heyting, m);
      c.check(iso, e.label + "/open-part-of-extension-is-base",
              "eta does not induce an isomorphism L -> O(B(L))",
              {algebra_witness(e.label, e.algebra)});
      const auto v = validate(*b.extension);
      c.check(v.empty(), e.label + "/extension-valid",
              v.empty() ? "" : v.front().describe(),
              {algebra_witness(e.label, e.algebra)});
      c.check(is_star_algebra(b.extension), e.label + "/extension-generated-by-opens",
              "B(L) is not generated by its opens",
              {algebra_witness(e.label, e.algebra)});
    }});
  }
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const auto& e = interior[i];
    const auto& s = sides[i];
    tasks.push_back({e.label, [&e, &s](Collector& c) {
      c.check(is_iso_map(s.iso), e.label + "/extension-of-opens-is-star",
              "B(O(A)) -> A* is not an isomorphism",
              {algebra_witness(e.label, e.algebra)});
    }});
  }
  for (std::size_t i = 0; i < interior.size(); ++i) {
    for (std::size_t j = 0; j < interior.size(); ++j) {
      const auto& A = interior[i];
      const auto& B = interior[j];
      const auto& sa = sides[i];
      const auto& sb = sides[j];
      const std::string name = A.label + "->" + B.label;
      tasks.push_back({name, [&, name](Collector& c) {
        const auto endos = enumerate_homs(B.algebra, B.algebra, false);
        for (const auto& h : enumerate_homs(A.algebra, B.algebra, false)) {
          const auto lhs = star_hom(h, sa.star, sb.star);
          const auto oh = open_hom(h, sa.open, sb.open);
          const auto rhs = boolean_extension_hom(oh, sa.ext, sb.ext);
          const bool ok = compose_maps(lhs.map, sa.iso.map) ==
                          compose_maps(sb.iso.map, rhs.map);
          c.check(ok, name + "/star-restriction-is-B(O(h))",
                  "h restricted to A* differs from B(O(h))",
                  {hom_witness("hom", h)});
          const bool valid = check_homomorphism(oh).empty() &&
                             (!h.is_surjective() || oh.is_surjective());
          c.check(valid, name + "/open-hom", "O(h) invalid or not onto",
                  {hom_witness("hom", h)});
          bool functorial = true;
          for (const auto& k : endos) {
            const auto kh = compose(k, h);
            const auto lhs2 = open_hom(kh, sa.open, sb.open);
            const auto rhs2 = open_hom(k, sb.open, sb.open);
            if (lhs2.map != compose_maps(rhs2.map, oh.map)) functorial = false;
          }
          c.check(functorial, name + "/open-functor-composition",
                  "O(k.h) differs from O(k).O(h)", {hom_witness("hom", h)});
        }
      }});
    }
  }
  for (std::size_t i = 0; i < small.size(); ++i) {
    for (std::size_t j = 0; j < small.size(); ++j) {
      const auto& L = *small[i];
      const auto& M = *small[j];
      const auto& bl = hext[i];
      const auto& bm = hext[j];
      const std::string name = L.label + "->" + M.label;
      tasks.push_back({name, [&, name](Collector& c) {
        const auto lifts = enumerate_homs(bl.extension, bm.extension, false);
        const auto endos = enumerate_homs(M.algebra, M.algebra, false);
        for (const auto& h : enumerate_homs(L.algebra, M.algebra, false)) {
          const auto bh = boolean_extension_hom(h, bl, bm);
          c.check(check_homomorphism(bh).empty(), name + "/extension-hom-valid",
                  join_messages(check_homomorphism(bh)), {hom_witness("hom", h)});
          bool restricts = true;
          for (std::size_t a = 0; a < h.map.size(); ++a) {
            if (bh.map[bl.eta[a]] != bm.eta[h.map[a]]) restricts = false;
          }
          c.check(restricts, name + "/extension-hom-restricts",
                  "B(h) does not restrict to h", {hom_witness("hom", h)});
          std::size_t count = 0;
          for (const auto& g : lifts) {
            bool same = true;
            for (std::size_t a = 0; a < h.map.size() && same; ++a) {
              same = g.map[bl.eta[a]] == bm.eta[h.map[a]];
            }
            count += same;
          }
          c.check(count == 1, name + "/extension-hom-unique",
                  std::to_string(count) + " interior homs restrict to h",
                  {hom_witness("hom", h)});
          c.check((!h.is_injective() || bh.is_injective()) &&
                      (!h.is_surjective() || bh.is_surjective()),
                  name + "/extension-hom-preserves-mono-epi",
                  "B(h) loses injectivity or surjectivity", {hom_witness("hom", h)});
          bool functorial = true;
          for (const auto& k : endos) {
            const auto bk = boolean_extension_hom(k, bm, bm);
            const auto bkh = boolean_extension_hom(compose(k, h), bl, bm);
            if (bkh.map != compose_maps(bk.map, bh.map)) functorial = false;
          }
          c.check(functorial, name + "/extension-functor-composition",
                  "B(k.h) differs from B(k).B(h)", {hom_witness("hom", h)});
          if (i == j && h.map == identity_hom(L.algebra).map) {
            c.check(bh.map == identity_hom(bl.extension).map,
                    name + "/extension-functor-identity", "B(id) is not the identity");
          }
        }
      }});
    }
  }
  merge_all(r, prep, run_tasks(tasks, o.jobs));
  r.details["heyting_algebras"] = heyting.size();
  r.details["interior_algebras"] = interior.size();
  finish(r, w);
  return r;
}

SuiteReport suite_gl(const SuiteOptions& o) {
  Stopwatch w;
  auto r = start("gl");
  const std::size_t P = o.max_poset.value_or(4);
  r.params = {{"max_poset", P}};
  Collector prep;
  const auto heyting = heyting_entries(P, o, prep);
  std::vector<Task> tasks;
  for (const auto& e : heyting) {
    tasks.push_back({e.label, [&e](Collector& c) {
      const auto b = boolean_extension(e.algebra);
      const auto err = check_g_against_implications(b);
      c.check(!err, e.label + "/g-as-meet-of-implications", err.value_or(""),
              {algebra_witness(e.label, e.algebra)});
      std::set<Elem> eta(b.eta.begin(), b.eta.end());
      std::set<Elem> opens;
      for (std::size_t x = 0; x < b.extension->size(); ++x) {
        if (b.extension->is_open(Elem(x))) opens.insert(Elem(x));
      }
      c.check(opens == eta, e.label + "/opens-are-eta-image",
              "open elements differ from the eta image",
              {algebra_witness(e.label, e.algebra)});
      const auto gen = closure(*b.extension, b.eta);
      c.check(gen.size() == b.extension->size(), e.label + "/eta-image-generates",
              "eta image does not generate the extension",
              {algebra_witness(e.label, e.algebra)});
      c.row("algebras", {{"algebra", e.label},
                         {"join_irreducibles", b.join_irreducibles.size()},
                         {"extension_size", b.extension->size()}});
    }});
  }
  merge_all(r, prep, run_tasks(tasks, o.jobs));
  finish(r, w);
  return r;
}

SuiteReport suite_star(const SuiteOptions& o) {
  Stopwatch w;
  auto r = start("star");
  const std::size_t Q = o.max_preorder.value_or(4);
  const std::size_t QH = std::min<std::size_t>(Q, 3);
  r.params = {{"max_preorder", Q}, {"max_preorder_homs", QH}};
  Collector prep;
  const auto interior = interior_entries(Q, o, prep);
  std::vector<StarAlgebra> stars;
  for (const auto& e : interior) stars.push_back(star_algebra(e.algebra));
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const auto& e = interior[i];
    const auto& s = stars[i];
    tasks.push_back({e.label, [&e, &s](Collector& c) {
      const auto wit = std::vector<Witness>{algebra_witness(e.label, e.algebra)};
      c.check(opens_count(*s.star) == opens_count(*e.algebra),
              e.label + "/star-keeps-opens", "A* has different opens", wit);
      c.check(star_algebra(s.star).star->size() == s.star->size(),
              e.label + "/star-idempotent", "(A*)* differs from A*", wit);
      const bool grz = grz_check(*e.algebra);
      const bool is_star = s.star->size() == e.algebra->size();
      if (grz) {
        c.check(is_star, e.label + "/grz-implies-star",
                "finite Grz algebra not generated by its opens", wit);
      }
      std::string retraction = "not applicable";
      if (!is_star) {
        HomConstraints hc;
        hc.fixed.assign(e.algebra->size(), std::nullopt);
        for (std::size_t x = 0; x < s.embedding.map.size(); ++x) {
          hc.fixed[s.embedding.map[x]] = Elem(x);
        }
        const auto found = find_hom(*e.algebra, *s.star, hc);
        std::vector<Witness> wr = wit;
        if (found) wr.push_back(hom_witness("retraction", {e.algebra, s.star, *found}));
        c.check(!found, e.label + "/no-retraction-onto-star",
                "A* is a proper retract of A", wr);
        retraction = found ? "found" : "none";
      }
      c.row("algebras", {{"algebra", e.label},
                         {"size", e.algebra->size()},
                         {"star_size", s.star->size()},
                         {"grz", grz},
                         {"retraction_onto_star", retraction}});
    }});
  }
  std::vector<std::size_t> small;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    if (interior[i].frame.size() <= QH) small.push_back(i);
  }
  for (auto i : small) {
    for (auto j : small) {
      const auto& A = interior[i];
      const auto& B = interior[j];
      const auto& sa = stars[i];
      const auto& sb = stars[j];
      const std::string name = A.label + "->" + B.label;
      tasks.push_back({name, [&, name](Collector& c) {
        const auto homs = enumerate_homs(A.algebra, B.algebra, false);
        const auto back = enumerate_homs(B.algebra, A.algebra, false);
        for (const auto& h : homs) {
          const auto hs = star_hom(h, sa, sb);
          const bool ok = check_homomorphism(hs).empty() &&
                          (!h.is_surjective() || hs.is_surjective()) &&
                          (!h.is_injective() || hs.is_injective());
          c.check(ok, name + "/star-restriction", "h* invalid or loses epi/mono",
                  {hom_witness("hom", h)});
          if (!h.is_surjective()) continue;
          for (const auto& q : back) {
            if (compose(h, q).map != identity_hom(B.algebra).map) continue;
            const auto qs = star_hom(q, sb, sa);
            const bool retract =
                compose_maps(hs.map, qs.map) == identity_hom(sb.star).map;
            c.check(retract, name + "/retraction-restricts",
                    "p* . q* is not the identity on B*",
                    {hom_witness("retraction", h), hom_witness("section", q)});
          }
        }
      }});
    }
  }
  merge_all(r, prep, run_tasks(tasks, o.jobs));
  finish(r, w);
  return r;
}

SuiteReport suite_grz(const SuiteOptions& o) {
  Stopwatch w;
  auto r = start("grz");
  const std::size_t Q = o.max_preorder.value_or(4);
  const std::size_t P = o.max_poset.value_or(5);
  r.params = {{"max_preorder", Q},
              {"max_poset", P},
              {"oracle", o.literal_grz_oracle ? "literal" : "implemented"}};
  Collector prep;
  const auto interior = interior_entries(Q, o, prep);
  const auto heyting = heyting_entries(P, o, prep);
  const bool literal = o.literal_grz_oracle;
  std::vector<Task> tasks;
  for (const auto& e : interior) {
    tasks.push_back({e.label, [&e, literal](Collector& c) {
      const auto impl = satisfies(*e.algebra, grz_identity());
      const auto lit = satisfies(*e.algebra, grz_identity_literal());
      const bool anti = e.frame.is_antisymmetric();
      const bool verdict = literal ? lit.holds : impl.holds;
      c.check(verdict == anti, e.label + "/grz-iff-antisymmetric",
              std::string(literal ? "literal" : "implemented") +
                  " identity gives " + (verdict ? "true" : "false") +
                  " on a frame that is " + (anti ? "" : "not ") + "antisymmetric",
              {algebra_witness(e.label, e.algebra),
               {"frame", preorder_to_json(e.frame)}});
      if (impl.holds) {
        c.check(is_star_algebra(e.algebra), e.label + "/grz-implies-star",
                "finite Grz algebra not generated by its opens",
                {algebra_witness(e.label, e.algebra)});
      }
      Json row = {{"algebra", e.label},
                  {"antisymmetric", anti},
                  {"implemented", impl.holds},
                  {"literal", lit.holds}};
      if (!impl.holds) row["implemented_witness"] = impl.witness;
      if (!lit.holds) row["literal_witness"] = lit.witness;
      c.row("verdicts", row);
      if (lit.holds != anti) c.row("literal_discrepancies", e.label);
    }});
  }
  for (const auto& e : heyting) {
    tasks.push_back({e.label, [&e](Collector& c) {
      const auto b = boolean_extension(e.algebra);
      c.check(grz_check(*b.extension), e.label + "/extension-satisfies-grz",
              "B(L) violates the implemented identity",
              {algebra_witness(e.label, e.algebra)});
    }});
  }
  tasks.push_back({"two-point-cluster", [](Collector& c) {
    const auto a = interior_dual(cluster(2));
    const auto impl = satisfies(*a, grz_identity());
    const auto lit = satisfies(*a, grz_identity_literal());
    c.check(!impl.holds && lit.holds, "two-point-cluster/literal-discrepancy",
            "the literal and implemented forms agree on the 2-point cluster",
            {algebra_witness("two-point-cluster", a)});
    c.row("cluster", {{"implemented", impl.holds},
                      {"implemented_witness", impl.witness},
                      {"literal", lit.holds}});
  }});
  merge_all(r, prep, run_tasks(tasks, o.jobs));
  if (!r.details.contains("literal_discrepancies")) {
    r.details["literal_discrepancies"] = Json::array();
  }
  finish(r, w);
  return r;
}

SuiteReport suite_fullness(const SuiteOptions& o) {
  Stopwatch w;
  auto r = start("fullness");
  const std::size_t P = o.max_poset.value_or(3);
  const std::size_t Q = o.max_preorder.value_or(3);
  r.params = {{"max_poset", P}, {"max_preorder", Q}};
  Collector prep;
  const auto stars = interior_entries(P, o, prep, true);
  const auto all = interior_entries(Q, o, prep);
  std::vector<OpenAlgebra> opens;
  for (const auto& e : stars) opens.push_back(open_algebra(e.algebra));
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < stars.size(); ++i) {
    for (std::size_t j = 0; j < stars.size(); ++j) {
      const auto& A = stars[i];
      const auto& B = stars[j];
      const auto& oa = opens[i];
      const auto& ob = opens[j];
      const std::string name = A.label + "->" + B.label;
      tasks.push_back({name, [&, name](Collector& c) {
        std::set<std::vector<Elem>> images;
        const auto homs = enumerate_homs(A.algebra, B.algebra, false);
        for (const auto& h : homs) images.insert(open_hom(h, oa, ob).map);
        c.check(images.size() == homs.size(), name + "/faithful",
                "two homs agree on the opens",
                {algebra_witness(A.label, A.algebra), algebra_witness(B.label, B.algebra)});
        for (const auto& e : enumerate_homs(oa.heyting, ob.heyting, false)) {
          c.check(images.count(e.map) == 1, name + "/full",
                  "Heyting hom between opens does not lift", {hom_witness("hom", e)});
        }
        if (i == j) {
          c.check(images.count(identity_hom(oa.heyting).map) == 1,
                  name + "/identity-lifts", "identity on opens does not lift");
        }
      }});
    }
  }
  for (const auto& e : all) {
    tasks.push_back({e.label, [&e](Collector& c) {
      const auto s = star_algebra(e.algebra);
      if (s.star->size() == e.algebra->size()) return;
      const auto oa = open_algebra(e.algebra);
      const auto os = open_algebra(s.star);
      std::vector<Elem> id(oa.open_indices.size());
      for (std::size_t x = 0; x < id.size(); ++x) {
        id[x] = Elem(os.index_of[s.index_of[oa.open_indices[x]]]);
      }
      const Homomorphism ident{oa.heyting, os.heyting, id};
      bool lifts = false;
      for (const auto& h : enumerate_homs(e.algebra, s.star, false)) {
        if (open_hom(h, oa, os).map == id) lifts = true;
      }
      c.check(check_homomorphism(ident).empty() && !lifts,
              e.label + "/identity-on-opens-does-not-lift",
              "the identity O(A) -> O(A*) lifts for a non-star algebra",
              {algebra_witness(e.label, e.algebra), hom_witness("identity", ident)});
      c.row("non_star_witnesses",
            {{"algebra", e.label}, {"unliftable", hom_to_json(ident)}});
    }});
  }
  merge_all(r, prep, run_tasks(tasks, o.jobs));
  const bool cluster_seen =
      r.details.contains("non_star_witnesses") &&
      std::any_of(r.details["non_star_witnesses"].begin(),
                  r.details["non_star_witnesses"].end(), [](const Json& j) {
                    return j["unliftable"]["dom"]["size"] == 2 &&
                           j["unliftable"]["cod"]["size"] == 2;
                  });
  ++r.cases;
  if (Q >= 2 && !cluster_seen) {
    r.failures.push_back({"two-point-cluster/counterexample",
                          "no unliftable identity recorded for the 2-point cluster",
                          {}});
  }
  finish(r, w);
  return r;
}

namespace {

std::set<std::string> keys_of(const UnifierSet& us) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < us.unifiers.size(); ++i) out.insert(us.key(i));
  return out;
}

std::size_t mu_size(const UnifierSet& us) {
  return us.unifiers.empty() ? 0 : mu_set(us.order)->size();
}

std::string type_name(const UnifierSet& us) {
  return us.unifiers.empty() ? "none" : classify_type(us.order).name();
}

}  // namespace

SuiteReport suite_unification(const SuiteOptions& o) {
  Stopwatch w;
  auto r = start("unification");
  const std::size_t P = o.max_poset.value_or(3);
  const SearchBound bound = o.bound;
  r.params = {{"max_poset", P},
              {"max_generators", bound.max_generators},
              {"max_target_points", bound.max_target_points},
              {"budget", o.budget}};
  Collector prep;
  const auto heyting = heyting_entries(P, o, prep);
  std::vector<Task> tasks;
  for (const auto& e : heyting) {
    tasks.push_back({e.label, [&e, bound, budget = o.budget](Collector& c) {
      const auto& L = e.algebra;
      const auto wit = std::vector<Witness>{algebra_witness(e.label, L)};
      VarietyContext hv(variety_of(L), budget);
      const auto base = boolean_extension(L);
      VarietyContext iv(variety_of(base.extension), budget);
      const auto us = unifier_search(L, hv, bound);
      if (!us.complete) {
        c.skip(e.label, "Heyting unifier search incomplete");
        return;
      }
      const bool can = unifiable(L);
      c.check(can == !us.unifiers.empty(), e.label + "/nonempty-iff-unifiable",
              "unifier set and unifiability disagree", wit);
      if (!can) return;
      for (const auto& t : us.targets) {
        const auto p = present(t.presentation, Route::Dual);
        c.check(is_isomorphic(p.algebra, t.algebra).has_value(),
                e.label + "/target-presentation", "presentation of " + t.key +
                " does not denote the target", wit);
      }
      const auto tr = tau(us, iv);
      if (!tr.image.complete) {
        c.skip(e.label, "projectivity of an image target unknown");
        return;
      }
      c.check(tr.problems.empty(), e.label + "/tau-images-projective",
              join_messages(tr.problems), wit);
      c.check(tr.injective, e.label + "/tau-injective", "tau identifies unifiers", wit);
      c.check(tr.order_preserving, e.label + "/tau-preserves-order",
              "tau loses a generality relation", wit);
      bool valid = true;
      for (const auto& u : tr.image.unifiers) {
        if (!check_homomorphism(u.u).empty()) valid = false;
      }
      c.check(valid, e.label + "/tau-images-are-homs", "an image map is not a hom", wit);
      for (const auto& t : tr.image.targets) {
        const auto p = present(t.presentation, Route::Dual);
        c.check(is_isomorphic(p.algebra, t.algebra).has_value(),
                e.label + "/image-presentation", "translated presentation of " +
                t.key + " does not denote the image target", wit);
      }
      const auto io = unifier_search(base.extension, iv, bound, GeneratorMode::Open);
      if (!io.complete) {
        c.skip(e.label, "interior unifier search incomplete");
        return;
      }
      c.check(keys_of(tr.image) == keys_of(io), e.label + "/tau-onto-bounded-set",
              "tau image differs from the bounded interior unifier set", wit);
      c.check(mu_size(us) == mu_size(io), e.label + "/mu-sizes-agree",
              "mu-set sizes " + std::to_string(mu_size(us)) + " and " +
                  std::to_string(mu_size(io)),
              wit);
      const auto pl = hv.projective(L);
      if (pl.verdict == Verdict::True) {
        const auto ct = canonical_target(L);
        std::optional<std::size_t> idx;
        for (std::size_t t = 0; t < us.targets.size(); ++t) {
          if (us.targets[t].key != ct.key) continue;
          const auto rep = orbit_representative(us.targets[t].automorphisms, ct.iso.map);
          for (std::size_t i = 0; i < us.unifiers.size(); ++i) {
            if (us.unifiers[i].target == t && us.unifiers[i].u.map == rep) idx = i;
          }
        }
        bool top = idx.has_value();
        for (std::size_t j = 0; top && j < us.unifiers.size(); ++j) {
          top = us.order.ge(*idx, j);
        }
        c.check(top, e.label + "/projective-identity-most-general",
                "<id, L> missing or not most general", wit);
        c.check(mu_size(us) == 1 && mu_size(io) == 1, e.label + "/projective-type-1",
                "projective algebra not of type 1 on both sides", wit);
      }
      const auto ip = unifier_search(base.extension, iv, bound, GeneratorMode::Plain);
      std::size_t preimages = 0;
      if (!ip.complete) {
        c.skip(e.label, "plain interior unifier search incomplete");
      } else {
        for (std::size_t i = 0; i < ip.unifiers.size(); ++i) {
          const auto& v = ip.unifiers[i];
          const auto& t = ip.targets[v.target];
          const auto oc = open_algebra(t.algebra);
          const auto po = hv.projective(oc.heyting);
          if (po.verdict == Verdict::Unknown) {
            c.skip(ip.key(i), "projectivity of O(C) unknown");
            continue;
          }
          std::vector<Elem> u(L->size());
          for (std::size_t a = 0; a < u.size(); ++a) {
            u[a] = Elem(oc.index_of[v.u.map[base.eta[a]]]);
          }
          const auto bo = boolean_extension(oc.heyting);
          const auto bu = boolean_extension_hom(Homomorphism{L, oc.heyting, u}, base, bo);
          const auto ct = canonical_target(bo.extension);
          const auto rep = orbit_representative(t.automorphisms,
                                                compose_maps(ct.iso.map, bu.map));
          c.check(po.verdict == Verdict::True && ct.key == t.key && rep == v.u.map,
                  e.label + "/interior-unifier-has-preimage",
                  "unifier " + ip.key(i) + " is not tau of a Heyting unifier", wit);
          ++preimages;
        }
      }
      c.row("algebras", {{"algebra", e.label},
                         {"heyting_targets", us.targets.size()},
                         {"heyting_unifiers", us.unifiers.size()},
                         {"interior_targets", io.targets.size()},
                         {"interior_unifiers", io.unifiers.size()},
                         {"plain_interior_unifiers", ip.unifiers.size()},
                         {"plain_preimages_checked", preimages},
                         {"mu_heyting", mu_size(us)},
                         {"mu_interior", mu_size(io)},
                         {"type_heyting", type_name(us)},
                         {"type_interior", type_name(io)},
                         {"projective", std::string(verdict_name(pl.verdict))}});
    }});
  }
  tasks.push_back({"simple-monadic", [bound, budget = o.budget](Collector& c) {
    const auto m = interior_dual(cluster(2));
    VarietyContext mv(variety_of(m), budget);
    const auto us = unifier_search(m, mv, bound);
    c.check(!unifiable(m), "simple-monadic/not-unifiable",
            "the 4-element simple algebra maps onto two",
            {algebra_witness("simple-monadic", m)});
    c.check(us.complete && us.unifiers.empty(), "simple-monadic/no-unifiers",
            "unifiers found for a non-unifiable algebra",
            {algebra_witness("simple-monadic", m)});
  }});
  merge_all(r, prep, run_tasks(tasks, o.jobs));
  finish(r, w);
  return r;
}

SuiteReport suite_projectivity(const SuiteOptions& o) {
  Stopwatch w;
  auto r = start("projectivity");
  const std::size_t Q = o.max_preorder.value_or(3);
  r.params = {{"max_preorder", Q}, {"budget", o.budget}};
  Collector prep;
  const auto interior = interior_entries(Q, o, prep);
  std::vector<Task> tasks;
  for (const auto& G : interior) {
    tasks.push_back({G.label, [&G, &interior, budget = o.budget](Collector& c) {
      VarietyContext V(variety_of(G.algebra), budget);
      const auto gstar = star_algebra(G.algebra).star;
      VarietyContext Vs(variety_of(gstar), budget);
      VarietyContext gV(variety_of(open_algebra(G.algebra).heyting), budget);
      std::size_t decided = 0;
      std::size_t unknown = 0;
      auto both = [&](const std::string& name, Verdict a, Verdict b,
                      const std::string& msg, const AlgebraPtr& B) {
        if (a == Verdict::Unknown || b == Verdict::Unknown) {
          ++unknown;
          c.skip(name, "projectivity verdict unknown");
          return;
        }
        ++decided;
        c.check(a == b, name, msg + ": " + std::string(verdict_name(a)) + " vs " +
                                  std::string(verdict_name(b)),
                {algebra_witness("generator", G.algebra), algebra_witness("algebra", B)});
      };
      const std::string base = "Eq(" + G.label + ")";
      c.check(V.projective(two_element(Signature::Interior)).verdict == Verdict::True,
              base + "/two-projective", "two is not projective");
      c.check(gV.projective(two_element(Signature::Heyting)).verdict == Verdict::True,
              base + "/two-projective-in-opens", "two is not projective");
      try {
        const auto f1 = V.free(1).algebra;
        c.check(V.projective(f1).verdict == Verdict::True, base + "/free-projective",
                "free algebra on one generator not projective");
      } catch (const BudgetExceeded&) {
      }
      for (const auto& B : interior) {
        bool in = false;
        try {
          in = V.member(B.algebra);
        } catch (const BudgetExceeded& e) {
          c.skip(base + "/" + B.label, e.what());
          continue;
        }
        if (!in) continue;
        const std::string name = base + "/" + B.label;
        const auto bs = star_algebra(B.algebra).star;
        const auto ob = open_algebra(B.algebra).heyting;
        const auto pB = V.projective(B.algebra);
        const auto pO = gV.projective(ob);
        const auto pS = Vs.projective(bs);
        const auto pSV = V.projective(bs);
        c.check(pO.member && pS.member, name + "/images-are-members",
                "O(B) or B* lies outside the derived variety",
                {algebra_witness("generator", G.algebra),
                 algebra_witness("algebra", B.algebra)});
        if (bs->size() == B.algebra->size()) {
          both(name + "/star-algebra-vs-opens", pB.verdict, pO.verdict,
               "B and O(B) disagree", B.algebra);
        }
        both(name + "/opens-vs-star-part", pO.verdict, pS.verdict,
             "O(B) and B* disagree", B.algebra);
        both(name + "/star-part-in-both-varieties", pS.verdict, pSV.verdict,
             "B* in V* and in V disagree", B.algebra);
        c.row("instances", {{"variety", G.label},
                            {"algebra", B.label},
                            {"projective", std::string(verdict_name(pB.verdict))},
                            {"opens_projective", std::string(verdict_name(pO.verdict))},
                            {"star_projective", std::string(verdict_name(pS.verdict))},
                            {"star_projective_in_variety",
                             std::string(verdict_name(pSV.verdict))}});
      }
      if (!G.frame.is_antisymmetric() && G.frame.size() == 2 &&
          G.frame.le(0, 1) && G.frame.le(1, 0)) {
        c.check(V.projective(G.algebra).verdict == Verdict::False,
                base + "/simple-monadic-not-projective",
                "the 4-element simple algebra is projective in its variety",
                {algebra_witness("algebra", G.algebra)});
      }
      c.row("varieties", {{"variety", G.label}, {"decided", decided}, {"unknown", unknown}});
    }});
  }
  merge_all(r, prep, run_tasks(tasks, o.jobs));
  std::size_t decided = 0;
  std::size_t unknown = 0;
  if (r.details.contains("varieties")) {
    for (const auto& v : r.details["varieties"]) {
      decided += v["decided"].get<std::size_t>();
      unknown += v["unknown"].get<std::size_t>();
    }
  }
  const double rate = decided + unknown ? double(unknown) / double(decided + unknown) : 0.0;
  r.details["decided_pairs"] = decided;
  r.details["unknown_pairs"] = unknown;
  r.details["skip_rate_percent"] = std::round(rate * 1000.0) / 10.0;
  finish(r, w);
  return r;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& o) {
  if (name == "axioms") return suite_axioms(o);
  if (name == "roundtrips") return suite_roundtrips(o);
  if (name == "gl") return suite_gl(o);
  if (name == "star") return suite_star(o);
  if (name == "grz") return suite_grz(o);
  if (name == "fullness") return suite_fullness(o);
  if (name == "unification") return suite_unification(o);
  if (name == "projectivity") return suite_projectivity(o);
  throw Error("unknown suite \"" + name + "\"");
}

std::string case_slug(const std::string& name) {
  std::string s;
  bool gap = false;
  for (char ch : name) {
    const unsigned char u = static_cast<unsigned char>(ch);
    if (std::isalnum(u)) {
      if (gap && !s.empty()) s += '_';
      s += char(std::tolower(u));
      gap = false;
    } else {
      gap = true;
    }
  }
  return s.empty() ? "case" : s;
}

Json report_to_json(const SuiteReport& r,
                    const std::vector<std::vector<std::string>>& witness_files) {
  Json doc;
  doc["suite"] = r.suite;
  doc["params"] = r.params;
  doc["cases"] = r.cases;
  Json failures = Json::array();
  for (std::size_t i = 0; i < r.failures.size(); ++i) {
    Json f;
    f["case"] = r.failures[i].name;
    f["message"] = r.failures[i].message;
    f["witness_files"] =
        i < witness_files.size() ? Json(witness_files[i]) : Json::array();
    failures.push_back(std::move(f));
  }
  doc["failures"] = std::move(failures);
  doc["skips"] = r.skips;
  doc["details"] = r.details;
  doc["ms"] = static_cast<long long>(std::llround(r.ms));
  return doc;
}

Json write_report(const SuiteReport& r, const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  const std::string stem = path.stem().string();
  const fs::path dir = path.parent_path() / (stem + ".witness");
  std::error_code ec;
  fs::remove_all(dir, ec);
  std::vector<std::vector<std::string>> files(r.failures.size());
  std::map<std::string, std::size_t> used;
  for (std::size_t i = 0; i < r.failures.size(); ++i) {
    for (const auto& wit : r.failures[i].witnesses) {
      const std::string slug = case_slug(r.failures[i].name);
      const std::string name = slug + "_" + std::to_string(used[slug]++) + ".json";
      fs::create_directories(dir);
      write_text_file(dir / name, dump_canonical(wit.document));
      files[i].push_back(stem + ".witness/" + name);
    }
  }
  Json doc = report_to_json(r, files);
  write_text_file(path, dump_canonical(doc));
  return doc;
}

}  // namespace wb
