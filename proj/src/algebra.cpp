#include "wb/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace wb {

std::string_view signature_name(Signature sig) {
  switch (sig) {
    case Signature::BoundedLattice: return "bounded-lattice";
    case Signature::Heyting: return "heyting";
    case Signature::Boolean: return "boolean";
    case Signature::Interior: return "interior";
  }
  return "unknown";
}

std::optional<Signature> parse_signature(std::string_view name) {
  for (auto sig : {Signature::BoundedLattice, Signature::Heyting,
                   Signature::Boolean, Signature::Interior}) {
    if (signature_name(sig) == name) return sig;
  }
  return std::nullopt;
}

bool has_imp(Signature sig) { return sig == Signature::Heyting; }
bool has_compl(Signature sig) {
  return sig == Signature::Boolean || sig == Signature::Interior;
}
bool has_g(Signature sig) { return sig == Signature::Interior; }

namespace {
std::string budget_message(const std::string& what, double required,
                           double budget) {
  std::ostringstream out;
  out << what << ": requires " << required << " elements, budget " << budget;
  return out.str();
}
}  // namespace

BudgetExceeded::BudgetExceeded(const std::string& what, double required,
                               double budget)
    : Error(budget_message(what, required, budget)),
      required_(required),
      budget_(budget) {}

FiniteAlgebra::FiniteAlgebra(Signature sig, std::size_t size, Elem bot,
                             Elem top, OperationTables ops,
                             std::vector<std::string> names)
    : sig_(sig),
      n_(size),
      bot_(bot),
      top_(top),
      ops_(std::move(ops)),
      names_(std::move(names)) {}

std::string FiniteAlgebra::label(Elem x) const {
  if (x < names_.size()) return names_[x];
  return std::to_string(x);
}

std::vector<const std::vector<Elem>*> FiniteAlgebra::binary_tables() const {
  std::vector<const std::vector<Elem>*> out{&ops_.join, &ops_.meet};
  if (has_imp(sig_)) out.push_back(&ops_.imp);
  return out;
}

std::vector<const std::vector<Elem>*> FiniteAlgebra::unary_tables() const {
  std::vector<const std::vector<Elem>*> out;
  if (has_compl(sig_)) out.push_back(&ops_.compl_);
  if (has_g(sig_)) out.push_back(&ops_.g);
  return out;
}

bool leq(const FiniteAlgebra& a, Elem x, Elem y) { return a.leq(x, y); }

std::string Violation::describe() const {
  std::ostringstream out;
  out << (kind == Kind::Structural ? "structural: " : "axiom ") << axiom;
  if (!witness.empty()) {
    out << " witness [";
    for (std::size_t i = 0; i < witness.size(); ++i) {
      out << (i ? ", " : "") << witness[i];
    }
    out << "]";
  }
  return out.str();
}

namespace {

void check_structure(const FiniteAlgebra& a, std::vector<Violation>& out) {
  auto structural = [&](std::string what) {
    out.push_back({Violation::Kind::Structural, std::move(what), {}});
  };
  const std::size_t n = a.size();
  if (n == 0) {
    structural("carrier is empty");
    return;
  }
  if (n > 0xFFFF) structural("carrier too large");
  if (a.bot() >= n) structural("bot out of range");
  if (a.top() >= n) structural("top out of range");
  const auto& t = a.tables();
  auto table = [&](const std::vector<Elem>& v, const char* name, bool wanted,
                   std::size_t len) {
    if (!wanted) {
      if (!v.empty()) structural(std::string("unexpected table ") + name);
      return;
    }
    if (v.size() != len) {
      structural(std::string("table ") + name + " has " +
                 std::to_string(v.size()) + " entries, expected " +
                 std::to_string(len));
      return;
    }
    for (Elem e : v) {
      if (e >= n) {
        structural(std::string("table ") + name + " entry out of range");
        return;
      }
    }
  };
  const Signature sig = a.signature();
  table(t.join, "join", true, n * n);
  table(t.meet, "meet", true, n * n);
  table(t.imp, "imp", has_imp(sig), n * n);
  table(t.compl_, "compl", has_compl(sig), n);
  table(t.g, "g", has_g(sig), n);
  if (!a.names().empty() && a.names().size() != n) {
    structural("names length differs from size");
  }
}

// Records the first failing witness per axiom.
class AxiomChecker {
 public:
  explicit AxiomChecker(std::vector<Violation>& out) : out_(out) {}

  template <class Pred>
  void unary(const char* axiom, std::size_t n, Pred pred) {
    for (std::size_t x = 0; x < n; ++x) {
      if (!pred(Elem(x))) {
        fail(axiom, {Elem(x)});
        return;
      }
    }
  }
  template <class Pred>
  void binary(const char* axiom, std::size_t n, Pred pred) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (!pred(Elem(x), Elem(y))) {
          fail(axiom, {Elem(x), Elem(y)});
          return;
        }
      }
    }
  }
  template <class Pred>
  void ternary(const char* axiom, std::size_t n, Pred pred) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t z = 0; z < n; ++z) {
          if (!pred(Elem(x), Elem(y), Elem(z))) {
            fail(axiom, {Elem(x), Elem(y), Elem(z)});
            return;
          }
        }
      }
    }
  }
  void fail(const char* axiom, std::vector<Elem> witness) {
    out_.push_back({Violation::Kind::Axiom, axiom, std::move(witness)});
  }

 private:
  std::vector<Violation>& out_;
};

}  // namespace

std::vector<Violation> validate(const FiniteAlgebra& a) {
  std::vector<Violation> out;
  check_structure(a, out);
  if (!out.empty()) return out;

  const std::size_t n = a.size();
  AxiomChecker c(out);
  c.binary("join commutative", n,
           [&](Elem x, Elem y) { return a.join(x, y) == a.join(y, x); });
  c.binary("meet commutative", n,
           [&](Elem x, Elem y) { return a.meet(x, y) == a.meet(y, x); });
  c.ternary("join associative", n, [&](Elem x, Elem y, Elem z) {
    return a.join(a.join(x, y), z) == a.join(x, a.join(y, z));
  });
  c.ternary("meet associative", n, [&](Elem x, Elem y, Elem z) {
    return a.meet(a.meet(x, y), z) == a.meet(x, a.meet(y, z));
  });
  c.unary("join idempotent", n, [&](Elem x) { return a.join(x, x) == x; });
  c.unary("meet idempotent", n, [&](Elem x) { return a.meet(x, x) == x; });
  c.binary("absorption x+(x.y)=x", n,
           [&](Elem x, Elem y) { return a.join(x, a.meet(x, y)) == x; });
  c.binary("absorption x.(x+y)=x", n,
           [&](Elem x, Elem y) { return a.meet(x, a.join(x, y)) == x; });
  c.unary("bot+x=x", n, [&](Elem x) { return a.join(a.bot(), x) == x; });
  c.unary("top.x=x", n, [&](Elem x) { return a.meet(a.top(), x) == x; });

  const Signature sig = a.signature();
  if (has_imp(sig)) {
    c.ternary("residuation", n, [&](Elem x, Elem y, Elem z) {
      // c.a <= b iff c <= a=>b with a=x, b=y, c=z
      return a.leq(a.meet(z, x), y) == a.leq(z, a.imp(x, y));
    });
  }
  if (has_compl(sig)) {
    c.unary("x.-x=bot", n,
            [&](Elem x) { return a.meet(x, a.compl_(x)) == a.bot(); });
    c.unary("x+-x=top", n,
            [&](Elem x) { return a.join(x, a.compl_(x)) == a.top(); });
    c.ternary("distributive", n, [&](Elem x, Elem y, Elem z) {
      return a.meet(x, a.join(y, z)) == a.join(a.meet(x, y), a.meet(x, z));
    });
  }
  if (has_g(sig)) {
    if (a.g(a.top()) != a.top()) c.fail("g(top)=top", {a.top()});
    c.unary("g(x)<=x", n, [&](Elem x) { return a.leq(a.g(x), x); });
    c.unary("g(g(x))=g(x)", n, [&](Elem x) { return a.g(a.g(x)) == a.g(x); });
    c.binary("g(x.y)=g(x).g(y)", n, [&](Elem x, Elem y) {
      return a.g(a.meet(x, y)) == a.meet(a.g(x), a.g(y));
    });
  }
  return out;
}

bool has_structural_errors(const std::vector<Violation>& violations) {
  return std::any_of(violations.begin(), violations.end(), [](const auto& v) {
    return v.kind == Violation::Kind::Structural;
  });
}

void require_valid(const FiniteAlgebra& a) {
  auto violations = validate(a);
  if (!violations.empty()) {
    throw StructuralError("invalid algebra: " + violations.front().describe());
  }
}

bool Homomorphism::is_injective() const {
  std::vector<char> seen(cod->size(), 0);
  for (Elem y : map) {
    if (seen[y]) return false;
    seen[y] = 1;
  }
  return true;
}

bool Homomorphism::is_surjective() const {
  std::vector<char> seen(cod->size(), 0);
  std::size_t count = 0;
  for (Elem y : map) {
    if (!seen[y]) {
      seen[y] = 1;
      ++count;
    }
  }
  return count == cod->size();
}

void require_same_signature(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (a.signature() != b.signature()) {
    throw SignatureMismatch(std::string("signature mismatch: ") +
                            std::string(signature_name(a.signature())) +
                            " vs " +
                            std::string(signature_name(b.signature())));
  }
}

std::vector<std::string> check_homomorphism(const FiniteAlgebra& dom,
                                            const FiniteAlgebra& cod,
                                            std::span<const Elem> map) {
  std::vector<std::string> out;
  if (dom.signature() != cod.signature()) {
    out.push_back("signature mismatch");
    return out;
  }
  if (map.size() != dom.size()) {
    out.push_back("map length differs from domain size");
    return out;
  }
  for (Elem y : map) {
    if (y >= cod.size()) {
      out.push_back("map entry out of range");
      return out;
    }
  }
  if (map[dom.bot()] != cod.bot()) out.push_back("bot not preserved");
  if (map[dom.top()] != cod.top()) out.push_back("top not preserved");
  const auto db = dom.binary_tables();
  const auto cb = cod.binary_tables();
  const char* bnames[] = {"join", "meet", "imp"};
  const std::size_t n = dom.size();
  for (std::size_t t = 0; t < db.size(); ++t) {
    bool done = false;
    for (std::size_t x = 0; x < n && !done; ++x) {
      for (std::size_t y = 0; y < n && !done; ++y) {
        Elem lhs = map[(*db[t])[x * n + y]];
        Elem rhs = (*cb[t])[map[x] * cod.size() + map[y]];
        if (lhs != rhs) {
          out.push_back(std::string(bnames[t]) + " not preserved at (" +
                        std::to_string(x) + "," + std::to_string(y) + ")");
          done = true;
        }
      }
    }
  }
  const auto du = dom.unary_tables();
  const auto cu = cod.unary_tables();
  std::vector<const char*> unames;
  if (has_compl(dom.signature())) unames.push_back("compl");
  if (has_g(dom.signature())) unames.push_back("g");
  for (std::size_t t = 0; t < du.size(); ++t) {
    for (std::size_t x = 0; x < n; ++x) {
      if (map[(*du[t])[x]] != (*cu[t])[map[x]]) {
        out.push_back(std::string(unames[t]) + " not preserved at " +
                      std::to_string(x));
        break;
      }
    }
  }
  return out;
}

std::vector<std::string> check_homomorphism(const Homomorphism& h) {
  return check_homomorphism(*h.dom, *h.cod, h.map);
}

Homomorphism identity_hom(const AlgebraPtr& a) {
  std::vector<Elem> map(a->size());
  std::iota(map.begin(), map.end(), Elem{0});
  return {a, a, std::move(map)};
}

Homomorphism compose(const Homomorphism& second, const Homomorphism& first) {
  std::vector<Elem> map(first.map.size());
  for (std::size_t x = 0; x < map.size(); ++x) map[x] = second.map[first.map[x]];
  return {first.dom, second.cod, std::move(map)};
}

namespace {

class HomSearch {
 public:
  HomSearch(const FiniteAlgebra& dom, const FiniteAlgebra& cod,
            const HomConstraints& constraints)
      : dom_(dom),
        cod_(cod),
        c_(constraints),
        m_(dom.size(), -1),
        used_(cod.size(), 0) {
    db_ = dom.binary_tables();
    cb_ = cod.binary_tables();
    du_ = dom.unary_tables();
    cu_ = cod.unary_tables();
  }

  void run(std::span<const Elem> gens,
           const std::function<bool(std::span<const Elem>)>& visit) {
    visit_ = &visit;
    gens_.assign(gens.begin(), gens.end());
    if (!assign(dom_.bot(), cod_.bot()) || !assign(dom_.top(), cod_.top()) ||
        !propagate()) {
      return;
    }
    for (std::size_t x = 0; x < c_.fixed.size(); ++x) {
      if (c_.fixed[x] && !assign(Elem(x), *c_.fixed[x])) return;
    }
    if (!propagate()) return;
    recurse(0);
  }

 private:
  bool allowed(Elem x, Elem y) const {
    if (x < c_.fixed.size() && c_.fixed[x] && *c_.fixed[x] != y) return false;
    if (x < c_.allowed.size() && !c_.allowed[x].empty()) {
      const auto& v = c_.allowed[x];
      if (!std::binary_search(v.begin(), v.end(), y)) return false;
    }
    return true;
  }

  bool assign(Elem x, Elem y) {
    if (m_[x] >= 0) return m_[x] == y;
    if (!allowed(x, y)) return false;
    if (c_.injective && used_[y]) return false;
    m_[x] = y;
    ++used_[y];
    trail_.push_back(x);
    queue_.push_back(x);
    return true;
  }

  bool propagate() {
    const std::size_t n = dom_.size();
    const std::size_t k = cod_.size();
    while (!queue_.empty()) {
      Elem x = queue_.back();
      queue_.pop_back();
      const Elem mx = Elem(m_[x]);
      for (std::size_t t = 0; t < du_.size(); ++t) {
        if (!assign((*du_[t])[x], (*cu_[t])[mx])) {
          queue_.clear();
          return false;
        }
      }
      for (std::size_t i = 0; i < trail_.size(); ++i) {
        Elem y = trail_[i];
        Elem my = Elem(m_[y]);
        for (std::size_t t = 0; t < db_.size(); ++t) {
          const auto& dt = *db_[t];
          const auto& ct = *cb_[t];
          if (!assign(dt[x * n + y], ct[mx * k + my]) ||
              !assign(dt[y * n + x], ct[my * k + mx])) {
            queue_.clear();
            return false;
          }
        }
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      Elem x = trail_.back();
      trail_.pop_back();
      --used_[m_[x]];
      m_[x] = -1;
    }
  }

  bool recurse(std::size_t gi) {
    while (gi < gens_.size() && m_[gens_[gi]] >= 0) ++gi;
    if (gi == gens_.size()) return leaf();
    const Elem x = gens_[gi];
    const std::size_t mark = trail_.size();
    auto try_value = [&](Elem y) {
      bool keep_going = true;
      if (assign(x, y) && propagate()) keep_going = recurse(gi + 1);
      undo(mark);
      return keep_going;
    };
    if (x < c_.allowed.size() && !c_.allowed[x].empty()) {
      for (Elem y : c_.allowed[x]) {
        if (!try_value(y)) return false;
      }
    } else {
      for (std::size_t y = 0; y < cod_.size(); ++y) {
        if (!try_value(Elem(y))) return false;
      }
    }
    return true;
  }

  bool leaf() {
    out_.resize(dom_.size());
    for (std::size_t x = 0; x < dom_.size(); ++x) {
      if (m_[x] < 0) {
        throw Error("hom search: generators do not generate the domain");
      }
      out_[x] = Elem(m_[x]);
    }
    if (c_.onto) {
      for (std::size_t y = 0; y < cod_.size(); ++y) {
        if (!used_[y]) return true;
      }
    }
    return (*visit_)(out_);
  }

  const FiniteAlgebra& dom_;
  const FiniteAlgebra& cod_;
  const HomConstraints& c_;
  std::vector<const std::vector<Elem>*> db_, cb_, du_, cu_;
  std::vector<int> m_;
  std::vector<std::uint32_t> used_;
  std::vector<Elem> trail_;
  std::vector<Elem> queue_;
  std::vector<Elem> gens_;
  std::vector<Elem> out_;
  const std::function<bool(std::span<const Elem>)>* visit_ = nullptr;
};

}  // namespace

void for_each_hom(const FiniteAlgebra& dom, const FiniteAlgebra& cod,
                  const HomConstraints& constraints,
                  const std::function<bool(std::span<const Elem>)>& visit) {
  require_same_signature(dom, cod);
  if (constraints.onto && cod.size() > dom.size()) return;
  if (constraints.injective && dom.size() > cod.size()) return;
  std::vector<Elem> gens = constraints.generators;
  if (gens.empty()) gens = small_generating_set(dom);
  HomSearch search(dom, cod, constraints);
  search.run(gens, visit);
}

std::optional<std::vector<Elem>> find_hom(const FiniteAlgebra& dom,
                                          const FiniteAlgebra& cod,
                                          const HomConstraints& constraints) {
  std::optional<std::vector<Elem>> found;
  for_each_hom(dom, cod, constraints, [&](std::span<const Elem> m) {
    found.emplace(m.begin(), m.end());
    return false;
  });
  return found;
}

std::vector<Homomorphism> enumerate_homs(const AlgebraPtr& dom,
                                         const AlgebraPtr& cod,
                                         bool onto_only) {
  HomConstraints c;
  c.onto = onto_only;
  std::vector<std::vector<Elem>> maps;
  for_each_hom(*dom, *cod, c, [&](std::span<const Elem> m) {
    maps.emplace_back(m.begin(), m.end());
    return true;
  });
  std::sort(maps.begin(), maps.end());
  std::vector<Homomorphism> out;
  out.reserve(maps.size());
  for (auto& m : maps) out.push_back({dom, cod, std::move(m)});
  return out;
}

std::vector<std::vector<Elem>> enumerate_homs_naive(const FiniteAlgebra& dom,
                                                    const FiniteAlgebra& cod,
                                                    bool onto_only) {
  require_same_signature(dom, cod);
  const std::size_t n = dom.size();
  const std::size_t k = cod.size();
  double total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= double(k);
  if (total > 5e7) throw BudgetExceeded("naive hom enumeration", total, 5e7);
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> m(n, 0);
  while (true) {
    if (check_homomorphism(dom, cod, m).empty()) {
      bool ok = true;
      if (onto_only) {
        std::vector<char> seen(k, 0);
        for (Elem y : m) seen[y] = 1;
        ok = std::all_of(seen.begin(), seen.end(), [](char s) { return s; });
      }
      if (ok) out.push_back(m);
    }
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++m[i] < k) break;
      m[i] = 0;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

std::optional<Homomorphism> is_isomorphic(const AlgebraPtr& a,
                                          const AlgebraPtr& b) {
  require_same_signature(*a, *b);
  if (a->size() != b->size()) return std::nullopt;
  HomConstraints c;
  c.injective = true;
  auto m = find_hom(*a, *b, c);
  if (!m) return std::nullopt;
  return Homomorphism{a, b, std::move(*m)};
}

std::vector<Homomorphism> automorphisms(const AlgebraPtr& a) {
  HomConstraints c;
  c.injective = true;
  std::vector<std::vector<Elem>> maps;
  for_each_hom(*a, *a, c, [&](std::span<const Elem> m) {
    maps.emplace_back(m.begin(), m.end());
    return true;
  });
  std::sort(maps.begin(), maps.end());
  std::vector<Homomorphism> out;
  for (auto& m : maps) out.push_back({a, a, std::move(m)});
  return out;
}

std::vector<Elem> closure(const FiniteAlgebra& a, std::span<const Elem> seeds) {
  const std::size_t n = a.size();
  std::vector<char> in(n, 0);
  std::vector<Elem> list;
  auto add = [&](Elem x) {
    if (!in[x]) {
      in[x] = 1;
      list.push_back(x);
    }
  };
  add(a.bot());
  add(a.top());
  for (Elem s : seeds) add(s);
  const auto bin = a.binary_tables();
  const auto un = a.unary_tables();
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Elem x = list[i];
    for (const auto* t : un) add((*t)[x]);
    for (std::size_t j = 0; j <= i; ++j) {
      const Elem y = list[j];
      for (const auto* t : bin) {
        add((*t)[x * n + y]);
        add((*t)[y * n + x]);
      }
    }
  }
  std::sort(list.begin(), list.end());
  return list;
}

std::vector<Elem> small_generating_set(const FiniteAlgebra& a) {
  const std::size_t n = a.size();
  std::vector<Elem> gens;
  std::vector<Elem> current = closure(a, gens);
  while (current.size() < n) {
    std::vector<char> in(n, 0);
    for (Elem x : current) in[x] = 1;
    Elem best = 0;
    std::size_t best_size = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (in[x]) continue;
      if (n > 256) {
        best = Elem(x);
        break;
      }
      auto trial = gens;
      trial.push_back(Elem(x));
      std::size_t s = closure(a, trial).size();
      if (s > best_size) {
        best_size = s;
        best = Elem(x);
      }
    }
    gens.push_back(best);
    current = closure(a, gens);
  }
  return gens;
}

std::vector<Elem> minimal_generating_set(const FiniteAlgebra& a,
                                         std::size_t max_checks) {
  const std::size_t n = a.size();
  auto greedy = small_generating_set(a);
  std::size_t checks = 0;
  for (std::size_t r = 0; r < greedy.size(); ++r) {
    std::vector<Elem> pick(r);
    std::iota(pick.begin(), pick.end(), Elem{0});
    while (true) {
      if (++checks > max_checks) return greedy;
      if (closure(a, pick).size() == n) return pick;
      // next combination in lexicographic order
      std::size_t i = r;
      while (i > 0 && pick[i - 1] == n - r + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < r; ++j) pick[j] = Elem(pick[j - 1] + 1);
    }
  }
  return greedy;
}

Embedded subalgebra_on(const AlgebraPtr& a, std::vector<Elem> subset) {
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  const std::size_t n = a->size();
  const std::size_t k = subset.size();
  std::vector<int> index(n, -1);
  for (std::size_t i = 0; i < k; ++i) index[subset[i]] = int(i);
  auto at = [&](Elem x) {
    if (index[x] < 0) throw StructuralError("subset is not closed");
    return Elem(index[x]);
  };
  OperationTables t;
  auto bin = [&](const std::vector<Elem>& src, std::vector<Elem>& dst) {
    if (src.empty()) return;
    dst.resize(k * k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        dst[i * k + j] = at(src[subset[i] * n + subset[j]]);
      }
    }
  };
  auto un = [&](const std::vector<Elem>& src, std::vector<Elem>& dst) {
    if (src.empty()) return;
    dst.resize(k);
    for (std::size_t i = 0; i < k; ++i) dst[i] = at(src[subset[i]]);
  };
  const auto& s = a->tables();
  bin(s.join, t.join);
  bin(s.meet, t.meet);
  bin(s.imp, t.imp);
  un(s.compl_, t.compl_);
  un(s.g, t.g);
  std::vector<std::string> names;
  if (!a->names().empty()) {
    for (Elem x : subset) names.push_back(a->names()[x]);
  }
  auto sub = make_algebra(a->signature(), k, at(a->bot()), at(a->top()),
                          std::move(t), std::move(names));
  return {sub, Homomorphism{sub, a, subset}};
}

Embedded generated_subalgebra(const AlgebraPtr& a,
                              std::span<const Elem> seeds) {
  return subalgebra_on(a, closure(*a, seeds));
}

Embedded image(const Homomorphism& h) {
  std::vector<Elem> values(h.map.begin(), h.map.end());
  return subalgebra_on(h.cod, std::move(values));
}

Product product(std::span<const AlgebraPtr> factors) {
  if (factors.empty()) throw Error("product of an empty list");
  const Signature sig = factors[0]->signature();
  double total = 1;
  for (const auto& f : factors) {
    require_same_signature(*factors[0], *f);
    total *= double(f->size());
  }
  if (total > double(kMaxCarrier)) {
    throw BudgetExceeded("product", total, double(kMaxCarrier));
  }
  const std::size_t n = std::size_t(total);
  const std::size_t r = factors.size();
  // Mixed radix, first factor most significant.
  std::vector<std::size_t> stride(r, 1);
  for (std::size_t i = r - 1; i-- > 0;) {
    stride[i] = stride[i + 1] * factors[i + 1]->size();
  }
  std::vector<std::vector<Elem>> coords(n, std::vector<Elem>(r));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t i = 0; i < r; ++i) {
      coords[x][i] = Elem((x / stride[i]) % factors[i]->size());
    }
  }
  auto encode = [&](const auto& fn) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < r; ++i) idx += fn(i) * stride[i];
    return Elem(idx);
  };
  OperationTables t;
  auto bin = [&](auto op, std::vector<Elem>& dst) {
    dst.resize(n * n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        dst[x * n + y] = encode([&](std::size_t i) {
          return std::size_t(op(*factors[i], coords[x][i], coords[y][i]));
        });
      }
    }
  };
  auto un = [&](auto op, std::vector<Elem>& dst) {
    dst.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
      dst[x] = encode([&](std::size_t i) {
        return std::size_t(op(*factors[i], coords[x][i]));
      });
    }
  };
  bin([](const FiniteAlgebra& f, Elem x, Elem y) { return f.join(x, y); },
      t.join);
  bin([](const FiniteAlgebra& f, Elem x, Elem y) { return f.meet(x, y); },
      t.meet);
  if (has_imp(sig)) {
    bin([](const FiniteAlgebra& f, Elem x, Elem y) { return f.imp(x, y); },
        t.imp);
  }
  if (has_compl(sig)) {
    un([](const FiniteAlgebra& f, Elem x) { return f.compl_(x); }, t.compl_);
  }
  if (has_g(sig)) {
    un([](const FiniteAlgebra& f, Elem x) { return f.g(x); }, t.g);
  }
  Elem bot = encode([&](std::size_t i) { return std::size_t(factors[i]->bot()); });
  Elem top = encode([&](std::size_t i) { return std::size_t(factors[i]->top()); });
  auto alg = make_algebra(sig, n, bot, top, std::move(t));
  std::vector<Homomorphism> projections;
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Elem> map(n);
    for (std::size_t x = 0; x < n; ++x) map[x] = coords[x][i];
    projections.push_back({alg, factors[i], std::move(map)});
  }
  return {alg, std::move(projections)};
}

std::size_t Congruence::num_classes() const {
  std::size_t m = 0;
  for (auto c : class_of) m = std::max(m, c + 1);
  return m;
}

namespace {

std::vector<std::size_t> normalize_classes(std::span<const std::size_t> raw) {
  std::vector<std::size_t> renum(raw.size() + 1, SIZE_MAX);
  std::vector<std::size_t> out(raw.size());
  std::size_t next = 0;
  for (std::size_t x = 0; x < raw.size(); ++x) {
    auto& r = renum[raw[x]];
    if (r == SIZE_MAX) r = next++;
    out[x] = r;
  }
  return out;
}

}  // namespace

Congruence identity_congruence(const AlgebraPtr& a) {
  std::vector<std::size_t> c(a->size());
  std::iota(c.begin(), c.end(), std::size_t{0});
  return {a, std::move(c)};
}

Congruence congruence_generated(const AlgebraPtr& a,
                                std::span<const std::pair<Elem, Elem>> pairs) {
  const std::size_t n = a->size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<std::pair<Elem, Elem>> work;
  auto unite = [&](Elem x, Elem y) {
    auto rx = find(x), ry = find(y);
    if (rx == ry) return;
    if (rx < ry) std::swap(rx, ry);
    parent[rx] = ry;
    work.emplace_back(x, y);
  };
  for (auto [x, y] : pairs) unite(x, y);
  const auto bin = a->binary_tables();
  const auto un = a->unary_tables();
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    for (const auto* t : un) unite((*t)[x], (*t)[y]);
    for (std::size_t z = 0; z < n; ++z) {
      for (const auto* t : bin) {
        unite((*t)[x * n + z], (*t)[y * n + z]);
        unite((*t)[z * n + x], (*t)[z * n + y]);
      }
    }
  }
  std::vector<std::size_t> raw(n);
  for (std::size_t x = 0; x < n; ++x) raw[x] = find(x);
  return {a, normalize_classes(raw)};
}

Congruence kernel(const Homomorphism& h) {
  std::vector<std::size_t> raw(h.map.begin(), h.map.end());
  return {h.dom, normalize_classes(raw)};
}

bool is_compatible(const Congruence& c) {
  const auto& a = *c.algebra;
  const std::size_t n = a.size();
  if (c.class_of.size() != n) return false;
  std::vector<Elem> rep(c.num_classes(), 0);
  std::vector<char> seen(rep.size(), 0);
  for (std::size_t x = 0; x < n; ++x) {
    if (!seen[c.class_of[x]]) {
      seen[c.class_of[x]] = 1;
      rep[c.class_of[x]] = Elem(x);
    }
  }
  for (const auto* t : a.unary_tables()) {
    for (std::size_t x = 0; x < n; ++x) {
      if (c.class_of[(*t)[x]] != c.class_of[(*t)[rep[c.class_of[x]]]]) {
        return false;
      }
    }
  }
  for (const auto* t : a.binary_tables()) {
    for (std::size_t x = 0; x < n; ++x) {
      const Elem rx = rep[c.class_of[x]];
      for (std::size_t y = 0; y < n; ++y) {
        const Elem ry = rep[c.class_of[y]];
        if (c.class_of[(*t)[x * n + y]] != c.class_of[(*t)[rx * n + ry]]) {
          return false;
        }
      }
    }
  }
  return true;
}

Quotient quotient(const Congruence& c) {
  if (!is_compatible(c)) throw StructuralError("incompatible partition");
  const auto& a = *c.algebra;
  const std::size_t n = a.size();
  const std::size_t k = c.num_classes();
  std::vector<Elem> rep(k, 0);
  std::vector<char> seen(k, 0);
  for (std::size_t x = 0; x < n; ++x) {
    if (!seen[c.class_of[x]]) {
      seen[c.class_of[x]] = 1;
      rep[c.class_of[x]] = Elem(x);
    }
  }
  auto cls = [&](Elem x) { return Elem(c.class_of[x]); };
  OperationTables t;
  auto bin = [&](const std::vector<Elem>& src, std::vector<Elem>& dst) {
    if (src.empty()) return;
    dst.resize(k * k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        dst[i * k + j] = cls(src[rep[i] * n + rep[j]]);
      }
    }
  };
  auto un = [&](const std::vector<Elem>& src, std::vector<Elem>& dst) {
    if (src.empty()) return;
    dst.resize(k);
    for (std::size_t i = 0; i < k; ++i) dst[i] = cls(src[rep[i]]);
  };
  const auto& s = a.tables();
  bin(s.join, t.join);
  bin(s.meet, t.meet);
  bin(s.imp, t.imp);
  un(s.compl_, t.compl_);
  un(s.g, t.g);
  auto q = make_algebra(a.signature(), k, cls(a.bot()), cls(a.top()),
                        std::move(t));
  std::vector<Elem> map(n);
  for (std::size_t x = 0; x < n; ++x) map[x] = cls(Elem(x));
  return {q, Homomorphism{c.algebra, q, std::move(map)}};
}

AlgebraPtr chain(Signature sig, std::size_t n) {
  if (n == 0) throw Error("chain of length 0");
  if ((sig == Signature::Boolean || sig == Signature::Interior) && n > 2) {
    throw SignatureMismatch("chains longer than 2 are not Boolean");
  }
  OperationTables t;
  t.join.resize(n * n);
  t.meet.resize(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      t.join[x * n + y] = Elem(std::max(x, y));
      t.meet[x * n + y] = Elem(std::min(x, y));
    }
  }
  if (has_imp(sig)) {
    t.imp.resize(n * n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        t.imp[x * n + y] = Elem(x <= y ? n - 1 : y);
      }
    }
  }
  if (has_compl(sig)) {
    t.compl_.resize(n);
    for (std::size_t x = 0; x < n; ++x) t.compl_[x] = Elem(n - 1 - x);
  }
  if (has_g(sig)) {
    t.g.resize(n);
    std::iota(t.g.begin(), t.g.end(), Elem{0});
  }
  std::vector<std::string> names;
  names.push_back("0");
  for (std::size_t i = 1; i + 1 < n; ++i) {
    names.push_back(n == 3 ? std::string("a") : "a" + std::to_string(i));
  }
  if (n > 1) names.push_back("1");
  return make_algebra(sig, n, Elem{0}, Elem(n - 1), std::move(t),
                      std::move(names));
}

AlgebraPtr two_element(Signature sig) { return chain(sig, 2); }

AlgebraPtr trivial_algebra(Signature sig) { return chain(sig, 1); }

AlgebraPtr with_entry(const FiniteAlgebra& a, TableName table,
                      std::size_t index, Elem value) {
  OperationTables t = a.tables();
  std::vector<Elem>* target = nullptr;
  switch (table) {
    case TableName::Join: target = &t.join; break;
    case TableName::Meet: target = &t.meet; break;
    case TableName::Imp: target = &t.imp; break;
    case TableName::Compl: target = &t.compl_; break;
    case TableName::G: target = &t.g; break;
  }
  if (index >= target->size()) throw Error("table index out of range");
  (*target)[index] = value;
  return make_algebra(a.signature(), a.size(), a.bot(), a.top(), std::move(t),
                      a.names());
}

}  // namespace wb
