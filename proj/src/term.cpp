#include "wb/term.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace wb {

struct Term::Node {
  Op op;
  unsigned index = 0;
  unsigned vars = 0;
  std::vector<Term> kids;
};

Term Term::make(Op op, unsigned index, const Term* l, const Term* r) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->index = index;
  if (op == Op::Var) n->vars = index + 1;
  for (const Term* k : {l, r}) {
    if (!k) continue;
    n->kids.push_back(*k);
    n->vars = std::max(n->vars, k->node_->vars);
  }
  return Term(std::move(n));
}

Term Term::var(unsigned index) { return make(Op::Var, index, nullptr, nullptr); }
Term Term::bot() { return make(Op::Bot, 0, nullptr, nullptr); }
Term Term::top() { return make(Op::Top, 0, nullptr, nullptr); }

Term::Op Term::op() const { return node_->op; }
unsigned Term::var_index() const { return node_->index; }
unsigned Term::num_vars() const { return node_->vars; }
const Term& Term::left() const { return node_->kids.at(0); }
const Term& Term::right() const { return node_->kids.at(1); }

Term join(const Term& a, const Term& b) {
  return Term::make(Term::Op::Join, 0, &a, &b);
}
Term meet(const Term& a, const Term& b) {
  return Term::make(Term::Op::Meet, 0, &a, &b);
}
Term imp(const Term& a, const Term& b) {
  return Term::make(Term::Op::Imp, 0, &a, &b);
}
Term compl_(const Term& a) { return Term::make(Term::Op::Compl, 0, &a, nullptr); }
Term g(const Term& a) { return Term::make(Term::Op::G, 0, &a, nullptr); }

Term closure_of(const Term& a) { return compl_(g(compl_(a))); }

Term join_all(std::span<const Term> terms) {
  if (terms.empty()) return Term::bot();
  Term t = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) t = join(t, terms[i]);
  return t;
}

Term meet_all(std::span<const Term> terms) {
  if (terms.empty()) return Term::top();
  Term t = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) t = meet(t, terms[i]);
  return t;
}

bool Term::fits(Signature sig) const {
  switch (op()) {
    case Op::Var:
    case Op::Bot:
    case Op::Top:
      return true;
    case Op::Join:
    case Op::Meet:
      return left().fits(sig) && right().fits(sig);
    case Op::Imp:
      return has_imp(sig) && left().fits(sig) && right().fits(sig);
    case Op::Compl:
      return has_compl(sig) && left().fits(sig);
    case Op::G:
      return has_g(sig) && left().fits(sig);
  }
  return false;
}

std::string Term::to_string() const {
  switch (op()) {
    case Op::Var: return "x" + std::to_string(var_index() + 1);
    case Op::Bot: return "0";
    case Op::Top: return "1";
    case Op::Join: return "(" + left().to_string() + " + " + right().to_string() + ")";
    case Op::Meet: return "(" + left().to_string() + " . " + right().to_string() + ")";
    case Op::Imp: return "(" + left().to_string() + " -> " + right().to_string() + ")";
    case Op::Compl: return "-" + left().to_string();
    case Op::G: return "g(" + left().to_string() + ")";
  }
  return "?";
}

Elem evaluate(const Term& t, const FiniteAlgebra& a,
              std::span<const Elem> assignment) {
  std::unordered_map<const void*, Elem> memo;
  std::function<Elem(const Term&)> go = [&](const Term& s) -> Elem {
    auto it = memo.find(s.id());
    if (it != memo.end()) return it->second;
    Elem v = 0;
    switch (s.op()) {
      case Term::Op::Var:
        if (s.var_index() >= assignment.size()) {
          throw Error("term variable without assignment");
        }
        v = assignment[s.var_index()];
        break;
      case Term::Op::Bot: v = a.bot(); break;
      case Term::Op::Top: v = a.top(); break;
      case Term::Op::Join: v = a.join(go(s.left()), go(s.right())); break;
      case Term::Op::Meet: v = a.meet(go(s.left()), go(s.right())); break;
      case Term::Op::Imp:
        if (!has_imp(a.signature())) throw SignatureMismatch("imp in term");
        v = a.imp(go(s.left()), go(s.right()));
        break;
      case Term::Op::Compl:
        if (!has_compl(a.signature())) throw SignatureMismatch("compl in term");
        v = a.compl_(go(s.left()));
        break;
      case Term::Op::G:
        if (!has_g(a.signature())) throw SignatureMismatch("g in term");
        v = a.g(go(s.left()));
        break;
    }
    memo.emplace(s.id(), v);
    return v;
  };
  return go(t);
}

PointSet evaluate(const Term& t, const Model& m) {
  const std::size_t n = m.frame.size();
  std::vector<PointSet> ups;
  ups.reserve(n);
  for (std::size_t w = 0; w < n; ++w) ups.push_back(up_set(m.frame, w));
  std::unordered_map<const void*, PointSet> memo;
  std::function<PointSet(const Term&)> go = [&](const Term& s) -> PointSet {
    auto it = memo.find(s.id());
    if (it != memo.end()) return it->second;
    PointSet v(n);
    switch (s.op()) {
      case Term::Op::Var:
        for (std::size_t w = 0; w < n; ++w) {
          if (m.color[w] >> s.var_index() & 1) v.set(w);
        }
        break;
      case Term::Op::Bot: break;
      case Term::Op::Top: v.set(); break;
      case Term::Op::Join: v = go(s.left()) | go(s.right()); break;
      case Term::Op::Meet: v = go(s.left()) & go(s.right()); break;
      case Term::Op::Imp:
        v = box(m.frame, ups, ~go(s.left()) | go(s.right()));
        break;
      case Term::Op::Compl: v = ~go(s.left()); break;
      case Term::Op::G: v = box(m.frame, ups, go(s.left())); break;
    }
    memo.emplace(s.id(), v);
    return v;
  };
  return go(t);
}

Term to_interior(const Term& t) {
  std::unordered_map<const void*, Term> memo;
  std::function<Term(const Term&)> go = [&](const Term& s) -> Term {
    auto it = memo.find(s.id());
    if (it != memo.end()) return it->second;
    Term v = s;
    switch (s.op()) {
      case Term::Op::Var:
      case Term::Op::Bot:
      case Term::Op::Top:
        break;
      case Term::Op::Join: v = join(go(s.left()), go(s.right())); break;
      case Term::Op::Meet: v = meet(go(s.left()), go(s.right())); break;
      case Term::Op::Imp: v = g(join(compl_(go(s.left())), go(s.right()))); break;
      case Term::Op::Compl: v = compl_(go(s.left())); break;
      case Term::Op::G: v = g(go(s.left())); break;
    }
    memo.emplace(s.id(), v);
    return v;
  };
  return go(t);
}

}  // namespace wb
