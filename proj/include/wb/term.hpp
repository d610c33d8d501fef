#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wb/algebra.hpp"
#include "wb/frames.hpp"

namespace wb {

// Immutable term DAG over the signature operations; variables are x1, x2, ...
// (index 0 prints as x1).
class Term {
 public:
  enum class Op { Var, Bot, Top, Join, Meet, Imp, Compl, G };

  static Term var(unsigned index);
  static Term bot();
  static Term top();

  Op op() const;
  unsigned var_index() const;
  const Term& left() const;
  const Term& right() const;

  // One more than the largest variable index, 0 for closed terms.
  unsigned num_vars() const;
  bool fits(Signature sig) const;
  std::string to_string() const;
  const void* id() const { return node_.get(); }

  friend Term join(const Term& a, const Term& b);
  friend Term meet(const Term& a, const Term& b);
  friend Term imp(const Term& a, const Term& b);
  friend Term compl_(const Term& a);
  friend Term g(const Term& a);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Term make(Op op, unsigned index, const Term* l, const Term* r);
  std::shared_ptr<const Node> node_;
};

Term join(const Term& a, const Term& b);
Term meet(const Term& a, const Term& b);
Term imp(const Term& a, const Term& b);
Term compl_(const Term& a);
Term g(const Term& a);
// Closure dual c(y) = -g(-y).
Term closure_of(const Term& a);
Term join_all(std::span<const Term> terms);  // bot when empty
Term meet_all(std::span<const Term> terms);  // top when empty

using Equation = std::pair<Term, Term>;

Elem evaluate(const Term& t, const FiniteAlgebra& a,
              std::span<const Elem> assignment);

// Truth set of t in a colored frame. Heyting implication is read
// intuitionistically, g as the box of the preorder.
PointSet evaluate(const Term& t, const Model& m);

// Replaces Heyting implication a -> b by g(-a + b) throughout.
Term to_interior(const Term& t);

}  // namespace wb
