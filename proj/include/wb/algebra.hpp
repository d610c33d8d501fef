#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wb {

using Elem = std::uint16_t;

enum class Signature { BoundedLattice, Heyting, Boolean, Interior };

std::string_view signature_name(Signature sig);
std::optional<Signature> parse_signature(std::string_view name);
bool has_imp(Signature sig);
bool has_compl(Signature sig);
bool has_g(Signature sig);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StructuralError : public Error {
 public:
  using Error::Error;
};

class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, double required, double budget);
  double required() const noexcept { return required_; }
  double budget() const noexcept { return budget_; }

 private:
  double required_;
  double budget_;
};

class CeilingExceeded : public Error {
 public:
  using Error::Error;
};

// Row-major tables. Binary tables have size*size entries, unary ones size.
struct OperationTables {
  std::vector<Elem> join;
  std::vector<Elem> meet;
  std::vector<Elem> imp;
  std::vector<Elem> compl_;
  std::vector<Elem> g;

  bool operator==(const OperationTables&) const = default;
};

// Largest carrier we are willing to materialize as tables.
inline constexpr std::size_t kMaxCarrier = 8192;

class FiniteAlgebra {
 public:
  FiniteAlgebra(Signature sig, std::size_t size, Elem bot, Elem top,
                OperationTables ops, std::vector<std::string> names = {});

  Signature signature() const noexcept { return sig_; }
  std::size_t size() const noexcept { return n_; }
  Elem bot() const noexcept { return bot_; }
  Elem top() const noexcept { return top_; }

  Elem join(Elem x, Elem y) const { return ops_.join[x * n_ + y]; }
  Elem meet(Elem x, Elem y) const { return ops_.meet[x * n_ + y]; }
  Elem imp(Elem x, Elem y) const { return ops_.imp[x * n_ + y]; }
  Elem compl_(Elem x) const { return ops_.compl_[x]; }
  Elem g(Elem x) const { return ops_.g[x]; }
  bool leq(Elem x, Elem y) const { return meet(x, y) == x; }
  bool is_open(Elem x) const { return g(x) == x; }

  const OperationTables& tables() const noexcept { return ops_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::string label(Elem x) const;

  // Binary and unary tables present in this signature, in a fixed order.
  std::vector<const std::vector<Elem>*> binary_tables() const;
  std::vector<const std::vector<Elem>*> unary_tables() const;

  bool operator==(const FiniteAlgebra& other) const = default;

 private:
  Signature sig_;
  std::size_t n_;
  Elem bot_;
  Elem top_;
  OperationTables ops_;
  std::vector<std::string> names_;
};

using AlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

template <class... Args>
AlgebraPtr make_algebra(Args&&... args) {
  return std::make_shared<const FiniteAlgebra>(std::forward<Args>(args)...);
}

bool leq(const FiniteAlgebra& a, Elem x, Elem y);

struct Violation {
  enum class Kind { Structural, Axiom };
  Kind kind;
  std::string axiom;
  std::vector<Elem> witness;

  std::string describe() const;
};

std::vector<Violation> validate(const FiniteAlgebra& a);
bool has_structural_errors(const std::vector<Violation>& violations);
// Throws StructuralError describing the first violation, if any.
void require_valid(const FiniteAlgebra& a);

struct Homomorphism {
  AlgebraPtr dom;
  AlgebraPtr cod;
  std::vector<Elem> map;

  Elem operator()(Elem x) const { return map[x]; }
  bool is_injective() const;
  bool is_surjective() const;
};

// Operations the map fails to preserve, with witnesses. Empty means valid.
std::vector<std::string> check_homomorphism(const FiniteAlgebra& dom,
                                            const FiniteAlgebra& cod,
                                            std::span<const Elem> map);
std::vector<std::string> check_homomorphism(const Homomorphism& h);

Homomorphism identity_hom(const AlgebraPtr& a);
// second after first.
Homomorphism compose(const Homomorphism& second, const Homomorphism& first);

void require_same_signature(const FiniteAlgebra& a, const FiniteAlgebra& b);

struct HomConstraints {
  // Per domain element: a single forced image.
  std::vector<std::optional<Elem>> fixed;
  // Per domain element: allowed images (empty vector means unrestricted).
  std::vector<std::vector<Elem>> allowed;
  bool injective = false;
  bool onto = false;
  // Generating set of the domain to branch on; computed when empty.
  std::vector<Elem> generators;
};

// Calls visit for every homomorphism satisfying the constraints, in search
// order. visit returns false to stop.
void for_each_hom(const FiniteAlgebra& dom, const FiniteAlgebra& cod,
                  const HomConstraints& constraints,
                  const std::function<bool(std::span<const Elem>)>& visit);

std::optional<std::vector<Elem>> find_hom(const FiniteAlgebra& dom,
                                          const FiniteAlgebra& cod,
                                          const HomConstraints& constraints);

std::vector<Homomorphism> enumerate_homs(const AlgebraPtr& dom,
                                         const AlgebraPtr& cod,
                                         bool onto_only);

// Reference enumeration over all cod^dom maps; only for tiny algebras.
std::vector<std::vector<Elem>> enumerate_homs_naive(const FiniteAlgebra& dom,
                                                    const FiniteAlgebra& cod,
                                                    bool onto_only);

std::optional<Homomorphism> is_isomorphic(const AlgebraPtr& a,
                                          const AlgebraPtr& b);

std::vector<Homomorphism> automorphisms(const AlgebraPtr& a);

// Sorted carrier of the subalgebra generated by seeds.
std::vector<Elem> closure(const FiniteAlgebra& a, std::span<const Elem> seeds);

// Greedy: repeatedly add the element whose addition generates the most.
std::vector<Elem> small_generating_set(const FiniteAlgebra& a);
// Smallest seed set by size, lexicographic tie-break. Falls back to the
// greedy set when the exhaustive search would exceed max_checks closures.
std::vector<Elem> minimal_generating_set(const FiniteAlgebra& a,
                                         std::size_t max_checks = 200000);

struct Embedded {
  AlgebraPtr algebra;
  Homomorphism inclusion;
};

Embedded subalgebra_on(const AlgebraPtr& a, std::vector<Elem> subset);
Embedded generated_subalgebra(const AlgebraPtr& a, std::span<const Elem> seeds);
Embedded image(const Homomorphism& h);

struct Product {
  AlgebraPtr algebra;
  std::vector<Homomorphism> projections;
};

Product product(std::span<const AlgebraPtr> factors);

struct Congruence {
  AlgebraPtr algebra;
  // Class index per element; classes numbered by their least element.
  std::vector<std::size_t> class_of;

  std::size_t num_classes() const;
  bool related(Elem x, Elem y) const { return class_of[x] == class_of[y]; }
};

Congruence identity_congruence(const AlgebraPtr& a);
Congruence congruence_generated(const AlgebraPtr& a,
                                std::span<const std::pair<Elem, Elem>> pairs);
Congruence kernel(const Homomorphism& h);
bool is_compatible(const Congruence& c);

struct Quotient {
  AlgebraPtr algebra;
  Homomorphism canonical;
};

Quotient quotient(const Congruence& c);

// Small standard algebras.
AlgebraPtr chain(Signature sig, std::size_t n);
AlgebraPtr two_element(Signature sig);
AlgebraPtr trivial_algebra(Signature sig);

// Copy of a with one table entry replaced; used for fault injection.
enum class TableName { Join, Meet, Imp, Compl, G };
AlgebraPtr with_entry(const FiniteAlgebra& a, TableName table, std::size_t index,
                      Elem value);

}  // namespace wb
