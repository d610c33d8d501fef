#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wb/algebra.hpp"
#include "wb/frames.hpp"
#include "wb/term.hpp"

namespace wb {

inline constexpr std::size_t kDefaultBudget = 20000;

// WB_BUDGET from the environment, else the default.
std::size_t configured_budget();

struct VarietySpec {
  std::vector<AlgebraPtr> generators;

  Signature signature() const;
  void require_valid() const;
};

VarietySpec variety_of(AlgebraPtr generator);

struct FreeAlgebra {
  AlgebraPtr algebra;
  std::vector<Elem> generators;
  std::vector<Term> terms;  // a term naming each element
};

// Upper bound on |F(k)|: the product over generators M of |M|^(|M|^k).
double free_algebra_bound(const VarietySpec& v, unsigned k);

FreeAlgebra free_algebra(const VarietySpec& v, unsigned k,
                         std::size_t budget = configured_budget());

struct Presentation {
  VarietySpec variety;
  unsigned k = 0;
  std::vector<Equation> relations;
};

enum class Route { Auto, Table, Dual };
std::string_view route_name(Route r);

struct Presented {
  AlgebraPtr algebra;
  std::vector<Elem> generator_images;
  // Quotient map from the free algebra (table route only).
  std::optional<Homomorphism> canonical;
};

Presented present(const Presentation& p, Route route = Route::Auto,
                  std::size_t budget = configured_budget());

struct Satisfaction {
  bool holds = true;
  std::vector<Elem> witness;  // lexicographically least failing assignment
};

Satisfaction satisfies(const FiniteAlgebra& a, const Equation& identity);

// g(x + c(x . -g(x))) <= x with c(y) = -g(-y), as an equation.
Equation grz_identity();
// g(x + g(x . -g(x))) <= x, the form as printed.
Equation grz_identity_literal();
bool grz_check(const FiniteAlgebra& a);
bool grz_literal_check(const FiniteAlgebra& a);

enum class Verdict { False, True, Unknown };
std::string_view verdict_name(Verdict v);

struct ProjectivityResult {
  Verdict verdict = Verdict::Unknown;
  Route route = Route::Auto;
  bool member = true;
  unsigned generators = 0;
  std::vector<Elem> generating_set;
  // Table route: section a -> F(m).
  std::vector<Elem> section;
  // Dual route: retraction of the universal frame onto the dual of a, as
  // universal point -> dual point of a.
  std::vector<std::size_t> retraction;
  std::string note;
};

// Caches free algebras and universal models of one variety. Not thread-safe;
// use one per worker.
class VarietyContext {
 public:
  explicit VarietyContext(VarietySpec v,
                          std::size_t budget = configured_budget());

  const VarietySpec& spec() const noexcept { return spec_; }
  Signature signature() const { return spec_.signature(); }
  std::size_t budget() const noexcept { return budget_; }
  bool dualizable() const;

  const FreeAlgebra& free(unsigned k);
  bool free_fits(unsigned k) const;
  const UniversalModel& universal(unsigned k);
  const std::vector<Preorder>& generator_frames();

  bool member(const AlgebraPtr& a, Route route = Route::Auto);
  ProjectivityResult projective(const AlgebraPtr& a, Route route = Route::Auto);

 private:
  Route pick(unsigned k, Route route) const;
  bool member_table(const AlgebraPtr& a, const std::vector<Elem>& gens);
  bool member_dual(const AlgebraPtr& a, const std::vector<Elem>& gens,
                   std::vector<std::size_t>* where);

  VarietySpec spec_;
  std::size_t budget_;
  std::map<unsigned, FreeAlgebra> free_;
  std::map<unsigned, UniversalModel> universal_;
  std::optional<std::vector<Preorder>> frames_;
};

bool member(const AlgebraPtr& a, const VarietySpec& v,
            Route route = Route::Auto);
ProjectivityResult is_projective(const AlgebraPtr& a, const VarietySpec& v,
                                 Route route = Route::Auto);

// Colored dual frame of a under the given generating tuple.
Model colored_dual(const FiniteAlgebra& a, const std::vector<Elem>& gens);

}  // namespace wb
