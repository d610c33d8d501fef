#include <catch_amalgamated.hpp>

#include <cstdlib>

#include "wb/functors.hpp"
#include "wb/order.hpp"
#include "wb/variety.hpp"

using namespace wb;

namespace {

VarietySpec chain_variety(std::size_t n) {
  return variety_of(chain(Signature::Heyting, n));
}

std::vector<AlgebraPtr> heyting_corpus(std::size_t n) {
  std::vector<AlgebraPtr> out;
  for (const auto& p : enumerate_posets(n)) out.push_back(heyting_dual(p));
  return out;
}

std::vector<AlgebraPtr> interior_corpus(std::size_t n) {
  std::vector<AlgebraPtr> out;
  for (const auto& q : enumerate_preorders(n)) out.push_back(interior_dual(q));
  return out;
}

}  // namespace

TEST_CASE("free algebras over chain3") {
  const auto v = chain_variety(3);
  const auto f1 = free_algebra(v, 1);
  CHECK(f1.algebra->size() == 6);
  CHECK(validate(*f1.algebra).empty());
  CHECK(f1.generators.size() == 1);
  CHECK(free_algebra(v, 2).algebra->size() == 162);
}

TEST_CASE("free algebra on two generators over chain4 needs a raised budget") {
  const auto v = chain_variety(4);
  CHECK_THROWS_AS(free_algebra(v, 2), BudgetExceeded);
  CHECK(free_algebra(v, 2, 5000000000ull).algebra->size() == 342);
}

TEST_CASE("the budget can be overridden from the environment") {
  ::setenv("WB_BUDGET", "123", 1);
  CHECK(configured_budget() == 123);
  ::setenv("WB_BUDGET", "junk", 1);
  CHECK(configured_budget() == kDefaultBudget);
  ::unsetenv("WB_BUDGET");
  CHECK(configured_budget() == kDefaultBudget);
}

TEST_CASE("free generators name their terms") {
  const auto v = chain_variety(3);
  const auto f = free_algebra(v, 1);
  REQUIRE(f.terms.size() == f.algebra->size());
  // Each term evaluates to its element at the generator.
  for (std::size_t e = 0; e < f.terms.size(); ++e) {
    const std::vector<Elem> at{f.generators[0]};
    CHECK(evaluate(f.terms[e], *f.algebra, at) == e);
  }
}

TEST_CASE("presentations over chain3") {
  const auto v = chain_variety(3);
  const Term x = Term::var(0);
  Presentation top{v, 1, {{x, Term::top()}}};
  for (Route r : {Route::Table, Route::Dual}) {
    CHECK(is_isomorphic(present(top, r).algebra, chain(Signature::Heyting, 2)));
  }
  Presentation lem{v, 1, {{join(x, imp(x, Term::bot())), Term::top()}}};
  const auto t = present(lem, Route::Table).algebra;
  const auto d = present(lem, Route::Dual).algebra;
  CHECK(t->size() == 4);
  CHECK(is_isomorphic(t, d));
  Presentation none{v, 1, {}};
  CHECK(present(none, Route::Dual).algebra->size() == 6);
}

TEST_CASE("table and dual presentations agree on interior relations") {
  const auto v = variety_of(interior_dual(chain_order(2)));
  const Term x = Term::var(0);
  const std::vector<Equation> rels{{x, g(x)}, {g(x), Term::bot()}, {closure_of(x), x}};
  for (const auto& rel : rels) {
    Presentation p{v, 1, {rel}};
    CHECK(is_isomorphic(present(p, Route::Table).algebra, present(p, Route::Dual).algebra));
  }
}

TEST_CASE("Grz holds exactly on poset duals") {
  for (const auto& q : enumerate_preorders(3)) {
    CHECK(grz_check(*interior_dual(q)) == q.is_antisymmetric());
  }
}

TEST_CASE("the literal Grz form accepts the two-point cluster") {
  const auto m = interior_dual(cluster(2));
  CHECK_FALSE(grz_check(*m));
  CHECK(grz_literal_check(*m));
  const auto s = satisfies(*m, grz_identity());
  CHECK_FALSE(s.holds);
  CHECK(s.witness.size() == 1);
  CHECK(grz_check(*interior_dual(chain_order(1))));
  CHECK(grz_literal_check(*interior_dual(chain_order(1))));
}

TEST_CASE("membership by table and by duality agree") {
  std::vector<std::vector<AlgebraPtr>> corpora{heyting_corpus(3), interior_corpus(2)};
  std::size_t compared = 0;
  for (const auto& corpus : corpora) {
    for (const auto& g : corpus) {
      VarietyContext ctx(variety_of(g));
      for (const auto& b : corpus) {
        bool by_table = false;
        try {
          by_table = ctx.member(b, Route::Table);
        } catch (const BudgetExceeded&) {
          continue;
        }
        CHECK(by_table == ctx.member(b, Route::Dual));
        ++compared;
      }
    }
  }
  CHECK(compared > 20);
}

TEST_CASE("membership in the variety of chain3") {
  VarietyContext ctx(chain_variety(3));
  CHECK(ctx.member(chain(Signature::Heyting, 2)));
  CHECK(ctx.member(chain(Signature::Heyting, 3)));
  CHECK_FALSE(ctx.member(chain(Signature::Heyting, 4)));
  CHECK(ctx.member(heyting_dual(antichain(2))));
}

TEST_CASE("projectivity by table and by duality agree") {
  const auto hs = heyting_corpus(3);
  std::size_t compared = 0;
  for (const auto& g : hs) {
    VarietyContext ctx(variety_of(g));
    for (const auto& b : hs) {
      if (!ctx.member(b)) continue;
      try {
        const auto t = ctx.projective(b, Route::Table);
        const auto d = ctx.projective(b, Route::Dual);
        if (t.verdict == Verdict::Unknown || d.verdict == Verdict::Unknown) continue;
        CHECK(t.verdict == d.verdict);
        ++compared;
      } catch (const BudgetExceeded&) {
      }
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("two and free algebras are projective") {
  VarietyContext h(chain_variety(3));
  CHECK(h.projective(chain(Signature::Heyting, 2)).verdict == Verdict::True);
  CHECK(h.projective(h.free(1).algebra).verdict == Verdict::True);
  VarietyContext i(variety_of(interior_dual(chain_order(2))));
  CHECK(i.projective(two_element(Signature::Interior)).verdict == Verdict::True);
}

TEST_CASE("the simple monadic algebra is not projective") {
  const auto m = interior_dual(cluster(2));
  const auto r = is_projective(m, variety_of(m));
  CHECK(r.verdict == Verdict::False);
}

TEST_CASE("non-members are reported as such") {
  VarietyContext ctx(chain_variety(2));
  const auto r = ctx.projective(chain(Signature::Heyting, 3));
  CHECK_FALSE(r.member);
  CHECK(r.verdict == Verdict::False);
}
