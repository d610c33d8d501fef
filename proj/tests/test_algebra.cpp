#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "wb/algebra.hpp"
#include "wb/order.hpp"

using namespace wb;

namespace {

std::vector<std::vector<Elem>> sorted_maps(const std::vector<Homomorphism>& hs) {
  std::vector<std::vector<Elem>> out;
  for (const auto& h : hs) out.push_back(h.map);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("chains validate in every signature that admits them") {
  for (std::size_t n = 1; n <= 5; ++n) {
    CHECK(validate(*chain(Signature::BoundedLattice, n)).empty());
    CHECK(validate(*chain(Signature::Heyting, n)).empty());
  }
  CHECK(validate(*two_element(Signature::Boolean)).empty());
  CHECK(validate(*two_element(Signature::Interior)).empty());
  CHECK(validate(*trivial_algebra(Signature::Interior)).empty());
  CHECK_THROWS_AS(chain(Signature::Boolean, 3), SignatureMismatch);
}

TEST_CASE("g(top) = bot is a single axiom violation") {
  const auto a = two_element(Signature::Interior);
  const auto bad = with_entry(*a, TableName::G, a->top(), a->bot());
  const auto v = validate(*bad);
  REQUIRE(v.size() == 1);
  CHECK(v.front().kind == Violation::Kind::Axiom);
  CHECK_FALSE(has_structural_errors(v));
}

TEST_CASE("wrong table sizes are structural errors") {
  OperationTables t = chain(Signature::Heyting, 3)->tables();
  t.imp.pop_back();
  const FiniteAlgebra a(Signature::Heyting, 3, 0, 2, t);
  CHECK(has_structural_errors(validate(a)));
  CHECK_THROWS_AS(require_valid(a), StructuralError);
}

TEST_CASE("out-of-range entries are structural errors") {
  const auto c = chain(Signature::Heyting, 3);
  const auto bad = with_entry(*c, TableName::Join, 1, 7);
  CHECK(has_structural_errors(validate(*bad)));
}

TEST_CASE("a broken Heyting implication violates residuation") {
  const auto c = chain(Signature::Heyting, 3);
  const auto bad = with_entry(*c, TableName::Imp, 2 * 3 + 1, 2);
  const auto v = validate(*bad);
  REQUIRE_FALSE(v.empty());
  CHECK_FALSE(has_structural_errors(v));
}

TEST_CASE("homomorphism counts between small chains") {
  const auto c2 = chain(Signature::Heyting, 2);
  const auto c3 = chain(Signature::Heyting, 3);
  CHECK(enumerate_homs(c3, c2, false).size() == 1);
  CHECK(enumerate_homs(c3, c3, false).size() == 2);
  CHECK(enumerate_homs(c2, c3, false).size() == 1);
  CHECK(enumerate_homs(c3, c3, true).size() == 1);
}

TEST_CASE("backtracking hom search agrees with the naive enumeration") {
  std::vector<AlgebraPtr> algebras;
  for (const auto& p : enumerate_posets(3)) algebras.push_back(heyting_dual(p));
  for (const auto& q : enumerate_preorders(2)) algebras.push_back(interior_dual(q));
  for (const auto& a : algebras) {
    for (const auto& b : algebras) {
      if (a->signature() != b->signature()) continue;
      if (std::pow(double(b->size()), double(a->size())) > 2e5) continue;
      for (bool onto : {false, true}) {
        auto naive = enumerate_homs_naive(*a, *b, onto);
        std::sort(naive.begin(), naive.end());
        CHECK(sorted_maps(enumerate_homs(a, b, onto)) == naive);
      }
    }
  }
}

TEST_CASE("every enumerated hom passes the hom check") {
  const auto a = interior_dual(chain_order(2));
  const auto b = interior_dual(antichain(2));
  for (const auto& h : enumerate_homs(a, b, false)) {
    CHECK(check_homomorphism(h).empty());
  }
}

TEST_CASE("hom constraints restrict the search") {
  const auto c3 = chain(Signature::Heyting, 3);
  HomConstraints hc;
  hc.fixed.assign(3, std::nullopt);
  hc.fixed[1] = Elem(1);
  const auto h = find_hom(*c3, *c3, hc);
  REQUIRE(h);
  CHECK(*h == std::vector<Elem>{0, 1, 2});
  hc.fixed[1] = Elem(0);
  CHECK_FALSE(find_hom(*c3, *c3, hc));
  HomConstraints inj;
  inj.injective = true;
  CHECK_FALSE(find_hom(*c3, *chain(Signature::Heyting, 2), inj));
}

TEST_CASE("isomorphism is detected up to relabelling") {
  const auto a = heyting_dual(chain_order(2));
  CHECK(is_isomorphic(a, chain(Signature::Heyting, 3)));
  CHECK_FALSE(is_isomorphic(a, chain(Signature::Heyting, 4)));
  CHECK(automorphisms(heyting_dual(antichain(2))).size() == 2);
}

TEST_CASE("composition and identity") {
  const auto c3 = chain(Signature::Heyting, 3);
  const auto homs = enumerate_homs(c3, c3, false);
  for (const auto& h : homs) {
    CHECK(compose(identity_hom(c3), h).map == h.map);
    CHECK(compose(h, identity_hom(c3)).map == h.map);
  }
}

TEST_CASE("congruence on the middle of chain3 gives chain2") {
  const auto c3 = chain(Signature::Heyting, 3);
  const std::vector<std::pair<Elem, Elem>> pairs{{1, 2}};
  const auto theta = congruence_generated(c3, pairs);
  CHECK(theta.num_classes() == 2);
  CHECK(is_compatible(theta));
  const auto q = quotient(theta);
  CHECK(validate(*q.algebra).empty());
  CHECK(is_isomorphic(q.algebra, chain(Signature::Heyting, 2)));
  CHECK(check_homomorphism(q.canonical).empty());
  CHECK(kernel(q.canonical).class_of == theta.class_of);
}

TEST_CASE("products have the right size and projections") {
  const std::vector<AlgebraPtr> f{chain(Signature::Heyting, 2),
                                  chain(Signature::Heyting, 3)};
  const auto p = product(f);
  CHECK(p.algebra->size() == 6);
  CHECK(validate(*p.algebra).empty());
  for (const auto& pr : p.projections) CHECK(check_homomorphism(pr).empty());
}

TEST_CASE("generated subalgebras are closed") {
  const auto a = interior_dual(antichain(3));
  const std::vector<Elem> seeds{1};
  const auto s = generated_subalgebra(a, seeds);
  CHECK(validate(*s.algebra).empty());
  CHECK(s.algebra->size() == 4);
  CHECK(closure(*a, minimal_generating_set(*a)).size() == a->size());
}

TEST_CASE("randomly mutated tables are caught by validate") {
  std::mt19937 rng(7);
  const auto base = interior_dual(chain_order(2));
  std::size_t caught = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t i = rng() % base->size();
    const Elem v = Elem(rng() % base->size());
    if (base->g(Elem(i)) == v) continue;
    const auto bad = with_entry(*base, TableName::G, i, v);
    caught += !validate(*bad).empty();
  }
  CHECK(caught > 0);
}
