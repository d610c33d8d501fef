#include <catch_amalgamated.hpp>

#include "wb/functors.hpp"
#include "wb/order.hpp"
#include "wb/variety.hpp"

using namespace wb;

TEST_CASE("opens of the two-element interior algebra form chain2") {
  const auto o = open_algebra(two_element(Signature::Interior));
  CHECK(o.heyting->signature() == Signature::Heyting);
  CHECK(is_isomorphic(o.heyting, chain(Signature::Heyting, 2)));
}

TEST_CASE("opens of a preorder dual are the up-set algebra") {
  for (const auto& q : enumerate_preorders(3)) {
    const auto o = open_algebra(interior_dual(q));
    CHECK(validate(*o.heyting).empty());
    if (q.is_antisymmetric()) CHECK(is_isomorphic(o.heyting, heyting_dual(q)));
  }
}

TEST_CASE("free Boolean extension of chain3") {
  const auto b = boolean_extension(chain(Signature::Heyting, 3));
  REQUIRE(b.extension->size() == 4);
  CHECK(validate(*b.extension).empty());
  CHECK(b.join_irreducibles == std::vector<Elem>{1, 2});
  // Opens are the down-closed sets {}, {a}, {a,1}; the singleton {1} has
  // empty interior.
  CHECK(b.eta == std::vector<Elem>{0, 1, 3});
  CHECK(b.extension->g(1) == 1);
  CHECK(b.extension->g(2) == b.extension->bot());
  CHECK(b.extension->g(3) == 3);
  CHECK(!check_g_against_implications(b));
}

TEST_CASE("the free Boolean algebra on one generator has four elements") {
  CHECK(free_algebra(variety_of(two_element(Signature::Boolean)), 1).algebra->size() == 4);
}

TEST_CASE("star of a poset dual is the algebra itself") {
  for (const auto& p : enumerate_posets(4)) {
    const auto a = interior_dual(p);
    const auto s = star_algebra(a);
    CHECK(s.star->size() == a->size());
    CHECK(is_star_algebra(a));
  }
}

TEST_CASE("star of the two-point cluster is two") {
  const auto a = interior_dual(cluster(2));
  const auto s = star_algebra(a);
  CHECK(s.star->size() == 2);
  CHECK(check_homomorphism(s.embedding).empty());
  CHECK(s.embedding.is_injective());
  CHECK_FALSE(is_star_algebra(a));
}

TEST_CASE("B(O(A)) is isomorphic to A* on preorders up to 3") {
  for (const auto& q : enumerate_preorders(3)) {
    const auto a = interior_dual(q);
    const auto o = open_algebra(a);
    const auto b = boolean_extension(o.heyting);
    const auto s = star_algebra(a);
    const auto iso = extension_to_star(o, b, s);
    CHECK(check_homomorphism(iso).empty());
    CHECK(iso.is_injective());
    CHECK(iso.is_surjective());
  }
}

TEST_CASE("B is a functor that extends the Heyting hom") {
  const auto ps = enumerate_posets(3);
  for (const auto& p : ps) {
    for (const auto& q : ps) {
      const auto l = heyting_dual(p);
      const auto m = heyting_dual(q);
      const auto bl = boolean_extension(l);
      const auto bm = boolean_extension(m);
      for (const auto& h : enumerate_homs(l, m, false)) {
        const auto bh = boolean_extension_hom(h, bl, bm);
        CHECK(check_homomorphism(bh).empty());
        for (std::size_t x = 0; x < l->size(); ++x) {
          CHECK(bh.map[bl.eta[x]] == bm.eta[h.map[x]]);
        }
      }
    }
  }
}

TEST_CASE("O of a hom agrees on open elements") {
  const auto qs = enumerate_preorders(2);
  for (const auto& p : qs) {
    for (const auto& q : qs) {
      const auto a = interior_dual(p);
      const auto b = interior_dual(q);
      const auto oa = open_algebra(a);
      const auto ob = open_algebra(b);
      for (const auto& h : enumerate_homs(a, b, false)) {
        const auto oh = open_hom(h, oa, ob);
        CHECK(check_homomorphism(oh).empty());
        for (std::size_t x = 0; x < oh.map.size(); ++x) {
          CHECK(ob.open_indices[oh.map[x]] == h.map[oa.open_indices[x]]);
        }
      }
    }
  }
}

TEST_CASE("extension through atoms realises the universal property") {
  const auto l = heyting_dual(antichain(2));
  const auto b = boolean_extension(l);
  const auto c = interior_dual(antichain(2));
  const auto oc = open_algebra(c);
  for (const auto& h : enumerate_homs(l, oc.heyting, false)) {
    std::vector<Elem> into(h.map.size());
    for (std::size_t x = 0; x < into.size(); ++x) into[x] = oc.open_indices[h.map[x]];
    const auto ext = extend_through_atoms(b, *c, into);
    CHECK(check_homomorphism(*b.extension, *c, ext).empty());
    for (std::size_t x = 0; x < into.size(); ++x) CHECK(ext[b.eta[x]] == into[x]);
  }
}
