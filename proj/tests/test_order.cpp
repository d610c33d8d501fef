#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "wb/frames.hpp"
#include "wb/order.hpp"

using namespace wb;

namespace {

// Brute force: all reflexive transitive relations on n labelled points,
// counted up to isomorphism with canonical codes.
std::size_t count_unlabelled(std::size_t n, bool posets) {
  std::set<std::vector<std::uint8_t>> codes;
  const std::size_t off = n * (n - 1);
  for (std::uint32_t bits = 0; bits < (1u << off); ++bits) {
    Preorder p(n);
    std::size_t b = 0;
    for (std::size_t i = 0; i < n; ++i) {
      p.set(i, i, true);
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) p.set(i, j, (bits >> b++) & 1);
      }
    }
    if (!p.is_transitive() || (posets && !p.is_antisymmetric())) continue;
    codes.insert(canonical_form(p).code);
  }
  return codes.size();
}

std::map<std::size_t, std::size_t> sizes(const std::vector<Preorder>& v) {
  std::map<std::size_t, std::size_t> m;
  for (const auto& p : v) ++m[p.size()];
  return m;
}

}  // namespace

TEST_CASE("poset counts up to isomorphism") {
  const auto m = sizes(enumerate_posets(5));
  CHECK(m == std::map<std::size_t, std::size_t>{{1, 1}, {2, 2}, {3, 5}, {4, 16}, {5, 63}});
}

TEST_CASE("preorder counts up to isomorphism") {
  const auto m = sizes(enumerate_preorders(4));
  CHECK(m == std::map<std::size_t, std::size_t>{{1, 1}, {2, 3}, {3, 9}, {4, 33}});
  CHECK(enumerate_preorders(2).size() == 4);
}

TEST_CASE("enumeration agrees with brute force over labelled relations") {
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(sizes(enumerate_posets(n))[n] == count_unlabelled(n, true));
    CHECK(sizes(enumerate_preorders(n))[n] == count_unlabelled(n, false));
  }
}

TEST_CASE("enumeration beyond the ceiling throws") {
  CHECK_THROWS_AS(enumerate_posets(6), CeilingExceeded);
  CHECK_THROWS_AS(enumerate_preorders(5), CeilingExceeded);
  CHECK(enumerate_posets(3, 3).size() == 8);
}

TEST_CASE("enumeration is ordered and free of duplicates") {
  const auto ps = enumerate_preorders(4);
  std::set<std::vector<std::uint8_t>> codes;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    CHECK(ps[i].is_valid());
    codes.insert(canonical_form(ps[i]).code);
    if (i) CHECK(ps[i - 1].size() <= ps[i].size());
  }
  CHECK(codes.size() == ps.size());
}

TEST_CASE("canonical form is invariant under relabelling") {
  for (const auto& p : enumerate_preorders(4)) {
    std::vector<std::size_t> perm(p.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = perm.size() - 1 - i;
    const auto q = permute(p, perm);
    const auto cf = canonical_form(p);
    CHECK(canonical_form(q).code == cf.code);
    CHECK(permute(p, cf.perm) == cf.order);
  }
}

TEST_CASE("poset duals are Heyting algebras of up-sets") {
  for (const auto& p : enumerate_posets(5)) {
    const auto a = heyting_dual(p);
    CHECK(validate(*a).empty());
    CHECK(a->size() == upset_masks(p).size());
  }
}

TEST_CASE("preorder duals are interior algebras on the powerset") {
  for (const auto& q : enumerate_preorders(4)) {
    const auto a = interior_dual(q);
    CHECK(validate(*a).empty());
    CHECK(a->size() == (std::size_t{1} << q.size()));
    std::size_t opens = 0;
    for (std::size_t x = 0; x < a->size(); ++x) opens += a->is_open(Elem(x));
    CHECK(opens == upset_masks(q).size());
  }
}

TEST_CASE("small duals have the expected shapes") {
  CHECK(is_isomorphic(heyting_dual(chain_order(2)), chain(Signature::Heyting, 3)));
  CHECK(heyting_dual(antichain(2))->size() == 4);
  const auto m4 = interior_dual(cluster(2));
  CHECK(m4->size() == 4);
  std::size_t opens = 0;
  for (std::size_t x = 0; x < 4; ++x) opens += m4->is_open(Elem(x));
  CHECK(opens == 2);
}

TEST_CASE("dual frames recover the generating frame") {
  for (const auto& p : enumerate_posets(4)) {
    const auto f = dual_frame(*heyting_dual(p));
    CHECK(canonical_form(f.frame).code == canonical_form(p).code);
  }
  for (const auto& q : enumerate_preorders(3)) {
    const auto f = dual_frame(*interior_dual(q));
    CHECK(canonical_form(f.frame).code == canonical_form(q).code);
  }
}

TEST_CASE("homs correspond to p-morphisms of the dual frames") {
  const auto ps = enumerate_posets(3);
  for (const auto& p : ps) {
    for (const auto& q : ps) {
      const auto a = heyting_dual(p);
      const auto b = heyting_dual(q);
      const auto fa = dual_frame(*a);
      const auto fb = dual_frame(*b);
      std::size_t pm = 0;
      std::vector<std::optional<std::size_t>> none(fb.frame.size());
      for_each_pmorphism(fb.frame, fa.frame, none, [&](auto f) {
        ++pm;
        const auto h = hom_from_dual_map(f, fa, fb);
        CHECK(check_homomorphism(*a, *b, h).empty());
        return true;
      });
      CHECK(pm == enumerate_homs(a, b, false).size());
    }
  }
}

TEST_CASE("the universal model is dual to the free algebra") {
  const std::vector<Preorder> frames{chain_order(2)};
  const auto u = universal_model(frames, 1, true);
  CHECK(u.model.frame.is_poset());
  // F(1) in the variety of chain3 has 6 elements.
  CHECK(upset_masks(u.model.frame).size() == 6);
  const Model part{chain_order(1), {1}};
  CHECK(embed_into(part, u.model));
}
