#include <catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <set>

#include "wb/functors.hpp"
#include "wb/order.hpp"
#include "wb/unification.hpp"

using namespace wb;

namespace {

QuasiOrderedSet random_quasiorder(std::size_t n, std::mt19937& rng, double p) {
  std::bernoulli_distribution edge(p);
  QuasiOrderedSet q(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && edge(rng)) q.set(i, j, true);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (q.ge(i, k) && q.ge(k, j)) q.set(i, j, true);
      }
    }
  }
  return q;
}

bool dense_antichain(const QuasiOrderedSet& q, std::uint32_t mask) {
  const std::size_t n = q.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(mask >> i & 1)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && (mask >> j & 1) && (q.ge(i, j) || q.ge(j, i))) return false;
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    bool covered = false;
    for (std::size_t m = 0; m < n && !covered; ++m) {
      covered = (mask >> m & 1) && q.ge(m, x);
    }
    if (!covered) return false;
  }
  return true;
}

std::vector<std::size_t> members(std::uint32_t mask, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask >> i & 1) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("mu-sets agree with a brute-force search over subsets") {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    const double p = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const auto q = random_quasiorder(n, rng, p);
    REQUIRE(q.is_valid());
    std::set<std::size_t> sizes;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      const bool dense = dense_antichain(q, mask);
      CHECK(is_mu_set(q, members(mask, n)) == dense);
      if (dense) sizes.insert(std::size_t(std::popcount(mask)));
    }
    const auto mu = mu_set(q);
    REQUIRE(mu.has_value());
    CHECK(is_mu_set(q, *mu));
    CHECK(sizes == std::set<std::size_t>{mu->size()});
    CHECK(classify_type(q).mu_size == mu->size());
  }
}

TEST_CASE("mu-set size is invariant under relabelling") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    const auto q = random_quasiorder(n, rng, 0.3);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto r = q.permuted(perm);
    CHECK(r.is_valid());
    CHECK(mu_set(r)->size() == mu_set(q)->size());
    CHECK(theta_classes(r).count() == theta_classes(q).count());
  }
}

TEST_CASE("theta classes of a quasiorder") {
  QuasiOrderedSet q(3);
  q.set(0, 1, true);
  q.set(1, 0, true);
  q.set(0, 2, true);
  q.set(1, 2, true);
  const auto t = theta_classes(q);
  CHECK(t.count() == 2);
  CHECK(t.class_of[0] == t.class_of[1]);
  CHECK(t.le(t.class_of[2], t.class_of[0]));
  CHECK(*mu_set(q) == std::vector<std::size_t>{0});
  CHECK(classify_type(q).name() == "1");
  CHECK(classify_type(QuasiOrderedSet(3)).name() == "omega(3)");
  CHECK_THROWS_AS(classify_type(QuasiOrderedSet(0)), Error);
}

TEST_CASE("unifiability is an onto map to two") {
  CHECK(unifiable(chain(Signature::Heyting, 3)));
  CHECK(unifiable(interior_dual(chain_order(2))));
  CHECK_FALSE(unifiable(interior_dual(cluster(2))));
  CHECK_FALSE(unifiable(trivial_algebra(Signature::Heyting)));
}

TEST_CASE("bounded unifiers of chain3") {
  const auto c3 = chain(Signature::Heyting, 3);
  VarietyContext ctx(variety_of(c3));
  const auto us = unifier_search(c3, ctx, SearchBound{});
  CHECK(us.complete);
  REQUIRE_FALSE(us.unifiers.empty());
  CHECK(us.order.is_valid());
  for (std::size_t i = 0; i < us.unifiers.size(); ++i) {
    CHECK(us.order.ge(i, i));
    CHECK(check_homomorphism(us.unifiers[i].u).empty());
  }
  for (const auto& t : us.targets) {
    CHECK(ctx.projective(t.algebra).verdict == Verdict::True);
    CHECK(is_isomorphic(present(t.presentation, Route::Dual).algebra, t.algebra));
    CHECK(is_isomorphic(present(t.presentation, Route::Table).algebra, t.algebra));
  }
  std::set<std::string> keys;
  for (std::size_t i = 0; i < us.unifiers.size(); ++i) keys.insert(us.key(i));
  CHECK(keys.size() == us.unifiers.size());
  CHECK(classify_type(us.order).name() == "1");
}

TEST_CASE("the generality order is a quasiorder") {
  const auto a = heyting_dual(antichain(2));
  const auto us = unifier_search(a, variety_of(a), SearchBound{});
  CHECK(us.order.is_valid());
  std::vector<AlgebraPtr> ts;
  std::vector<std::vector<Elem>> maps;
  for (const auto& u : us.unifiers) {
    ts.push_back(us.targets[u.target].algebra);
    maps.push_back(u.u.map);
  }
  CHECK(generality_order(a, ts, maps).matrix() == us.order.matrix());
}

TEST_CASE("up-set terms carve out their up-sets") {
  VarietyContext ctx(variety_of(chain(Signature::Heyting, 3)));
  const auto& u = ctx.universal(1);
  for (const auto& pts : upsets_up_to(u.model.frame, 3)) {
    if (pts.empty()) continue;
    const Term t = upset_term(u.model, Signature::Heyting, 1, pts);
    const auto truth = evaluate(t, u.model);
    std::set<std::size_t> got;
    for (auto i = truth.find_first(); i != PointSet::npos; i = truth.find_next(i)) got.insert(i);
    CHECK(got == std::set<std::size_t>(pts.begin(), pts.end()));
  }
}

TEST_CASE("type verdicts") {
  const auto two = chain(Signature::Heyting, 2);
  VarietyContext h(variety_of(two));
  const auto v = algebra_type(two, h, SearchBound{});
  CHECK(v.kind == TypeVerdict::Kind::Final);
  CHECK(v.name() == "1");
  CHECK(v.mu.size() == 1);

  const auto m = interior_dual(cluster(2));
  VarietyContext i(variety_of(m));
  const auto n = algebra_type(m, i, SearchBound{});
  CHECK(n.kind == TypeVerdict::Kind::NotUnifiable);
  CHECK(n.name() == "not unifiable");
}

TEST_CASE("tau sends chain3 unifiers onto the bounded interior set") {
  const auto c3 = chain(Signature::Heyting, 3);
  VarietyContext h(variety_of(c3));
  const auto b = boolean_extension(c3);
  VarietyContext i(variety_of(b.extension));
  const auto us = unifier_search(c3, h, SearchBound{});
  const auto tr = tau(us, i);
  CHECK(tr.problems.empty());
  CHECK(tr.injective);
  CHECK(tr.order_preserving);
  const auto io = unifier_search(b.extension, i, SearchBound{}, GeneratorMode::Open);
  std::set<std::string> lhs;
  std::set<std::string> rhs;
  for (std::size_t k = 0; k < tr.image.unifiers.size(); ++k) lhs.insert(tr.image.key(k));
  for (std::size_t k = 0; k < io.unifiers.size(); ++k) rhs.insert(io.key(k));
  CHECK(lhs == rhs);
  CHECK(mu_set(us.order)->size() == mu_set(io.order)->size());
}

TEST_CASE("canonical targets are stable under isomorphism") {
  const auto a = interior_dual(chain_order(2));
  const auto ct = canonical_target(a);
  CHECK(check_homomorphism(ct.iso).empty());
  CHECK(ct.iso.is_injective());
  CHECK(ct.iso.is_surjective());
  const std::vector<std::size_t> swap{1, 0};
  const auto b = interior_dual(permute(chain_order(2), swap));
  CHECK(canonical_target(b).key == ct.key);
}

TEST_CASE("orbit representatives are least in their orbit") {
  const auto a = heyting_dual(antichain(2));
  const auto autos = automorphisms(a);
  for (const auto& h : enumerate_homs(a, a, false)) {
    const auto rep = orbit_representative(autos, h.map);
    for (const auto& s : autos) {
      std::vector<Elem> img(h.map.size());
      for (std::size_t x = 0; x < img.size(); ++x) img[x] = s.map[h.map[x]];
      CHECK(rep <= img);
      CHECK(orbit_representative(autos, img) == rep);
    }
  }
}
