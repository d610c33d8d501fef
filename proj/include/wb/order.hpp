#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wb/algebra.hpp"

namespace wb {

inline constexpr std::size_t kPosetCeiling = 5;
inline constexpr std::size_t kPreorderCeiling = 4;

// Reflexive-transitive relation on {0..size-1}. Posets are preorders that
// are also antisymmetric; the same type carries both.
class Preorder {
 public:
  Preorder() = default;
  // Discrete order on n points.
  explicit Preorder(std::size_t n);
  Preorder(std::size_t n, std::vector<std::uint8_t> le);

  std::size_t size() const noexcept { return n_; }
  bool le(std::size_t i, std::size_t j) const { return le_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v) { le_[i * n_ + j] = v; }
  const std::vector<std::uint8_t>& matrix() const noexcept { return le_; }

  bool is_reflexive() const;
  bool is_transitive() const;
  bool is_antisymmetric() const;
  bool is_valid() const { return is_reflexive() && is_transitive(); }
  bool is_poset() const { return is_valid() && is_antisymmetric(); }

  // Points v with i <= v, ascending.
  std::vector<std::size_t> up(std::size_t i) const;

  bool operator==(const Preorder&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> le_;
};

Preorder chain_order(std::size_t n);    // 0 < 1 < ... < n-1
Preorder antichain(std::size_t n);
Preorder cluster(std::size_t n);        // everything related to everything
Preorder disjoint_union(const Preorder& a, const Preorder& b);

// Relabels: point i of the result is point perm[i] of p.
Preorder permute(const Preorder& p, std::span<const std::size_t> perm);
Preorder induced(const Preorder& p, std::span<const std::size_t> points);

struct CanonicalForm {
  std::vector<std::uint8_t> code;  // row-major le bits of the canonical copy
  std::vector<std::size_t> perm;   // canonical point i = original perm[i]
  Preorder order;                  // the canonical copy
};

// Minimal row-major encoding over all relabelings.
CanonicalForm canonical_form(const Preorder& p);

// One representative per isomorphism class, ordered by size then code.
std::vector<Preorder> enumerate_posets(std::size_t max_size,
                                       std::size_t ceiling = kPosetCeiling);
std::vector<Preorder> enumerate_preorders(
    std::size_t max_size, std::size_t ceiling = kPreorderCeiling);

// Up-sets as bitmasks (point i is bit i), ascending. Requires size <= 30.
std::vector<std::uint32_t> upset_masks(const Preorder& p);
bool is_upset_mask(const Preorder& p, std::uint32_t mask);

// Up-set algebra; element i is the i-th up-set in ascending mask order.
AlgebraPtr heyting_dual(const Preorder& poset);
// Powerset algebra with g(S) = {w : every v >= w lies in S}; element = mask.
AlgebraPtr interior_dual(const Preorder& q);
// Powerset Boolean algebra of n points; element = mask.
AlgebraPtr boolean_powerset(std::size_t n);

// Dual algebra of the signature: heyting_dual, interior_dual, or the Boolean
// powerset (which ignores the order).
AlgebraPtr dual_algebra(Signature sig, const Preorder& p);

// Mask of the element in dual_algebra(sig, p) and back.
std::uint32_t dual_element_mask(Signature sig, const Preorder& p, Elem x);
Elem dual_element_of_mask(Signature sig, const Preorder& p, std::uint32_t mask);

}  // namespace wb
