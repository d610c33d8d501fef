#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wb/algebra.hpp"
#include "wb/frames.hpp"
#include "wb/order.hpp"
#include "wb/variety.hpp"

namespace wb {

// ge[i][j] iff element i is at least as general as element j.
class QuasiOrderedSet {
 public:
  QuasiOrderedSet() = default;
  explicit QuasiOrderedSet(std::size_t n);
  QuasiOrderedSet(std::size_t n, std::vector<std::uint8_t> ge);

  std::size_t size() const noexcept { return n_; }
  bool ge(std::size_t i, std::size_t j) const { return ge_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v) { ge_[i * n_ + j] = v; }
  bool equivalent(std::size_t i, std::size_t j) const {
    return ge(i, j) && ge(j, i);
  }
  bool is_valid() const;
  const std::vector<std::uint8_t>& matrix() const noexcept { return ge_; }

  // Relabel: element i of the result is element perm[i] of this.
  QuasiOrderedSet permuted(const std::vector<std::size_t>& perm) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> ge_;
};

struct ThetaClasses {
  std::vector<std::size_t> class_of;  // classes numbered by least member
  std::vector<std::vector<std::size_t>> members;
  // below[a * c + b] iff class a lies below class b.
  std::vector<std::uint8_t> below;

  std::size_t count() const { return members.size(); }
  bool le(std::size_t a, std::size_t b) const {
    return below[a * members.size() + b] != 0;
  }
};

ThetaClasses theta_classes(const QuasiOrderedSet& q);

// Pairwise incomparable, and every element lies below a member.
bool is_mu_set(const QuasiOrderedSet& q, const std::vector<std::size_t>& m);
// Least member of each maximal class, ascending.
std::optional<std::vector<std::size_t>> mu_set(const QuasiOrderedSet& q);

struct UnificationType {
  std::size_t mu_size = 1;
  bool unitary() const { return mu_size == 1; }
  std::string name() const;  // "1" or "omega(n)"
};

UnificationType classify_type(const QuasiOrderedSet& q);

// Onto hom a -> m, with m the two-element algebra of the signature by default.
bool unifiable(const AlgebraPtr& a, AlgebraPtr m = nullptr);

struct SearchBound {
  unsigned max_generators = 2;
  std::size_t max_target_points = 4;
};

// Plain: targets generated by any k elements. Open: generated by k open
// elements (interior signature only).
enum class GeneratorMode { Plain, Open };

struct Target {
  std::string key;  // signature plus canonical frame code
  Preorder frame;   // canonical
  AlgebraPtr algebra;
  Presentation presentation;
  std::vector<std::size_t> points;  // up-set of the universal model
  // Retraction of the universal frame onto points, as universal point ->
  // point of frame.
  std::vector<std::size_t> retraction;
  std::vector<Homomorphism> automorphisms;
};

struct Unifier {
  std::size_t target;
  Homomorphism u;
};

struct UnifierSet {
  AlgebraPtr algebra;
  VarietySpec variety;
  SearchBound bound;
  GeneratorMode mode = GeneratorMode::Plain;
  std::vector<Target> targets;  // sorted by key
  std::vector<Unifier> unifiers;  // sorted by (target key, map)
  QuasiOrderedSet order;
  bool complete = true;
  std::vector<std::string> notes;

  std::string key(std::size_t i) const;
};

// Target key of an algebra: dual frame in canonical form.
std::string target_key(Signature sig, const Preorder& canonical_frame);

// Term in x1..xk whose truth set in m is exactly the up-set pts. Throws if
// the model does not separate the points.
Term upset_term(const Model& m, Signature sig, unsigned k,
                const std::vector<std::size_t>& pts);

// Least map in the orbit of map under post-composition with automorphisms.
std::vector<Elem> orbit_representative(const std::vector<Homomorphism>& autos,
                                       const std::vector<Elem>& map);

// Computes ge[i][j] iff some h satisfies u_j = h . u_i.
QuasiOrderedSet generality_order(const AlgebraPtr& a,
                                 const std::vector<AlgebraPtr>& targets,
                                 const std::vector<std::vector<Elem>>& maps);

UnifierSet unifier_search(const AlgebraPtr& a, VarietyContext& ctx,
                          const SearchBound& bound,
                          GeneratorMode mode = GeneratorMode::Plain);
UnifierSet unifier_search(const AlgebraPtr& a, const VarietySpec& v,
                          const SearchBound& bound,
                          GeneratorMode mode = GeneratorMode::Plain);

struct TypeVerdict {
  enum class Kind { NotUnifiable, Final, Inconclusive };
  Kind kind = Kind::Inconclusive;
  UnificationType type;
  std::vector<std::size_t> mu;  // indices into the set at the given bound
  std::string reason;

  std::string name() const;
};

// Final when both the search at the bound and at one more generator are
// complete, and the images of the mu-set stay a mu-set at the larger bound.
TypeVerdict algebra_type(const AlgebraPtr& a, VarietyContext& ctx,
                         const SearchBound& bound,
                         GeneratorMode mode = GeneratorMode::Plain,
                         UnifierSet* at_bound = nullptr);

// Canonical interior target for an algebra, with an iso onto it.
struct CanonicalTarget {
  std::string key;
  Preorder frame;
  AlgebraPtr algebra;
  Homomorphism iso;  // source algebra -> algebra
};

CanonicalTarget canonical_target(const AlgebraPtr& a);

struct TauResult {
  UnifierSet image;  // unifier i of the image is tau of unifier i
  bool injective = true;
  bool order_preserving = true;
  bool order_reflecting = true;
  std::vector<std::string> problems;
};

// Sends <u, M> to <B(u), B(M)> over B(a) in the interior variety, with
// targets made canonical and maps reduced modulo automorphisms.
TauResult tau(const UnifierSet& us, VarietyContext& interior);

}  // namespace wb
