#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "wb/algebra.hpp"
#include "wb/order.hpp"

namespace wb {

using PointSet = boost::dynamic_bitset<>;

// Points of the dual frame: join-irreducibles (Heyting, ordered by reverse
// lattice order so elements become up-sets) or atoms (Boolean, Interior,
// with x <= y iff atom x lies below the closure of atom y).
struct DualFrame {
  Signature signature;
  Preorder frame;
  std::vector<Elem> point_element;
  std::vector<PointSet> element_set;
  std::map<PointSet, Elem> element_of_set;

  Elem element_of(const PointSet& s) const;
};

DualFrame dual_frame(const FiniteAlgebra& a);

std::vector<Elem> join_irreducibles(const FiniteAlgebra& a);
std::vector<Elem> atoms(const FiniteAlgebra& a);

// p-morphism frame(cod) -> frame(dom) dual to a hom dom -> cod.
std::vector<std::size_t> dual_map(const Homomorphism& h, const DualFrame& dom,
                                  const DualFrame& cod);
// The hom dom -> cod dual to a p-morphism f: frame(cod) -> frame(dom).
std::vector<Elem> hom_from_dual_map(std::span<const std::size_t> f,
                                    const DualFrame& dom, const DualFrame& cod);

struct Model {
  Preorder frame;
  std::vector<std::uint32_t> color;  // bit i set: x_i holds at the point
};

struct Contraction {
  Model model;
  // Contracted point of each input point; parts are concatenated in order.
  std::vector<std::size_t> class_of;
  std::vector<std::size_t> offset;  // first input index of each part
};

// Disjoint union of the parts, quotiented by the largest bisimulation.
Contraction contract(std::span<const Model> parts);

// Points that see only points whose colors contain theirs, closed to the
// largest up-set: where every x_i equals g(x_i).
PointSet persistent_part(const Model& m);

struct UniversalModel {
  Model model;
  unsigned k = 0;
  bool persistent = false;
};

// Contraction of every frame under every k-coloring (up-set colorings when
// persistent). Throws BudgetExceeded when the raw union exceeds raw_budget.
UniversalModel universal_model(std::span<const Preorder> frames, unsigned k,
                               bool persistent,
                               std::size_t raw_budget = 4000000);

// Where each point of part lands in universal, or nothing if some point of
// part is bisimilar to no point of universal.
std::optional<std::vector<std::size_t>> embed_into(const Model& part,
                                                   const Model& universal);

PointSet up_set(const Preorder& p, std::size_t w);
// {w : every v >= w lies in s}
PointSet box(const Preorder& p, const std::vector<PointSet>& ups,
             const PointSet& s);

// Up-sets with at most max_points points, inside within when given, as
// ascending point lists in lexicographic order.
std::vector<std::vector<std::size_t>> upsets_up_to(
    const Preorder& p, std::size_t max_points, const PointSet* within = nullptr);

bool is_pmorphism(const Preorder& from, const Preorder& to,
                  std::span<const std::size_t> f);

// Calls visit for every p-morphism from -> to agreeing with fixed (optional
// per from-point). visit returns false to stop. Throws BudgetExceeded when
// more than node_budget partial assignments are explored (0 = unlimited).
void for_each_pmorphism(
    const Preorder& from, const Preorder& to,
    std::span<const std::optional<std::size_t>> fixed,
    const std::function<bool(std::span<const std::size_t>)>& visit,
    std::size_t node_budget = 0);

std::optional<std::vector<std::size_t>> find_pmorphism(
    const Preorder& from, const Preorder& to,
    std::span<const std::optional<std::size_t>> fixed,
    std::size_t node_budget = 0);

}  // namespace wb
