#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wb/algebra.hpp"

namespace wb {

// Heyting algebra of open elements.
struct OpenAlgebra {
  AlgebraPtr source;
  AlgebraPtr heyting;
  std::vector<Elem> open_indices;  // heyting element -> source element
  std::vector<int> index_of;       // source element -> heyting element or -1
};

OpenAlgebra open_algebra(const AlgebraPtr& a);
Homomorphism open_hom(const Homomorphism& h, const OpenAlgebra& dom,
                      const OpenAlgebra& cod);
Homomorphism open_hom(const Homomorphism& h);

// Subalgebra generated by the open elements.
struct StarAlgebra {
  AlgebraPtr source;
  AlgebraPtr star;
  Homomorphism embedding;
  std::vector<int> index_of;  // source element -> star element or -1
};

StarAlgebra star_algebra(const AlgebraPtr& a);
Homomorphism star_hom(const Homomorphism& h, const StarAlgebra& dom,
                      const StarAlgebra& cod);
Homomorphism star_hom(const Homomorphism& h);
bool is_star_algebra(const AlgebraPtr& a);

// Powerset of the join-irreducibles with g = largest eta-image below.
struct FreeBooleanExtension {
  AlgebraPtr base;
  AlgebraPtr extension;
  std::vector<Elem> eta;                // base -> extension
  std::vector<Elem> join_irreducibles;  // bit i of an extension element
  std::vector<Elem> lower_cover;        // unique lower cover of each
};

FreeBooleanExtension boolean_extension(const AlgebraPtr& l);
Homomorphism boolean_extension_hom(const Homomorphism& h,
                                   const FreeBooleanExtension& dom,
                                   const FreeBooleanExtension& cod);
Homomorphism boolean_extension_hom(const Homomorphism& h);

// Map Fr(L) -> C sending each atom {j} to h(j) . -h(j*), for h: L -> C
// landing in opens of C. The result is a hom whenever h is a lattice hom.
std::vector<Elem> extend_through_atoms(const FreeBooleanExtension& b,
                                       const FiniteAlgebra& c,
                                       std::span<const Elem> h);

// The isomorphism Fr(O(A)) -> A* extending the inclusion of opens.
Homomorphism extension_to_star(const OpenAlgebra& o,
                               const FreeBooleanExtension& b,
                               const StarAlgebra& s);

// g on Fr(L) recomputed as meets of implications: over the canonical
// decomposition x = meet over j not in x of (-j + j*), and over the set of all
// pairs (u,v) with x <= -u + v. Returns the first disagreement with the
// stored g table, or nothing when all agree.
std::optional<std::string> check_g_against_implications(
    const FreeBooleanExtension& b);

}  // namespace wb
