#include "wb/functors.hpp"

#include <string>

#include "wb/frames.hpp"

namespace wb {

namespace {

void require_signature(const FiniteAlgebra& a, Signature sig,
                       const char* what) {
  if (a.signature() != sig) {
    throw SignatureMismatch(std::string(what) + " needs a " +
                            std::string(signature_name(sig)) + " algebra");
  }
}

}  // namespace

OpenAlgebra open_algebra(const AlgebraPtr& a) {
  require_signature(*a, Signature::Interior, "open_algebra");
  OpenAlgebra o;
  o.source = a;
  o.index_of.assign(a->size(), -1);
  for (std::size_t x = 0; x < a->size(); ++x) {
    if (a->is_open(Elem(x))) {
      o.index_of[x] = int(o.open_indices.size());
      o.open_indices.push_back(Elem(x));
    }
  }
  const std::size_t k = o.open_indices.size();
  auto at = [&](Elem x) {
    if (o.index_of[x] < 0) throw StructuralError("opens are not closed");
    return Elem(o.index_of[x]);
  };
  OperationTables t;
  t.join.resize(k * k);
  t.meet.resize(k * k);
  t.imp.resize(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    const Elem x = o.open_indices[i];
    for (std::size_t j = 0; j < k; ++j) {
      const Elem y = o.open_indices[j];
      t.join[i * k + j] = at(a->join(x, y));
      t.meet[i * k + j] = at(a->meet(x, y));
      t.imp[i * k + j] = at(a->g(a->join(a->compl_(x), y)));
    }
  }
  std::vector<std::string> names;
  if (!a->names().empty()) {
    for (Elem x : o.open_indices) names.push_back(a->names()[x]);
  }
  o.heyting = make_algebra(Signature::Heyting, k, at(a->bot()), at(a->top()),
                           std::move(t), std::move(names));
  return o;
}

Homomorphism open_hom(const Homomorphism& h, const OpenAlgebra& dom,
                      const OpenAlgebra& cod) {
  std::vector<Elem> map(dom.open_indices.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const int j = cod.index_of[h.map[dom.open_indices[i]]];
    if (j < 0) throw StructuralError("open_hom: image of an open is not open");
    map[i] = Elem(j);
  }
  return {dom.heyting, cod.heyting, std::move(map)};
}

Homomorphism open_hom(const Homomorphism& h) {
  return open_hom(h, open_algebra(h.dom), open_algebra(h.cod));
}

StarAlgebra star_algebra(const AlgebraPtr& a) {
  require_signature(*a, Signature::Interior, "star_algebra");
  std::vector<Elem> opens;
  for (std::size_t x = 0; x < a->size(); ++x) {
    if (a->is_open(Elem(x))) opens.push_back(Elem(x));
  }
  auto sub = generated_subalgebra(a, opens);
  StarAlgebra s{a, sub.algebra, sub.inclusion, std::vector<int>(a->size(), -1)};
  for (std::size_t i = 0; i < s.embedding.map.size(); ++i) {
    s.index_of[s.embedding.map[i]] = int(i);
  }
  return s;
}

Homomorphism star_hom(const Homomorphism& h, const StarAlgebra& dom,
                      const StarAlgebra& cod) {
  std::vector<Elem> map(dom.embedding.map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const int j = cod.index_of[h.map[dom.embedding.map[i]]];
    if (j < 0) throw StructuralError("star_hom: image leaves the star part");
    map[i] = Elem(j);
  }
  return {dom.star, cod.star, std::move(map)};
}

Homomorphism star_hom(const Homomorphism& h) {
  return star_hom(h, star_algebra(h.dom), star_algebra(h.cod));
}

bool is_star_algebra(const AlgebraPtr& a) {
  return star_algebra(a).star->size() == a->size();
}

FreeBooleanExtension boolean_extension(const AlgebraPtr& l) {
  require_signature(*l, Signature::Heyting, "boolean_extension");
  FreeBooleanExtension b;
  b.base = l;
  b.join_irreducibles = join_irreducibles(*l);
  const std::size_t m = b.join_irreducibles.size();
  if (m > 13) {
    throw BudgetExceeded("boolean extension", double(std::uint64_t{1} << m),
                         double(kMaxCarrier));
  }
  for (Elem j : b.join_irreducibles) {
    Elem below = l->bot();
    for (std::size_t x = 0; x < l->size(); ++x) {
      if (x != j && l->leq(Elem(x), j)) below = l->join(below, Elem(x));
    }
    b.lower_cover.push_back(below);
  }
  b.eta.resize(l->size());
  for (std::size_t a = 0; a < l->size(); ++a) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (l->leq(b.join_irreducibles[i], Elem(a))) mask |= std::uint32_t{1} << i;
    }
    b.eta[a] = Elem(mask);
  }
  const std::size_t k = std::size_t{1} << m;
  const std::uint32_t full = std::uint32_t(k - 1);
  OperationTables t;
  t.join.resize(k * k);
  t.meet.resize(k * k);
  t.compl_.resize(k);
  t.g.resize(k);
  for (std::uint32_t x = 0; x < k; ++x) {
    for (std::uint32_t y = 0; y < k; ++y) {
      t.join[x * k + y] = Elem(x | y);
      t.meet[x * k + y] = Elem(x & y);
    }
    t.compl_[x] = Elem(~x & full);
    std::uint32_t gx = 0;
    for (Elem e : b.eta) {
      if ((e & ~x) == 0) gx |= e;
    }
    t.g[x] = Elem(gx);
  }
  std::vector<std::string> names;
  for (std::uint32_t x = 0; x < k; ++x) {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (x >> i & 1) {
        if (!first) s += ",";
        s += l->label(b.join_irreducibles[i]);
        first = false;
      }
    }
    names.push_back(s + "}");
  }
  b.extension = make_algebra(Signature::Interior, k, Elem{0}, Elem(full),
                             std::move(t), std::move(names));
  return b;
}

std::vector<Elem> extend_through_atoms(const FreeBooleanExtension& b,
                                       const FiniteAlgebra& c,
                                       std::span<const Elem> h) {
  const std::size_t m = b.join_irreducibles.size();
  std::vector<Elem> atom_image(m);
  for (std::size_t i = 0; i < m; ++i) {
    atom_image[i] = c.meet(h[b.join_irreducibles[i]],
                           c.compl_(h[b.lower_cover[i]]));
  }
  std::vector<Elem> map(b.extension->size());
  for (std::size_t x = 0; x < map.size(); ++x) {
    Elem v = c.bot();
    for (std::size_t i = 0; i < m; ++i) {
      if (x >> i & 1) v = c.join(v, atom_image[i]);
    }
    map[x] = v;
  }
  return map;
}

Homomorphism boolean_extension_hom(const Homomorphism& h,
                                   const FreeBooleanExtension& dom,
                                   const FreeBooleanExtension& cod) {
  std::vector<Elem> into_opens(h.map.size());
  for (std::size_t a = 0; a < h.map.size(); ++a) {
    into_opens[a] = cod.eta[h.map[a]];
  }
  return {dom.extension, cod.extension,
          extend_through_atoms(dom, *cod.extension, into_opens)};
}

Homomorphism boolean_extension_hom(const Homomorphism& h) {
  return boolean_extension_hom(h, boolean_extension(h.dom),
                               boolean_extension(h.cod));
}

Homomorphism extension_to_star(const OpenAlgebra& o,
                               const FreeBooleanExtension& b,
                               const StarAlgebra& s) {
  auto into_source = extend_through_atoms(b, *o.source, o.open_indices);
  std::vector<Elem> map(into_source.size());
  for (std::size_t x = 0; x < map.size(); ++x) {
    const int j = s.index_of[into_source[x]];
    if (j < 0) throw StructuralError("extension leaves the star part");
    map[x] = Elem(j);
  }
  return {b.extension, s.star, std::move(map)};
}

std::optional<std::string> check_g_against_implications(
    const FreeBooleanExtension& b) {
  const auto& L = *b.base;
  const auto& E = *b.extension;
  const std::size_t m = b.join_irreducibles.size();
  const std::size_t k = E.size();
  const std::uint32_t full = std::uint32_t(k - 1);
  for (std::uint32_t x = 0; x < k; ++x) {
    // Canonical decomposition over join-irreducibles outside x.
    std::uint32_t rebuilt = full;
    std::uint32_t g_canonical = full;
    for (std::size_t i = 0; i < m; ++i) {
      if (x >> i & 1) continue;
      const Elem j = b.join_irreducibles[i];
      const Elem js = b.lower_cover[i];
      rebuilt &= (~std::uint32_t(b.eta[j]) & full) | b.eta[js];
      g_canonical &= b.eta[L.imp(j, js)];
    }
    if (rebuilt != x) {
      return "canonical decomposition does not rebuild element " +
             E.label(Elem(x));
    }
    if (g_canonical != E.g(Elem(x))) {
      return "canonical meet of implications differs at " + E.label(Elem(x));
    }
    // Every pair (u,v) with x <= -u + v.
    std::uint32_t rebuilt_all = full;
    std::uint32_t g_all = full;
    for (std::size_t u = 0; u < L.size(); ++u) {
      for (std::size_t v = 0; v < L.size(); ++v) {
        const std::uint32_t factor =
            (~std::uint32_t(b.eta[u]) & full) | b.eta[v];
        if ((x & ~factor) != 0) continue;
        rebuilt_all &= factor;
        g_all &= b.eta[L.imp(Elem(u), Elem(v))];
      }
    }
    if (rebuilt_all != x) {
      return "full decomposition does not rebuild element " + E.label(Elem(x));
    }
    if (g_all != E.g(Elem(x))) {
      return "meet over all implications differs at " + E.label(Elem(x));
    }
  }
  return std::nullopt;
}

}  // namespace wb
