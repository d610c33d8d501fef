#include "wb/io.hpp"

#include <fstream>
#include <sstream>

namespace wb {

namespace {

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void dump_value(const Json& j, int indent, std::string& out) {
  const std::string pad(std::size_t(indent) + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      out += pad + Json(it.key()).dump() + ": ";
      dump_value(it.value(), indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(std::size_t(indent), ' ') + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    if (std::all_of(j.begin(), j.end(), is_scalar)) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        out += j[i].dump();
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad;
      dump_value(j[i], indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(std::size_t(indent), ' ') + "]";
  } else {
    out += j.dump();
  }
}

const Json& field(const Json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    throw ParseError(std::string("missing field \"") + name + "\"");
  }
  return doc.at(name);
}

std::size_t unsigned_field(const Json& doc, const char* name) {
  const Json& v = field(doc, name);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ParseError(std::string("field \"") + name +
                     "\" must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

Elem entry(const Json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0 ||
      v.get<long long>() > 0xFFFF) {
    throw StructuralError(where + ": entries must be integers in 0..65535");
  }
  return Elem(v.get<long long>());
}

std::vector<Elem> flat_table(const Json& v, const std::string& name) {
  if (!v.is_array()) throw StructuralError("table " + name + " is not an array");
  std::vector<Elem> out;
  for (const auto& x : v) out.push_back(entry(x, "table " + name));
  return out;
}

std::vector<Elem> binary_table(const Json& v, const std::string& name) {
  if (!v.is_array()) throw StructuralError("table " + name + " is not an array");
  std::vector<Elem> out;
  for (const auto& row : v) {
    if (!row.is_array() || row.size() != v.size()) {
      throw StructuralError("table " + name + " is not square");
    }
    for (const auto& x : row) out.push_back(entry(x, "table " + name));
  }
  return out;
}

Json rows(const std::vector<Elem>& t, std::size_t n) {
  Json out = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(t[i * n + j]);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::string dump_canonical(const Json& j) {
  std::string out;
  dump_value(j, 0, out);
  out += "\n";
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

std::string document_kind(const Json& doc) {
  const auto& kind = field(doc, "kind");
  if (!kind.is_string()) throw ParseError("field \"kind\" must be a string");
  const auto k = kind.get<std::string>();
  if (parse_signature(k)) return "algebra";
  if (k == "preorder" || k == "poset") return "preorder";
  if (k == "homomorphism" || k == "variety") return k;
  throw ParseError("unknown document kind \"" + k + "\"");
}

Json algebra_to_json(const FiniteAlgebra& a) {
  const std::size_t n = a.size();
  const auto& t = a.tables();
  Json doc;
  doc["kind"] = std::string(signature_name(a.signature()));
  doc["size"] = n;
  doc["bot"] = a.bot();
  doc["top"] = a.top();
  Json ops;
  ops["join"] = rows(t.join, n);
  ops["meet"] = rows(t.meet, n);
  if (has_imp(a.signature())) ops["imp"] = rows(t.imp, n);
  if (has_compl(a.signature())) ops["compl"] = t.compl_;
  if (has_g(a.signature())) ops["g"] = t.g;
  doc["ops"] = std::move(ops);
  if (!a.names().empty()) doc["names"] = a.names();
  return doc;
}

AlgebraPtr algebra_from_json(const Json& doc) {
  if (document_kind(doc) != "algebra") throw ParseError("not an algebra document");
  const Signature sig = *parse_signature(doc.at("kind").get<std::string>());
  const std::size_t n = unsigned_field(doc, "size");
  const std::size_t bot = unsigned_field(doc, "bot");
  const std::size_t top = unsigned_field(doc, "top");
  if (n > 0xFFFF || bot > 0xFFFF || top > 0xFFFF) {
    throw StructuralError("carrier too large");
  }
  const Json& ops = field(doc, "ops");
  if (!ops.is_object()) throw ParseError("field \"ops\" must be an object");
  OperationTables t;
  for (auto it = ops.begin(); it != ops.end(); ++it) {
    const std::string& name = it.key();
    if (name == "join") {
      t.join = binary_table(it.value(), name);
    } else if (name == "meet") {
      t.meet = binary_table(it.value(), name);
    } else if (name == "imp") {
      t.imp = binary_table(it.value(), name);
    } else if (name == "compl") {
      t.compl_ = flat_table(it.value(), name);
    } else if (name == "g") {
      t.g = flat_table(it.value(), name);
    } else {
      throw StructuralError("unknown table " + name);
    }
  }
  std::vector<std::string> names;
  if (doc.contains("names")) {
    const Json& v = doc.at("names");
    if (!v.is_array()) throw ParseError("field \"names\" must be an array");
    for (const auto& s : v) {
      if (!s.is_string()) throw ParseError("names must be strings");
      names.push_back(s.get<std::string>());
    }
  }
  return make_algebra(sig, n, Elem(bot), Elem(top), std::move(t),
                      std::move(names));
}

Json preorder_to_json(const Preorder& p) {
  Json doc;
  doc["kind"] = p.is_antisymmetric() ? "poset" : "preorder";
  doc["size"] = p.size();
  Json le = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < p.size(); ++j) row.push_back(p.le(i, j) ? 1 : 0);
    le.push_back(std::move(row));
  }
  doc["le"] = std::move(le);
  return doc;
}

Preorder preorder_from_json(const Json& doc) {
  if (document_kind(doc) != "preorder") throw ParseError("not a preorder document");
  const std::size_t n = unsigned_field(doc, "size");
  const Json& le = field(doc, "le");
  if (!le.is_array() || le.size() != n) throw ParseError("le must have size rows");
  std::vector<std::uint8_t> m;
  for (const auto& row : le) {
    if (!row.is_array() || row.size() != n) throw ParseError("le must be square");
    for (const auto& x : row) {
      if (!x.is_number_integer() || (x.get<int>() != 0 && x.get<int>() != 1)) {
        throw ParseError("le entries must be 0 or 1");
      }
      m.push_back(std::uint8_t(x.get<int>()));
    }
  }
  Preorder p(n, std::move(m));
  if (!p.is_valid()) throw StructuralError("relation is not reflexive and transitive");
  if (doc.at("kind") == "poset" && !p.is_antisymmetric()) {
    throw StructuralError("poset document is not antisymmetric");
  }
  return p;
}

Json hom_to_json(const Homomorphism& h) {
  Json doc;
  doc["kind"] = "homomorphism";
  doc["dom"] = algebra_to_json(*h.dom);
  doc["cod"] = algebra_to_json(*h.cod);
  doc["map"] = h.map;
  return doc;
}

Homomorphism hom_from_json(const Json& doc) {
  if (document_kind(doc) != "homomorphism") {
    throw ParseError("not a homomorphism document");
  }
  Homomorphism h;
  h.dom = algebra_from_json(field(doc, "dom"));
  h.cod = algebra_from_json(field(doc, "cod"));
  const Json& map = field(doc, "map");
  if (!map.is_array()) throw ParseError("map must be an array");
  for (const auto& x : map) h.map.push_back(entry(x, "map"));
  return h;
}

Json variety_to_json(const VarietySpec& v) {
  Json doc;
  doc["kind"] = "variety";
  Json gens = Json::array();
  for (const auto& g : v.generators) gens.push_back(algebra_to_json(*g));
  doc["generators"] = std::move(gens);
  return doc;
}

VarietySpec variety_from_json(const Json& doc) {
  const auto kind = document_kind(doc);
  if (kind == "algebra") return variety_of(algebra_from_json(doc));
  if (kind != "variety") throw ParseError("not a variety document");
  const Json& gens = field(doc, "generators");
  if (!gens.is_array() || gens.empty()) {
    throw ParseError("generators must be a nonempty array");
  }
  VarietySpec v;
  for (const auto& g : gens) v.generators.push_back(algebra_from_json(g));
  return v;
}

Json presentation_to_json(const Presentation& p) {
  Json doc;
  doc["generators"] = p.k;
  Json rels = Json::array();
  for (const auto& [l, r] : p.relations) {
    rels.push_back(Json::array({l.to_string(), r.to_string()}));
  }
  doc["relations"] = std::move(rels);
  return doc;
}

Json order_to_json(const QuasiOrderedSet& q) {
  Json out = Json::array();
  for (std::size_t i = 0; i < q.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < q.size(); ++j) row.push_back(q.ge(i, j) ? 1 : 0);
    out.push_back(std::move(row));
  }
  return out;
}

Json unifier_set_to_json(const UnifierSet& us) {
  Json doc;
  doc["mode"] = us.mode == GeneratorMode::Open ? "open" : "plain";
  doc["bound"] = {{"max_generators", us.bound.max_generators},
                  {"max_target_points", us.bound.max_target_points}};
  doc["complete"] = us.complete;
  Json targets = Json::array();
  for (const auto& t : us.targets) {
    Json tj;
    tj["key"] = t.key;
    tj["size"] = t.algebra->size();
    tj["points"] = t.frame.size();
    tj["presentation"] = presentation_to_json(t.presentation);
    targets.push_back(std::move(tj));
  }
  doc["targets"] = std::move(targets);
  Json unifiers = Json::array();
  for (const auto& u : us.unifiers) {
    Json uj;
    uj["target"] = u.target;
    uj["map"] = u.u.map;
    unifiers.push_back(std::move(uj));
  }
  doc["unifiers"] = std::move(unifiers);
  doc["order"] = order_to_json(us.order);
  const auto theta = theta_classes(us.order);
  doc["theta_classes"] = theta.members;
  if (us.order.size() > 0) {
    doc["mu_set"] = *mu_set(us.order);
  } else {
    doc["mu_set"] = Json::array();
  }
  if (!us.notes.empty()) doc["notes"] = us.notes;
  return doc;
}

}  // namespace wb
