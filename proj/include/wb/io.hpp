#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "wb/algebra.hpp"
#include "wb/order.hpp"
#include "wb/unification.hpp"
#include "wb/variety.hpp"

namespace wb {

using Json = nlohmann::ordered_json;

// Unreadable input or a document of the wrong shape.
class ParseError : public Error {
 public:
  using Error::Error;
};

// 2-space indentation, scalar arrays on one line, one line per row of a
// nested array. Ends with a newline.
std::string dump_canonical(const Json& j);

Json parse_json(const std::string& text);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// "algebra", "preorder", "homomorphism" or "variety".
std::string document_kind(const Json& doc);

Json algebra_to_json(const FiniteAlgebra& a);
// Ragged or non-integer tables raise StructuralError; a missing field or an
// unknown kind raises ParseError. Sizes are not checked here; see validate.
AlgebraPtr algebra_from_json(const Json& doc);

Json preorder_to_json(const Preorder& p);
Preorder preorder_from_json(const Json& doc);

Json hom_to_json(const Homomorphism& h);
Homomorphism hom_from_json(const Json& doc);

Json variety_to_json(const VarietySpec& v);
// Accepts a variety document or a single algebra document.
VarietySpec variety_from_json(const Json& doc);

Json presentation_to_json(const Presentation& p);
Json order_to_json(const QuasiOrderedSet& q);
Json unifier_set_to_json(const UnifierSet& us);

}  // namespace wb
