#include <catch_amalgamated.hpp>

#include "wb/functors.hpp"
#include "wb/io.hpp"
#include "wb/order.hpp"

using namespace wb;

TEST_CASE("algebra documents round-trip byte for byte") {
  for (const auto& q : enumerate_preorders(3)) {
    const auto a = interior_dual(q);
    const std::string text = dump_canonical(algebra_to_json(*a));
    const auto back = algebra_from_json(parse_json(text));
    CHECK(*back == *a);
    CHECK(dump_canonical(algebra_to_json(*back)) == text);
  }
  for (const auto& p : enumerate_posets(4)) {
    const auto a = heyting_dual(p);
    const std::string text = dump_canonical(algebra_to_json(*a));
    CHECK(dump_canonical(algebra_to_json(*algebra_from_json(parse_json(text)))) == text);
  }
}

TEST_CASE("preorder documents round-trip and name their kind") {
  for (const auto& q : enumerate_preorders(3)) {
    const Json doc = preorder_to_json(q);
    CHECK(doc["kind"] == (q.is_antisymmetric() ? "poset" : "preorder"));
    CHECK(preorder_from_json(parse_json(dump_canonical(doc))) == q);
  }
}

TEST_CASE("canonical layout of a small algebra") {
  const std::string text = dump_canonical(algebra_to_json(*chain(Signature::Heyting, 2)));
  CHECK(text ==
        "{\n"
        "  \"kind\": \"heyting\",\n"
        "  \"size\": 2,\n"
        "  \"bot\": 0,\n"
        "  \"top\": 1,\n"
        "  \"ops\": {\n"
        "    \"join\": [\n"
        "      [0, 1],\n"
        "      [1, 1]\n"
        "    ],\n"
        "    \"meet\": [\n"
        "      [0, 0],\n"
        "      [0, 1]\n"
        "    ],\n"
        "    \"imp\": [\n"
        "      [1, 1],\n"
        "      [0, 1]\n"
        "    ]\n"
        "  },\n"
        "  \"names\": [\"0\", \"1\"]\n"
        "}\n");
}

TEST_CASE("malformed documents raise parse errors") {
  CHECK_THROWS_AS(parse_json("{\"kind\": "), ParseError);
  CHECK_THROWS_AS(algebra_from_json(parse_json("{\"kind\": \"group\"}")), ParseError);
  CHECK_THROWS_AS(algebra_from_json(parse_json("{\"kind\": \"heyting\", \"size\": 2}")),
                  ParseError);
  CHECK_THROWS_AS(document_kind(parse_json("[1, 2]")), ParseError);
}

TEST_CASE("ragged tables are structural errors") {
  Json doc = algebra_to_json(*chain(Signature::Heyting, 2));
  doc["ops"]["join"][1] = Json::array({1});
  CHECK_THROWS_AS(algebra_from_json(doc), StructuralError);
  doc = algebra_to_json(*chain(Signature::Heyting, 2));
  doc["ops"]["meet"][0][0] = "x";
  CHECK_THROWS_AS(algebra_from_json(doc), StructuralError);
}

TEST_CASE("invalid preorders are rejected") {
  Json doc = preorder_to_json(chain_order(2));
  doc["le"][0][0] = 0;
  CHECK_THROWS_AS(preorder_from_json(doc), StructuralError);
  doc = preorder_to_json(cluster(2));
  doc["kind"] = "poset";
  CHECK_THROWS_AS(preorder_from_json(doc), StructuralError);
}

TEST_CASE("homomorphism and variety documents round-trip") {
  const auto a = chain(Signature::Heyting, 3);
  const auto b = chain(Signature::Heyting, 2);
  const auto h = enumerate_homs(a, b, false).front();
  const auto back = hom_from_json(parse_json(dump_canonical(hom_to_json(h))));
  CHECK(back.map == h.map);
  CHECK(*back.dom == *a);
  const auto v = variety_from_json(variety_to_json(variety_of(a)));
  REQUIRE(v.generators.size() == 1);
  CHECK(*v.generators[0] == *a);
  CHECK(variety_from_json(algebra_to_json(*a)).generators.size() == 1);
}
