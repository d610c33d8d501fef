#include <catch_amalgamated.hpp>

#include <filesystem>
#include <unistd.h>

#include "wb/harness.hpp"

using namespace wb;

namespace {

// Breaks one table entry of the named corpus algebra.
Mutator break_entry(const std::string& target) {
  return [target](const std::string& label, const AlgebraPtr& a) -> AlgebraPtr {
    if (label != target) return a;
    if (a->signature() == Signature::Interior) {
      return with_entry(*a, TableName::G, a->top(), a->bot());
    }
    return with_entry(*a, TableName::Imp, a->top() * a->size() + a->bot(), a->top());
  };
}

std::string stable_text(SuiteReport r) {
  r.ms = 0;
  return dump_canonical(report_to_json(r));
}

bool has_failure(const SuiteReport& r, const std::string& name) {
  for (const auto& f : r.failures) {
    if (f.name == name) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("every suite detects a single mutated table entry") {
  const std::vector<std::pair<std::string, std::string>> targets{
      {"axioms", "interior_dual(preorder_3_1)"},
      {"roundtrips", "heyting_dual(poset_3_1)"},
      {"gl", "heyting_dual(poset_2_0)"},
      {"star", "interior_dual(preorder_2_1)"},
      {"grz", "interior_dual(preorder_2_2)"},
      {"fullness", "interior_dual(poset_2_0)"},
      {"unification", "heyting_dual(poset_3_0)"},
      {"projectivity", "interior_dual(preorder_2_0)"},
  };
  REQUIRE(targets.size() == suite_names().size());
  for (const auto& [suite, label] : targets) {
    SuiteOptions o;
    o.mutate = break_entry(label);
    const auto r = run_suite(suite, o);
    INFO(suite);
    CHECK_FALSE(r.passed());
    CHECK(has_failure(r, label + "/valid"));
    for (const auto& f : r.failures) CHECK_FALSE(f.witnesses.empty());
  }
}

TEST_CASE("every suite passes at its defaults") {
  for (const auto& name : suite_names()) {
    const auto r = run_suite(name, SuiteOptions{});
    INFO(name);
    CHECK(r.passed());
    CHECK(r.cases > 0);
  }
}

TEST_CASE("suites on one-point corpora pass") {
  SuiteOptions o;
  o.max_poset = 1;
  o.max_preorder = 1;
  for (const auto& name : suite_names()) {
    INFO(name);
    CHECK(run_suite(name, o).passed());
  }
}

TEST_CASE("suite reports are deterministic across runs and thread counts") {
  for (const auto& name : suite_names()) {
    SuiteOptions one;
    SuiteOptions many;
    many.jobs = 4;
    const auto a = stable_text(run_suite(name, one));
    const auto b = stable_text(run_suite(name, one));
    const auto c = stable_text(run_suite(name, many));
    INFO(name);
    CHECK(a == b);
    CHECK(a == c);
  }
}

TEST_CASE("literal Grz oracle reproduces the cluster discrepancy") {
  SuiteOptions o;
  o.literal_grz_oracle = true;
  const auto r = suite_grz(o);
  CHECK_FALSE(r.passed());
  CHECK(has_failure(r, "interior_dual(preorder_2_2)/grz-iff-antisymmetric"));
  const auto plain = suite_grz(SuiteOptions{});
  CHECK(plain.passed());
  const auto& d = plain.details["literal_discrepancies"];
  CHECK(std::find(d.begin(), d.end(), Json("interior_dual(preorder_2_2)")) != d.end());
}

TEST_CASE("fullness records the unliftable identity of the cluster") {
  const auto r = suite_fullness(SuiteOptions{});
  REQUIRE(r.details.contains("non_star_witnesses"));
  const auto& w = r.details["non_star_witnesses"];
  CHECK(std::any_of(w.begin(), w.end(), [](const Json& j) {
    return j["algebra"] == "interior_dual(preorder_2_2)";
  }));
}

TEST_CASE("witness files are written beside the report and replay") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("wb_harness_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  SuiteOptions o;
  o.mutate = break_entry("interior_dual(preorder_2_1)");
  const auto r = suite_star(o);
  const auto doc = write_report(r, dir / "star.json");
  REQUIRE_FALSE(doc["failures"].empty());
  for (const auto& f : doc["failures"]) {
    for (const auto& file : f["witness_files"]) {
      const auto path = dir / file.get<std::string>();
      REQUIRE(fs::exists(path));
      const auto wit = read_json_file(path);
      if (document_kind(wit) == "algebra") {
        CHECK_FALSE(validate(*algebra_from_json(wit)).empty());
      }
    }
  }
  CHECK(read_json_file(dir / "star.json") == doc);
  fs::remove_all(dir);
}

TEST_CASE("case slugs are file-name safe") {
  CHECK(case_slug("interior_dual(preorder_2_1)/valid") == "interior_dual_preorder_2_1_valid");
  CHECK(case_slug("A->B/x") == "a_b_x");
  CHECK(case_slug("") == "case");
}

TEST_CASE("unknown suites are rejected") {
  CHECK_THROWS_AS(run_suite("nope", SuiteOptions{}), Error);
  CHECK_FALSE(is_suite("nope"));
  CHECK(is_suite("grz"));
}

TEST_CASE("corpus labels count within each size") {
  const auto c = poset_corpus(3);
  REQUIRE(c.size() == 8);
  CHECK(c[0].label == "poset_1_0");
  CHECK(c[1].label == "poset_2_0");
  CHECK(c[7].label == "poset_3_4");
  CHECK(preorder_corpus(2).back().label == "preorder_2_2");
}
