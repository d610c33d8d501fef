#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wb/io.hpp"
#include "wb/order.hpp"
#include "wb/unification.hpp"

namespace wb {

struct Witness {
  std::string label;
  Json document;  // algebra, preorder or homomorphism document
};

struct CaseFailure {
  std::string name;
  std::string message;
  std::vector<Witness> witnesses;
};

struct SuiteReport {
  std::string suite;
  Json params = Json::object();
  std::size_t cases = 0;
  std::vector<CaseFailure> failures;
  std::size_t skips = 0;
  Json details = Json::object();
  double ms = 0;

  bool passed() const { return failures.empty(); }
};

// Applied to every corpus algebra before a suite uses it; for fault injection.
using Mutator =
    std::function<AlgebraPtr(const std::string& label, const AlgebraPtr& a)>;

struct SuiteOptions {
  // Unset means the suite's own default.
  std::optional<std::size_t> max_poset;
  std::optional<std::size_t> max_preorder;
  std::size_t poset_ceiling = kPosetCeiling;
  std::size_t preorder_ceiling = kPreorderCeiling;
  SearchBound bound;
  std::size_t budget = configured_budget();  // free-algebra element budget
  unsigned jobs = 1;
  bool literal_grz_oracle = false;
  Mutator mutate;
};

struct CorpusItem {
  std::string label;  // <kind>_<size>_<index>, index counted within a size
  Preorder frame;
};

std::vector<CorpusItem> poset_corpus(std::size_t max_size,
                                     std::size_t ceiling = kPosetCeiling);
std::vector<CorpusItem> preorder_corpus(std::size_t max_size,
                                        std::size_t ceiling = kPreorderCeiling);

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

SuiteReport suite_axioms(const SuiteOptions& o);
SuiteReport suite_roundtrips(const SuiteOptions& o);
SuiteReport suite_gl(const SuiteOptions& o);
SuiteReport suite_star(const SuiteOptions& o);
SuiteReport suite_grz(const SuiteOptions& o);
SuiteReport suite_fullness(const SuiteOptions& o);
SuiteReport suite_unification(const SuiteOptions& o);
SuiteReport suite_projectivity(const SuiteOptions& o);

// Throws Error for an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteOptions& o);

std::string case_slug(const std::string& name);

// Report document; witness_files[i] lists the files of failure i.
Json report_to_json(const SuiteReport& r,
                    const std::vector<std::vector<std::string>>& witness_files = {});
// Writes the report and its witnesses to <stem>.witness/<case-slug>_<n>.json
// beside it. Returns the report document as written.
Json write_report(const SuiteReport& r, const std::filesystem::path& path);

}  // namespace wb
