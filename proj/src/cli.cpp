#include "wb/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wb/functors.hpp"
#include "wb/harness.hpp"
#include "wb/io.hpp"
#include "wb/unification.hpp"

namespace wb {

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kError = 2;

void print_violations(const std::vector<Violation>& v, const std::string& what,
                      std::ostream& out) {
  for (const auto& x : v) out << what << ": " << x.describe() << "\n";
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  Json doc;
  std::string kind;
  try {
    doc = read_json_file(path);
    kind = document_kind(doc);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  try {
    std::size_t bad = 0;
    if (kind == "algebra") {
      const auto v = validate(*algebra_from_json(doc));
      print_violations(v, "violation", out);
      bad = v.size();
    } else if (kind == "preorder") {
      preorder_from_json(doc);
    } else if (kind == "homomorphism") {
      const auto h = hom_from_json(doc);
      const auto vd = validate(*h.dom);
      const auto vc = validate(*h.cod);
      print_violations(vd, "dom violation", out);
      print_violations(vc, "cod violation", out);
      bad = vd.size() + vc.size();
      if (!bad) {
        for (const auto& m : check_homomorphism(h)) {
          out << "hom violation: " << m << "\n";
          ++bad;
        }
      }
    } else {
      const auto v = variety_from_json(doc);
      for (std::size_t i = 0; i < v.generators.size(); ++i) {
        const auto vi = validate(*v.generators[i]);
        print_violations(vi, "generator " + std::to_string(i) + " violation", out);
        bad += vi.size();
      }
    }
    if (bad) return kFailed;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const StructuralError& e) {
    out << "violation: " << e.what() << "\n";
    return kFailed;
  }
  out << "valid\n";
  return kOk;
}

int cmd_gen(const std::string& kind, std::size_t max_size,
            std::optional<std::size_t> ceiling, const std::string& dir,
            std::ostream& out, std::ostream& err) {
  const bool posets = kind == "poset" || kind == "heyting";
  const std::size_t default_ceiling = posets ? kPosetCeiling : kPreorderCeiling;
  const std::size_t limit = ceiling.value_or(default_ceiling);
  if (limit > default_ceiling) {
    err << "warning: raising the " << (posets ? "poset" : "preorder")
        << " ceiling to " << limit << "; enumeration may be slow\n";
  }
  std::vector<CorpusItem> items;
  try {
    items = posets ? poset_corpus(max_size, limit) : preorder_corpus(max_size, limit);
  } catch (const CeilingExceeded& e) {
    err << "error: " << e.what() << " (use --ceiling to override)\n";
    return kError;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    err << "error: cannot create " << dir << "\n";
    return kError;
  }
  try {
    for (const auto& item : items) {
      // Labels are <poset|preorder>_<size>_<index>; keep size and index.
      const std::string suffix = item.label.substr(item.label.find('_'));
      Json doc;
      if (kind == "poset" || kind == "preorder") {
        doc = preorder_to_json(item.frame);
      } else if (kind == "heyting") {
        doc = algebra_to_json(*heyting_dual(item.frame));
      } else {
        doc = algebra_to_json(*interior_dual(item.frame));
      }
      write_text_file(fs::path(dir) / (kind + suffix + ".json"), dump_canonical(doc));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  out << items.size() << " files written to " << dir << "\n";
  return kOk;
}

Signature required_input(const std::string& which) {
  return which == "B" ? Signature::Heyting : Signature::Interior;
}

AlgebraPtr checked_algebra(const Json& doc, Signature want, const std::string& which) {
  const auto a = algebra_from_json(doc);
  if (a->signature() != want) {
    throw ParseError("functor " + which + " needs a " +
                     std::string(signature_name(want)) + " algebra, got " +
                     std::string(signature_name(a->signature())));
  }
  const auto v = validate(*a);
  if (!v.empty()) throw StructuralError("input is not valid: " + v.front().describe());
  return a;
}

int cmd_functor(const std::string& which, const std::string& input,
                const std::string& output, std::ostream& out, std::ostream& err) {
  try {
    const Json doc = read_json_file(input);
    const std::string kind = document_kind(doc);
    const Signature want = required_input(which);
    const fs::path out_path(output);
    if (kind == "algebra") {
      const auto a = checked_algebra(doc, want, which);
      Json result;
      Json sidecar;
      if (which == "O") {
        const auto o = open_algebra(a);
        result = algebra_to_json(*o.heyting);
        sidecar["open_indices"] = o.open_indices;
      } else if (which == "B") {
        const auto b = boolean_extension(a);
        result = algebra_to_json(*b.extension);
        sidecar["eta"] = b.eta;
        sidecar["join_irreducibles"] = b.join_irreducibles;
      } else {
        const auto s = star_algebra(a);
        result = algebra_to_json(*s.star);
        sidecar["embedding"] = s.embedding.map;
      }
      write_text_file(out_path, dump_canonical(result));
      const fs::path side = out_path.parent_path() / (out_path.stem().string() + ".map.json");
      write_text_file(side, dump_canonical(sidecar));
      out << "wrote " << out_path.string() << " and " << side.string() << "\n";
      return kOk;
    }
    if (kind == "homomorphism") {
      const auto h = hom_from_json(doc);
      checked_algebra(hom_to_json(h)["dom"], want, which);
      checked_algebra(hom_to_json(h)["cod"], want, which);
      const auto problems = check_homomorphism(h);
      if (!problems.empty()) throw StructuralError("input map: " + problems.front());
      const Homomorphism r = which == "O"   ? open_hom(h)
                             : which == "B" ? boolean_extension_hom(h)
                                            : star_hom(h);
      write_text_file(out_path, dump_canonical(hom_to_json(r)));
      out << "wrote " << out_path.string() << "\n";
      return kOk;
    }
    throw ParseError("functor input must be an algebra or homomorphism document");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

struct CheckArgs {
  std::string suite;
  std::optional<std::size_t> max_poset;
  std::optional<std::size_t> max_preorder;
  std::optional<std::size_t> ceiling;
  unsigned bound = 2;
  std::size_t max_points = 4;
  unsigned jobs = 1;
  std::optional<std::size_t> budget;
  std::string report;
  bool no_timing = false;
  std::string grz_oracle = "implemented";
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  if (!is_suite(a.suite)) {
    err << "error: unknown suite \"" << a.suite << "\"; expected one of";
    for (const auto& n : suite_names()) err << " " << n;
    err << "\n";
    return kError;
  }
  SuiteOptions o;
  o.max_poset = a.max_poset;
  o.max_preorder = a.max_preorder;
  if (a.ceiling) {
    err << "warning: raising corpus ceilings to " << *a.ceiling
        << "; suites may run for a long time\n";
    o.poset_ceiling = std::max(o.poset_ceiling, *a.ceiling);
    o.preorder_ceiling = std::max(o.preorder_ceiling, *a.ceiling);
  }
  o.bound.max_generators = a.bound;
  o.bound.max_target_points = a.max_points;
  o.jobs = a.jobs;
  if (a.budget) o.budget = *a.budget;
  o.literal_grz_oracle = a.grz_oracle == "literal";
  SuiteReport r;
  try {
    r = run_suite(a.suite, o);
  } catch (const CeilingExceeded& e) {
    err << "error: " << e.what() << " (use --ceiling to override)\n";
    return kError;
  }
  if (a.no_timing) r.ms = 0;
  if (!a.report.empty()) {
    try {
      write_report(r, a.report);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kError;
    }
  }
  for (const auto& f : r.failures) out << "FAIL " << f.name << ": " << f.message << "\n";
  out << r.suite << ": " << r.cases << " cases, " << r.failures.size()
      << " failures, " << r.skips << " skips\n";
  return r.passed() ? kOk : kFailed;
}

struct UnifyArgs {
  std::string algebra;
  std::string variety;
  unsigned bound = 2;
  std::size_t max_points = 4;
  std::string mode = "plain";
  std::optional<std::size_t> budget;
  std::string report;
};

int cmd_unify(const UnifyArgs& a, std::ostream& out, std::ostream& err) {
  try {
    const auto alg = algebra_from_json(read_json_file(a.algebra));
    require_valid(*alg);
    const auto spec = variety_from_json(read_json_file(a.variety));
    spec.require_valid();
    VarietyContext ctx(spec, a.budget.value_or(configured_budget()));
    if (!ctx.member(alg)) throw Error("algebra is not a member of the variety");
    SearchBound bound;
    bound.max_generators = a.bound;
    bound.max_target_points = a.max_points;
    const GeneratorMode mode =
        a.mode == "open" ? GeneratorMode::Open : GeneratorMode::Plain;
    UnifierSet us;
    const auto verdict = algebra_type(alg, ctx, bound, mode, &us);
    Json doc;
    doc["kind"] = "unification";
    doc["algebra"] = algebra_to_json(*alg);
    doc["variety"] = variety_to_json(spec);
    doc["verdict"] = verdict.name();
    doc["final"] = verdict.kind != TypeVerdict::Kind::Inconclusive;
    doc["mu"] = verdict.mu;
    if (!verdict.reason.empty()) doc["reason"] = verdict.reason;
    doc["unifiers"] = unifier_set_to_json(us);
    if (!a.report.empty()) write_text_file(a.report, dump_canonical(doc));
    out << "verdict: " << verdict.name() << "\n";
    out << us.targets.size() << " targets, " << us.unifiers.size()
        << " unifiers, mu-set size " << verdict.mu.size() << "\n";
    if (!verdict.reason.empty()) out << "reason: " << verdict.reason << "\n";
    return verdict.kind == TypeVerdict::Kind::Inconclusive ? kFailed : kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite Heyting and interior algebra workbench"};
  app.name("wb");
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a document against its axioms");
  validate_cmd->add_option("path", validate_path, "JSON document")->required();

  std::string gen_kind;
  std::size_t gen_max = 0;
  std::optional<std::size_t> gen_ceiling;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Write the corpus of a given kind");
  gen_cmd->add_option("kind", gen_kind, "poset, preorder, heyting or interior")
      ->required()
      ->check(CLI::IsMember({"poset", "preorder", "heyting", "interior"}));
  gen_cmd->add_option("--max-size", gen_max, "Largest frame size")->required();
  gen_cmd->add_option("--ceiling", gen_ceiling, "Raise the enumeration ceiling");
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();

  std::string fn_which;
  std::string fn_in;
  std::string fn_out;
  auto* fn_cmd = app.add_subcommand("functor", "Apply O, B or star to an algebra or hom");
  fn_cmd->add_option("which", fn_which, "O, B or star")
      ->required()
      ->check(CLI::IsMember({"O", "B", "star"}));
  fn_cmd->add_option("--input", fn_in, "Input document")->required();
  fn_cmd->add_option("--out", fn_out, "Output document")->required();

  CheckArgs ca;
  auto* check_cmd = app.add_subcommand("check", "Run a verification suite");
  check_cmd->add_option("suite", ca.suite, "Suite name")->required();
  check_cmd->add_option("--max-poset", ca.max_poset, "Largest poset frame");
  check_cmd->add_option("--max-preorder", ca.max_preorder, "Largest preorder frame");
  check_cmd->add_option("--ceiling", ca.ceiling, "Raise the corpus ceilings");
  check_cmd->add_option("--bound", ca.bound, "Generators of unifier targets");
  check_cmd->add_option("--max-points", ca.max_points, "Points of unifier targets");
  check_cmd->add_option("--budget", ca.budget, "Free-algebra element budget (default WB_BUDGET or 20000)")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--jobs", ca.jobs, "Worker threads")->check(CLI::PositiveNumber);
  check_cmd->add_option("--report", ca.report, "Write the JSON report here");
  check_cmd->add_flag("--no-timing", ca.no_timing, "Report ms as 0");
  check_cmd->add_option("--grz-oracle", ca.grz_oracle, "implemented or literal")
      ->check(CLI::IsMember({"implemented", "literal"}));

  UnifyArgs ua;
  auto* unify_cmd = app.add_subcommand("unify", "Bounded unification type of an algebra");
  unify_cmd->add_option("--algebra", ua.algebra, "Algebra document")->required();
  unify_cmd->add_option("--variety", ua.variety, "Variety or generator document")
      ->required();
  unify_cmd->add_option("--bound", ua.bound, "Generators of unifier targets");
  unify_cmd->add_option("--max-points", ua.max_points, "Points of unifier targets");
  unify_cmd->add_option("--mode", ua.mode, "plain or open")
      ->check(CLI::IsMember({"plain", "open"}));
  unify_cmd->add_option("--budget", ua.budget, "Free-algebra element budget (default WB_BUDGET or 20000)")
      ->check(CLI::PositiveNumber);
  unify_cmd->add_option("--report", ua.report, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  if (*validate_cmd) return cmd_validate(validate_path, out, err);
  if (*gen_cmd) return cmd_gen(gen_kind, gen_max, gen_ceiling, gen_out, out, err);
  if (*fn_cmd) return cmd_functor(fn_which, fn_in, fn_out, out, err);
  if (*check_cmd) return cmd_check(ca, out, err);
  return cmd_unify(ua, out, err);
}

}  // namespace wb
