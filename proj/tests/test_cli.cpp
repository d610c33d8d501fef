#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <map>
#include <sys/wait.h>
#include <unistd.h>

#include "wb/cli.hpp"
#include "wb/io.hpp"
#include "wb/order.hpp"

using namespace wb;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run wb_run(std::vector<std::string> args) {
  args.insert(args.begin(), "wb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("wb_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write(const fs::path& p, const Json& doc) { write_text_file(p, dump_canonical(doc)); }

const fs::path golden(WB_GOLDEN_DIR);

}  // namespace

TEST_CASE("validate accepts chain3") {
  TempDir d;
  write(d / "c3.json", algebra_to_json(*chain(Signature::Heyting, 3)));
  const auto r = wb_run({"validate", (d / "c3.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out == "valid\n");
}

TEST_CASE("validate rejects g(top) != top with a message") {
  TempDir d;
  const auto a = two_element(Signature::Interior);
  write(d / "bad.json", algebra_to_json(*with_entry(*a, TableName::G, 1, 0)));
  const auto r = wb_run({"validate", (d / "bad.json").string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("violation") != std::string::npos);
}

TEST_CASE("validate reports parse failures with exit 2") {
  TempDir d;
  write_text_file(d / "broken.json", "{\"kind\": \"heyting\", ");
  CHECK(wb_run({"validate", (d / "broken.json").string()}).code == 2);
  CHECK(wb_run({"validate", (d / "missing.json").string()}).code == 2);
}

TEST_CASE("validate treats ragged tables as violations") {
  TempDir d;
  Json doc = algebra_to_json(*chain(Signature::Heyting, 2));
  doc["ops"]["join"][0] = Json::array({0});
  write(d / "ragged.json", doc);
  CHECK(wb_run({"validate", (d / "ragged.json").string()}).code == 1);
}

TEST_CASE("gen writes the poset corpus") {
  TempDir d;
  const auto r = wb_run({"gen", "poset", "--max-size", "3", "--out", d.path().string()});
  CHECK(r.code == 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(d.path())) files += e.path().extension() == ".json";
  CHECK(files == 8);
  CHECK(fs::exists(d / "poset_1_0.json"));
  CHECK(fs::exists(d / "poset_3_4.json"));
}

TEST_CASE("gen with max size 1 writes one file") {
  TempDir d;
  CHECK(wb_run({"gen", "interior", "--max-size", "1", "--out", d.path().string()}).code == 0);
  CHECK(std::distance(fs::directory_iterator(d.path()), fs::directory_iterator{}) == 1);
}

TEST_CASE("gen is idempotent and its files round-trip") {
  TempDir d;
  const auto dir = d.path().string();
  REQUIRE(wb_run({"gen", "heyting", "--max-size", "3", "--out", dir}).code == 0);
  std::map<std::string, std::string> first;
  for (const auto& e : fs::directory_iterator(d.path())) first[e.path().filename()] = slurp(e.path());
  REQUIRE(wb_run({"gen", "heyting", "--max-size", "3", "--out", dir}).code == 0);
  for (const auto& [name, text] : first) {
    CHECK(slurp(d / name) == text);
    CHECK(dump_canonical(algebra_to_json(*algebra_from_json(parse_json(text)))) == text);
  }
  REQUIRE(wb_run({"gen", "preorder", "--max-size", "2", "--out", dir}).code == 0);
  for (const auto& e : fs::directory_iterator(d.path())) {
    if (e.path().filename().string().rfind("preorder_", 0) != 0) continue;
    const auto text = slurp(e.path());
    CHECK(dump_canonical(preorder_to_json(preorder_from_json(parse_json(text)))) == text);
  }
}

TEST_CASE("gen refuses an unwritable directory and enforces the ceiling") {
  TempDir d;
  write_text_file(d / "file", "x");
  CHECK(wb_run({"gen", "poset", "--max-size", "2", "--out", (d / "file").string()}).code == 2);
  CHECK(wb_run({"gen", "poset", "--max-size", "6", "--out", d.path().string()}).code == 2);
  CHECK(wb_run({"gen", "lattice", "--max-size", "2", "--out", d.path().string()}).code == 2);
}

TEST_CASE("golden corpus file for chain3") {
  TempDir d;
  REQUIRE(wb_run({"gen", "heyting", "--max-size", "2", "--out", d.path().string()}).code == 0);
  CHECK(slurp(d / "heyting_2_1.json") == slurp(golden / "heyting_2_1.json"));
}

TEST_CASE("functor B of chain3 matches the golden output") {
  TempDir d;
  const auto r = wb_run({"functor", "B", "--input", (golden / "heyting_2_1.json").string(),
                         "--out", (d / "b.json").string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(d / "b.json") == slurp(golden / "b_chain3.json"));
  CHECK(slurp(d / "b.map.json") == slurp(golden / "b_chain3.map.json"));
  const auto b = algebra_from_json(read_json_file(d / "b.json"));
  CHECK(b->size() == 4);
  CHECK(b->g(2) == b->bot());
}

TEST_CASE("functor O of two gives chain2") {
  TempDir d;
  write(d / "two.json", algebra_to_json(*two_element(Signature::Interior)));
  REQUIRE(wb_run({"functor", "O", "--input", (d / "two.json").string(), "--out",
                  (d / "o.json").string()})
              .code == 0);
  const auto o = algebra_from_json(read_json_file(d / "o.json"));
  CHECK(is_isomorphic(o, chain(Signature::Heyting, 2)));
  CHECK(read_json_file(d / "o.map.json").contains("open_indices"));
}

TEST_CASE("functor star of a poset dual is the identical algebra") {
  TempDir d;
  const auto a = interior_dual(chain_order(3));
  write(d / "a.json", algebra_to_json(*a));
  REQUIRE(wb_run({"functor", "star", "--input", (d / "a.json").string(), "--out",
                  (d / "s.json").string()})
              .code == 0);
  CHECK(slurp(d / "s.json") == slurp(d / "a.json"));
  CHECK(read_json_file(d / "s.map.json")["embedding"].size() == a->size());
}

TEST_CASE("functors reject the wrong input kind") {
  TempDir d;
  write(d / "c3.json", algebra_to_json(*chain(Signature::Heyting, 3)));
  write(d / "p.json", preorder_to_json(chain_order(2)));
  CHECK(wb_run({"functor", "O", "--input", (d / "c3.json").string(), "--out",
                (d / "x.json").string()})
            .code == 2);
  CHECK(wb_run({"functor", "B", "--input", (d / "p.json").string(), "--out",
                (d / "x.json").string()})
            .code == 2);
}

TEST_CASE("functors act on homomorphism documents") {
  TempDir d;
  const auto a = chain(Signature::Heyting, 3);
  const auto h = enumerate_homs(a, a, false).back();
  write(d / "h.json", hom_to_json(h));
  REQUIRE(wb_run({"functor", "B", "--input", (d / "h.json").string(), "--out",
                  (d / "bh.json").string()})
              .code == 0);
  const auto bh = hom_from_json(read_json_file(d / "bh.json"));
  CHECK(check_homomorphism(bh).empty());
  CHECK(bh.dom->size() == 4);
}

TEST_CASE("check exit codes") {
  TempDir d;
  const auto rep = (d / "rt.json").string();
  CHECK(wb_run({"check", "roundtrips", "--report", rep, "--no-timing"}).code == 0);
  const auto doc = read_json_file(rep);
  CHECK(doc["suite"] == "roundtrips");
  CHECK(doc["failures"].empty());
  CHECK(doc["ms"] == 0);
  for (const char* key : {"suite", "params", "cases", "failures", "skips", "ms"}) {
    CHECK(doc.contains(key));
  }
  CHECK(wb_run({"check", "nonexistent"}).code == 2);
  CHECK(wb_run({"check", "grz", "--grz-oracle", "sometimes"}).code == 2);
}

TEST_CASE("check grz with the literal oracle fails with witnesses") {
  TempDir d;
  const auto rep = d / "grz.json";
  const auto r = wb_run({"check", "grz", "--grz-oracle", "literal", "--max-preorder", "2",
                         "--report", rep.string(), "--no-timing"});
  CHECK(r.code == 1);
  const auto doc = read_json_file(rep);
  REQUIRE_FALSE(doc["failures"].empty());
  const auto& f = doc["failures"][0];
  CHECK(f["case"].get<std::string>().find("grz-iff-antisymmetric") != std::string::npos);
  REQUIRE_FALSE(f["witness_files"].empty());
  const auto wit = read_json_file(d / f["witness_files"][0].get<std::string>());
  CHECK(validate(*algebra_from_json(wit)).empty());
}

TEST_CASE("check reports are identical across runs and job counts") {
  TempDir d;
  REQUIRE(wb_run({"check", "star", "--no-timing", "--report", (d / "a.json").string()}).code == 0);
  REQUIRE(wb_run({"check", "star", "--no-timing", "--jobs", "3", "--report",
                  (d / "b.json").string()})
              .code == 0);
  CHECK(slurp(d / "a.json") == slurp(d / "b.json"));
}

TEST_CASE("unify a projective algebra") {
  TempDir d;
  write(d / "c3.json", algebra_to_json(*chain(Signature::Heyting, 3)));
  const auto r = wb_run({"unify", "--algebra", (d / "c3.json").string(), "--variety",
                         (d / "c3.json").string(), "--bound", "2", "--report",
                         (d / "u.json").string()});
  CHECK(r.code == 0);
  const auto doc = read_json_file(d / "u.json");
  CHECK(doc["verdict"] == "1");
  CHECK(doc["mu"].size() == 1);
  CHECK(doc["unifiers"]["complete"] == true);
  CHECK_FALSE(doc["unifiers"]["targets"].empty());
  CHECK(doc["unifiers"]["targets"][0].contains("presentation"));
  CHECK(doc["unifiers"].contains("order"));
  CHECK(doc["unifiers"]["mu_set"].size() == 1);
}

TEST_CASE("unify a non-unifiable algebra") {
  TempDir d;
  write(d / "m4.json", algebra_to_json(*interior_dual(cluster(2))));
  const auto r = wb_run({"unify", "--algebra", (d / "m4.json").string(), "--variety",
                         (d / "m4.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict: not unifiable") != std::string::npos);
}

TEST_CASE("unify rejects non-members and bad files") {
  TempDir d;
  write(d / "c3.json", algebra_to_json(*chain(Signature::Heyting, 3)));
  write(d / "c2.json", algebra_to_json(*chain(Signature::Heyting, 2)));
  CHECK(wb_run({"unify", "--algebra", (d / "c3.json").string(), "--variety",
                (d / "c2.json").string()})
            .code == 2);
  CHECK(wb_run({"unify", "--algebra", (d / "none.json").string(), "--variety",
                (d / "c2.json").string()})
            .code == 2);
}

TEST_CASE("the installed binary honours the exit-code contract") {
  TempDir d;
  write(d / "c3.json", algebra_to_json(*chain(Signature::Heyting, 3)));
  write_text_file(d / "broken.json", "[");
  const std::string exe = WB_EXE;
  auto status = [&](const std::string& args) {
    const int s = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  CHECK(status("validate " + (d / "c3.json").string()) == 0);
  CHECK(status("validate " + (d / "broken.json").string()) == 2);
  CHECK(status("bogus") == 2);
  CHECK(status("") == 2);
}
