#include <filesystem>
#include <fstream>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "fprw/model.hpp"
#include "fprw/report.hpp"
#include "fprw/reproduce.hpp"
#include "fprw/scenario.hpp"
#include "fprw/solve.hpp"

using nlohmann::json;

namespace {

fprw::StudyResult small_study(const std::string& name, std::uint64_t seed) {
  const fprw::Model model{fprw::find_scenario(name)->spec};
  fprw::StudyOptions options;
  options.n_steps = 800;
  options.n_replicas = 4;
  options.base_seed = seed;
  return fprw::run_study(model, options);
}

}  // namespace

TEST_CASE("range report records the run identity and estimate blocks",
          "[report]") {
  const fprw::StudyResult study = small_study("counterexample", 11);
  const fprw::Scenario* scenario = fprw::find_scenario("counterexample");
  const std::string text = fprw::range_report_text(study.report, scenario);

  const json doc = json::parse(text);
  CHECK(doc.at("run").at("model_digest") == study.report.model_digest);
  CHECK(doc.at("run").at("base_seed") == 11);
  CHECK(doc.at("run").at("n_steps") == 800);
  CHECK(doc.at("run").at("n_replicas") == 4);
  CHECK(doc.at("tool").at("name") == "fprw");
  CHECK(doc.at("tool").at("generator") == "splitmix64");
  CHECK(doc.at("tool").contains("version"));
  for (const char* key :
       {"range_constant", "speed_word", "speed_exit", "fresh_vertex_rate"}) {
    CAPTURE(key);
    const json& block = doc.at("estimates").at(key);
    CHECK(block.contains("mean"));
    CHECK(block.contains("std_error"));
    CHECK(block.contains("n_samples"));
  }
  CHECK(doc.at("checks").contains("product_difference"));
  CHECK(doc.at("scenario").at("name") == "counterexample");
  CHECK(doc.at("scenario").at("expected").contains("range_constant"));

  // Without the scenario the cross-reference block disappears.
  const json bare = json::parse(fprw::range_report_text(study.report));
  CHECK_FALSE(bare.contains("scenario"));
}

TEST_CASE("report renderings are byte-stable", "[report]") {
  const fprw::StudyResult a = small_study("group-z2z3", 17);
  const fprw::StudyResult b = small_study("group-z2z3", 17);
  const fprw::Scenario* scenario = fprw::find_scenario("group-z2z3");

  CHECK(fprw::range_report_text(a.report, scenario) ==
        fprw::range_report_text(b.report, scenario));
  CHECK(fprw::diagnostics_text(a.diagnostics) ==
        fprw::diagnostics_text(b.diagnostics));

  const fprw::StudyResult c = small_study("group-z2z3", 18);
  CHECK(fprw::range_report_text(a.report, scenario) !=
        fprw::range_report_text(c.report, scenario));
}

TEST_CASE("solve report carries the truncation ladder", "[report]") {
  const fprw::Model model{fprw::find_scenario("group-z2z3")->spec};
  fprw::SolveOptions opts;
  opts.history_from = 4;
  const fprw::SolveResult result =
      fprw::first_return(model, fprw::FreeWord{}, 8, opts);

  const std::string text = fprw::solve_report_text(
      {"first-return", "()", "()", model.digest_hex(), result});
  const json doc = json::parse(text);
  CHECK(doc.at("quantity") == "first-return");
  CHECK(doc.at("start") == "()");
  CHECK(doc.at("model_digest") == model.digest_hex());
  CHECK(doc.at("truncation") == 8);
  CHECK(doc.at("direction") == "lower");
  CHECK(doc.at("value").get<double>() == result.value);
  REQUIRE(doc.at("history").size() == 5);
  CHECK(doc.at("history")[0][0] == 4);
  CHECK(doc.at("history")[4][0] == 8);
}

TEST_CASE("diagnostics report serializes the visit histogram", "[report]") {
  const fprw::StudyResult study = small_study("example1", 23);
  const json doc = json::parse(fprw::diagnostics_text(study.diagnostics));
  CHECK(doc.at("n_records").get<std::int64_t>() ==
        study.diagnostics.n_records);
  CHECK(doc.at("alternation_violations").get<std::int64_t>() == 0);
  CHECK(doc.at("nesting_violations").get<std::int64_t>() == 0);
  REQUIRE(doc.at("visit_histogram").is_array());
  std::int64_t total = 0;
  for (const json& row : doc.at("visit_histogram")) {
    CHECK(row.contains("factor"));
    CHECK(row.contains("psi_size"));
    total += row.at("count").get<std::int64_t>();
  }
  CHECK(total == study.diagnostics.n_records);
}

TEST_CASE("artifact writer tracks digests and writes a manifest", "[report]") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fprw_report_test";
  fs::remove_all(dir);

  {
    fprw::ArtifactWriter writer(dir.string());
    writer.write("plain.txt", "hello\n");
    writer.write("nested/inner.txt", "payload");
    writer.write_manifest();

    REQUIRE(writer.artifacts().size() == 2);
    CHECK(writer.artifacts()[0].path == "plain.txt");
    CHECK(writer.artifacts()[0].bytes == 6);
    CHECK_FALSE(writer.artifacts()[0].digest.empty());
  }

  std::ifstream manifest(dir / "manifest.json");
  REQUIRE(manifest.good());
  const json doc = json::parse(manifest);
  REQUIRE(doc.at("artifacts").size() == 2);
  // Manifest entries are sorted by path.
  CHECK(doc.at("artifacts")[0].at("path") == "nested/inner.txt");
  CHECK(doc.at("artifacts")[1].at("path") == "plain.txt");
  CHECK(doc.at("artifacts")[1].at("bytes") == 6);
  CHECK(fs::exists(dir / "nested" / "inner.txt"));

  fs::remove_all(dir);
}

TEST_CASE("identical flag sets give identical artifacts", "[report]") {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "fprw_repeat_test";
  fs::remove_all(base);

  auto render = [&](const std::string& sub) {
    const fprw::StudyResult study = small_study("counterexample", 29);
    fprw::ArtifactWriter writer((base / sub).string());
    writer.write("report.json", fprw::range_report_text(study.report));
    writer.write("diagnostics.json",
                 fprw::diagnostics_text(study.diagnostics));
    writer.write_manifest();
    return writer.artifacts();
  };

  const auto first = render("a");
  const auto second = render("b");
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].digest == second[i].digest);
  }
  fs::remove_all(base);
}
