#include "fprw/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "fprw/digest.hpp"
#include "fprw/version.hpp"

namespace fprw {
namespace {

using nlohmann::json;

json tool_block() {
  json j;
  j["name"] = kToolName;
  j["version"] = kToolVersion;
  j["generator"] = kGeneratorName;
  return j;
}

json estimate_block(const Estimate& e) {
  json j;
  j["mean"] = e.mean;
  j["std_error"] = e.std_error;
  j["n_samples"] = e.n_samples;
  j["method"] = e.method == EstimateMethod::across_replicas ? "across_replicas"
                                                            : "batch_means";
  return j;
}

std::string finish(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string range_report_text(const RangeReport& report,
                              const Scenario* scenario) {
  json j;
  j["estimates"]["range_constant"] = estimate_block(report.r_hat);
  j["estimates"]["speed_word"] = estimate_block(report.ell_hat);
  j["estimates"]["speed_exit"] = estimate_block(report.ell_exit_hat);
  j["estimates"]["fresh_vertex_rate"] = estimate_block(report.r_tilde_hat);
  j["checks"]["product_difference"] = report.product_check;
  j["checks"]["product_gate"] = report.product_gate;
  j["checks"]["overhead_tail"] = report.overhead_tail;
  j["run"]["model_digest"] = report.model_digest;
  j["run"]["base_seed"] = report.base_seed;
  j["run"]["n_steps"] = report.n_steps;
  j["run"]["n_replicas"] = report.n_replicas;
  j["run"]["n_failed"] = report.n_failed;
  j["run"]["certification_margin"] = report.certification_margin;
  j["tool"] = tool_block();
  if (scenario != nullptr) {
    j["scenario"]["name"] = scenario->name;
    for (const auto& [key, expected] : scenario->expected) {
      json e;
      e["value"] = expected.value;
      if (!expected.note.empty()) e["note"] = expected.note;
      j["scenario"]["expected"][key] = e;
    }
  }
  return finish(j);
}

std::string solve_report_text(const SolveReportInput& input) {
  const SolveResult& r = input.result;
  json j;
  j["quantity"] = input.quantity;
  j["start"] = input.start;
  j["target"] = input.target;
  j["model_digest"] = input.model_digest;
  j["truncation"] = r.truncation;
  j["value"] = r.value;
  j["converged"] = r.converged;
  j["sweeps_converged"] = r.sweeps_converged;
  j["direction"] = r.direction == BoundDirection::lower ? "lower" : "upper";
  json hist = json::array();
  for (const auto& [m, value] : r.history) hist.push_back(json::array({m, value}));
  j["history"] = hist;
  j["residuals"] = json::object();
  for (const auto& [key, value] : r.residuals) j["residuals"][key] = value;
  j["extras"] = json::object();
  for (const auto& [key, value] : r.extras) j["extras"][key] = value;
  j["tool"] = tool_block();
  return finish(j);
}

std::string diagnostics_text(const DiagnosticsReport& report) {
  json j;
  j["n_records"] = report.n_records;
  j["alternation_violations"] = report.alternation_violations;
  j["nesting_violations"] = report.nesting_violations;
  j["mean_fresh_vertices"] = report.mean_r_tilde;
  j["mean_overhead"] = report.mean_overhead;
  json hist = json::array();
  for (const auto& [key, count] : report.visit_histogram) {
    json row;
    row["factor"] = key.first;
    row["psi_size"] = key.second;
    row["count"] = count;
    hist.push_back(row);
  }
  j["visit_histogram"] = hist;
  j["running_fresh_vertices"] = report.running_r_tilde;
  j["running_overhead"] = report.running_overhead;
  j["tool"] = tool_block();
  return finish(j);
}

ArtifactWriter::ArtifactWriter(std::string out_dir) : dir_(std::move(out_dir)) {
  std::filesystem::create_directories(dir_);
}

void ArtifactWriter::write(const std::string& name, const std::string& content) {
  const std::filesystem::path path = std::filesystem::path(dir_) / name;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw std::runtime_error("short write to " + path.string());
  artifacts_.push_back(Artifact{
      name, content.size(),
      to_hex(fnv1a64(std::string_view(content)))});
}

void ArtifactWriter::write_manifest() {
  std::vector<Artifact> sorted = artifacts_;
  std::sort(sorted.begin(), sorted.end(),
            [](const Artifact& a, const Artifact& b) { return a.path < b.path; });
  nlohmann::json j;
  nlohmann::json list = nlohmann::json::array();
  for (const Artifact& artifact : sorted) {
    nlohmann::json row;
    row["path"] = artifact.path;
    row["bytes"] = artifact.bytes;
    row["fnv1a64"] = artifact.digest;
    list.push_back(row);
  }
  j["artifacts"] = list;
  j["tool"] = tool_block();
  const std::string text = j.dump(2) + "\n";

  const std::filesystem::path path = std::filesystem::path(dir_) / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace fprw
