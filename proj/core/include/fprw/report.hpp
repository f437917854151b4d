#ifndef FPRW_REPORT_HPP
#define FPRW_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fprw/estimate.hpp"
#include "fprw/exit.hpp"
#include "fprw/scenario.hpp"
#include "fprw/solve.hpp"

namespace fprw {

// JSON renderings are deterministic: keys sorted, no timestamps, floats in
// shortest round-trip form. Passing the scenario adds its name and expected
// values as cross-references.
std::string range_report_text(const RangeReport& report,
                              const Scenario* scenario = nullptr);

struct SolveReportInput {
  std::string quantity;
  std::string start;
  std::string target;
  std::string model_digest;
  SolveResult result;
};
std::string solve_report_text(const SolveReportInput& input);

std::string diagnostics_text(const DiagnosticsReport& report);

struct Artifact {
  std::string path;  // relative to the output directory
  std::uint64_t bytes = 0;
  std::string digest;
};

// Writes files under one output directory and tracks them for the manifest.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::string out_dir);

  void write(const std::string& name, const std::string& content);
  // manifest.json listing every artifact written so far.
  void write_manifest();

  [[nodiscard]] const std::vector<Artifact>& artifacts() const {
    return artifacts_;
  }
  [[nodiscard]] const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::vector<Artifact> artifacts_;
};

}  // namespace fprw

#endif
