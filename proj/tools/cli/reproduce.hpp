#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpecpen/errors.hpp"

namespace mpecpen::cli {

class UnknownCase : public Error {
 public:
  using Error::Error;
};

struct CheckResult {
  std::string name;
  std::string provenance;
  nlohmann::json expected;
  nlohmann::json actual;
  bool passed = false;
};

struct CaseResult {
  std::string id;
  std::string description;
  std::vector<CheckResult> checks;
  bool passed = false;
};

const std::vector<std::string>& repro_case_ids();

/// Values a case computes, keyed like the expected block in repro.json.
nlohmann::json compute_case(const std::string& id,
                            const std::filesystem::path& fixture_dir);

/// Compares computed values against one case entry of repro.json. Number
/// checks use the entry tolerance (or the case tolerance); bounds use
/// at_most / at_least / between.
CaseResult evaluate_case(const nlohmann::json& fixture_case,
                         const nlohmann::json& actual);

/// Runs one case or "all". Throws UnknownCase.
std::vector<CaseResult> reproduce(const std::string& target,
                                  const std::filesystem::path& fixture_dir);

nlohmann::json results_json(const std::vector<CaseResult>& results);

/// Human-readable pass/fail table.
void print_table(const std::vector<CaseResult>& results, std::ostream& os);

}  // namespace mpecpen::cli
