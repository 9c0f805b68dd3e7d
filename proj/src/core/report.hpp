#pragma once

#include "experiment.hpp"

#include <string>
#include <vector>

namespace hl {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  Json details;
  double seconds = 0.0;
  double budget_seconds = 0.0; // 0: no runtime limit
  std::string error;           // set when the criterion threw
};

struct ReportSummary {
  std::vector<CriterionResult> criteria;
  int passed = 0;
  bool pass = false;
};

inline constexpr int kCriterionCount = 11;

std::string criterion_title(int id);

// Runs one acceptance criterion; exceptions are caught and recorded as a
// failure with the message in `error`.
CriterionResult run_criterion(int id, int threads = 1);

// All criteria (or the listed ids) in order.
ReportSummary run_report(int threads = 1, const std::vector<int> &ids = {});

// Wall-clock times are left out of the JSON so repeated runs are identical.
Json report_json(const ReportSummary &summary);
std::string report_csv(const ReportSummary &summary);

} // namespace hl
