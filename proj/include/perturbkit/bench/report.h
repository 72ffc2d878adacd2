#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "perturbkit/bench/filter.h"
#include "perturbkit/bench/tasks.h"

namespace pk {

// Rows where the first column is higher, the second is higher, or they tie.
struct WinCounts {
  int first_higher = 0;
  int second_higher = 0;
  int ties = 0;
};

// Compares element-wise; values within `tolerance` count as ties.
WinCounts count_wins(const std::vector<double>& first,
                     const std::vector<double>& second, double tolerance = 1e-12);

struct ReportInputs {
  std::vector<nlohmann::json> summaries;  // summary records from trace files
  std::vector<FilterVerdict> verdicts;
  std::vector<AccuracyReport> accuracy;
};

// Per-sample similarity rows, per-mode means, peso-vs-random win counts over
// samples present in both modes, filter counts and accuracy tables. Empty
// inputs give a document with empty sections.
nlohmann::json report_run(const ReportInputs& inputs);

// Human-readable tables for a document produced by report_run.
std::string render_text(const nlohmann::json& report);

}  // namespace pk
