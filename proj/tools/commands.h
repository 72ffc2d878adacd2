#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pk::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kPartialFailure = 2;

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs = 0;  // 0: logical CPU count
  std::string output_dir = "out";
};

struct OptimizerFlags {
  std::optional<int> max_iter;
  std::optional<double> threshold;
  std::optional<double> temperature;
  std::optional<double> mu;
  std::optional<double> nu;
};

struct PerturbArgs {
  std::string corpus;
  std::string method;
  std::string engine;
  std::string language;
};

struct RunArgs {
  std::string corpus;
  std::string engine;
  OptimizerFlags flags;
};

struct FilterArgs {
  std::string corpus;
  std::size_t min_lines = 40;
  std::size_t min_chars = 100;
};

struct TasksArgs {
  std::string pairs;
};

struct EvaluateArgs {
  std::string tasks;
  std::string completions;
  std::string judge = "normalized";
  std::string judge_command;
  bool exclude_missing = false;
};

struct ReportArgs {
  std::vector<std::string> runs;
  std::vector<std::string> verdicts;
  std::vector<std::string> accuracy;
};

struct SimilarityArgs {
  std::string first;
  std::string second;
  std::string language;
};

// Each returns an exit status; library errors propagate as pk::Error.
int cmd_perturb(const GlobalOptions& g, const PerturbArgs& a);
int cmd_peso(const GlobalOptions& g, const RunArgs& a);
int cmd_random(const GlobalOptions& g, const RunArgs& a);
int cmd_filter(const GlobalOptions& g, const FilterArgs& a);
int cmd_tasks(const GlobalOptions& g, const TasksArgs& a);
int cmd_evaluate(const GlobalOptions& g, const EvaluateArgs& a);
int cmd_report(const GlobalOptions& g, const ReportArgs& a);
int cmd_similarity(const GlobalOptions& g, const SimilarityArgs& a);

}  // namespace pk::cli
