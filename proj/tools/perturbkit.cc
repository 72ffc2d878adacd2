#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "commands.h"

namespace {

void add_optimizer_flags(CLI::App* cmd, pk::cli::RunArgs& a) {
  cmd->add_option("--corpus", a.corpus, "corpus .jsonl file or directory")->required();
  cmd->add_option("--engine", a.engine, "rule, llm or hybrid (default from config)");
  cmd->add_option("--max-iter", a.flags.max_iter, "main-loop iterations");
  cmd->add_option("--threshold", a.flags.threshold, "early-stop similarity threshold");
  cmd->add_option("--temperature", a.flags.temperature, "selection temperature");
  cmd->add_option("--mu", a.flags.mu, "surface similarity weight");
  cmd->add_option("--nu", a.flags.nu, "semantic similarity weight");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = pk::cli;
  CLI::App app{"Perturb code samples and build contamination-resistant benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::GlobalOptions g;
  app.add_option("--config", g.config, "settings JSON file (no secrets)");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--jobs", g.jobs, "sample-level workers (default: CPU count)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--output-dir", g.output_dir, "directory for all outputs")
      ->capture_default_str();

  cli::PerturbArgs perturb;
  auto* perturb_cmd = app.add_subcommand("perturb", "apply one method to every sample");
  perturb_cmd->add_option("--method", perturb.method, "method id")->required();
  perturb_cmd->add_option("--corpus", perturb.corpus, "corpus .jsonl file or directory")
      ->required();
  perturb_cmd->add_option("--engine", perturb.engine, "rule, llm or hybrid");
  perturb_cmd->add_option("--language", perturb.language, "only samples in this language");

  cli::RunArgs peso;
  auto* peso_cmd = app.add_subcommand("peso-run", "run the optimizer on every sample");
  add_optimizer_flags(peso_cmd, peso);

  cli::RunArgs random;
  auto* random_cmd = app.add_subcommand("random-run", "run the random-selection baseline");
  add_optimizer_flags(random_cmd, random);

  cli::FilterArgs filter;
  auto* filter_cmd = app.add_subcommand("filter", "drop short or unparsable samples");
  filter_cmd->add_option("--corpus", filter.corpus, "corpus .jsonl file or directory")
      ->required();
  filter_cmd->add_option("--min-lines", filter.min_lines)->capture_default_str();
  filter_cmd->add_option("--min-chars", filter.min_chars)->capture_default_str();

  cli::TasksArgs tasks;
  auto* tasks_cmd = app.add_subcommand("make-tasks", "build masked completion tasks");
  tasks_cmd->alias("tasks");
  tasks_cmd->add_option("--pairs", tasks.pairs, "peso-run output directory")->required();

  cli::EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score completions against tasks");
  evaluate_cmd->add_option("--tasks", evaluate.tasks, "tasks.jsonl")->required();
  evaluate_cmd->add_option("--completions", evaluate.completions,
                           "jsonl of {task_id, completion}")
      ->required();
  evaluate_cmd->add_option("--judge", evaluate.judge, "exact, normalized or external")
      ->capture_default_str();
  evaluate_cmd->add_option("--judge-command", evaluate.judge_command,
                           "shell command; reads the task JSON on stdin, exit 0 = correct");
  evaluate_cmd->add_flag("--exclude-missing", evaluate.exclude_missing,
                         "leave missing completions out of the denominators");

  cli::ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "summarize runs, filters and accuracy");
  report_cmd->add_option("--runs", report.runs, "run directories or trace files");
  report_cmd->add_option("--verdicts", report.verdicts, "filter outputs");
  report_cmd->add_option("--accuracy", report.accuracy, "evaluate outputs");

  cli::SimilarityArgs similarity;
  auto* similarity_cmd = app.add_subcommand("similarity", "score two source files");
  similarity_cmd->add_option("first", similarity.first)->required()->check(CLI::ExistingFile);
  similarity_cmd->add_option("second", similarity.second)->required()->check(CLI::ExistingFile);
  similarity_cmd->add_option("--language", similarity.language,
                             "language (default: from the file extension)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cli::kOk : cli::kUsageError;
  }

  try {
    if (*perturb_cmd) return cli::cmd_perturb(g, perturb);
    if (*peso_cmd) return cli::cmd_peso(g, peso);
    if (*random_cmd) return cli::cmd_random(g, random);
    if (*filter_cmd) return cli::cmd_filter(g, filter);
    if (*tasks_cmd) return cli::cmd_tasks(g, tasks);
    if (*evaluate_cmd) return cli::cmd_evaluate(g, evaluate);
    if (*report_cmd) return cli::cmd_report(g, report);
    if (*similarity_cmd) return cli::cmd_similarity(g, similarity);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsageError;
  }
  return cli::kUsageError;
}
