#include "commands.h"

#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "perturbkit/bench/corpus.h"
#include "perturbkit/bench/filter.h"
#include "perturbkit/bench/report.h"
#include "perturbkit/bench/tasks.h"
#include "perturbkit/core/config.h"
#include "perturbkit/core/error.h"
#include "perturbkit/core/rng.h"
#include "perturbkit/peso/optimizer.h"
#include "perturbkit/similarity/similarity.h"
#include "perturbkit/transform/engine.h"
#include "perturbkit/verify/process.h"
#include "perturbkit/verify/verify.h"

namespace pk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Settings load(const GlobalOptions& g) {
  Settings s = g.config.empty() ? settings_from_json(json::object()) : load_settings(g.config);
  if (g.seed) s.peso.rng_seed = *g.seed;
  return s;
}

void apply_flags(Settings& s, const std::string& engine, const OptimizerFlags& f) {
  if (!engine.empty()) s.engine = parse_engine_kind(engine);
  if (f.max_iter) s.peso.max_iter = *f.max_iter;
  if (f.threshold) s.peso.ss_threshold = *f.threshold;
  if (f.temperature) s.peso.temperature = *f.temperature;
  if (f.mu) s.peso.mu = *f.mu;
  if (f.nu) s.peso.nu = *f.nu;
  s.validate();
}

int job_count(const GlobalOptions& g) {
  if (g.jobs > 0) return g.jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) on a pool; fn must not throw.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

fs::path output_dir(const GlobalOptions& g, const std::string& sub) {
  const fs::path dir = fs::path(g.output_dir) / sub;
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kConfigError, "cannot write " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<json> read_jsonl(const fs::path& path) {
  std::vector<json> out;
  std::istringstream in(read_file(path));
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kConfigError,
                  path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void write_manifest(const fs::path& dir, const std::string& command, const Settings& s,
                    const std::optional<std::string>& digest, const std::string& started) {
  json m = {{"tool", "perturbkit"},
            {"version", kToolVersion},
            {"command", command},
            {"config", to_json(s)},
            {"seed", s.peso.rng_seed},
            {"started_at", started},
            {"finished_at", utc_now()}};
  m["corpus_digest"] = digest ? json(*digest) : json(nullptr);
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

std::shared_ptr<LlmTransport> transport_for(const Settings& s) {
  return s.llm.configured() ? make_transport(s.llm) : nullptr;
}

VerifyPolicy policy_for(const Settings& s, const CorpusEntry& entry,
                        const std::vector<std::shared_ptr<const EquivalenceVoter>>& voters) {
  VerifyPolicy p;
  p.settings = s.verify;
  p.suite = entry.suite;
  p.voters = voters;
  return p;
}

json sample_record(const CodeSample& s) {
  json j = {{"id", s.id}, {"language", to_string(s.language)}, {"content", s.text}};
  if (!s.path.empty()) j["path"] = s.path;
  return j;
}

json score_json(const SimilarityScore& s) {
  return {{"s1", s.s1}, {"s2", s.s2}, {"ss", s.ss}};
}

std::string join_lines(const std::vector<json>& records) {
  std::string out;
  for (const json& r : records) out += r.dump() + "\n";
  return out;
}

int run_optimizer(const GlobalOptions& g, const RunArgs& a, const std::string& mode) {
  const std::string started = utc_now();
  Settings s = load(g);
  apply_flags(s, a.engine, a.flags);
  const auto engine = make_engine(s);
  const auto voters = make_voters(s, transport_for(s));
  const auto corpus = load_corpus(a.corpus);

  struct Outcome {
    std::string trace;
    json pair;
    json summary;
    std::string failure;
  };
  std::vector<Outcome> outcomes(corpus.size());
  parallel_for(corpus.size(), job_count(g), [&](std::size_t i) {
    const CorpusEntry& entry = corpus[i];
    Outcome& o = outcomes[i];
    try {
      const Optimizer opt(*engine, build_catalog(), s.peso,
                          make_verifier(policy_for(s, entry, voters)));
      const RunResult r = mode == "peso" ? opt.run(entry.sample)
                                         : opt.run_random_baseline(entry.sample);
      std::ostringstream trace;
      write_trace(trace, r, entry.sample);
      o.trace = trace.str();
      o.summary = summary_json(r, entry.sample);
      o.pair = sample_record(entry.sample);
      o.pair["original"] = entry.sample.text;
      o.pair["content"] = r.final_sample.text;
      o.pair["methods"] = r.final_sample.lineage;
      o.pair["final_score"] = score_json(r.final_score);
      if (!r.aborted.empty()) o.failure = "aborted: " + r.aborted;
    } catch (const Error& e) {
      o.failure = std::string(to_string(e.code())) + ": " + e.what();
    }
  });

  const fs::path dir = output_dir(g, mode);
  std::string trace;
  std::vector<json> pairs;
  json summaries = json::array();
  json failures = json::array();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Outcome& o = outcomes[i];
    trace += o.trace;
    if (!o.pair.is_null()) pairs.push_back(o.pair);
    if (!o.summary.is_null()) summaries.push_back(o.summary);
    if (!o.failure.empty()) {
      failures.push_back({{"sample", corpus[i].sample.id}, {"error", o.failure}});
      std::cerr << corpus[i].sample.id << ": " << o.failure << '\n';
    }
  }
  write_file(dir / "trace.jsonl", trace);
  write_file(dir / "perturbed.jsonl", join_lines(pairs));
  write_file(dir / "summary.json",
             json{{"mode", mode}, {"samples", summaries}, {"failures", failures}}.dump(2) +
                 "\n");
  write_manifest(dir, mode + "-run", s, corpus_digest(corpus), started);
  std::cout << mode << ": " << summaries.size() << " of " << corpus.size()
            << " samples completed, " << failures.size() << " failed; wrote "
            << dir.string() << '\n';
  return failures.empty() ? kOk : kPartialFailure;
}

fs::path locate_pairs(const fs::path& pairs) {
  if (fs::is_regular_file(pairs)) return pairs;
  for (const fs::path& candidate : {pairs / "perturbed.jsonl", pairs / "peso" / "perturbed.jsonl"}) {
    if (fs::exists(candidate)) return candidate;
  }
  throw Error(ErrorCode::kConfigError,
              "no perturbed.jsonl under " + pairs.string() + " (run peso-run first)");
}

ExternalJudge command_judge(const std::string& command, double timeout_s) {
  return [command, timeout_s](const CompletionTask& t, const std::string& completion) {
    json request = to_json(t);
    request["completion"] = completion;
    const ProcessResult r =
        run_process({"/bin/sh", "-c", command}, request.dump(), timeout_s, fs::current_path());
    if (r.timed_out) throw Error(ErrorCode::kTimeout, "judge command timed out");
    return r.exit_code == 0;
  };
}

}  // namespace

int cmd_perturb(const GlobalOptions& g, const PerturbArgs& a) {
  const std::string started = utc_now();
  const PerturbationMethod& method = build_catalog().method_by_id(a.method);
  Settings s = load(g);
  apply_flags(s, a.engine, {});
  const auto engine = make_engine(s);
  const auto voters = make_voters(s, transport_for(s));
  std::vector<CorpusEntry> corpus = load_corpus(a.corpus);
  if (!a.language.empty()) {
    const Language lang = parse_language(a.language);
    std::erase_if(corpus, [&](const CorpusEntry& e) { return e.sample.language != lang; });
  }

  std::vector<json> records(corpus.size());
  std::vector<char> failed(corpus.size(), 0);
  parallel_for(corpus.size(), job_count(g), [&](std::size_t i) {
    const CorpusEntry& entry = corpus[i];
    json& rec = records[i];
    rec = {{"sample", entry.sample.id}, {"method", method.id}};
    try {
      const PerturbationOutcome out = perturb(*engine, entry.sample, method,
                                              derive_seed(s.peso.rng_seed, entry.sample.id));
      const VerificationReport report =
          verify(entry.sample, out.candidate, policy_for(s, entry, voters));
      rec["status"] = "ok";
      rec["entry_point"] = out.entry_point;
      rec["renames"] = out.renames;
      rec["verification"] = to_json(report);
      rec["score"] = score_json(score_pair(entry.sample, out.candidate, s.peso));
      rec["content"] = out.candidate.text;
    } catch (const Error& e) {
      rec["status"] = to_string(e.code());
      rec["error"] = e.what();
      failed[i] = e.code() == ErrorCode::kEngineFailure;
    }
  });

  const fs::path dir = output_dir(g, "perturb");
  write_file(dir / "outcomes.jsonl", join_lines(records));
  write_manifest(dir, "perturb", s, corpus_digest(corpus), started);
  int ok = 0;
  int passed = 0;
  for (const json& r : records) {
    ok += r.at("status") == "ok";
    passed += r.at("status") == "ok" && r.at("verification").at("passed").get<bool>();
  }
  std::cout << method.id << ": applied to " << ok << " of " << records.size()
            << " samples, " << passed << " verified; wrote " << dir.string() << '\n';
  return std::count(failed.begin(), failed.end(), 1) ? kPartialFailure : kOk;
}

int cmd_peso(const GlobalOptions& g, const RunArgs& a) { return run_optimizer(g, a, "peso"); }

int cmd_random(const GlobalOptions& g, const RunArgs& a) {
  return run_optimizer(g, a, "random");
}

int cmd_filter(const GlobalOptions& g, const FilterArgs& a) {
  const std::string started = utc_now();
  const Settings s = load(g);
  const auto corpus = load_corpus(a.corpus);
  std::vector<CodeSample> samples;
  for (const CorpusEntry& e : corpus) samples.push_back(e.sample);
  const auto verdicts = filter_corpus(samples, {a.min_lines, a.min_chars});

  std::vector<json> lines;
  std::vector<json> kept;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    lines.push_back(to_json(verdicts[i]));
    if (verdicts[i].kept) kept.push_back(sample_record(samples[i]));
  }
  const json counts = report_run({{}, verdicts, {}}).at("filter");
  const fs::path dir = output_dir(g, "filter");
  write_file(dir / "verdicts.jsonl", join_lines(lines));
  write_file(dir / "kept.jsonl", join_lines(kept));
  write_file(dir / "summary.json", counts.dump(2) + "\n");
  write_manifest(dir, "filter", s, corpus_digest(corpus), started);
  std::cout << "kept " << counts.at("kept").get<int>() << " of "
            << counts.at("total").get<int>() << '\n';
  for (const auto& [reason, n] : counts.at("reasons").items()) {
    std::cout << reason << ": " << n.get<int>() << '\n';
  }
  return kOk;
}

int cmd_tasks(const GlobalOptions& g, const TasksArgs& a) {
  const std::string started = utc_now();
  const Settings s = load(g);
  const fs::path pairs_file = locate_pairs(a.pairs);
  const fs::path trace_file = pairs_file.parent_path() / "trace.jsonl";

  std::map<std::string, std::vector<IterationRecord>> traces;
  for (const json& j : read_jsonl(trace_file)) {
    if (j.value("type", std::string{}) != "iteration") continue;
    traces[j.at("sample").get<std::string>()].push_back(record_from_json(j));
  }

  std::vector<json> tasks;
  std::vector<json> skipped;
  std::size_t pairs = 0;
  for (const json& p : read_jsonl(pairs_file)) {
    ++pairs;
    try {
      const CodeSample original =
          make_original(p.at("id").get<std::string>(),
                        parse_language(p.at("language").get<std::string>()),
                        p.at("original").get<std::string>(), p.value("path", std::string{}));
      CodeSample perturbed = original;
      perturbed.text = p.at("content").get<std::string>();
      perturbed.origin = Origin::kAccepted;
      perturbed.lineage = p.value("methods", std::vector<std::string>{});
      if (perturbed.lineage.empty()) {
        skipped.push_back({{"sample", original.id}, {"reason", "no accepted perturbation"}});
        continue;
      }
      const TaskBuild build = build_tasks(original, perturbed,
                                          provenance_from_trace(traces[original.id]),
                                          s.peso.rng_seed);
      for (const CompletionTask& t : build.tasks) tasks.push_back(to_json(t));
      for (const std::string& note : build.unavailable) {
        skipped.push_back({{"sample", original.id}, {"reason", note}});
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRegionUnavailable) throw;
      skipped.push_back({{"sample", p.value("id", std::string{})}, {"reason", e.what()}});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kConfigError, pairs_file.string() + ": " + e.what());
    }
  }
  const fs::path dir = output_dir(g, "tasks");
  write_file(dir / "tasks.jsonl", join_lines(tasks));
  write_file(dir / "unavailable.jsonl", join_lines(skipped));
  write_manifest(dir, "make-tasks", s, std::nullopt, started);
  std::cout << tasks.size() << " tasks from " << pairs << " pairs, " << skipped.size()
            << " regions unavailable; wrote " << dir.string() << '\n';
  return kOk;
}

int cmd_evaluate(const GlobalOptions& g, const EvaluateArgs& a) {
  const std::string started = utc_now();
  const Settings s = load(g);
  const Judge judge = parse_judge(a.judge);
  if (judge == Judge::kExternal && a.judge_command.empty()) {
    throw Error(ErrorCode::kConfigError, "--judge external needs --judge-command");
  }
  std::vector<CompletionTask> tasks;
  std::set<std::string> ids;
  for (const json& j : read_jsonl(a.tasks)) {
    tasks.push_back(task_from_json(j));
    ids.insert(tasks.back().task_id);
  }
  std::map<std::string, std::string> completions;
  for (const json& j : read_jsonl(a.completions)) {
    try {
      const std::string id = j.at("task_id").get<std::string>();
      if (!ids.count(id)) {
        throw Error(ErrorCode::kConfigError, "completion for unknown task " + id);
      }
      completions[id] = j.at("completion").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kConfigError, a.completions + ": " + e.what());
    }
  }
  const ExternalJudge external =
      judge == Judge::kExternal ? command_judge(a.judge_command, s.verify.exec_timeout_s)
                                : ExternalJudge{};
  const AccuracyReport report =
      evaluate_tasks(tasks, completions, judge, external, a.exclude_missing);
  const fs::path dir = output_dir(g, "evaluate");
  json doc = to_json(report);
  doc["judge"] = to_string(judge);
  write_file(dir / "accuracy.json", doc.dump(2) + "\n");
  write_manifest(dir, "evaluate", s, std::nullopt, started);
  const std::string text = render_text(report_run({{}, {}, {report}}));
  std::cout << text.substr(text.find("accuracy\n"));
  if (!report.missing.empty()) {
    std::cout << report.missing.size() << " completions missing\n";
  }
  return kOk;
}

int cmd_report(const GlobalOptions& g, const ReportArgs& a) {
  const std::string started = utc_now();
  const Settings s = load(g);
  ReportInputs in;
  for (const std::string& run : a.runs) {
    const fs::path path = fs::is_directory(run) ? fs::path(run) / "trace.jsonl" : fs::path(run);
    for (json& j : read_jsonl(path)) {
      if (j.value("type", std::string{}) == "summary") in.summaries.push_back(std::move(j));
    }
  }
  for (const std::string& v : a.verdicts) {
    const fs::path path = fs::is_directory(v) ? fs::path(v) / "verdicts.jsonl" : fs::path(v);
    for (const json& j : read_jsonl(path)) in.verdicts.push_back(verdict_from_json(j));
  }
  for (const std::string& acc : a.accuracy) {
    const fs::path path = fs::is_directory(acc) ? fs::path(acc) / "accuracy.json" : fs::path(acc);
    try {
      in.accuracy.push_back(accuracy_from_json(json::parse(read_file(path))));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kConfigError, path.string() + ": " + e.what());
    }
  }
  const json doc = report_run(in);
  const std::string text = render_text(doc);
  const fs::path dir = output_dir(g, "report");
  write_file(dir / "report.json", doc.dump(2) + "\n");
  write_file(dir / "report.txt", text);
  write_manifest(dir, "report", s, std::nullopt, started);
  std::cout << text;
  return kOk;
}

int cmd_similarity(const GlobalOptions& g, const SimilarityArgs& a) {
  const Settings s = load(g);
  auto read = [&](const std::string& path) {
    const std::string text = read_file(path);
    if (!a.language.empty()) {
      return make_original(path, parse_language(a.language), text, path);
    }
    return load_sample(path, path);
  };
  const SimilarityScore score = score_pair(read(a.first), read(a.second), s.peso);
  char line[96];
  std::snprintf(line, sizeof line, "surface %.3f semantic %.3f combined %.3f\n", score.s1,
                score.s2, score.ss);
  std::cout << line;
  return kOk;
}

}  // namespace pk::cli
