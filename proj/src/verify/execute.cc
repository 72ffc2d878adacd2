#include <fstream>

#include "perturbkit/core/error.h"
#include "perturbkit/verify/process.h"
#include "perturbkit/verify/verify.h"

namespace pk {
namespace fs = std::filesystem;

namespace {

std::string key_for(const CodeSample& sample) {
  return toolchain_key(sample.language, c_dialect(sample));
}

fs::path write_source(const CodeSample& sample, const fs::path& dir) {
  const fs::path file = dir / scratch_file_name(sample);
  std::ofstream out(file, std::ios::binary);
  out << compilable_text(sample);
  if (!out) {
    throw Error(ErrorCode::kRunnerFailure, "cannot write " + file.string());
  }
  return file;
}

// Compiler output with the scratch directory elided, so reports do not
// depend on temporary paths.
std::string excerpt(std::string text, const fs::path& dir) {
  const std::string prefix = dir.string() + "/";
  for (std::size_t at = text.find(prefix); at != std::string::npos;
       at = text.find(prefix, at)) {
    text.erase(at, prefix.size());
  }
  constexpr std::size_t kMax = 2000;
  return text.size() <= kMax ? text : text.substr(0, kMax) + "...";
}

std::string status_text(const ProcessResult& r) {
  return r.signal ? "signal " + std::to_string(r.signal)
                  : "exit " + std::to_string(r.exit_code);
}

}  // namespace

std::optional<CheckResult> compile_check(const CodeSample& sample,
                                         const VerifySettings& settings) {
  const auto it = settings.toolchains.find(key_for(sample));
  if (it == settings.toolchains.end() || it->second.empty()) return std::nullopt;
  const ScratchDir dir;
  const fs::path file = write_source(sample, dir.path());
  const ProcessResult r =
      run_process(expand_template(it->second, file, dir.path()), {},
                  settings.compile_timeout_s, dir.path());
  CheckResult result;
  result.ok = r.ok();
  if (r.timed_out) {
    result.diagnostics.push_back("compiler timed out");
  } else if (!r.ok()) {
    result.diagnostics.push_back(excerpt(r.err.empty() ? r.out : r.err, dir.path()));
  }
  return result;
}

bool has_runner(const CodeSample& sample, const VerifySettings& settings) {
  const auto it = settings.runners.find(key_for(sample));
  return it != settings.runners.end() && !it->second.run.empty();
}

BuiltProgram::BuiltProgram(const CodeSample& sample, const VerifySettings& settings) {
  if (!has_runner(sample, settings)) {
    throw Error(ErrorCode::kRunnerFailure, "no runner configured for " + key_for(sample));
  }
  const RunnerTemplate& runner = settings.runners.at(key_for(sample));
  const fs::path file = write_source(sample, dir_.path());
  if (!runner.build.empty()) {
    const ProcessResult r = run_process(expand_template(runner.build, file, dir_.path()), {},
                                        settings.compile_timeout_s, dir_.path());
    if (r.timed_out) throw Error(ErrorCode::kTimeout, "build timed out");
    if (!r.ok()) {
      throw Error(ErrorCode::kCompileFailed,
                  excerpt(r.err.empty() ? r.out : r.err, dir_.path()));
    }
  }
  run_ = expand_template(runner.run, file, dir_.path());
}

ProcessResult BuiltProgram::run(const ProgramInput& input,
                                const std::vector<std::string>& extra,
                                double timeout_s) const {
  std::vector<std::string> argv = run_;
  argv.insert(argv.end(), input.args.begin(), input.args.end());
  argv.insert(argv.end(), extra.begin(), extra.end());
  return run_process(argv, input.stdin_data, timeout_s, dir_.path());
}

std::shared_ptr<const ReferenceRuns> ReferenceCache::results(const CodeSample& original,
                                                             const EquivalenceSpec& spec,
                                                             const VerifySettings& settings) {
  const std::string key = key_for(original) + '\0' + to_json(spec).dump() + '\0' + original.text;
  const std::lock_guard lock(mutex_);
  if (const auto it = entries_.find(key); it != entries_.end()) {
    if (it->second.error) throw *it->second.error;
    return it->second.runs;
  }
  Entry& entry = entries_[key];
  try {
    std::optional<BuiltProgram> program;
    try {
      program.emplace(original, settings);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kCompileFailed) {
        throw Error(ErrorCode::kRunnerFailure, std::string("original failed to build: ") + e.what());
      }
      if (e.code() == ErrorCode::kTimeout) {
        throw Error(ErrorCode::kTimeout, "original build timed out");
      }
      throw;
    }
    auto runs = std::make_shared<ReferenceRuns>();
    for (std::size_t i = 0; i < spec.input_suite.size(); ++i) {
      runs->push_back(program->run(spec.input_suite[i], {}, settings.exec_timeout_s));
      if (runs->back().timed_out) {
        throw Error(ErrorCode::kTimeout, "input " + std::to_string(i) + ": original timed out");
      }
    }
    entry.runs = std::move(runs);
    return entry.runs;
  } catch (const Error& e) {
    entry.error = e;
    throw;
  }
}

EquivalenceResult compare_with_reference(const ReferenceRuns& reference,
                                         const BuiltProgram& candidate,
                                         const EquivalenceSpec& spec,
                                         const VerifySettings& settings) {
  const std::vector<std::string> none;
  const std::vector<std::string>& extra =
      spec.extra_params_allowed ? spec.extra_param_defaults : none;
  EquivalenceResult result;
  result.equivalent = true;
  for (std::size_t i = 0; i < spec.input_suite.size() && i < reference.size(); ++i) {
    const ProcessResult& ra = reference[i];
    const ProcessResult rb = candidate.run(spec.input_suite[i], extra, settings.exec_timeout_s);
    const std::string tag = "input " + std::to_string(i) + ": ";
    if (rb.timed_out) throw Error(ErrorCode::kTimeout, tag + "candidate timed out");
    if (ra.exit_code != rb.exit_code || ra.signal != rb.signal) {
      result.equivalent = false;
      result.diagnostics.push_back(tag + status_text(ra) + " vs " + status_text(rb));
    } else if (ra.out != rb.out) {
      result.equivalent = false;
      result.diagnostics.push_back(tag + "stdout differs");
    }
  }
  return result;
}

EquivalenceResult execution_equivalence(const CodeSample& original,
                                        const CodeSample& candidate,
                                        const EquivalenceSpec& spec,
                                        const VerifySettings& settings) {
  if (original.language != candidate.language) {
    throw Error(ErrorCode::kLanguageMismatch,
                "original and candidate languages differ");
  }
  if (!has_runner(original, settings)) {
    throw Error(ErrorCode::kRunnerFailure,
                "no runner configured for " + key_for(original));
  }
  if (spec.input_suite.empty()) {
    throw Error(ErrorCode::kRunnerFailure, "empty input suite");
  }
  ReferenceCache cache;
  const auto reference = cache.results(original, spec, settings);
  std::optional<BuiltProgram> program;
  try {
    program.emplace(candidate, settings);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCompileFailed) {
      throw Error(ErrorCode::kRunnerFailure, std::string("candidate failed to build: ") + e.what());
    }
    if (e.code() == ErrorCode::kTimeout) {
      throw Error(ErrorCode::kTimeout, "candidate build timed out");
    }
    throw;
  }
  return compare_with_reference(*reference, *program, spec, settings);
}

}  // namespace pk
