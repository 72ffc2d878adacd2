#include "perturbkit/bench/tasks.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "perturbkit/core/error.h"
#include "perturbkit/core/rng.h"
#include "perturbkit/source/structure.h"

namespace pk {

using nlohmann::json;
using source::SourceModel;

std::string_view to_string(Variant variant) {
  return variant == Variant::kOriginal ? "original" : "perturbed";
}

PairProvenance provenance_from_trace(const std::vector<IterationRecord>& trace) {
  PairProvenance p;
  auto origin_of = [&](const std::string& name) {
    const auto it = p.original_name.find(name);
    return it == p.original_name.end() ? name : it->second;
  };
  for (const IterationRecord& rec : trace) {
    if (!rec.accepted) continue;
    for (const auto& [from, to] : rec.renames) {
      p.original_name[to] = origin_of(from);
      std::replace(p.perturbed_functions.begin(), p.perturbed_functions.end(), from, to);
    }
    const std::string& ep = rec.entry_point;
    if (ep.empty() || ep == "<module>") continue;
    if (std::find(p.perturbed_functions.begin(), p.perturbed_functions.end(), ep) ==
        p.perturbed_functions.end()) {
      p.perturbed_functions.push_back(ep);
    }
  }
  for (const std::string& f : p.perturbed_functions) {
    if (!p.original_name.count(f)) p.original_name[f] = f;
  }
  return p;
}

namespace {

// Maskable body lines of one function in one variant.
struct Body {
  std::string text_of_name;
  int first = 0;  // 0-based line numbers, inclusive
  int last = -1;
  std::set<int> maskable;

  int length() const { return last - first + 1; }
  bool run_fits(int start, int k) const {
    if (start < first || start + k - 1 > last) return false;
    for (int l = start; l < start + k; ++l) {
      if (!maskable.count(l)) return false;
    }
    return true;
  }
  std::vector<int> runs(int k) const {
    std::vector<int> out;
    for (int s = first; s + k - 1 <= last; ++s) {
      if (run_fits(s, k)) out.push_back(s);
    }
    return out;
  }
};

std::optional<Body> body_of(const SourceModel& m, const std::string& name) {
  for (const source::Function& f : m.functions()) {
    if (f.name != name || f.body.empty()) continue;
    Body b;
    b.first = m.tok(f.body.front().begin).line;
    b.last = m.tok(f.body.back().end - 1).line;
    for (std::size_t i = f.body.front().begin; i < f.body.back().end; ++i) {
      b.maskable.insert(m.tok(i).line);
    }
    return b;
  }
  return std::nullopt;
}

std::vector<std::size_t> line_starts(const std::string& text) {
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') starts.push_back(i + 1);
  }
  return starts;
}

CompletionTask make_task(const CodeSample& sample, Variant variant, int k,
                         int start, const std::string& anchor) {
  const auto starts = line_starts(sample.text);
  const std::size_t begin = starts[static_cast<std::size_t>(start)];
  const std::size_t end = static_cast<std::size_t>(start + k) < starts.size()
                              ? starts[static_cast<std::size_t>(start + k)]
                              : sample.text.size();
  CompletionTask t;
  t.sample_id = sample.id;
  t.language = sample.language;
  t.variant = variant;
  t.mask_lines = k;
  t.prefix = sample.text.substr(0, begin);
  t.ground_truth = sample.text.substr(begin, end - begin);
  t.suffix = sample.text.substr(end);
  t.region_anchor = anchor;
  t.task_id = sample.id + "#" + std::to_string(k) + "#" + std::string(to_string(variant));
  return t;
}

std::optional<SourceModel> parse(const CodeSample& s) {
  try {
    return SourceModel(s.text, s.language, c_dialect(s));
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

TaskBuild build_tasks(const CodeSample& original, const CodeSample& perturbed,
                      const PairProvenance& provenance, std::uint64_t seed) {
  const auto om = parse(original);
  const auto pm = parse(perturbed);
  if (!om || !pm) {
    throw Error(ErrorCode::kRegionUnavailable, "a variant does not parse");
  }
  struct Pair {
    std::string original_name;
    Body in_perturbed;
    Body in_original;
  };
  std::vector<Pair> pairs;
  for (const std::string& name : provenance.perturbed_functions) {
    const auto it = provenance.original_name.find(name);
    const std::string oname = it == provenance.original_name.end() ? name : it->second;
    auto pb = body_of(*pm, name);
    auto ob = body_of(*om, oname);
    if (pb && ob) pairs.push_back({oname, std::move(*pb), std::move(*ob)});
  }
  if (pairs.empty()) {
    throw Error(ErrorCode::kRegionUnavailable,
                "no perturbed function is present in both variants");
  }
  Rng rng(derive_seed(seed, perturbed.id));
  TaskBuild build;
  for (int k : kMaskSizes) {
    std::vector<std::pair<std::size_t, int>> options;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      for (int s : pairs[i].in_perturbed.runs(k)) options.emplace_back(i, s);
    }
    // Shuffle so the first option that also fits the original is a seeded
    // uniform choice among the feasible ones.
    for (std::size_t i = options.size(); i > 1; --i) {
      std::swap(options[i - 1], options[rng.uniform_index(i)]);
    }
    bool emitted = false;
    for (const auto& [pi, start] : options) {
      const Pair& p = pairs[pi];
      const auto oruns = p.in_original.runs(k);
      if (oruns.empty()) continue;
      const double span = std::max(1, p.in_perturbed.length() - k);
      const double ratio = (start - p.in_perturbed.first) / span;
      const double target =
          p.in_original.first + ratio * std::max(1, p.in_original.length() - k);
      const int ostart = *std::min_element(oruns.begin(), oruns.end(), [&](int a, int b) {
        return std::abs(a - target) < std::abs(b - target);
      });
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", ratio);
      const std::string anchor = p.original_name + "@" + buf;
      build.tasks.push_back(make_task(original, Variant::kOriginal, k, ostart, anchor));
      build.tasks.push_back(make_task(perturbed, Variant::kPerturbed, k, start, anchor));
      emitted = true;
      break;
    }
    if (!emitted) {
      build.unavailable.push_back("mask " + std::to_string(k) +
                                  ": no perturbed function has " +
                                  std::to_string(k) + " maskable lines in both variants");
    }
  }
  if (build.tasks.empty()) {
    throw Error(ErrorCode::kRegionUnavailable,
                "no mask size fits: " + build.unavailable.front());
  }
  return build;
}

json to_json(const CompletionTask& t) {
  return {{"task_id", t.task_id},
          {"sample", t.sample_id},
          {"language", to_string(t.language)},
          {"variant", to_string(t.variant)},
          {"mask_lines", t.mask_lines},
          {"region_anchor", t.region_anchor},
          {"prefix", t.prefix},
          {"ground_truth", t.ground_truth},
          {"suffix", t.suffix}};
}

CompletionTask task_from_json(const json& j) {
  try {
    CompletionTask t;
    t.task_id = j.at("task_id").get<std::string>();
    t.sample_id = j.value("sample", std::string{});
    t.language = parse_language(j.value("language", std::string("python")));
    const std::string v = j.at("variant").get<std::string>();
    if (v != "original" && v != "perturbed") {
      throw Error(ErrorCode::kConfigError, "unknown variant " + v);
    }
    t.variant = v == "original" ? Variant::kOriginal : Variant::kPerturbed;
    t.mask_lines = j.at("mask_lines").get<int>();
    t.region_anchor = j.value("region_anchor", std::string{});
    t.prefix = j.at("prefix").get<std::string>();
    t.ground_truth = j.at("ground_truth").get<std::string>();
    t.suffix = j.at("suffix").get<std::string>();
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("task record: ") + e.what());
  }
}

}  // namespace pk
