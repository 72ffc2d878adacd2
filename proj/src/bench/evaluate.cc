#include <algorithm>
#include <cctype>

#include "perturbkit/bench/tasks.h"
#include "perturbkit/core/error.h"
#include "perturbkit/source/lexer.h"

namespace pk {

using nlohmann::json;

std::string_view to_string(Judge judge) {
  switch (judge) {
    case Judge::kExactMatch: return "exact";
    case Judge::kNormalizedMatch: return "normalized";
    case Judge::kExternal: return "external";
  }
  return "unknown";
}

Judge parse_judge(std::string_view name) {
  if (name == "exact") return Judge::kExactMatch;
  if (name == "normalized") return Judge::kNormalizedMatch;
  if (name == "external") return Judge::kExternal;
  throw Error(ErrorCode::kConfigError, "unknown judge: " + std::string(name));
}

namespace {

std::string without_space(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

std::string rstrip(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

}  // namespace

bool normalized_match(const std::string& expected, const std::string& actual,
                      Language language) {
  try {
    const auto a = source::lex(expected, language);
    const auto b = source::lex(actual, language);
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const source::Token& x, const source::Token& y) {
                        return x.text == y.text;
                      });
  } catch (const Error&) {
    // Fragments such as an unterminated string do not lex.
    return without_space(expected) == without_space(actual);
  }
}

AccuracyReport evaluate_tasks(const std::vector<CompletionTask>& tasks,
                              const std::map<std::string, std::string>& completions,
                              Judge judge, const ExternalJudge& external,
                              bool exclude_missing) {
  if (judge == Judge::kExternal && !external) {
    throw Error(ErrorCode::kConfigError, "external judge selected but not provided");
  }
  AccuracyReport report;
  for (const CompletionTask& t : tasks) {
    AccuracyCell& cell = report.cells[{t.variant, t.mask_lines}];
    const auto it = completions.find(t.task_id);
    if (it == completions.end()) {
      report.missing.push_back(t.task_id);
      if (!exclude_missing) ++cell.total;
      continue;
    }
    bool ok = false;
    switch (judge) {
      case Judge::kExactMatch:
        ok = rstrip(it->second) == rstrip(t.ground_truth);
        break;
      case Judge::kNormalizedMatch:
        ok = normalized_match(t.ground_truth, it->second, t.language);
        break;
      case Judge::kExternal:
        ok = external(t, it->second);
        break;
    }
    ++cell.total;
    cell.correct += ok;
  }
  std::sort(report.missing.begin(), report.missing.end());
  for (const auto& [key, cell] : report.cells) {
    const int k = key.second;
    if (report.delta.count(k)) continue;
    const auto o = report.cells.find({Variant::kOriginal, k});
    const auto p = report.cells.find({Variant::kPerturbed, k});
    const double ao = o == report.cells.end() ? 0.0 : o->second.accuracy();
    const double ap = p == report.cells.end() ? 0.0 : p->second.accuracy();
    report.delta[k] = ao - ap;
  }
  return report;
}

json to_json(const AccuracyReport& report) {
  json cells = json::array();
  for (const auto& [key, cell] : report.cells) {
    cells.push_back({{"variant", to_string(key.first)},
                     {"mask_lines", key.second},
                     {"correct", cell.correct},
                     {"total", cell.total},
                     {"accuracy", cell.accuracy()}});
  }
  json delta = json::object();
  for (const auto& [k, d] : report.delta) delta[std::to_string(k)] = d;
  return {{"cells", cells}, {"delta", delta}, {"missing", report.missing}};
}

AccuracyReport accuracy_from_json(const json& j) {
  try {
    AccuracyReport r;
    for (const json& c : j.at("cells")) {
      const std::string v = c.at("variant").get<std::string>();
      if (v != "original" && v != "perturbed") {
        throw Error(ErrorCode::kConfigError, "unknown variant " + v);
      }
      AccuracyCell& cell = r.cells[{v == "original" ? Variant::kOriginal : Variant::kPerturbed,
                                    c.at("mask_lines").get<int>()}];
      cell.correct = c.at("correct").get<int>();
      cell.total = c.at("total").get<int>();
    }
    for (const auto& [k, d] : j.at("delta").items()) r.delta[std::stoi(k)] = d.get<double>();
    r.missing = j.value("missing", std::vector<std::string>{});
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("accuracy report: ") + e.what());
  }
}

}  // namespace pk
