#include "perturbkit/bench/report.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "perturbkit/core/error.h"

namespace pk {

using nlohmann::json;

WinCounts count_wins(const std::vector<double>& first,
                     const std::vector<double>& second, double tolerance) {
  if (first.size() != second.size()) {
    throw Error(ErrorCode::kConfigError, "win counts need columns of equal length");
  }
  WinCounts w;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (std::abs(first[i] - second[i]) <= tolerance) {
      ++w.ties;
    } else if (first[i] > second[i]) {
      ++w.first_higher;
    } else {
      ++w.second_higher;
    }
  }
  return w;
}

namespace {

constexpr const char* kMetrics[] = {"s1", "s2", "ss"};

struct Triple {
  double s1 = 0, s2 = 0, ss = 0;
  double get(std::string_view m) const { return m == "s1" ? s1 : m == "s2" ? s2 : ss; }
};

Triple triple_of(const json& summary) {
  const json& f = summary.at("final_score");
  return {f.at("s1").get<double>(), f.at("s2").get<double>(), f.at("ss").get<double>()};
}

json similarity_section(const std::vector<json>& summaries) {
  // mode -> sample -> triple; maps keep the output ordered.
  std::map<std::string, std::map<std::string, Triple>> by_mode;
  json rows = json::array();
  for (const json& s : summaries) {
    if (s.value("type", std::string("summary")) != "summary") continue;
    try {
      const Triple t = triple_of(s);
      const std::string mode = s.at("mode").get<std::string>();
      const std::string sample = s.at("sample").get<std::string>();
      by_mode[mode][sample] = t;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kConfigError, std::string("summary record: ") + e.what());
    }
  }
  for (const auto& [mode, samples] : by_mode) {
    for (const auto& [sample, t] : samples) {
      rows.push_back({{"sample", sample}, {"mode", mode},
                      {"s1", t.s1}, {"s2", t.s2}, {"ss", t.ss}});
    }
  }
  json means = json::object();
  for (const auto& [mode, samples] : by_mode) {
    json m = {{"samples", samples.size()}};
    for (const char* metric : kMetrics) {
      double sum = 0;
      for (const auto& [sample, t] : samples) sum += t.get(metric);
      m[metric] = sum / static_cast<double>(samples.size());
    }
    means[mode] = m;
  }
  json wins = json::object();
  const auto peso = by_mode.find("peso");
  const auto random = by_mode.find("random");
  if (peso != by_mode.end() && random != by_mode.end()) {
    for (const char* metric : kMetrics) {
      std::vector<double> a, b;
      for (const auto& [sample, t] : peso->second) {
        const auto other = random->second.find(sample);
        if (other == random->second.end()) continue;
        a.push_back(t.get(metric));
        b.push_back(other->second.get(metric));
      }
      const WinCounts w = count_wins(a, b);
      wins[metric] = {{"peso_higher", w.first_higher},
                      {"random_higher", w.second_higher},
                      {"ties", w.ties}};
    }
  }
  return {{"rows", rows}, {"means", means}, {"wins", wins}};
}

json filter_section(const std::vector<FilterVerdict>& verdicts) {
  std::map<std::string, int> reasons;
  int kept = 0;
  for (const FilterVerdict& v : verdicts) {
    kept += v.kept;
    for (FilterReason r : v.reasons) ++reasons[std::string(to_string(r))];
  }
  return {{"total", verdicts.size()}, {"kept", kept}, {"reasons", reasons}};
}

json accuracy_section(const std::vector<AccuracyReport>& reports) {
  AccuracyReport merged;
  for (const AccuracyReport& r : reports) {
    for (const auto& [key, cell] : r.cells) {
      merged.cells[key].correct += cell.correct;
      merged.cells[key].total += cell.total;
    }
    merged.missing.insert(merged.missing.end(), r.missing.begin(), r.missing.end());
  }
  for (const auto& [key, cell] : merged.cells) {
    const int k = key.second;
    const auto o = merged.cells.find({Variant::kOriginal, k});
    const auto p = merged.cells.find({Variant::kPerturbed, k});
    merged.delta[k] = (o == merged.cells.end() ? 0.0 : o->second.accuracy()) -
                      (p == merged.cells.end() ? 0.0 : p->second.accuracy());
  }
  return to_json(merged);
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

json report_run(const ReportInputs& inputs) {
  return {{"similarity", similarity_section(inputs.summaries)},
          {"filter", filter_section(inputs.verdicts)},
          {"accuracy", accuracy_section(inputs.accuracy)}};
}

std::string render_text(const json& report) {
  std::ostringstream out;
  const json& sim = report.at("similarity");
  out << "similarity\n";
  out << "  sample                          mode     s1     s2     ss\n";
  for (const json& r : sim.at("rows")) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-30s  %-6s  %s  %s  %s\n",
                  r.at("sample").get<std::string>().c_str(),
                  r.at("mode").get<std::string>().c_str(),
                  fixed(r.at("s1")).c_str(), fixed(r.at("s2")).c_str(),
                  fixed(r.at("ss")).c_str());
    out << line;
  }
  for (const auto& [mode, m] : sim.at("means").items()) {
    out << "  mean " << mode << " (" << m.at("samples").get<int>() << " samples): s1 "
        << fixed(m.at("s1")) << " s2 " << fixed(m.at("s2")) << " ss " << fixed(m.at("ss"))
        << '\n';
  }
  for (const auto& [metric, w] : sim.at("wins").items()) {
    out << "  " << metric << ": peso higher " << w.at("peso_higher").get<int>()
        << ", random higher " << w.at("random_higher").get<int>() << ", ties "
        << w.at("ties").get<int>() << '\n';
  }
  const json& filter = report.at("filter");
  out << "filter\n  kept " << filter.at("kept").get<int>() << " of "
      << filter.at("total").get<int>() << '\n';
  for (const auto& [reason, n] : filter.at("reasons").items()) {
    out << "  " << reason << ": " << n.get<int>() << '\n';
  }
  const json& acc = report.at("accuracy");
  out << "accuracy\n";
  for (const json& c : acc.at("cells")) {
    out << "  " << c.at("variant").get<std::string>() << " mask "
        << c.at("mask_lines").get<int>() << ": " << c.at("correct").get<int>() << "/"
        << c.at("total").get<int>() << " = " << fixed(c.at("accuracy")) << '\n';
  }
  for (const auto& [k, d] : acc.at("delta").items()) {
    out << "  delta mask " << k << ": " << fixed(d) << '\n';
  }
  return out.str();
}

}  // namespace pk
