#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "hypgame/experiment.hpp"
#include "hypgame/rng.hpp"
#include "hypgame/serialization.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

double percentile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_text(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::io, "failed writing " + path.string());
}

}  // namespace

ConfidenceInterval bootstrap_ci(std::span<const double> values, std::size_t resamples, std::uint64_t seed,
                                double confidence) {
  if (values.empty()) throw Error(ErrorCode::undefined_metric, "bootstrap of an empty sample");
  if (resamples < 1) throw Error(ErrorCode::invalid_input, "bootstrap needs at least one resample");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::invalid_input, "confidence must lie strictly between 0 and 1");
  }
  const double n = static_cast<double>(values.size());
  ConfidenceInterval ci;
  ci.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  Rng rng(seed);
  std::vector<double> means(resamples);
  for (auto& m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += values[rng.below(values.size())];
    m = sum / n;
  }
  std::sort(means.begin(), means.end());
  const double alpha = 1.0 - confidence;
  ci.low = std::min(percentile(means, alpha / 2.0), ci.mean);
  ci.high = std::max(percentile(means, 1.0 - alpha / 2.0), ci.mean);
  return ci;
}

std::uint64_t bootstrap_seed(std::uint64_t base, const std::string& stratum, const std::string& method,
                             const std::string& metric) {
  return base ^ fnv1a64(stratum + "|" + method + "|" + metric);
}

MetricReport aggregate_rows(std::vector<ResultRow> rows, const BootstrapOptions& options) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.method, a.run_id) < std::tie(b.method, b.run_id);
  });
  MetricReport report;
  report.bootstrap = options;

  std::vector<std::pair<std::string, std::function<bool(const ResultRow&)>>> strata;
  strata.emplace_back("all", [](const ResultRow&) { return true; });
  const bool corruption = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return !r.error_type.empty(); });
  if (corruption) {
    std::set<std::string> types{"wrong_entity", "wrong_relation", "unsupported_step"};
    std::set<std::string> levels{"L1", "L2"};
    std::set<std::string> fractions;
    for (const auto& r : rows) {
      if (!r.error_type.empty()) types.insert(r.error_type);
      if (!r.difficulty.empty()) levels.insert(r.difficulty);
      if (!r.fraction.empty()) fractions.insert(r.fraction);
    }
    for (const auto& t : types) {
      strata.emplace_back("error_type=" + t, [t](const ResultRow& r) { return r.error_type == t; });
    }
    for (const auto& d : levels) {
      strata.emplace_back("difficulty=" + d, [d](const ResultRow& r) { return r.difficulty == d; });
    }
    for (const auto& f : fractions) {
      strata.emplace_back("fraction=" + f, [f](const ResultRow& r) { return r.fraction == f; });
    }
  }

  std::set<std::string> methods;
  for (const auto& r : rows) methods.insert(r.method);

  for (const auto& [name, member] : strata) {
    bool any = false;
    for (const auto& method : methods) {
      std::map<std::string, std::vector<double>> by_metric;
      for (const auto& r : rows) {
        if (r.method != method || !member(r)) continue;
        for (const auto& [metric, value] : r.metrics) {
          if (std::isfinite(value)) by_metric[metric].push_back(value);
        }
      }
      for (const auto& [metric, values] : by_metric) {
        any = true;
        const auto ci = bootstrap_ci(values, options.resamples, bootstrap_seed(options.seed, name, method, metric),
                                     options.confidence);
        report.aggregates.push_back({name, method, metric, values.size(), ci.mean, ci.low, ci.high});
      }
    }
    if (!any) report.empty_strata.push_back(name);
  }
  report.rows = std::move(rows);
  return report;
}

MetricReport aggregate_report(const fs::path& results_dir, const BootstrapOptions& options) {
  const fs::path runs = results_dir / "runs";
  std::vector<fs::path> files;
  if (fs::is_directory(runs)) {
    for (const auto& entry : fs::directory_iterator(runs)) {
      const fs::path f = entry.path() / "output.json";
      if (entry.is_directory() && fs::exists(f)) files.push_back(f);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw Error(ErrorCode::invalid_input, "no completed run under " + results_dir.string());
  }
  std::vector<ResultRow> rows;
  for (const auto& f : files) {
    std::ifstream in(f);
    try {
      rows.push_back(json::parse(in).at("row").get<ResultRow>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::invalid_input, f.string() + ": " + e.what());
    }
  }
  return aggregate_rows(std::move(rows), options);
}

void emit_report(const MetricReport& report, const fs::path& out_dir, bool plot_data) {
  fs::create_directories(out_dir);
  write_text(out_dir / "report.json", json(report).dump(2) + "\n");

  std::string agg = "stratum,method,metric,n,mean,ci_low,ci_high\n";
  for (const auto& a : report.aggregates) {
    agg += csv_field(a.stratum) + "," + csv_field(a.method) + "," + csv_field(a.metric) + "," +
           std::to_string(a.n) + "," + fmt(a.mean) + "," + fmt(a.ci_low) + "," + fmt(a.ci_high) + "\n";
  }
  for (const auto& s : report.empty_strata) agg += "# empty stratum: " + s + "\n";
  write_text(out_dir / "aggregates.csv", agg);

  std::set<std::string> metric_names;
  for (const auto& r : report.rows) {
    for (const auto& [m, _] : r.metrics) metric_names.insert(m);
  }
  std::string rows = "run_id,pathway_id,method,seed,error_type,difficulty,fraction";
  for (const auto& m : metric_names) rows += "," + csv_field(m);
  rows += "\n";
  for (const auto& r : report.rows) {
    rows += csv_field(r.run_id) + "," + csv_field(r.pathway_id) + "," + csv_field(r.method) + "," +
            std::to_string(r.seed) + "," + csv_field(r.error_type) + "," + csv_field(r.difficulty) + "," +
            csv_field(r.fraction);
    for (const auto& m : metric_names) {
      auto it = r.metrics.find(m);
      rows += ",";
      if (it != r.metrics.end()) rows += fmt(it->second);
    }
    rows += "\n";
  }
  write_text(out_dir / "rows.csv", rows);

  if (plot_data) {
    std::string tsv = "stratum\tmethod\tmetric\tmean\terr_low\terr_high\n";
    for (const auto& a : report.aggregates) {
      tsv += a.stratum + "\t" + a.method + "\t" + a.metric + "\t" + fmt(a.mean) + "\t" + fmt(a.mean - a.ci_low) +
             "\t" + fmt(a.ci_high - a.mean) + "\n";
    }
    write_text(out_dir / "plot_data.tsv", tsv);
  }
}

MetricReport read_report_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  try {
    return json::parse(in).get<MetricReport>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_input, path.string() + ": " + e.what());
  }
}

}  // namespace hypgame
