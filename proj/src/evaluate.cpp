#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "sqlfill/errors.hpp"
#include "sqlfill/evaluator.hpp"
#include "sqlfill/parallel.hpp"

namespace sqlfill {

namespace {

std::optional<double> ratio(std::size_t correct, std::size_t count, bool ran) {
  if (!ran || count == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(count);
}

const LevelStats& stats_for(const EvalReport& r, std::optional<Hardness> level) {
  return level ? r.levels[static_cast<std::size_t>(*level)] : r.all;
}

std::string percent(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *v * 100.0);
  return buf;
}

nlohmann::json optional_json(std::optional<double> v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

std::optional<double> EvalReport::exact_accuracy(std::optional<Hardness> level) const {
  const auto& s = stats_for(*this, level);
  return ratio(s.exact_correct, s.count, has_exact);
}

std::optional<double> EvalReport::exec_accuracy(std::optional<Hardness> level) const {
  const auto& s = stats_for(*this, level);
  return ratio(s.exec_correct, s.count, has_exec);
}

std::vector<Prediction> load_predictions(const std::filesystem::path& path) {
  std::vector<Prediction> out;
  const auto records = read_json_lines(path);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.is_object() || !r.contains("sql") || !r["sql"].is_string())
      throw Error(ErrorKind::format, path.string() + ": record " + std::to_string(i) + " lacks a string 'sql'");
    out.push_back({r.value("db_id", std::string{}), r["sql"].get<std::string>()});
  }
  return out;
}

EvalReport evaluate_corpus(const std::vector<Prediction>& predictions, const std::vector<Example>& corpus,
                           const SchemaMap& schemas, const EvalSettings& settings) {
  if (predictions.size() != corpus.size())
    throw Error(ErrorKind::usage, "got " + std::to_string(predictions.size()) + " predictions for " +
                                      std::to_string(corpus.size()) + " examples");
  if (settings.exec) {
    std::set<std::string> missing;
    for (const auto& ex : corpus) {
      std::error_code ec;
      if (!settings.db_root || !std::filesystem::is_regular_file(database_path(*settings.db_root, ex.db_id), ec))
        missing.insert(ex.db_id);
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
      throw Error(ErrorKind::availability, "execution requested but databases are unavailable: " + list);
    }
  }

  EvalReport report;
  report.has_exact = settings.exact;
  report.has_exec = settings.exec;
  report.verdicts.resize(corpus.size());
  auto pools = make_pools(settings.jobs, settings.db_root);

  parallel_for(corpus.size(), settings.jobs, [&](std::size_t i, int worker) {
    const Example& ex = corpus[i];
    const Prediction& pred = predictions[i];
    const auto it = schemas.find(ex.db_id);
    if (it == schemas.end()) throw Error(ErrorKind::validation, "example " + std::to_string(i) + ": unknown database '" + ex.db_id + "'");
    const DbSchema& schema = it->second;
    if (!pred.db_id.empty() && pred.db_id != ex.db_id)
      throw Error(ErrorKind::format, "prediction " + std::to_string(i) + " is for '" + pred.db_id +
                                         "' but the example uses '" + ex.db_id + "'");

    sql::SqlQuery gold;
    try {
      gold = sql::parse_sql(ex.gold_sql, schema);
    } catch (const Error& e) {
      throw Error(e.kind(), "example " + std::to_string(i) + " gold: " + e.what());
    }
    Verdict& v = report.verdicts[i];
    v.db_id = ex.db_id;
    v.hardness = classify_hardness(gold);

    if (settings.exact) {
      try {
        v.exact_match = exact_set_match(sql::parse_sql(pred.sql, schema), gold);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::grammar && e.kind() != ErrorKind::binding) throw;
        v.exact_match = false;
        v.pred_parse_error = true;
      }
    }
    if (settings.exec) {
      const auto verdict = execution_verdict(pred.sql, ex.gold_sql, pools[static_cast<std::size_t>(worker)].get(ex.db_id),
                                             settings.execution);
      v.exec_match = verdict.match;
      v.exec_timeout = verdict.timed_out;
    }
  });

  for (const auto& v : report.verdicts) {
    for (LevelStats* s : {&report.levels[static_cast<std::size_t>(v.hardness)], &report.all}) {
      ++s->count;
      if (v.exact_match.value_or(false)) ++s->exact_correct;
      if (v.exec_match.value_or(false)) ++s->exec_correct;
    }
  }
  return report;
}

std::string render_table(const EvalReport& report) {
  std::ostringstream out;
  char line[256];
  auto row = [&](const char* label, auto&& cell) {
    std::snprintf(line, sizeof line, "%-22s", label);
    out << line;
    for (auto level : kHardnessLevels) {
      std::snprintf(line, sizeof line, "%12s", cell(std::optional<Hardness>(level)).c_str());
      out << line;
    }
    std::snprintf(line, sizeof line, "%12s", cell(std::optional<Hardness>()).c_str());
    out << line << '\n';
  };
  std::snprintf(line, sizeof line, "%-22s%12s%12s%12s%12s%12s\n", "", "Easy", "Medium", "Hard", "Extra Hard", "All");
  out << line;
  row("count", [&](std::optional<Hardness> l) { return std::to_string(stats_for(report, l).count); });
  if (report.has_exact) row("exact set match", [&](std::optional<Hardness> l) { return percent(report.exact_accuracy(l)); });
  if (report.has_exec) row("execution accuracy", [&](std::optional<Hardness> l) { return percent(report.exec_accuracy(l)); });
  return out.str();
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json levels = nlohmann::json::object();
  auto level_json = [&](std::optional<Hardness> l) {
    nlohmann::json j = {{"count", stats_for(report, l).count}};
    if (report.has_exact) j["exact"] = optional_json(report.exact_accuracy(l));
    if (report.has_exec) j["exec"] = optional_json(report.exec_accuracy(l));
    return j;
  };
  for (auto level : kHardnessLevels) levels[to_string(level)] = level_json(level);
  levels["all"] = level_json(std::nullopt);

  nlohmann::json verdicts = nlohmann::json::array();
  for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
    const auto& v = report.verdicts[i];
    nlohmann::json j = {{"index", i}, {"db_id", v.db_id}, {"hardness", to_string(v.hardness)}};
    if (report.has_exact) {
      j["exact_match"] = v.exact_match.value_or(false);
      j["pred_parse_error"] = v.pred_parse_error;
    }
    if (report.has_exec) {
      j["exec_match"] = v.exec_match.value_or(false);
      j["exec_timeout"] = v.exec_timeout;
    }
    verdicts.push_back(std::move(j));
  }
  return {{"metrics", {{"exact", report.has_exact}, {"exec", report.has_exec}}},
          {"levels", levels},
          {"verdicts", verdicts}};
}

}  // namespace sqlfill
