#include "sqlfill/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sqlfill/errors.hpp"
#include "sqlfill/evaluator.hpp"
#include "sqlfill/parallel.hpp"
#include "sqlfill/preprocess.hpp"
#include "sqlfill/value_filler.hpp"

namespace sqlfill {

namespace {

// Parsed gold queries in corpus order; unparseable ones are empty when skipping.
std::vector<std::optional<sql::SqlQuery>> parse_golds(const std::vector<Example>& corpus, const SchemaMap& schemas,
                                                      bool skip_invalid, std::size_t& skipped) {
  std::vector<std::optional<sql::SqlQuery>> out;
  skipped = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      out.emplace_back(sql::parse_sql(corpus[i].gold_sql, schemas.at(corpus[i].db_id)));
    } catch (const Error& e) {
      if (!skip_invalid || (e.kind() != ErrorKind::grammar && e.kind() != ErrorKind::binding))
        throw Error(e.kind(), "example " + std::to_string(i) + " gold: " + e.what());
      out.emplace_back();
      ++skipped;
    }
  }
  return out;
}

class Runner {
 public:
  Runner(const RunConfig& config, std::ostream& out, std::ostream& err) : cfg_(config), out_(out), err_(err) {}

  SchemaMap schemas() const { return load_schemas(require(cfg_.tables, "--tables")); }
  std::vector<Example> examples(const SchemaMap& s) const { return load_examples(require(cfg_.examples, "--gold"), s); }

  // Writes the artifact to --out, or to stdout when no path was given.
  void emit(const std::string& text) const {
    if (!cfg_.output) {
      out_ << text;
      return;
    }
    std::ofstream file(*cfg_.output, std::ios::binary);
    if (!file) throw Error(ErrorKind::availability, "cannot write " + cfg_.output->string());
    file << text;
  }

  std::ostream& log() const { return err_; }
  const RunConfig& config() const { return cfg_; }

 private:
  static const std::filesystem::path& require(const std::optional<std::filesystem::path>& p, const char* flag) {
    if (!p) throw Error(ErrorKind::usage, std::string("missing required flag ") + flag);
    return *p;
  }

  const RunConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
};

int cmd_mask(const Runner& r, bool skip_invalid) {
  const auto schemas = r.schemas();
  const auto corpus = r.examples(schemas);
  std::size_t skipped = 0;
  const auto golds = parse_golds(corpus, schemas, skip_invalid, skipped);
  std::ostringstream text;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!golds[i]) continue;
    const auto& schema = schemas.at(corpus[i].db_id);
    text << nlohmann::json{{"db_id", corpus[i].db_id}, {"sql", sql::print_sql(sql::mask_values(*golds[i]), schema)}}.dump()
         << '\n';
  }
  r.emit(text.str());
  r.log() << "mask: " << corpus.size() - skipped << " written, " << skipped << " skipped\n";
  return 0;
}

int cmd_label_columns(const Runner& r, bool skip_invalid) {
  const auto schemas = r.schemas();
  const auto corpus = r.examples(schemas);
  std::size_t skipped = 0;
  const auto golds = parse_golds(corpus, schemas, skip_invalid, skipped);
  std::ostringstream text;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!golds[i]) continue;
    const auto labels = derive_column_labels(*golds[i], schemas.at(corpus[i].db_id));
    text << nlohmann::json{{"db_id", labels.db_id}, {"question", corpus[i].question}, {"column_labels", labels.labels}}
                .dump()
         << '\n';
  }
  r.emit(text.str());
  r.log() << "label-columns: " << corpus.size() - skipped << " written, " << skipped << " skipped\n";
  return 0;
}

int cmd_preprocess(const Runner& r, bool skip_invalid) {
  const auto& cfg = r.config();
  const auto schemas = r.schemas();
  const auto corpus = r.examples(schemas);
  std::size_t skipped = 0;
  const auto golds = parse_golds(corpus, schemas, skip_invalid, skipped);
  const bool with_cells = cfg.setting == CellSetting::with_cell_values;

  std::vector<std::string> lines(corpus.size());
  std::vector<char> fell_back(corpus.size(), 0);
  auto pools = make_pools(cfg.jobs, with_cells ? cfg.db_root : std::nullopt);
  parallel_for(corpus.size(), cfg.jobs, [&](std::size_t i, int worker) {
    const auto& ex = corpus[i];
    const auto& schema = schemas.at(ex.db_id);
    auto pq = segment_question(tokenize(ex.question), schema);
    if (with_cells) {
      if (const Database* db = pools[static_cast<std::size_t>(worker)].find(ex.db_id)) {
        pq = annotate_cell_matches(std::move(pq), *db, schema);
      } else {
        fell_back[i] = 1;
      }
    }
    std::optional<ColumnLabelSet> labels;
    if (golds[i]) labels = derive_column_labels(*golds[i], schema);
    lines[i] = preprocess_record(ex.db_id, pq, enhance_column_names(schema), labels).dump();
  });
  std::ostringstream text;
  for (const auto& line : lines) text << line << '\n';
  r.emit(text.str());
  const auto fallbacks = std::count(fell_back.begin(), fell_back.end(), 1);
  r.log() << "preprocess: " << corpus.size() << " written";
  if (with_cells) r.log() << ", " << fallbacks << " without cell values (database unavailable)";
  r.log() << '\n';
  return 0;
}

int cmd_fill(const Runner& r, bool skip_invalid) {
  const auto& cfg = r.config();
  const auto schemas = r.schemas();
  const auto corpus = r.examples(schemas);

  // Masked queries come from the prediction file, or from masking gold.
  std::vector<std::optional<sql::SqlQuery>> masked(corpus.size());
  std::size_t skipped = 0;
  if (cfg.predictions) {
    const auto preds = load_predictions(*cfg.predictions);
    if (preds.size() != corpus.size())
      throw Error(ErrorKind::usage, "got " + std::to_string(preds.size()) + " predictions for " +
                                        std::to_string(corpus.size()) + " examples");
    for (std::size_t i = 0; i < preds.size(); ++i) {
      try {
        masked[i] = sql::parse_sql(preds[i].sql, schemas.at(corpus[i].db_id));
      } catch (const Error& e) {
        if (!skip_invalid || (e.kind() != ErrorKind::grammar && e.kind() != ErrorKind::binding))
          throw Error(e.kind(), "prediction " + std::to_string(i) + ": " + e.what());
        ++skipped;
      }
    }
  } else {
    auto golds = parse_golds(corpus, schemas, skip_invalid, skipped);
    for (std::size_t i = 0; i < golds.size(); ++i)
      if (golds[i]) masked[i] = sql::mask_values(*golds[i]);
  }

  const FillerOptions options{cfg.threshold, cfg.skip_stopwords};
  std::vector<std::string> lines(corpus.size());
  auto pools = make_pools(cfg.jobs, cfg.db_root);
  parallel_for(corpus.size(), cfg.jobs, [&](std::size_t i, int worker) {
    const auto& ex = corpus[i];
    const auto& schema = schemas.at(ex.db_id);
    if (!masked[i]) {
      // keep line alignment with the corpus for evaluate
      lines[i] = nlohmann::json{{"db_id", ex.db_id}, {"sql", ""}, {"fills", nlohmann::json::array()}}.dump();
      return;
    }
    const auto pq = segment_question(tokenize(ex.question), schema);
    const Database* db = pools[static_cast<std::size_t>(worker)].find(ex.db_id);
    const auto result = fill_heuristic(*masked[i], build_candidates(pq, db, schema, options), schema);
    nlohmann::json fills = nlohmann::json::array();
    for (const auto& f : result.fills)
      fills.push_back({{"slot_id", f.slot_id}, {"source", to_string(f.source)}, {"value", f.value}});
    lines[i] = nlohmann::json{{"db_id", ex.db_id}, {"sql", result.sql}, {"fills", fills}}.dump();
  });
  std::ostringstream text;
  for (const auto& line : lines) text << line << '\n';
  r.emit(text.str());
  r.log() << "fill: " << corpus.size() - skipped << " filled, " << skipped << " skipped\n";
  return 0;
}

int cmd_export_filler(const Runner& r) {
  const auto& cfg = r.config();
  const auto schemas = r.schemas();
  const auto corpus = r.examples(schemas);
  std::ostringstream text;
  const auto stats = export_filler_examples(corpus, schemas, cfg.db_root, {cfg.threshold, cfg.skip_stopwords}, text,
                                            cfg.jobs);
  r.emit(text.str());
  r.log() << "export-filler: " << stats.written << " written, " << stats.skipped << " skipped (unparseable gold)\n";
  return 0;
}

int cmd_evaluate(const Runner& r, std::ostream& out, const std::string& metric, bool no_db) {
  const auto& cfg = r.config();
  const auto schemas = r.schemas();
  const auto corpus = r.examples(schemas);
  if (!cfg.predictions) throw Error(ErrorKind::usage, "missing required flag --pred");
  const auto preds = load_predictions(*cfg.predictions);

  EvalSettings settings;
  settings.exact = metric == "exact" || metric == "both";
  settings.exec = metric == "exec" || metric == "both";
  settings.db_root = no_db ? std::nullopt : cfg.db_root;
  settings.execution.timeout = std::chrono::milliseconds(static_cast<long long>(cfg.timeout_seconds * 1000.0));
  settings.jobs = cfg.jobs;

  const auto report = evaluate_corpus(preds, corpus, schemas, settings);
  out << render_table(report);
  if (cfg.output) {
    std::ofstream file(*cfg.output, std::ios::binary);
    if (!file) throw Error(ErrorKind::availability, "cannot write " + cfg.output->string());
    file << to_json(report).dump(2) << '\n';
  }
  return 0;
}

}  // namespace

void RunConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 100.0))
    throw Error(ErrorKind::usage, "--threshold must lie in [0, 100]");
  if (setting == CellSetting::with_cell_values && !db_root)
    throw Error(ErrorKind::usage, "--setting with_cell_values requires --db");
  if (jobs < 1) throw Error(ErrorKind::usage, "--jobs must be at least 1");
  if (!(timeout_seconds > 0.0)) throw Error(ErrorKind::usage, "--timeout must be positive");
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Value filling, model-input export and evaluation for value-free text-to-SQL output", "sqlfill"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string tables, examples, db, pred, output, setting = "no_cell_values", metric = "both";
  bool no_skip = false, no_db = false, skip_invalid = false;

  auto add_corpus = [&](CLI::App* sub) {
    sub->add_option("--tables", tables, "Spider tables.json")->envname("SQLFILL_TABLES");
    sub->add_option("--gold,--examples", examples, "examples JSON (question, query, db_id)");
    sub->add_option("-o,--out", output, "output path (default: stdout)");
    sub->add_option("--jobs", cfg.jobs, "worker threads for per-example stages")->capture_default_str();
  };
  auto add_db = [&](CLI::App* sub) {
    sub->add_option("--db", db, "database root holding <db_id>/<db_id>.sqlite")->envname("SQLFILL_DB_ROOT");
  };
  auto add_filler = [&](CLI::App* sub) {
    sub->add_option("--threshold", cfg.threshold, "similarity threshold 0-100")->capture_default_str();
    sub->add_flag("--no-skip-stopwords", no_skip, "send every question token to retrieval");
  };
  auto add_skip = [&](CLI::App* sub) {
    sub->add_flag("--skip-invalid-gold", skip_invalid, "skip examples whose gold SQL does not parse");
  };

  auto* preprocess = app.add_subcommand("preprocess", "segment questions and export model inputs");
  add_corpus(preprocess);
  add_db(preprocess);
  add_skip(preprocess);
  preprocess->add_option("--setting", setting, "no_cell_values | with_cell_values")
      ->check(CLI::IsMember({"no_cell_values", "with_cell_values"}))
      ->capture_default_str();

  auto* labels = app.add_subcommand("label-columns", "derive per-column labels from gold SQL");
  add_corpus(labels);
  add_skip(labels);

  auto* mask = app.add_subcommand("mask", "write gold SQL with every value masked");
  add_corpus(mask);
  add_skip(mask);

  auto* fill = app.add_subcommand("fill", "fill <mask> slots with the heuristic filler");
  add_corpus(fill);
  add_db(fill);
  add_filler(fill);
  add_skip(fill);
  fill->add_option("--pred", pred, "masked predictions, JSON lines {db_id, sql}");

  auto* export_filler = app.add_subcommand("export-filler", "export neural-filler training records");
  add_corpus(export_filler);
  add_db(export_filler);
  add_filler(export_filler);

  auto* evaluate = app.add_subcommand("evaluate", "exact set match and execution accuracy");
  add_corpus(evaluate);
  add_db(evaluate);
  evaluate->add_option("--pred", pred, "predictions, JSON lines {db_id, sql}");
  evaluate->add_option("--metric", metric, "exact | exec | both")
      ->check(CLI::IsMember({"exact", "exec", "both"}))
      ->capture_default_str();
  evaluate->add_flag("--no-db", no_db, "evaluate without database contents");
  evaluate->add_option("--timeout", cfg.timeout_seconds, "per-query execution timeout in seconds")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  auto opt_path = [](const std::string& s) -> std::optional<std::filesystem::path> {
    if (s.empty()) return std::nullopt;
    return std::filesystem::path(s);
  };
  cfg.tables = opt_path(tables);
  cfg.examples = opt_path(examples);
  cfg.db_root = opt_path(db);
  cfg.predictions = opt_path(pred);
  cfg.output = opt_path(output);
  cfg.setting = setting == "with_cell_values" ? CellSetting::with_cell_values : CellSetting::no_cell_values;
  cfg.skip_stopwords = !no_skip;

  try {
    cfg.validate();
    Runner runner(cfg, out, err);
    if (preprocess->parsed()) return cmd_preprocess(runner, skip_invalid);
    if (labels->parsed()) return cmd_label_columns(runner, skip_invalid);
    if (mask->parsed()) return cmd_mask(runner, skip_invalid);
    if (fill->parsed()) return cmd_fill(runner, skip_invalid);
    if (export_filler->parsed()) return cmd_export_filler(runner);
    if (evaluate->parsed()) return cmd_evaluate(runner, out, metric, no_db);
    throw Error(ErrorKind::usage, "no subcommand");
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error [internal]: " << e.what() << '\n';
    return exit_code_for(ErrorKind::internal);
  }
}

}  // namespace sqlfill
