#include "sqlfill/value_filler.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <set>
#include <unordered_set>

#include "sqlfill/errors.hpp"
#include "sqlfill/fuzzy.hpp"
#include "sqlfill/parallel.hpp"

namespace sqlfill {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

// Digit tokens are integers or decimals; no signs or exponents.
bool is_numeric_token(std::string_view token) {
  if (token.empty() || !std::isdigit(static_cast<unsigned char>(token.front()))) return false;
  int dots = 0;
  for (char c : token) {
    if (c == '.') {
      ++dots;
    } else if (!std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return dots <= 1 && token.back() != '.';
}

std::string column_label(const DbSchema& schema, std::size_t column) {
  const auto& col = schema.columns[column];
  if (col.is_star()) return "*";
  return schema.tables[*col.table_index].raw_name + "." + col.raw_name;
}

// A digit token or one of the cardinal words one..ten.
std::optional<std::pair<std::string, double>> token_number(std::string_view token) {
  static constexpr std::array<std::string_view, 10> cardinals = {"one", "two",   "three", "four", "five",
                                                                  "six", "seven", "eight", "nine", "ten"};
  if (is_numeric_token(token)) return std::pair{std::string(token), *parse_number(token)};
  for (std::size_t i = 0; i < cardinals.size(); ++i)
    if (token == cardinals[i]) return std::pair{std::to_string(i + 1), static_cast<double>(i + 1)};
  return std::nullopt;
}

bool values_equal(std::string_view a, std::string_view b) {
  if (lower(a) == lower(b)) return true;
  const auto x = parse_number(a);
  const auto y = parse_number(b);
  return x && y && *x == *y;
}

}  // namespace

std::string escape_like(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    if (c == '%' || c == '_' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::vector<CellCandidate> retrieve_cell_candidates(std::string_view token, const Database& db,
                                                    const DbSchema& schema) {
  std::vector<CellCandidate> out;
  if (token.empty()) return out;
  const std::string tok = escape_like(token);
  const std::vector<std::string> patterns = {tok + " %", "% " + tok, "% " + tok + " %", tok};
  for (std::size_t c : schema.text_columns()) {
    const auto& col = schema.columns[c];
    const std::string name = quote_identifier(col.raw_name);
    std::string sql = "SELECT DISTINCT " + name + " FROM " + quote_identifier(schema.tables[*col.table_index].raw_name) +
                      " WHERE ";
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      if (i) sql += " OR ";
      sql += name + " LIKE ? ESCAPE '\\'";
    }
    std::set<std::string> values;
    for (const auto& row : db.query(sql, patterns).rows)
      if (!std::holds_alternative<std::monostate>(row[0])) values.insert(cell_to_text(row[0]));
    for (auto& v : values) out.push_back({*col.table_index, c, v});
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_skipped_token(std::string_view token) {
  static const std::unordered_set<std::string_view> stopwords = {
      "the",   "and",   "for",    "with",  "from",  "that",  "this",  "these", "those", "what",  "which",
      "who",   "whom",  "whose",  "where", "when",  "how",   "many",  "much",  "all",   "each",  "every",
      "any",   "list",  "show",   "give",  "find",  "return", "tell", "there", "their", "its",   "than",
      "more",  "less",  "most",   "least", "does",  "did",   "have",  "has",   "had",   "not",   "are",
      "was",   "were",  "been",   "being", "number", "count", "name", "names", "also",  "both",  "only",
      "other", "some",  "such",   "into",  "over",  "under", "about", "between", "after", "before", "per"};
  return token.size() <= 2 || stopwords.contains(token);
}

std::vector<NumberCandidate> extract_numbers(const PreprocessedQuestion& pq) {
  std::vector<NumberCandidate> out;
  for (const auto& token : pq.tokens)
    if (auto num = token_number(token)) out.push_back({num->first, num->second, out.size()});
  return out;
}

CandidateSet build_candidates(const PreprocessedQuestion& pq, const Database* db, const DbSchema& schema,
                              const FillerOptions& options) {
  CandidateSet out;
  std::size_t collection = 0;
  std::map<std::string, std::vector<CellCandidate>> retrieved;  // memo per distinct token

  for (const auto& token : pq.tokens) {
    if (db && !(options.skip_stopwords && is_skipped_token(token))) {
      auto it = retrieved.find(token);
      if (it == retrieved.end()) it = retrieved.emplace(token, retrieve_cell_candidates(token, *db, schema)).first;
      for (const auto& cand : it->second) {
        if (fuzzy::best_window_ratio(cand.value, pq.tokens) < options.threshold) continue;
        auto& queue = out.projection[{cand.table, cand.column}];
        const bool seen = std::any_of(queue.begin(), queue.end(),
                                      [&](const QueuedValue& q) { return q.value == cand.value; });
        if (!seen) queue.push_back({cand.value, collection++});
      }
    }
    if (auto num = token_number(token)) out.numbers.push_back({num->first, num->second, collection++});
  }
  return out;
}

const char* to_string(FillSource source) {
  switch (source) {
    case FillSource::projection: return "projection";
    case FillSource::number: return "number";
    case FillSource::default_one: return "default_one";
    case FillSource::placeholder: return "placeholder";
  }
  return "placeholder";
}

FillResult fill_heuristic(const sql::SqlQuery& masked, const CandidateSet& cands, const DbSchema& schema) {
  FillResult result;
  result.query = masked;
  std::size_t numbers_used = 0;
  std::map<ColumnKey, std::size_t> projection_used;

  for (const auto& slot : sql::collect_value_slots(masked, schema)) {
    const auto& ctx = slot.context;
    if (ctx.kind == sql::SlotContext::Kind::unresolved || ctx.column >= schema.columns.size())
      throw Error(ErrorKind::context, "slot " + std::to_string(slot.slot_id) + " has no resolvable column context");

    SlotFill fill{slot.slot_id, FillSource::placeholder, std::string(kPlaceholderValue)};
    sql::ValueSlot value = sql::ValueSlot::string(fill.value);
    if (ctx.wants_number()) {
      if (numbers_used < cands.numbers.size()) {
        fill.source = FillSource::number;
        fill.value = cands.numbers[numbers_used++].text;
      } else {
        fill.source = FillSource::default_one;
        fill.value = "1";
      }
      value = sql::ValueSlot::number(fill.value);
    } else if (ctx.table) {
      const ColumnKey key{*ctx.table, ctx.column};
      auto it = cands.projection.find(key);
      std::size_t& used = projection_used[key];
      if (it != cands.projection.end() && used < it->second.size()) {
        fill.source = FillSource::projection;
        fill.value = it->second[used++].value;
        value = sql::ValueSlot::string(fill.value);
      }
    }
    sql::set_slot(result.query, slot.slot_id, value);
    result.fills.push_back(std::move(fill));
  }
  result.sql = sql::print_sql(result.query, schema);
  return result;
}

std::vector<FillerCandidate> ordered_candidates(const CandidateSet& cands, const DbSchema& schema) {
  std::vector<std::pair<std::size_t, FillerCandidate>> indexed;
  for (const auto& [key, queue] : cands.projection)
    for (const auto& q : queue) indexed.push_back({q.collection_index, {q.value, column_label(schema, key.second)}});
  for (const auto& n : cands.numbers) indexed.push_back({n.collection_index, {n.text, "NUMBER"}});
  std::sort(indexed.begin(), indexed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<FillerCandidate> out;
  out.reserve(indexed.size());
  for (auto& [index, cand] : indexed) out.push_back(std::move(cand));
  return out;
}

FillerExample make_filler_example(const Example& example, const sql::SqlQuery& gold, const CandidateSet& cands,
                                  const DbSchema& schema) {
  FillerExample out;
  out.db_id = example.db_id;
  out.question = example.question;
  out.masked_sql = sql::print_sql(sql::mask_values(gold), schema);
  out.candidates = ordered_candidates(cands, schema);
  for (const auto& slot : sql::collect_all_slots(gold, schema)) {
    FillerSlot fs;
    fs.slot_id = slot.slot_id;
    fs.context = slot.context.kind == sql::SlotContext::Kind::limit ? "LIMIT" : column_label(schema, slot.context.column);
    if (!slot.value.is_mask()) {
      fs.gold_value = slot.value.payload;
      for (std::size_t i = 0; i < out.candidates.size(); ++i) {
        if (values_equal(out.candidates[i].value, *fs.gold_value)) {
          fs.gold_index = i;
          break;
        }
      }
    }
    out.slots.push_back(std::move(fs));
  }
  return out;
}

nlohmann::json to_json(const FillerExample& example) {
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& c : example.candidates) candidates.push_back({{"value", c.value}, {"source", c.source}});
  nlohmann::json slots = nlohmann::json::array();
  for (const auto& s : example.slots) {
    slots.push_back({{"slot_id", s.slot_id},
                     {"context", s.context},
                     {"gold_value", s.gold_value ? nlohmann::json(*s.gold_value) : nlohmann::json(nullptr)},
                     {"gold_index", s.gold_index ? nlohmann::json(*s.gold_index) : nlohmann::json(nullptr)}});
  }
  return {{"db_id", example.db_id},
          {"question", example.question},
          {"masked_sql", example.masked_sql},
          {"candidates", candidates},
          {"slots", slots}};
}

ExportStats export_filler_examples(const std::vector<Example>& corpus, const SchemaMap& schemas,
                                   const std::optional<std::filesystem::path>& db_root,
                                   const FillerOptions& options, std::ostream& out, int jobs) {
  std::vector<std::optional<std::string>> lines(corpus.size());
  auto pools = make_pools(jobs, db_root);
  parallel_for(corpus.size(), jobs, [&](std::size_t i, int worker) {
    const Example& ex = corpus[i];
    const DbSchema& schema = schemas.at(ex.db_id);
    sql::SqlQuery gold;
    try {
      gold = sql::parse_sql(ex.gold_sql, schema);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::grammar || e.kind() == ErrorKind::binding) return;
      throw;
    }
    const auto pq = segment_question(tokenize(ex.question), schema);
    const Database* db = pools[static_cast<std::size_t>(worker)].find(ex.db_id);
    const auto cands = build_candidates(pq, db, schema, options);
    lines[i] = to_json(make_filler_example(ex, gold, cands, schema)).dump();
  });
  ExportStats stats;
  for (const auto& line : lines) {
    if (!line) {
      ++stats.skipped;
      continue;
    }
    out << *line << '\n';
    ++stats.written;
  }
  return stats;
}

}  // namespace sqlfill
