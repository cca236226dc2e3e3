// Serial reference (jobs = 1) versus the OpenMP path for the per-example stages.
#include <benchmark/benchmark.h>

#include <sstream>

#include "sqlfill/evaluator.hpp"
#include "sqlfill/value_filler.hpp"

using namespace sqlfill;

namespace {

constexpr int kCopies = 20;

struct Corpus {
  SchemaMap schemas = load_schemas(std::filesystem::path(SQLFILL_FIXTURE_DIR) / "tables.json");
  std::vector<Example> examples;
  std::vector<Prediction> predictions;

  Corpus() {
    const auto base = load_examples(std::filesystem::path(SQLFILL_FIXTURE_DIR) / "dev.json", schemas);
    for (int c = 0; c < kCopies; ++c)
      for (const auto& ex : base) {
        examples.push_back(ex);
        predictions.push_back({ex.db_id, ex.gold_sql});
      }
  }
};

const Corpus& corpus() {
  static const Corpus c;
  return c;
}

void BM_Evaluate(benchmark::State& state) {
  const auto& c = corpus();
  EvalSettings settings;
  settings.exec = true;
  settings.db_root = SQLFILL_FIXTURE_DB_ROOT;
  settings.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_corpus(c.predictions, c.examples, c.schemas, settings));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.examples.size()));
}

void BM_ExportFiller(benchmark::State& state) {
  const auto& c = corpus();
  for (auto _ : state) {
    std::ostringstream out;
    export_filler_examples(c.examples, c.schemas, std::filesystem::path(SQLFILL_FIXTURE_DB_ROOT), {}, out,
                           static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(out.str());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.examples.size()));
}

}  // namespace

BENCHMARK(BM_Evaluate)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ExportFiller)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
