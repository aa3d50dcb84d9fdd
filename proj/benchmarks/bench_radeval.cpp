// Microbenchmarks for the scoring hot paths. RADEVAL_DATA_DIR is injected
// by the build so the parsing benchmark runs over the bundled example.

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "radeval/annotation.hpp"
#include "radeval/graph_reward.hpp"
#include "radeval/nlg_metrics.hpp"
#include "radeval/rng.hpp"
#include "radeval/scst.hpp"

namespace {

using radeval::AnnotationGraph;
using radeval::RewardVariant;
using radeval::Rng;

const std::string& example_line() {
  static const std::string line = [] {
    std::ifstream in(std::string(RADEVAL_DATA_DIR) + "/worked_example.jsonl");
    std::string text;
    std::getline(in, text);
    return text;
  }();
  return line;
}

const AnnotationGraph& example_graph_ref() {
  static const AnnotationGraph graph =
      radeval::parse_report_annotation(example_line()).graph;
  return graph;
}

// Deterministic word-salad corpus, large enough to exercise the n-gram and
// LCS paths beyond toy sizes.
std::vector<radeval::nlg::Tokens> synthetic_corpus(std::uint64_t seed,
                                                   std::size_t lines) {
  static const std::vector<std::string> pool = {
      "no",     "acute",  "cardiopulmonary", "process", "small", "left",
      "right",  "pleural", "effusion",       "heart",   "size",  "normal",
      "lungs",  "clear",  "mild",            "edema",   "focal", "opacity",
      "lower",  "lobe",   "stable",          "chronic", "change", "is",
      "the",    "and",    "are",             "in",      ".",     ","};
  Rng rng(seed);
  std::vector<radeval::nlg::Tokens> corpus;
  corpus.reserve(lines);
  for (std::size_t i = 0; i < lines; ++i) {
    radeval::nlg::Tokens tokens;
    const std::size_t length = 8 + rng.below(9);
    for (std::size_t t = 0; t < length; ++t) {
      tokens.push_back(pool[rng.below(pool.size())]);
    }
    corpus.push_back(std::move(tokens));
  }
  return corpus;
}

void BM_ParseAnnotation(benchmark::State& state) {
  const std::string& line = example_line();
  for (auto _ : state) {
    benchmark::DoNotOptimize(radeval::parse_report_annotation(line));
  }
}
BENCHMARK(BM_ParseAnnotation);

void BM_GraphReward(benchmark::State& state) {
  const auto variant = static_cast<RewardVariant>(state.range(0));
  const AnnotationGraph& graph = example_graph_ref();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rg_reward(graph, graph, variant));
  }
}
BENCHMARK(BM_GraphReward)->DenseRange(0, 2)->ArgNames({"variant"});

void BM_Bleu4(benchmark::State& state) {
  const auto hyps = synthetic_corpus(1, 200);
  const auto refs = synthetic_corpus(2, 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(radeval::nlg::bleu4(hyps, refs));
  }
}
BENCHMARK(BM_Bleu4);

void BM_RougeL(benchmark::State& state) {
  const auto hyps = synthetic_corpus(3, 200);
  const auto refs = synthetic_corpus(4, 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(radeval::nlg::rouge_l(hyps, refs));
  }
}
BENCHMARK(BM_RougeL);

void BM_CiderD(benchmark::State& state) {
  const auto hyps = synthetic_corpus(5, 200);
  const auto refs = synthetic_corpus(6, 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(radeval::nlg::cider_d(hyps, refs));
  }
}
BENCHMARK(BM_CiderD);

void BM_Annotate(benchmark::State& state) {
  const radeval::scst::ToyTask task = radeval::scst::demo_task();
  std::vector<std::string> words;
  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    words.push_back(task.vocab.token(rng.below(task.vocab.size())));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(task.annotator.annotate(words));
  }
}
BENCHMARK(BM_Annotate);

void BM_TrainIteration(benchmark::State& state) {
  const radeval::scst::ToyTask task = radeval::scst::tiny_task();
  radeval::scst::TrainConfig config;
  config.iterations = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(radeval::scst::train_scst(task, config));
  }
}
BENCHMARK(BM_TrainIteration);

}  // namespace

BENCHMARK_MAIN();
