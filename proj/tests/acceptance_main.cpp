// Acceptance gate: exercises the shipped guarantees end to end and prints
// one [PASS]/[FAIL] line per guarantee. Exits nonzero if any line fails.
//
// RADEVAL_CLI_PATH and RADEVAL_DATA_DIR are injected by the build.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "radeval/annotation.hpp"
#include "radeval/error.hpp"
#include "radeval/factual.hpp"
#include "radeval/graph_reward.hpp"
#include "radeval/nlg_metrics.hpp"
#include "radeval/prf.hpp"
#include "radeval/rng.hpp"
#include "radeval/scst.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;
using radeval::AnnotationGraph;
using radeval::EntityLabel;
using radeval::PRF;
using radeval::RelationLabel;
using radeval::RewardVariant;
using radeval::Rng;
using radeval::ScoreSet;
using radeval::ScoreTuple;

// ------------------------------------------------------------ bookkeeping

class Gate {
 public:
  Gate(int number, std::string title)
      : number_(number), title_(std::move(title)) {}

  void expect(bool ok, const std::string& detail) {
    ++checks_;
    if (!ok) failures_.push_back(detail);
  }

  void fail(const std::string& detail) { expect(false, detail); }

  bool report() const {
    const bool ok = failures_.empty() && checks_ > 0;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << number_ << ". " << title_;
    if (!timing_.empty()) std::cout << " (" << timing_ << ")";
    std::cout << "\n";
    std::size_t shown = 0;
    for (const std::string& failure : failures_) {
      if (shown == 5) {
        std::cout << "         ... and " << failures_.size() - shown
                  << " more\n";
        break;
      }
      std::cout << "         - " << failure << "\n";
      ++shown;
    }
    if (checks_ == 0) std::cout << "         - no checks executed\n";
    return ok;
  }

  void set_timing(std::string text) { timing_ = std::move(text); }

 private:
  int number_;
  std::string title_;
  std::string timing_;
  std::vector<std::string> failures_;
  int checks_ = 0;
};

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string data(const std::string& name) {
  return (fs::path(RADEVAL_DATA_DIR) / name).string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<unreadable: " + path.string() + ">";
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// ------------------------------------------------------------ shared bits

AnnotationGraph shuffled(const AnnotationGraph& graph, Rng& rng) {
  std::vector<radeval::Entity> entities = graph.entities();
  std::vector<radeval::Relation> relations = graph.relations();
  for (std::size_t i = entities.size(); i > 1; --i) {
    std::swap(entities[i - 1], entities[rng.below(i)]);
  }
  for (std::size_t i = relations.size(); i > 1; --i) {
    std::swap(relations[i - 1], relations[rng.below(i)]);
  }
  return AnnotationGraph(std::move(entities), std::move(relations));
}

AnnotationGraph single_entity(const std::string& tokens, EntityLabel label) {
  return AnnotationGraph({{"e1", tokens, label, 0, 0}}, {});
}

// --------------------------------------------------------------- criteria

// 1. The bundled worked example parses from JSONL and reproduces the three
//    golden tuple sets exactly, in under a second.
void criterion_golden_sets(Gate& gate) {
  const auto start = std::chrono::steady_clock::now();

  const auto reports = radeval::load_annotation_jsonl(data("worked_example.jsonl"));
  gate.expect(reports.size() == 1, "worked_example.jsonl holds one report");
  const AnnotationGraph& graph = reports.at(0).graph;

  const std::set<ScoreTuple> golden_e = {
      ScoreTuple::entity("lower", EntityLabel::kAnatDp),
      ScoreTuple::entity("infection", EntityLabel::kObsDp),
      ScoreTuple::entity("right", EntityLabel::kAnatDp),
      ScoreTuple::entity("lobe", EntityLabel::kAnatDp),
      ScoreTuple::entity("opacity", EntityLabel::kObsDp),
      ScoreTuple::entity("pneumothorax", EntityLabel::kObsDa),
      ScoreTuple::entity("increased", EntityLabel::kObsDp),
  };
  const std::set<ScoreTuple> golden_er = {
      ScoreTuple::flagged("lower", EntityLabel::kAnatDp, true),
      ScoreTuple::flagged("infection", EntityLabel::kObsDp, false),
      ScoreTuple::flagged("right", EntityLabel::kAnatDp, true),
      ScoreTuple::flagged("lobe", EntityLabel::kAnatDp, false),
      ScoreTuple::flagged("opacity", EntityLabel::kObsDp, true),
      ScoreTuple::flagged("pneumothorax", EntityLabel::kObsDa, false),
      ScoreTuple::flagged("increased", EntityLabel::kObsDp, true),
  };
  const std::set<ScoreTuple> golden_er_bar = {
      ScoreTuple::edge("lower", EntityLabel::kAnatDp, "lobe",
                       RelationLabel::kModify),
      ScoreTuple::edge("right", EntityLabel::kAnatDp, "lobe",
                       RelationLabel::kModify),
      ScoreTuple::edge("opacity", EntityLabel::kObsDp, "infection",
                       RelationLabel::kSuggestiveOf),
      ScoreTuple::edge("opacity", EntityLabel::kObsDp, "lobe",
                       RelationLabel::kLocatedAt),
      ScoreTuple::edge("increased", EntityLabel::kObsDp, "opacity",
                       RelationLabel::kModify),
      ScoreTuple::entity("infection", EntityLabel::kObsDp),
      ScoreTuple::entity("lobe", EntityLabel::kAnatDp),
      ScoreTuple::entity("pneumothorax", EntityLabel::kObsDa),
  };

  const struct {
    RewardVariant variant;
    const std::set<ScoreTuple>& golden;
    std::size_t size;
  } rows[] = {
      {RewardVariant::kE, golden_e, 7},
      {RewardVariant::kEr, golden_er, 7},
      {RewardVariant::kErBar, golden_er_bar, 8},
  };
  for (const auto& row : rows) {
    const ScoreSet built = build_set(graph, row.variant);
    gate.expect(built.size() == row.size,
                std::string(to_string(row.variant)) + " set has " +
                    std::to_string(row.size) + " elements, got " +
                    std::to_string(built.size()));
    gate.expect(built.elements() == row.golden,
                std::string(to_string(row.variant)) +
                    " set differs from the golden tuples");
  }

  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  gate.set_timing(std::to_string(elapsed.count()) + " ms");
  gate.expect(elapsed.count() < 1000,
              "must finish in under one second, took " +
                  std::to_string(elapsed.count()) + " ms");
}

// 2. Comparing any graph against itself scores exactly (1, 1, 1) in every
//    variant; the empty-set conventions hold exactly.
void criterion_identity(Gate& gate) {
  Rng rng(21);
  for (int round = 0; round < 1000; ++round) {
    const AnnotationGraph graph = gen::random_graph(rng);
    for (const RewardVariant variant : radeval::kRewardVariants) {
      const ScoreSet set = build_set(graph, variant);
      const PRF prf = f_score(set, set);
      if (!(prf.precision == 1.0 && prf.recall == 1.0 && prf.f1 == 1.0)) {
        gate.fail("round " + std::to_string(round) + " " +
                  std::string(to_string(variant)) + ": got f1 " +
                  fmt(prf.f1));
      }
    }
  }
  gate.expect(true, "");  // property loop above records only violations

  const AnnotationGraph empty({}, {});
  const AnnotationGraph nonempty = gen::example_graph();
  for (const RewardVariant variant : radeval::kRewardVariants) {
    const PRF both = rg_reward(empty, empty, variant);
    gate.expect(both.precision == 1.0 && both.recall == 1.0 && both.f1 == 1.0,
                "empty vs empty must be exactly (1, 1, 1)");
    const PRF left = rg_reward(empty, nonempty, variant);
    gate.expect(left.precision == 0.0 && left.recall == 0.0 && left.f1 == 0.0,
                "empty hypothesis must be exactly (0, 0, 0)");
    const PRF right = rg_reward(nonempty, empty, variant);
    gate.expect(
        right.precision == 0.0 && right.recall == 0.0 && right.f1 == 0.0,
        "empty reference must be exactly (0, 0, 0)");
  }
}

// 3. Structural properties over random graph pairs: swap symmetry within
//    1e-12, scores within [0, 1], the relation-aware variant never beats the
//    entity-only variant, and set construction ignores input order.
void criterion_pair_properties(Gate& gate) {
  Rng rng(22);
  int violations = 0;
  auto flag = [&](bool bad, int round, const char* what) {
    if (bad) {
      ++violations;
      if (violations <= 5) {
        gate.fail("round " + std::to_string(round) + ": " + what);
      }
    }
  };

  for (int round = 0; round < 1000; ++round) {
    const AnnotationGraph a = gen::random_graph(rng);
    const AnnotationGraph b = gen::perturbed_copy(rng, a);

    double f1_e = 0.0, f1_er = 0.0;
    for (const RewardVariant variant : radeval::kRewardVariants) {
      const PRF ab = rg_reward(a, b, variant);
      const PRF ba = rg_reward(b, a, variant);
      flag(std::abs(ab.precision - ba.recall) > 1e-12 ||
               std::abs(ab.recall - ba.precision) > 1e-12 ||
               std::abs(ab.f1 - ba.f1) > 1e-12,
           round, "swap symmetry broken");
      for (const double value : {ab.precision, ab.recall, ab.f1}) {
        flag(!(value >= 0.0 && value <= 1.0), round, "score out of [0, 1]");
      }
      if (variant == RewardVariant::kE) f1_e = ab.f1;
      if (variant == RewardVariant::kEr) f1_er = ab.f1;

      const ScoreSet ordered = build_set(a, variant);
      const ScoreSet reordered = build_set(shuffled(a, rng), variant);
      flag(!(ordered.elements() == reordered.elements()), round,
           "set construction depends on input order");
    }
    flag(f1_er > f1_e + 1e-12, round,
         "relation-aware f1 exceeds entity-only f1");
  }
  gate.expect(violations == 0,
              std::to_string(violations) + " property violations");
}

// 4. The worked fixture values match the independent oracles within 1e-6.
void criterion_fixture_oracles(Gate& gate) {
  const auto close = [&](const char* name, double got, double want) {
    gate.expect(std::abs(got - want) <= 1e-6,
                std::string(name) + ": got " + fmt(got) + ", want " +
                    fmt(want));
  };

  // Graph rewards: the lone-node 0.25 case, the two-deletion 0.8 case, and
  // the two-pair corpus mean.
  const AnnotationGraph example = gen::example_graph();
  const AnnotationGraph lone =
      single_entity("opacity", EntityLabel::kObsDp);
  const PRF lone_prf = rg_reward(lone, example, RewardVariant::kE);
  close("entity reward, lone matching node", lone_prf.f1, 0.25);
  close("entity reward vs oracle", lone_prf.f1,
        oracle::rg_prf(lone, example, RewardVariant::kE).f1);

  AnnotationGraph reduced(
      {
          {"e1", "lower", EntityLabel::kAnatDp, 7, 7},
          {"e2", "infection", EntityLabel::kObsDp, 11, 11},
          {"e3", "right", EntityLabel::kAnatDp, 6, 6},
          {"e4", "lobe", EntityLabel::kAnatDp, 8, 8},
          {"e5", "opacity", EntityLabel::kObsDp, 3, 3},
          {"e7", "increased", EntityLabel::kObsDp, 2, 2},
      },
      {
          {"e1", "e4", RelationLabel::kModify},
          {"e3", "e4", RelationLabel::kModify},
          {"e5", "e2", RelationLabel::kSuggestiveOf},
          {"e5", "e4", RelationLabel::kLocatedAt},
      });
  const PRF reduced_prf = rg_reward(reduced, example, RewardVariant::kErBar);
  close("full-variant reward, reduced example", reduced_prf.f1, 0.8);
  close("full-variant reward vs oracle", reduced_prf.f1,
        oracle::rg_prf(reduced, example, RewardVariant::kErBar).f1);

  const std::vector<AnnotationGraph> hyps = {example, lone};
  const std::vector<AnnotationGraph> refs = {
      example, single_entity("edema", EntityLabel::kObsDp)};
  const radeval::CorpusPRF corpus =
      corpus_rg(hyps, refs, RewardVariant::kE);
  close("corpus mean of a perfect and a disjoint pair",
        corpus.aggregate.f1, 0.5);
  close("corpus mean vs oracle", corpus.aggregate.f1,
        (oracle::rg_prf(hyps[0], refs[0], RewardVariant::kE).f1 +
         oracle::rg_prf(hyps[1], refs[1], RewardVariant::kE).f1) /
            2.0);

  // Sequence metrics: the pure brevity-penalty point, the skip-one overlap,
  // and the bundled three-line corpus.
  const auto tok = [](const char* text) {
    return radeval::nlg::tokenize(text);
  };
  const std::vector<radeval::nlg::Tokens> bleu_hyp = {tok("a b c d")};
  const std::vector<radeval::nlg::Tokens> bleu_ref = {tok("a b c d e")};
  const double bleu = radeval::nlg::bleu4(bleu_hyp, bleu_ref);
  close("brevity-penalty point", bleu, std::exp(-0.25));
  close("brevity-penalty point vs oracle", bleu,
        oracle::bleu4(bleu_hyp, bleu_ref));

  const double rouge = radeval::nlg::rouge_l_pair(tok("a b c"), tok("a c"));
  close("skip-one overlap vs oracle", rouge,
        oracle::rouge_l_pair(tok("a b c"), tok("a c")));

  auto read_lines = [](const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
  };
  const auto nlg_hyp =
      radeval::nlg::tokenize_lines(read_lines(data("nlg_hyp.txt")));
  const auto nlg_ref =
      radeval::nlg::tokenize_lines(read_lines(data("nlg_ref.txt")));
  gate.expect(nlg_hyp.size() == 3, "bundled sequence corpus has three lines");
  close("consensus metric on the bundled corpus",
        radeval::nlg::cider_d(nlg_hyp, nlg_ref),
        oracle::cider_d(nlg_hyp, nlg_ref));
}

// 5. The analytic policy gradient matches central finite differences on 100
//    random configurations within 1e-5 relative error.
void criterion_gradient(Gate& gate) {
  Rng rng(23);
  int violations = 0;
  for (int round = 0; round < 100; ++round) {
    const auto policy = gen::random_policy(
        rng, 2 + rng.below(4), 1 + rng.below(4), rng.uniform(0.5, 2.0));
    const auto body = gen::random_body(rng, policy);
    double advantage = rng.uniform(0.1, 1.0);
    if (rng.below(2) == 0) advantage = -advantage;

    const auto analytic =
        radeval::scst::policy_gradient(policy, body, advantage);
    const auto numeric = oracle::fd_gradient(policy, body, advantage);
    double worst = 0.0;
    double scale = 1e-6;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      worst = std::max(worst, std::abs(analytic[i] - numeric[i]));
      scale = std::max({scale, std::abs(analytic[i]), std::abs(numeric[i])});
    }
    if (worst / scale > 1e-5) {
      ++violations;
      if (violations <= 5) {
        gate.fail("round " + std::to_string(round) + ": relative error " +
                  fmt(worst / scale));
      }
    }
  }
  gate.expect(violations == 0,
              std::to_string(violations) + " gradient mismatches");
}

// 6. With the bundled configuration, training reaches at least 90% of the
//    exhaustive optimum for three seeds within the configured 500
//    iterations; a zero advantage yields the exactly-zero gradient; the
//    learning curve is byte-reproducible. All in under two minutes.
void criterion_training(Gate& gate) {
  const auto start = std::chrono::steady_clock::now();

  radeval::scst::TrainConfig config =
      radeval::scst::load_train_config(data("scst_demo.conf"));
  const radeval::scst::ToyTask task =
      radeval::scst::task_by_name(config.task);
  const auto ceiling =
      radeval::scst::exhaustive_max(task, config.variant, config.weights);
  gate.expect(std::abs(ceiling.max_reward - 0.99) <= 1e-12,
              "exhaustive optimum should be 0.99, got " +
                  fmt(ceiling.max_reward));

  for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
    config.seed = seed;
    const auto result = radeval::scst::train_scst(task, config);
    const double target = 0.9 * ceiling.max_reward;
    gate.expect(result.final_greedy.total >= target,
                "seed " + std::to_string(seed) + ": reached " +
                    fmt(result.final_greedy.total) + " < " + fmt(target));
    gate.expect(result.curve.size() ==
                    static_cast<std::size_t>(config.iterations),
                "seed " + std::to_string(seed) + ": curve length");
  }

  Rng rng(24);
  const auto policy = gen::random_policy(rng, 5, 4, 1.0);
  const auto body = gen::random_body(rng, policy);
  bool all_zero = true;
  for (const double g : radeval::scst::policy_gradient(policy, body, 0.0)) {
    all_zero = all_zero && g == 0.0;
  }
  gate.expect(all_zero, "zero advantage must zero every gradient entry");

  config.seed = 1;
  const auto first = radeval::scst::train_scst(task, config);
  const auto second = radeval::scst::train_scst(task, config);
  const std::string csv = radeval::scst::curve_to_csv(first.curve);
  gate.expect(csv == radeval::scst::curve_to_csv(second.curve),
              "two identical runs must emit identical curves");
  gate.expect(csv == slurp(data("scst_demo_curve.golden.csv")),
              "curve must match the bundled golden CSV byte for byte");

  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  gate.set_timing(std::to_string(elapsed.count()) + " ms");
  gate.expect(elapsed.count() < 120000,
              "must finish in under two minutes, took " +
                  std::to_string(elapsed.count()) + " ms");
}

// 7. Label scoring: micro equals a pooled-count recount exactly on random
//    corpora, the bundled fixture scores micro 2/3 and macro 0.8, and
//    identical corpora score exactly one.
void criterion_labels(Gate& gate) {
  Rng rng(25);
  const std::vector<std::string> classes = radeval::headline_classes();
  int violations = 0;
  for (int round = 0; round < 300; ++round) {
    const std::size_t count = 1 + rng.below(6);
    std::vector<radeval::LabelVector> hyps, refs;
    for (std::size_t i = 0; i < count; ++i) {
      const std::string id = "p" + std::to_string(i);
      hyps.push_back(gen::random_labels(rng, id));
      refs.push_back(gen::random_labels(rng, id));
    }
    const auto report = radeval::chexbert_f1(hyps, refs, classes);
    const auto pooled = oracle::pooled_label_counts(hyps, refs, classes);
    const radeval::PRF expected =
        radeval::prf_from_counts(pooled.match, pooled.hyp, pooled.ref);
    if (report.micro.precision != expected.precision ||
        report.micro.recall != expected.recall ||
        report.micro.f1 != expected.f1 ||
        report.micro.match_count != pooled.match) {
      ++violations;
      if (violations <= 5) {
        gate.fail("round " + std::to_string(round) +
                  ": micro differs from the pooled recount");
      }
    }
  }
  gate.expect(violations == 0,
              std::to_string(violations) + " micro/pooled mismatches");

  const auto hyps = radeval::load_label_csv(data("labels_hyp.csv"));
  const auto refs = radeval::load_label_csv(data("labels_ref.csv"));
  const auto fixture = radeval::chexbert_f1(hyps, refs, classes);
  gate.expect(std::abs(fixture.micro.f1 - 2.0 / 3.0) <= 1e-12,
              "bundled fixture micro f1: got " + fmt(fixture.micro.f1));
  gate.expect(fixture.macro.f1 == 0.8,
              "bundled fixture macro f1: got " + fmt(fixture.macro.f1));

  const auto identity = radeval::chexbert_f1(refs, refs, classes);
  gate.expect(identity.micro.f1 == 1.0 && identity.macro.f1 == 1.0,
              "identical corpora must score exactly one");
}

// 8. The command-line tool honors the exit-code contract, aligns reports by
//    id, and emits one per-example row per corpus entry.
void criterion_cli(Gate& gate) {
  const fs::path dir =
      fs::temp_directory_path() /
      ("radeval_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  int counter = 0;
  auto run = [&](const std::string& args) {
    const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string command = std::string(RADEVAL_CLI_PATH) + " " + args +
                                " >" + out.string() + " 2>" + err.string();
    const int status = std::system(command.c_str());
    struct {
      int code;
      std::string out;
    } result{-1, ""};
    if (status != -1 && WIFEXITED(status)) {
      result.code = WEXITSTATUS(status);
    }
    result.out = slurp(out);
    return result;
  };

  const std::string score_args = "score-rg --per-example --hyp " +
                                 data("rg_hyp.jsonl") + " --ref " +
                                 data("rg_ref.jsonl");
  const auto ok = run(score_args);
  gate.expect(ok.code == 0, "clean run must exit 0, got " +
                                std::to_string(ok.code));
  Json report;
  try {
    report = Json::parse(ok.out);
    const std::size_t examples = report["inputs"]["examples"];
    gate.expect(report["per_example"].size() == examples,
                "per-example row count must equal the corpus size");
    gate.expect(examples == 2, "bundled corpus has two reports");
  } catch (const std::exception& e) {
    gate.fail(std::string("report is not valid JSON: ") + e.what());
  }

  // Id alignment, not line alignment: permuting the hypothesis file leaves
  // the metrics unchanged and the rows follow the new order.
  {
    std::ifstream in(data("rg_hyp.jsonl"));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) lines.push_back(line);
    }
    std::ofstream out(dir / "rg_hyp_reversed.jsonl");
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
      out << *it << "\n";
    }
  }
  const auto permuted = run("score-rg --per-example --hyp " +
                            (dir / "rg_hyp_reversed.jsonl").string() +
                            " --ref " + data("rg_ref.jsonl"));
  gate.expect(permuted.code == 0, "permuted run must exit 0");
  try {
    const Json other = Json::parse(permuted.out);
    gate.expect(other["metrics"] == report["metrics"],
                "permuting the hypothesis file must not change the metrics");
    gate.expect(other["per_example"][0]["id"] == "r2",
                "rows must follow the hypothesis order");
    gate.expect(other["per_example"][0]["rg_e"]["f1"].get<double>() == 0.25,
                "the r2 row must carry the r2 scores after permutation");
  } catch (const std::exception& e) {
    gate.fail(std::string("permuted report not valid JSON: ") + e.what());
  }

  // Exit-code matrix.
  {
    std::ofstream orphan(dir / "orphan.jsonl");
    orphan << "{\"id\": \"zz\", \"entities\": {}}\n";
    std::ofstream broken(dir / "broken.jsonl");
    broken << "not json\n";
    std::ofstream shorter(dir / "short.txt");
    shorter << "one line\n";
  }
  const struct {
    std::string args;
    int want;
    const char* what;
  } matrix[] = {
      {"score-rg --hyp " + (dir / "orphan.jsonl").string() + " --ref " +
           data("rg_ref.jsonl"),
       2, "unmatched id -> 2"},
      {"score-rg --hyp " + (dir / "broken.jsonl").string() + " --ref " +
           data("rg_ref.jsonl"),
       3, "malformed input -> 3"},
      {"score-rg --hyp " + (dir / "absent.jsonl").string() + " --ref " +
           data("rg_ref.jsonl"),
       3, "missing file -> 3"},
      {score_args + " --variants bogus", 4, "unknown variant -> 4"},
      {"", 4, "missing subcommand -> 4"},
      {"score-nlg --hyp " + (dir / "short.txt").string() + " --ref " +
           data("nlg_ref.txt"),
       2, "line-count mismatch -> 2"},
  };
  for (const auto& row : matrix) {
    const auto result = run(row.args);
    gate.expect(result.code == row.want,
                std::string(row.what) + ", got " +
                    std::to_string(result.code));
  }
}

}  // namespace

int main() {
  struct Entry {
    int number;
    const char* title;
    std::function<void(Gate&)> body;
  };
  const std::vector<Entry> entries = {
      {1, "bundled worked example reproduces the three golden tuple sets",
       criterion_golden_sets},
      {2, "self comparison scores exactly one across 1000 random graphs",
       criterion_identity},
      {3, "reward algebra holds across 1000 random graph pairs",
       criterion_pair_properties},
      {4, "worked fixture values match the independent oracles within 1e-6",
       criterion_fixture_oracles},
      {5, "analytic policy gradient matches finite differences within 1e-5",
       criterion_gradient},
      {6, "bundled training demo clears 90% of the exhaustive optimum",
       criterion_training},
      {7, "label micro-F1 equals the pooled recount; fixtures score 2/3 and"
          " 0.8",
       criterion_labels},
      {8, "command-line tool honors its exit-code and alignment contract",
       criterion_cli},
  };

  int failed = 0;
  for (const Entry& entry : entries) {
    Gate gate(entry.number, entry.title);
    try {
      entry.body(gate);
    } catch (const std::exception& e) {
      gate.fail(std::string("unhandled exception: ") + e.what());
    }
    if (!gate.report()) ++failed;
  }
  std::cout << "acceptance: " << entries.size() - failed << "/"
            << entries.size() << " passed\n";
  return failed == 0 ? 0 : 1;
}
