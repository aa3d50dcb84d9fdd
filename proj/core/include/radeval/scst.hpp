#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radeval/annotation.hpp"
#include "radeval/graph_reward.hpp"
#include "radeval/rng.hpp"

// Self-contained SCST demonstrator: a tabular bigram policy samples token
// sequences, a deterministic lexicon annotator turns them into annotation
// graphs, and self-critical REINFORCE (greedy decode as baseline) ascends a
// composite of graph reward, ROUGE-L, and a likelihood term. Everything is
// seeded and exactly reproducible; gradients are analytic and finite-
// difference-checkable.

namespace radeval::scst {

// Token inventory for the toy tasks: unique words plus exactly one
// end-of-sequence marker. Throws UsageError on a malformed inventory.
class Vocabulary {
 public:
  Vocabulary(std::vector<std::string> tokens, std::string_view end_marker);

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(std::size_t index) const { return tokens_.at(index); }
  std::size_t end_index() const { return end_index_; }
  // Index of `word`, if present.
  std::optional<std::size_t> find(std::string_view word) const;

 private:
  std::vector<std::string> tokens_;
  std::size_t end_index_;
};

// Renders body token indices back to words / space-joined text.
std::vector<std::string> to_words(const Vocabulary& vocab,
                                  std::span<const std::size_t> body);
std::string to_text(const Vocabulary& vocab,
                    std::span<const std::size_t> body);

// Bigram categorical policy: a logits table indexed by (previous token,
// candidate token), with one extra begin-of-sequence context row. The next
// token is drawn from softmax(logits[context] / temperature). Generation
// stops at the end marker or after max_len body tokens.
struct Policy {
  Vocabulary vocab;
  std::size_t max_len = 1;
  double temperature = 1.0;
  std::vector<double> logits;  // (size()+1) x size(), row-major

  // All-zero logits (uniform next-token distribution in every context).
  // Throws UsageError unless max_len >= 1 and temperature > 0.
  static Policy uniform(Vocabulary vocab, std::size_t max_len,
                        double temperature = 1.0);

  std::size_t context_count() const { return vocab.size() + 1; }
  std::size_t bos_context() const { return vocab.size(); }

  double logit(std::size_t context, std::size_t token) const {
    return logits[context * vocab.size() + token];
  }
  double& logit(std::size_t context, std::size_t token) {
    return logits[context * vocab.size() + token];
  }

  // softmax(logits[context] / temperature), numerically stabilized.
  std::vector<double> probs(std::size_t context) const;
};

// A sampled sequence: body token indices (end marker excluded) plus the
// log-probability of every decision taken — each body token and, when the
// sequence ended by emitting the end marker rather than hitting max_len,
// that final end-marker step too.
struct Sequence {
  std::vector<std::size_t> body;
  double log_prob = 0.0;
};

// Number of categorical decisions behind `body` under `policy`: one per body
// token, plus the end-marker step iff the body is shorter than max_len.
std::size_t decision_count(const Policy& policy,
                           std::span<const std::size_t> body);

// log p(body) under the policy, replaying every decision.
double sequence_log_prob(const Policy& policy,
                         std::span<const std::size_t> body);

// Autoregressive categorical sampling. Deterministic given the rng state.
Sequence sample_sequence(const Policy& policy, Rng& rng);

// Argmax decoding, ties broken toward the lowest token index.
std::vector<std::size_t> greedy_sequence(const Policy& policy);

// Gradient of advantage * log p(body) with respect to the logits table —
// the ascent direction of the self-critical objective, so a positive
// advantage pushes probability toward the taken tokens (at each visited
// context: advantage * (indicator - prob) / temperature).
std::vector<double> policy_gradient(const Policy& policy,
                                    std::span<const std::size_t> body,
                                    double advantage);

// Self-critical form: advantage = reward(sampled.body) - reward(greedy).
template <typename RewardFn>
std::vector<double> scst_gradient(const Policy& policy,
                                  const Sequence& sampled,
                                  std::span<const std::size_t> greedy,
                                  RewardFn&& reward) {
  const double advantage = reward(sampled.body) - reward(greedy);
  return policy_gradient(policy, sampled.body, advantage);
}

// Deterministic stand-in for a learned annotator: lexicon words become
// entities at their token positions; two fixed relation rules add edges.
//   1. adjacent anatomy pair -> modify edge from the first to the second;
//   2. observation followed by an anatomy token within `window` positions
//      -> located_at edge to the nearest such anatomy.
class LexiconAnnotator {
 public:
  explicit LexiconAnnotator(std::map<std::string, EntityLabel> lexicon,
                            std::size_t window = 3);

  AnnotationGraph annotate(std::span<const std::string> words) const;
  AnnotationGraph annotate(const Vocabulary& vocab,
                           std::span<const std::size_t> body) const;

  const std::map<std::string, EntityLabel>& lexicon() const {
    return lexicon_;
  }

 private:
  std::map<std::string, EntityLabel> lexicon_;
  std::size_t window_;
};

// Weights of the composite reward. Throws UsageError if any is negative.
struct CompositeWeights {
  double rg = 0.495;          // graph-reward F1 term
  double sequence = 0.495;    // ROUGE-L term
  double likelihood = 0.01;   // per-token mean log-likelihood term

  void validate() const;
};

// One term-by-term reward evaluation.
struct RewardBreakdown {
  double total = 0.0;       // weighted sum of the three terms below
  double rg = 0.0;          // graph-reward F1 against the task reference
  double rouge = 0.0;       // ROUGE-L against the reference body
  double likelihood = 0.0;  // mean per-decision log-likelihood (<= 0)
};

// A bundled toy optimization target: vocabulary, annotator, and an annotated
// reference sequence.
struct ToyTask {
  std::string name;
  Vocabulary vocab;
  LexiconAnnotator annotator;
  std::vector<std::string> reference_words;  // body only, no end marker
  AnnotationGraph reference_graph;           // annotator output on the words
  std::size_t max_len = 1;
};

// 8-token task, small enough for exhaustive search over all sequences.
ToyTask tiny_task();
// ~45-token task exercising a fuller vocabulary; same rules and reference
// conventions, too large to enumerate.
ToyTask demo_task();
// Lookup by name ("tiny" / "demo"); throws UsageError otherwise.
ToyTask task_by_name(std::string_view name);

// Composite reward of a body sequence under the current policy.
RewardBreakdown composite_reward(const Policy& policy, const ToyTask& task,
                                 RewardVariant variant,
                                 const CompositeWeights& weights,
                                 std::span<const std::size_t> body);

// Training configuration; parsed from a `key = value` file (# comments).
struct TrainConfig {
  std::string task = "tiny";
  RewardVariant variant = RewardVariant::kEr;
  CompositeWeights weights;
  double learning_rate = 0.5;
  double temperature = 1.0;
  int iterations = 500;
  std::uint64_t seed = 1;

  void validate() const;  // throws ParseError on out-of-range values
};

// Parses configuration text / file. Unknown keys and malformed values are
// ParseErrors naming the offending line.
TrainConfig parse_train_config(const std::string& text);
TrainConfig load_train_config(const std::string& path);

// One learning-curve row: the policy state *before* update `iteration` is
// applied. sample_reward / greedy_reward are composite totals; the three
// term columns break down the greedy decode.
struct CurvePoint {
  int iteration = 0;
  double sample_reward = 0.0;
  double greedy_reward = 0.0;
  double rg_term = 0.0;
  double rouge_term = 0.0;
  double nll_term = 0.0;
};

struct TrainResult {
  std::vector<CurvePoint> curve;  // one row per iteration, 0-based
  Policy policy;                  // state after the final update
  RewardBreakdown final_greedy;   // greedy evaluation of the final policy
  std::vector<std::size_t> final_greedy_body;
};

// Runs the SCST loop from a uniform (or supplied) initial policy: sample,
// greedy-decode, annotate both, evaluate the composite reward, take one
// plain gradient-ascent step per iteration. Deterministic given the seed.
// Throws std::runtime_error if a non-finite gradient appears; warns on
// stderr and proceeds if the task reference graph is empty.
TrainResult train_scst(const ToyTask& task, const TrainConfig& config);
TrainResult train_scst(const ToyTask& task, const TrainConfig& config,
                       Policy initial);

// Learning curve as CSV (header + one row per point), formatted so equal
// runs produce identical bytes.
std::string curve_to_csv(std::span<const CurvePoint> curve);

// Exhaustive sweep over every body sequence of length <= task.max_len over
// the non-end tokens, scoring the policy-independent reward terms
// (weights.rg * rg + weights.sequence * rouge; the likelihood term's
// supremum of zero is what a converged deterministic policy attains).
struct ExhaustiveResult {
  double max_reward = 0.0;
  std::vector<std::size_t> best_body;  // first maximizer in expansion order
  std::uint64_t sequence_count = 0;
};

ExhaustiveResult exhaustive_max(const ToyTask& task, RewardVariant variant,
                                const CompositeWeights& weights);

}  // namespace radeval::scst
