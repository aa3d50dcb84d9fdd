#include "radeval/scst.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "radeval/error.hpp"
#include "radeval/nlg_metrics.hpp"

namespace radeval::scst {

namespace {

std::string trimmed(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

// Applies `fn(context, taken_token)` to every categorical decision behind
// `body`: one per body token, plus the end-marker step when the body stopped
// short of max_len (the only other way a sequence ends).
template <typename Fn>
void for_each_decision(const Policy& policy, std::span<const std::size_t> body,
                       Fn&& fn) {
  std::size_t context = policy.bos_context();
  for (const std::size_t token : body) {
    fn(context, token);
    context = token;
  }
  if (body.size() < policy.max_len) {
    fn(context, policy.vocab.end_index());
  }
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::string_view end_marker)
    : tokens_(std::move(tokens)), end_index_(0) {
  if (tokens_.empty()) {
    throw UsageError("vocabulary must not be empty");
  }
  std::set<std::string_view> seen;
  std::size_t end_count = 0;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) {
      throw UsageError("vocabulary token " + std::to_string(i) + " is empty");
    }
    if (!seen.insert(tokens_[i]).second) {
      throw UsageError("duplicate vocabulary token \"" + tokens_[i] + "\"");
    }
    if (tokens_[i] == end_marker) {
      end_index_ = i;
      ++end_count;
    }
  }
  if (end_count != 1) {
    throw UsageError("end marker \"" + std::string(end_marker) +
                     "\" must occur exactly once, found " +
                     std::to_string(end_count));
  }
}

std::optional<std::size_t> Vocabulary::find(std::string_view word) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i] == word) return i;
  }
  return std::nullopt;
}

std::vector<std::string> to_words(const Vocabulary& vocab,
                                  std::span<const std::size_t> body) {
  std::vector<std::string> words;
  words.reserve(body.size());
  for (const std::size_t index : body) words.push_back(vocab.token(index));
  return words;
}

std::string to_text(const Vocabulary& vocab,
                    std::span<const std::size_t> body) {
  std::string text;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i > 0) text.push_back(' ');
    text += vocab.token(body[i]);
  }
  return text;
}

Policy Policy::uniform(Vocabulary vocab, std::size_t max_len,
                       double temperature) {
  if (max_len < 1) {
    throw UsageError("max_len must be at least 1");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw UsageError("temperature must be positive and finite");
  }
  Policy policy{std::move(vocab), max_len, temperature, {}};
  policy.logits.assign(policy.context_count() * policy.vocab.size(), 0.0);
  return policy;
}

std::vector<double> Policy::probs(std::size_t context) const {
  const std::size_t n = vocab.size();
  std::vector<double> out(n);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    max_logit = std::max(max_logit, logit(context, k));
  }
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = std::exp((logit(context, k) - max_logit) / temperature);
    total += out[k];
  }
  for (double& p : out) p /= total;
  return out;
}

std::size_t decision_count(const Policy& policy,
                           std::span<const std::size_t> body) {
  return body.size() + (body.size() < policy.max_len ? 1 : 0);
}

double sequence_log_prob(const Policy& policy,
                         std::span<const std::size_t> body) {
  double log_prob = 0.0;
  for_each_decision(policy, body, [&](std::size_t context, std::size_t taken) {
    log_prob += std::log(policy.probs(context)[taken]);
  });
  return log_prob;
}

Sequence sample_sequence(const Policy& policy, Rng& rng) {
  Sequence sequence;
  std::size_t context = policy.bos_context();
  while (true) {
    const std::vector<double> p = policy.probs(context);
    const std::size_t taken = rng.categorical(p);
    sequence.log_prob += std::log(p[taken]);
    if (taken == policy.vocab.end_index()) break;
    sequence.body.push_back(taken);
    if (sequence.body.size() == policy.max_len) break;
    context = taken;
  }
  return sequence;
}

std::vector<std::size_t> greedy_sequence(const Policy& policy) {
  std::vector<std::size_t> body;
  std::size_t context = policy.bos_context();
  while (true) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < policy.vocab.size(); ++k) {
      if (policy.logit(context, k) > policy.logit(context, best)) best = k;
    }
    if (best == policy.vocab.end_index()) break;
    body.push_back(best);
    if (body.size() == policy.max_len) break;
    context = best;
  }
  return body;
}

std::vector<double> policy_gradient(const Policy& policy,
                                    std::span<const std::size_t> body,
                                    double advantage) {
  std::vector<double> grad(policy.logits.size(), 0.0);
  if (advantage == 0.0) return grad;  // exactly zero, no roundoff residue
  const std::size_t n = policy.vocab.size();
  for_each_decision(policy, body, [&](std::size_t context, std::size_t taken) {
    const std::vector<double> p = policy.probs(context);
    for (std::size_t k = 0; k < n; ++k) {
      const double indicator = k == taken ? 1.0 : 0.0;
      grad[context * n + k] +=
          advantage * (indicator - p[k]) / policy.temperature;
    }
  });
  return grad;
}

LexiconAnnotator::LexiconAnnotator(std::map<std::string, EntityLabel> lexicon,
                                   std::size_t window)
    : lexicon_(std::move(lexicon)), window_(window) {
  if (window_ < 1) {
    throw UsageError("annotator window must be at least 1");
  }
}

AnnotationGraph LexiconAnnotator::annotate(
    std::span<const std::string> words) const {
  struct Hit {
    std::size_t pos;
    EntityLabel label;
  };
  std::vector<Hit> hits;
  std::vector<Entity> entities;
  for (std::size_t pos = 0; pos < words.size(); ++pos) {
    const auto it = lexicon_.find(words[pos]);
    if (it == lexicon_.end()) continue;
    hits.push_back({pos, it->second});
    entities.push_back({"t" + std::to_string(pos), words[pos], it->second,
                        static_cast<std::int64_t>(pos),
                        static_cast<std::int64_t>(pos)});
  }
  std::vector<Relation> relations;
  // Rule 1: anatomy at position p and p+1 -> modify edge first -> second.
  for (std::size_t i = 0; i + 1 < hits.size(); ++i) {
    if (hits[i].label == EntityLabel::kAnatDp &&
        hits[i + 1].label == EntityLabel::kAnatDp &&
        hits[i + 1].pos == hits[i].pos + 1) {
      relations.push_back({"t" + std::to_string(hits[i].pos),
                           "t" + std::to_string(hits[i + 1].pos),
                           RelationLabel::kModify});
    }
  }
  // Rule 2: observation -> located_at -> nearest anatomy within the window.
  for (const Hit& obs : hits) {
    if (obs.label == EntityLabel::kAnatDp) continue;
    const Hit* nearest = nullptr;
    for (const Hit& anat : hits) {
      if (anat.label != EntityLabel::kAnatDp) continue;
      if (anat.pos <= obs.pos || anat.pos > obs.pos + window_) continue;
      if (nearest == nullptr || anat.pos < nearest->pos) nearest = &anat;
    }
    if (nearest != nullptr) {
      relations.push_back({"t" + std::to_string(obs.pos),
                           "t" + std::to_string(nearest->pos),
                           RelationLabel::kLocatedAt});
    }
  }
  return AnnotationGraph(std::move(entities), std::move(relations));
}

AnnotationGraph LexiconAnnotator::annotate(
    const Vocabulary& vocab, std::span<const std::size_t> body) const {
  return annotate(to_words(vocab, body));
}

void CompositeWeights::validate() const {
  for (const double w : {rg, sequence, likelihood}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw UsageError("composite weights must be non-negative and finite");
    }
  }
}

ToyTask tiny_task() {
  Vocabulary vocab(
      {"opacity", "effusion", "left", "lobe", "lung", "in", "the", "<end>"},
      "<end>");
  LexiconAnnotator annotator({{"opacity", EntityLabel::kObsDp},
                              {"effusion", EntityLabel::kObsDp},
                              {"left", EntityLabel::kAnatDp},
                              {"lobe", EntityLabel::kAnatDp},
                              {"lung", EntityLabel::kAnatDp}});
  std::vector<std::string> reference = {"opacity", "left", "lobe"};
  AnnotationGraph reference_graph = annotator.annotate(reference);
  return {"tiny",           std::move(vocab), std::move(annotator),
          std::move(reference), std::move(reference_graph), 6};
}

ToyTask demo_task() {
  std::vector<std::string> tokens = {
      // anatomy
      "lung", "lungs", "lobe", "heart", "mediastinum", "diaphragm", "pleura",
      "chest", "rib", "spine", "apex", "base", "hilum", "left", "right",
      "upper", "lower", "bilateral",
      // observations
      "opacity", "effusion", "consolidation", "edema", "atelectasis",
      "pneumothorax", "cardiomegaly", "infiltrate", "nodule", "mass",
      "congestion", "thickening", "increased",
      // connectives
      "in", "the", "of", "at", "is", "are", "no", "with", "and", "seen",
      "small", "large", "mild", "stable",
      // end marker
      "<end>"};
  Vocabulary vocab(std::move(tokens), "<end>");
  std::map<std::string, EntityLabel> lexicon;
  for (const char* word : {"lung", "lungs", "lobe", "heart", "mediastinum",
                           "diaphragm", "pleura", "chest", "rib", "spine",
                           "apex", "base", "hilum", "left", "right", "upper",
                           "lower", "bilateral"}) {
    lexicon.emplace(word, EntityLabel::kAnatDp);
  }
  for (const char* word :
       {"opacity", "effusion", "consolidation", "edema", "atelectasis",
        "pneumothorax", "cardiomegaly", "infiltrate", "nodule", "mass",
        "congestion", "thickening", "increased"}) {
    lexicon.emplace(word, EntityLabel::kObsDp);
  }
  LexiconAnnotator annotator(std::move(lexicon));
  std::vector<std::string> reference = {"increased", "opacity", "in",
                                        "the",       "left",    "lower",
                                        "lobe"};
  AnnotationGraph reference_graph = annotator.annotate(reference);
  return {"demo",           std::move(vocab), std::move(annotator),
          std::move(reference), std::move(reference_graph), 8};
}

ToyTask task_by_name(std::string_view name) {
  if (name == "tiny") return tiny_task();
  if (name == "demo") return demo_task();
  throw UsageError("unknown task \"" + std::string(name) +
                   "\" (expected tiny or demo)");
}

RewardBreakdown composite_reward(const Policy& policy, const ToyTask& task,
                                 RewardVariant variant,
                                 const CompositeWeights& weights,
                                 std::span<const std::size_t> body) {
  RewardBreakdown out;
  const std::vector<std::string> words = to_words(task.vocab, body);
  const AnnotationGraph graph = task.annotator.annotate(words);
  out.rg = rg_reward(graph, task.reference_graph, variant).f1;
  out.rouge = nlg::rouge_l_pair(words, task.reference_words);
  out.likelihood = sequence_log_prob(policy, body) /
                   static_cast<double>(decision_count(policy, body));
  out.total = weights.rg * out.rg + weights.sequence * out.rouge +
              weights.likelihood * out.likelihood;
  return out;
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ParseError("learning_rate must be non-negative and finite");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ParseError("temperature must be positive and finite");
  }
  if (iterations < 0) {
    throw ParseError("iterations must be non-negative");
  }
  for (const double w : {weights.rg, weights.sequence, weights.likelihood}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ParseError("reward weights must be non-negative and finite");
    }
  }
}

namespace {

double parse_config_double(const std::string& value) {
  std::size_t consumed = 0;
  double out;
  try {
    out = std::stod(value, &consumed);
  } catch (const std::exception&) {
    throw ParseError("invalid number \"" + value + "\"");
  }
  if (consumed != value.size()) {
    throw ParseError("invalid number \"" + value + "\"");
  }
  return out;
}

}  // namespace

TrainConfig parse_train_config(const std::string& text) {
  TrainConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trimmed(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected key = value");
    }
    const std::string key = trimmed(stripped.substr(0, eq));
    const std::string value = trimmed(stripped.substr(eq + 1));
    try {
      if (key == "task") {
        if (value != "tiny" && value != "demo") {
          throw ParseError("unknown task \"" + value +
                           "\" (expected tiny or demo)");
        }
        config.task = value;
      } else if (key == "variant") {
        const auto variant = parse_reward_variant(value);
        if (!variant) {
          throw ParseError("unknown variant \"" + value +
                           "\" (expected e, er or er_bar)");
        }
        config.variant = *variant;
      } else if (key == "rg_weight") {
        config.weights.rg = parse_config_double(value);
      } else if (key == "rouge_weight") {
        config.weights.sequence = parse_config_double(value);
      } else if (key == "nll_weight") {
        config.weights.likelihood = parse_config_double(value);
      } else if (key == "learning_rate") {
        config.learning_rate = parse_config_double(value);
      } else if (key == "temperature") {
        config.temperature = parse_config_double(value);
      } else if (key == "iterations") {
        try {
          config.iterations = std::stoi(value);
        } catch (const std::exception&) {
          throw ParseError("invalid integer \"" + value + "\"");
        }
      } else if (key == "seed") {
        try {
          config.seed = std::stoull(value);
        } catch (const std::exception&) {
          throw ParseError("invalid seed \"" + value + "\"");
        }
      } else {
        throw ParseError("unknown key \"" + key + "\"");
      }
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

TrainConfig load_train_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_train_config(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

TrainResult train_scst(const ToyTask& task, const TrainConfig& config,
                       Policy initial) {
  config.validate();
  if (task.reference_graph.empty()) {
    std::cerr << "warning: task \"" << task.name
              << "\" has an empty reference graph; the graph-reward term "
                 "will compare against nothing\n";
  }
  TrainResult result{{}, std::move(initial), {}, {}};
  Policy& policy = result.policy;
  Rng rng(config.seed);
  result.curve.reserve(static_cast<std::size_t>(config.iterations));
  for (int iteration = 0; iteration < config.iterations; ++iteration) {
    const std::vector<std::size_t> greedy = greedy_sequence(policy);
    const RewardBreakdown greedy_eval =
        composite_reward(policy, task, config.variant, config.weights, greedy);
    const Sequence sampled = sample_sequence(policy, rng);
    const RewardBreakdown sample_eval = composite_reward(
        policy, task, config.variant, config.weights, sampled.body);
    result.curve.push_back({iteration, sample_eval.total, greedy_eval.total,
                            greedy_eval.rg, greedy_eval.rouge,
                            greedy_eval.likelihood});
    const double advantage = sample_eval.total - greedy_eval.total;
    const std::vector<double> grad =
        policy_gradient(policy, sampled.body, advantage);
    for (const double g : grad) {
      if (!std::isfinite(g)) {
        throw std::runtime_error(
            "non-finite gradient at iteration " + std::to_string(iteration) +
            " (advantage " + std::to_string(advantage) + ")");
      }
    }
    for (std::size_t i = 0; i < grad.size(); ++i) {
      policy.logits[i] += config.learning_rate * grad[i];
    }
  }
  result.final_greedy_body = greedy_sequence(policy);
  result.final_greedy = composite_reward(policy, task, config.variant,
                                         config.weights,
                                         result.final_greedy_body);
  return result;
}

TrainResult train_scst(const ToyTask& task, const TrainConfig& config) {
  return train_scst(
      task, config,
      Policy::uniform(task.vocab, task.max_len, config.temperature));
}

std::string curve_to_csv(std::span<const CurvePoint> curve) {
  std::string out = "iteration,sample_reward,greedy_reward,rg_term,rouge_term,nll_term\n";
  char row[256];
  for (const CurvePoint& point : curve) {
    std::snprintf(row, sizeof(row), "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  point.iteration, point.sample_reward, point.greedy_reward,
                  point.rg_term, point.rouge_term, point.nll_term);
    out += row;
  }
  return out;
}

ExhaustiveResult exhaustive_max(const ToyTask& task, RewardVariant variant,
                                const CompositeWeights& weights) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < task.vocab.size(); ++i) {
    if (i != task.vocab.end_index()) candidates.push_back(i);
  }
  const ScoreSet reference_set = build_set(task.reference_graph, variant);
  ExhaustiveResult result;
  result.max_reward = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> body;
  auto evaluate = [&] {
    const std::vector<std::string> words = to_words(task.vocab, body);
    const double rg =
        f_score(build_set(task.annotator.annotate(words), variant),
                reference_set)
            .f1;
    const double rouge = nlg::rouge_l_pair(words, task.reference_words);
    const double reward = weights.rg * rg + weights.sequence * rouge;
    ++result.sequence_count;
    if (reward > result.max_reward) {
      result.max_reward = reward;
      result.best_body = body;
    }
  };
  auto expand = [&](auto&& self) -> void {
    evaluate();
    if (body.size() == task.max_len) return;
    for (const std::size_t token : candidates) {
      body.push_back(token);
      self(self);
      body.pop_back();
    }
  };
  expand(expand);
  return result;
}

}  // namespace radeval::scst
