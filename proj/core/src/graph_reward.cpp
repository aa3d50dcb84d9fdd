#include "radeval/graph_reward.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include "radeval/error.hpp"

namespace radeval {

std::string_view to_string(RewardVariant variant) {
  switch (variant) {
    case RewardVariant::kE: return "e";
    case RewardVariant::kEr: return "er";
    case RewardVariant::kErBar: return "er_bar";
  }
  return "";
}

std::optional<RewardVariant> parse_reward_variant(std::string_view text) {
  std::string canon;
  canon.reserve(text.size());
  for (char c : text) {
    canon.push_back(static_cast<char>(
        std::tolower(static_cast<unsigned char>(c))));
  }
  for (RewardVariant v : kRewardVariants) {
    if (canon == to_string(v)) return v;
  }
  return std::nullopt;
}

ScoreTuple ScoreTuple::entity(std::string tokens, EntityLabel label) {
  ScoreTuple t;
  t.tokens = std::move(tokens);
  t.label = label;
  return t;
}

ScoreTuple ScoreTuple::flagged(std::string tokens, EntityLabel label,
                               bool eps) {
  ScoreTuple t = entity(std::move(tokens), label);
  t.has_relation = eps;
  return t;
}

ScoreTuple ScoreTuple::edge(std::string tokens, EntityLabel label,
                            std::string target_tokens,
                            RelationLabel relation) {
  ScoreTuple t = entity(std::move(tokens), label);
  t.target_tokens = std::move(target_tokens);
  t.relation = relation;
  return t;
}

std::string ScoreTuple::to_string() const {
  std::string label_text(radeval::to_string(label));
  std::transform(label_text.begin(), label_text.end(), label_text.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  std::string out = "(" + tokens + ", " + label_text;
  if (has_relation) out += has_relation.value() ? ", 1" : ", 0";
  if (target_tokens) {
    out += ", " + *target_tokens + ", " +
           std::string(radeval::to_string(*relation));
  }
  out += ")";
  return out;
}

namespace {

bool has_relation_under(const AnnotationGraph& g, const Entity& e,
                        EpsilonMode mode) {
  for (const Relation& r : g.relations()) {
    if (r.source == e.id) return true;
    if (mode == EpsilonMode::kAnyIncident && r.target == e.id) return true;
  }
  return false;
}

}  // namespace

ScoreSet build_set(const AnnotationGraph& graph, RewardVariant variant,
                   EpsilonMode mode) {
  std::set<ScoreTuple> elements;
  switch (variant) {
    case RewardVariant::kE:
      for (const Entity& e : graph.entities()) {
        elements.insert(ScoreTuple::entity(e.tokens, e.label));
      }
      break;
    case RewardVariant::kEr: {
      // eps per (tokens, label) identity: 1 iff any node with that identity
      // has a relation under `mode`.
      std::map<std::pair<std::string, EntityLabel>, bool> eps;
      for (const Entity& e : graph.entities()) {
        bool& flag = eps[{e.tokens, e.label}];
        flag = flag || has_relation_under(graph, e, mode);
      }
      for (const auto& [identity, flag] : eps) {
        elements.insert(
            ScoreTuple::flagged(identity.first, identity.second, flag));
      }
      break;
    }
    case RewardVariant::kErBar:
      for (const Entity& e : graph.entities()) {
        bool any = false;
        for (const Relation& r : graph.relations()) {
          if (r.source != e.id) continue;
          any = true;
          elements.insert(ScoreTuple::edge(
              e.tokens, e.label, graph.find(r.target)->tokens, r.label));
        }
        if (mode == EpsilonMode::kAnyIncident && !any) {
          any = has_relation_under(graph, e, mode);
        }
        if (!any) {
          elements.insert(ScoreTuple::entity(e.tokens, e.label));
        }
      }
      break;
  }
  return ScoreSet(variant, std::move(elements));
}

PRF f_score(const ScoreSet& hyp, const ScoreSet& ref) {
  if (hyp.variant() != ref.variant()) {
    throw AlignmentError("score set variant mismatch: " +
                         std::string(to_string(hyp.variant())) + " vs " +
                         std::string(to_string(ref.variant())));
  }
  std::int64_t match = 0;
  for (const ScoreTuple& t : hyp.elements()) {
    match += ref.elements().count(t);
  }
  return prf_from_counts(match, static_cast<std::int64_t>(hyp.size()),
                         static_cast<std::int64_t>(ref.size()));
}

PRF rg_reward(const AnnotationGraph& hyp, const AnnotationGraph& ref,
              RewardVariant variant, EpsilonMode mode) {
  return f_score(build_set(hyp, variant, mode), build_set(ref, variant, mode));
}

CorpusPRF corpus_rg(std::span<const AnnotationGraph> hyps,
                    std::span<const AnnotationGraph> refs,
                    RewardVariant variant, EpsilonMode mode, unsigned jobs) {
  if (hyps.size() != refs.size()) {
    throw AlignmentError("corpus length mismatch: " +
                         std::to_string(hyps.size()) + " hypotheses vs " +
                         std::to_string(refs.size()) + " references");
  }
  if (hyps.empty()) {
    throw AlignmentError("empty corpus");
  }
  CorpusPRF out;
  out.per_example.resize(hyps.size());
  const std::size_t n = hyps.size();
  if (jobs <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      out.per_example[i] = rg_reward(hyps[i], refs[i], variant, mode);
    }
  } else {
    const unsigned workers = std::min<unsigned>(jobs, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) {
          out.per_example[i] = rg_reward(hyps[i], refs[i], variant, mode);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  // Fixed-order reduction keeps the aggregate identical across job counts.
  double p = 0.0, r = 0.0, f = 0.0;
  for (const PRF& prf : out.per_example) {
    p += prf.precision;
    r += prf.recall;
    f += prf.f1;
    out.aggregate.match_count += prf.match_count;
    out.aggregate.hyp_count += prf.hyp_count;
    out.aggregate.ref_count += prf.ref_count;
  }
  out.aggregate.precision = p / static_cast<double>(n);
  out.aggregate.recall = r / static_cast<double>(n);
  out.aggregate.f1 = f / static_cast<double>(n);
  return out;
}

}  // namespace radeval
