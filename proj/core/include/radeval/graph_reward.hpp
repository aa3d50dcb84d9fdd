#pragma once

#include <compare>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "radeval/annotation.hpp"
#include "radeval/prf.hpp"

namespace radeval {

/// The three graph-overlap rewards.
///   kE     — node identity only: (tokens, label)
///   kEr    — node identity plus a has-relation flag: (tokens, label, eps)
///   kErBar — full relations: one (tokens, label, target tokens, relation
///            label) tuple per outgoing relation, plus the short
///            (tokens, label) tuple for nodes with no outgoing relation
enum class RewardVariant { kE, kEr, kErBar };

inline constexpr std::array<RewardVariant, 3> kRewardVariants = {
    RewardVariant::kE, RewardVariant::kEr, RewardVariant::kErBar};

/// CLI-facing names: "e", "er", "er_bar".
std::string_view to_string(RewardVariant variant);
std::optional<RewardVariant> parse_reward_variant(std::string_view text);

/// What counts as "has a relation" for the eps flag and for the isolated-node
/// rule. The golden fixtures pin eps to outgoing edges only (nodes that are
/// pure relation *targets* carry eps = 0); kAnyIncident is the alternative
/// reading, exposed as an option.
enum class EpsilonMode { kOutgoingOnly, kAnyIncident };

/// One element of a score set. Which optionals are engaged depends on the
/// variant: E uses (tokens, label); ER adds has_relation; ErBar relation
/// tuples add target_tokens + relation and leave has_relation empty, while
/// ErBar short tuples use (tokens, label) alone. Target nodes are identified
/// by their normalized tokens only.
struct ScoreTuple {
  std::string tokens;
  EntityLabel label = EntityLabel::kAnatDp;
  std::optional<bool> has_relation;
  std::optional<std::string> target_tokens;
  std::optional<RelationLabel> relation;

  friend auto operator<=>(const ScoreTuple&, const ScoreTuple&) = default;

  static ScoreTuple entity(std::string tokens, EntityLabel label);
  static ScoreTuple flagged(std::string tokens, EntityLabel label, bool eps);
  static ScoreTuple edge(std::string tokens, EntityLabel label,
                         std::string target_tokens, RelationLabel relation);

  /// "(lower, anat-dp)" / "(lower, anat-dp, 1)" /
  /// "(opacity, obs-dp, infection, suggestive_of)" — for diagnostics.
  std::string to_string() const;
};

/// The derived tuple set for one report and one reward variant. Set
/// semantics: a (tokens, label) identity repeated in a report counts once.
class ScoreSet {
 public:
  ScoreSet(RewardVariant variant, std::set<ScoreTuple> elements)
      : variant_(variant), elements_(std::move(elements)) {}

  RewardVariant variant() const { return variant_; }
  const std::set<ScoreTuple>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

 private:
  RewardVariant variant_;
  std::set<ScoreTuple> elements_;
};

/// Build the tuple set of a graph for one variant. Node identity for set
/// purposes is (normalized tokens, label); the result is deterministic and
/// insensitive to entity/relation input order.
///
/// For kEr, eps is aggregated per node identity: eps = 1 iff any node with
/// that (tokens, label) has a relation under `mode` (outgoing by default).
/// The aggregation keeps exactly one element per identity, which is what
/// makes f1(ER) <= f1(E) hold.
ScoreSet build_set(const AnnotationGraph& graph, RewardVariant variant,
                   EpsilonMode mode = EpsilonMode::kOutgoingOnly);

/// Set-overlap precision/recall/F1 between two score sets of the same
/// variant (throws AlignmentError on variant mismatch). Empty-set
/// convention as in prf_from_counts.
PRF f_score(const ScoreSet& hyp, const ScoreSet& ref);

/// f_score of the two graphs' tuple sets.
PRF rg_reward(const AnnotationGraph& hyp, const AnnotationGraph& ref,
              RewardVariant variant,
              EpsilonMode mode = EpsilonMode::kOutgoingOnly);

struct CorpusPRF {
  PRF aggregate;                 // macro average of per-example P, R, F1
  std::vector<PRF> per_example;  // aligned with the input order
};

/// Macro-averaged corpus reward over index-aligned pairs. Throws
/// AlignmentError on length mismatch or an empty corpus. `jobs` > 1 scores
/// examples on a worker pool; results are identical to the sequential run
/// (per-index slots, fixed-order reduction).
CorpusPRF corpus_rg(std::span<const AnnotationGraph> hyps,
                    std::span<const AnnotationGraph> refs,
                    RewardVariant variant,
                    EpsilonMode mode = EpsilonMode::kOutgoingOnly,
                    unsigned jobs = 1);

}  // namespace radeval
