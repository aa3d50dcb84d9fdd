#pragma once

#include <array>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radeval/graph_reward.hpp"
#include "radeval/prf.hpp"

// Factually-oriented companion metrics that operate on precomputed inputs:
// an F-score over bags of extracted entity strings, and an F1 over clinical
// observation label vectors (the CheXbert label space). Neither runs any
// model; labels and entities arrive via CSV / JSONL.

namespace radeval {

// The fixed 14-observation label space, in canonical column order.
inline constexpr std::array<std::string_view, 14> kObservationNames = {
    "No Finding",     "Enlarged Cardiomediastinum",
    "Cardiomegaly",   "Lung Opacity",
    "Lung Lesion",    "Edema",
    "Consolidation",  "Pneumonia",
    "Atelectasis",    "Pneumothorax",
    "Pleural Effusion", "Pleural Other",
    "Fracture",       "Support Devices"};

// The five headline observations scored by default.
inline constexpr std::array<std::string_view, 5> kHeadlineObservations = {
    "Atelectasis", "Cardiomegaly", "Consolidation", "Edema",
    "Pleural Effusion"};

// Index of `name` in kObservationNames (case-insensitive).
// Throws UsageError for a name outside the fixed set.
std::size_t observation_index(std::string_view name);

// Convenience class selections for chexbert_f1 / the CLI.
std::vector<std::string> headline_classes();
std::vector<std::string> all_classes();

// Mention status of one observation in one report.
enum class LabelStatus { kPositive, kNegative, kUncertain, kUnspecified };

std::string_view to_string(LabelStatus status);

// Accepts "positive" / "negative" / "uncertain" / "unspecified"
// (case-insensitive); an empty cell reads as unspecified.
// Throws ParseError otherwise.
LabelStatus parse_label_status(std::string_view text);

// Observation statuses for one report, slots ordered as kObservationNames.
struct LabelVector {
  std::string id;
  std::array<LabelStatus, 14> statuses{};

  LabelVector() { statuses.fill(LabelStatus::kUnspecified); }
};

// Loads a label CSV: header row `id,<the 14 observation names>` (observation
// columns may appear in any order but all 14 must be present exactly once),
// then one row per report. Plain comma-separated cells, no quoting.
// Throws ParseError with the offending line on malformed input.
std::vector<LabelVector> load_label_csv(const std::string& path);

// Bag of normalized entity strings extracted from one report.
struct EntityBag {
  std::string id;
  std::set<std::string> entities;
};

// Builds a bag, normalizing each entry per the annotation-core span rules.
EntityBag make_entity_bag(std::string id, std::span<const std::string> raw);

// Parses one `{"id":..., "entities": ["...", ...]}` object.
EntityBag parse_entity_bag(const std::string& text);

// Loads entity bags from JSONL, one object per line; blank lines skipped.
std::vector<EntityBag> load_entity_bag_jsonl(const std::string& path);

// Set-intersection precision/recall/F1 between two bags, with the same
// empty-set convention as the graph rewards (both empty -> 1, one empty -> 0).
PRF entity_set_f1(const EntityBag& hyp, const EntityBag& ref);

// Corpus entity F1: per-pair scores macro-averaged, as corpus_rg does.
// Throws AlignmentError on length mismatch or empty corpus.
CorpusPRF corpus_entity_f1(std::span<const EntityBag> hyps,
                           std::span<const EntityBag> refs);

// Per-class and aggregate results of a label-F1 run.
struct ChexbertReport {
  std::vector<std::string> class_names;  // canonical names, evaluation order
  std::vector<PRF> per_class;            // aligned with class_names
  PRF micro;  // pooled TP / (TP+FP) / (TP+FN) over all selected classes
  PRF macro;  // mean of the per-class precision / recall / F1
};

// Label F1 between aligned corpora of label vectors over the selected
// classes (default: the 5 headline observations). Each slot is binarized
// positive-vs-rest (uncertain and unspecified count as not positive).
// Per-class F1 uses prf_from_counts, so a class with no positives on either
// side scores 1.0 by convention. The macro aggregate carries the pooled
// counts of the micro one; only its rates are per-class means.
// Throws AlignmentError on length mismatch or empty corpus, UsageError on an
// unknown or duplicate class name.
ChexbertReport chexbert_f1(std::span<const LabelVector> hyps,
                           std::span<const LabelVector> refs,
                           const std::vector<std::string>& classes);

ChexbertReport chexbert_f1(std::span<const LabelVector> hyps,
                           std::span<const LabelVector> refs);

}  // namespace radeval
