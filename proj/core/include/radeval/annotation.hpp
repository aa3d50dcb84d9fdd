#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace radeval {

/// Entity labels of the annotation schema: anatomy, and observations at
/// three presence levels (definitely present / uncertain / definitely
/// absent). Closed enumeration; anything else is a parse error.
enum class EntityLabel { kAnatDp, kObsDp, kObsU, kObsDa };

/// Relation labels. Closed enumeration.
enum class RelationLabel { kSuggestiveOf, kLocatedAt, kModify };

inline constexpr std::array<EntityLabel, 4> kEntityLabels = {
    EntityLabel::kAnatDp, EntityLabel::kObsDp, EntityLabel::kObsU,
    EntityLabel::kObsDa};
inline constexpr std::array<RelationLabel, 3> kRelationLabels = {
    RelationLabel::kSuggestiveOf, RelationLabel::kLocatedAt,
    RelationLabel::kModify};

std::string_view to_string(EntityLabel label);    // "ANAT-DP", ...
std::string_view to_string(RelationLabel label);  // "suggestive_of", ...

/// Exact-match parse of the four entity labels ("ANAT-DP" etc.).
std::optional<EntityLabel> parse_entity_label(std::string_view text);

/// Relation labels are matched after lowercasing and mapping spaces to
/// underscores, so "suggestive of" and "suggestive_of" both parse.
std::optional<RelationLabel> parse_relation_label(std::string_view text);

/// Canonical span text: lowercased (ASCII), outer whitespace trimmed,
/// internal whitespace runs collapsed to single spaces. Entity matching in
/// the rewards is by this surface text, so casing noise must not break it.
std::string normalize_span(std::string_view text);

/// One annotated span. `tokens` holds the normalized surface text (a span
/// can cover one or more adjacent words and stays a single node keyed by the
/// full span). start_ix/end_ix are 0-based inclusive token indices into the
/// report; they are taken on faith from the annotation file.
struct Entity {
  std::string id;
  std::string tokens;
  EntityLabel label = EntityLabel::kAnatDp;
  std::int64_t start_ix = 0;
  std::int64_t end_ix = 0;
};

/// Directed labeled edge between two entities of the same graph, stored by
/// entity id. Direction is preserved exactly as annotated.
struct Relation {
  std::string source;
  std::string target;
  RelationLabel label = RelationLabel::kModify;

  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Validated directed labeled graph of one report's entities and relations.
///
/// Invariants, enforced at construction:
///   - entity ids unique, spans non-empty after normalization, start <= end
///   - every relation endpoint resolves to an entity in this graph
///   - no self-loops, no duplicate identical relations
///
/// Entities and relations keep their input order. Instances are immutable
/// after construction and safe to share between threads.
class AnnotationGraph {
 public:
  AnnotationGraph() = default;

  /// Validates and takes ownership. Entity spans are normalized here, so
  /// callers may pass raw surface text. Throws ParseError on any invariant
  /// violation, naming the offending id.
  AnnotationGraph(std::vector<Entity> entities, std::vector<Relation> relations);

  const std::vector<Entity>& entities() const { return entities_; }
  const std::vector<Relation>& relations() const { return relations_; }
  bool empty() const { return entities_.empty(); }

  /// Entity lookup by id; nullptr when absent.
  const Entity* find(std::string_view id) const;

 private:
  std::vector<Entity> entities_;
  std::vector<Relation> relations_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// A parsed single-report annotation: the report id (may be empty when the
/// input carries none) plus its graph.
struct ReportAnnotation {
  std::string id;
  AnnotationGraph graph;
};

/// Parse one report annotation object:
///
///   {"id": "...", "entities": {"<eid>": {"tokens": "...", "label": "...",
///    "start_ix": n, "end_ix": n, "relations": [["modify", "<eid>"], ...]},
///    ...}}
///
/// "id" is optional; "entities" and every per-entity field are required.
/// Entity order in the file is preserved. Throws ParseError naming the
/// offending key on malformed JSON, unknown labels, dangling relation
/// targets, self-loops and duplicate relations.
ReportAnnotation parse_report_annotation(const std::string& json_text);

/// Canonical single-line JSON serialization of a report annotation, in the
/// schema accepted by parse_report_annotation. parse -> serialize -> parse
/// is the identity on the validated representation.
std::string to_json(const ReportAnnotation& report);

/// Load a JSONL corpus, one report annotation object per line. Blank lines
/// are skipped. ParseError messages carry "<path> line N".
std::vector<ReportAnnotation> load_annotation_jsonl(
    const std::filesystem::path& path);

/// Deterministic DOT rendering: nodes as `tokens [LABEL]` in input order,
/// edges labeled with the relation label, in input order.
std::string export_dot(const AnnotationGraph& graph);

/// Corpus-level totals per entity label and relation label.
struct GraphStats {
  std::array<std::int64_t, 4> entity_counts{};    // indexed by EntityLabel
  std::array<std::int64_t, 3> relation_counts{};  // indexed by RelationLabel

  std::int64_t& of(EntityLabel l) { return entity_counts[static_cast<int>(l)]; }
  std::int64_t& of(RelationLabel l) {
    return relation_counts[static_cast<int>(l)];
  }
  std::int64_t of(EntityLabel l) const {
    return entity_counts[static_cast<int>(l)];
  }
  std::int64_t of(RelationLabel l) const {
    return relation_counts[static_cast<int>(l)];
  }

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

/// Additive over corpus concatenation.
GraphStats graph_stats(std::span<const AnnotationGraph> corpus);

}  // namespace radeval
