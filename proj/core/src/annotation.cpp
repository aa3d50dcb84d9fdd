#include "radeval/annotation.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "radeval/error.hpp"

namespace radeval {

namespace {

// Insertion-ordered JSON so entity order in the file is the graph order.
using Json = nlohmann::ordered_json;

std::string lower_underscore(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    out.push_back(u == ' ' ? '_' : static_cast<char>(std::tolower(u)));
  }
  return out;
}

}  // namespace

std::string_view to_string(EntityLabel label) {
  switch (label) {
    case EntityLabel::kAnatDp: return "ANAT-DP";
    case EntityLabel::kObsDp: return "OBS-DP";
    case EntityLabel::kObsU: return "OBS-U";
    case EntityLabel::kObsDa: return "OBS-DA";
  }
  return "";
}

std::string_view to_string(RelationLabel label) {
  switch (label) {
    case RelationLabel::kSuggestiveOf: return "suggestive_of";
    case RelationLabel::kLocatedAt: return "located_at";
    case RelationLabel::kModify: return "modify";
  }
  return "";
}

std::optional<EntityLabel> parse_entity_label(std::string_view text) {
  for (EntityLabel l : kEntityLabels) {
    if (text == to_string(l)) return l;
  }
  return std::nullopt;
}

std::optional<RelationLabel> parse_relation_label(std::string_view text) {
  const std::string canon = lower_underscore(text);
  for (RelationLabel l : kRelationLabels) {
    if (canon == to_string(l)) return l;
  }
  return std::nullopt;
}

std::string normalize_span(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

AnnotationGraph::AnnotationGraph(std::vector<Entity> entities,
                                 std::vector<Relation> relations)
    : entities_(std::move(entities)), relations_(std::move(relations)) {
  by_id_.reserve(entities_.size());
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    Entity& e = entities_[i];
    e.tokens = normalize_span(e.tokens);
    if (e.tokens.empty()) {
      throw ParseError("entity \"" + e.id + "\": empty tokens after normalization");
    }
    if (e.start_ix > e.end_ix) {
      throw ParseError("entity \"" + e.id + "\": start_ix > end_ix");
    }
    if (!by_id_.emplace(e.id, i).second) {
      throw ParseError("duplicate entity id \"" + e.id + "\"");
    }
  }
  std::set<std::tuple<std::string, std::string, RelationLabel>> seen;
  for (const Relation& r : relations_) {
    if (r.source == r.target) {
      throw ParseError("entity \"" + r.source + "\": self-loop relation");
    }
    if (!by_id_.count(r.source)) {
      throw ParseError("relation source \"" + r.source + "\" not in entities");
    }
    if (!by_id_.count(r.target)) {
      throw ParseError("relation target \"" + r.target +
                       "\" not in entities (source \"" + r.source + "\")");
    }
    if (!seen.emplace(r.source, r.target, r.label).second) {
      throw ParseError("duplicate relation \"" + r.source + "\" -" +
                       std::string(to_string(r.label)) + "-> \"" + r.target +
                       "\"");
    }
  }
}

const Entity* AnnotationGraph::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &entities_[it->second];
}

namespace {

ReportAnnotation from_json(const Json& doc) {
  if (!doc.is_object()) {
    throw ParseError("annotation must be a JSON object");
  }
  ReportAnnotation report;
  if (auto it = doc.find("id"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("key \"id\": expected string");
    report.id = it->get<std::string>();
  }
  auto ents_it = doc.find("entities");
  if (ents_it == doc.end() || !ents_it->is_object()) {
    throw ParseError("key \"entities\": missing or not an object");
  }

  std::vector<Entity> entities;
  std::vector<Relation> relations;
  for (const auto& [eid, body] : ents_it->items()) {
    if (!body.is_object()) {
      throw ParseError("entity \"" + eid + "\": expected object");
    }
    Entity entity;
    entity.id = eid;
    auto require = [&](const char* key) -> const Json& {
      auto it = body.find(key);
      if (it == body.end()) {
        throw ParseError("entity \"" + eid + "\": missing key \"" + key + "\"");
      }
      return *it;
    };
    const Json& tokens = require("tokens");
    if (!tokens.is_string()) {
      throw ParseError("entity \"" + eid + "\": key \"tokens\" must be a string");
    }
    entity.tokens = tokens.get<std::string>();
    const Json& label = require("label");
    if (!label.is_string()) {
      throw ParseError("entity \"" + eid + "\": key \"label\" must be a string");
    }
    auto parsed = parse_entity_label(label.get<std::string>());
    if (!parsed) {
      throw ParseError("entity \"" + eid + "\": unknown entity label \"" +
                       label.get<std::string>() + "\"");
    }
    entity.label = *parsed;
    const Json& start = require("start_ix");
    const Json& end = require("end_ix");
    if (!start.is_number_integer() || !end.is_number_integer()) {
      throw ParseError("entity \"" + eid +
                       "\": start_ix/end_ix must be integers");
    }
    entity.start_ix = start.get<std::int64_t>();
    entity.end_ix = end.get<std::int64_t>();

    const Json& rels = require("relations");
    if (!rels.is_array()) {
      throw ParseError("entity \"" + eid + "\": key \"relations\" must be an array");
    }
    for (const Json& pair : rels) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
          !pair[1].is_string()) {
        throw ParseError("entity \"" + eid +
                         "\": each relation must be [label, target id]");
      }
      auto rel_label = parse_relation_label(pair[0].get<std::string>());
      if (!rel_label) {
        throw ParseError("entity \"" + eid + "\": unknown relation label \"" +
                         pair[0].get<std::string>() + "\"");
      }
      relations.push_back(
          Relation{eid, pair[1].get<std::string>(), *rel_label});
    }
    entities.push_back(std::move(entity));
  }
  report.graph = AnnotationGraph(std::move(entities), std::move(relations));
  return report;
}

}  // namespace

ReportAnnotation parse_report_annotation(const std::string& json_text) {
  Json doc = Json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw ParseError("malformed JSON");
  }
  return from_json(doc);
}

std::string to_json(const ReportAnnotation& report) {
  Json doc = Json::object();
  doc["id"] = report.id;
  Json ents = Json::object();
  for (const Entity& e : report.graph.entities()) {
    Json body = Json::object();
    body["tokens"] = e.tokens;
    body["label"] = std::string(to_string(e.label));
    body["start_ix"] = e.start_ix;
    body["end_ix"] = e.end_ix;
    Json rels = Json::array();
    for (const Relation& r : report.graph.relations()) {
      if (r.source == e.id) {
        rels.push_back(Json::array({std::string(to_string(r.label)), r.target}));
      }
    }
    body["relations"] = std::move(rels);
    ents[e.id] = std::move(body);
  }
  doc["entities"] = std::move(ents);
  return doc.dump();
}

std::vector<ReportAnnotation> load_annotation_jsonl(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  std::vector<ReportAnnotation> reports;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      reports.push_back(parse_report_annotation(line));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": " + e.what());
    }
  }
  return reports;
}

std::string export_dot(const AnnotationGraph& graph) {
  std::ostringstream out;
  out << "digraph {\n";
  for (const Entity& e : graph.entities()) {
    out << "  \"" << e.id << "\" [label=\"" << e.tokens << " ["
        << to_string(e.label) << "]\"];\n";
  }
  for (const Relation& r : graph.relations()) {
    out << "  \"" << r.source << "\" -> \"" << r.target << "\" [label=\""
        << to_string(r.label) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

GraphStats graph_stats(std::span<const AnnotationGraph> corpus) {
  GraphStats stats;
  for (const AnnotationGraph& g : corpus) {
    for (const Entity& e : g.entities()) ++stats.of(e.label);
    for (const Relation& r : g.relations()) ++stats.of(r.label);
  }
  return stats;
}

}  // namespace radeval
