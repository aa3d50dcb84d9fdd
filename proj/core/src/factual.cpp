#include "radeval/factual.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "radeval/annotation.hpp"
#include "radeval/error.hpp"

namespace radeval {

namespace {

using Json = nlohmann::ordered_json;

std::string lowered(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string trimmed(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trimmed(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::size_t observation_index(std::string_view name) {
  const std::string key = lowered(trimmed(name));
  for (std::size_t i = 0; i < kObservationNames.size(); ++i) {
    if (key == lowered(kObservationNames[i])) return i;
  }
  throw UsageError("unknown observation class \"" + std::string(name) + "\"");
}

std::vector<std::string> headline_classes() {
  return {kHeadlineObservations.begin(), kHeadlineObservations.end()};
}

std::vector<std::string> all_classes() {
  return {kObservationNames.begin(), kObservationNames.end()};
}

std::string_view to_string(LabelStatus status) {
  switch (status) {
    case LabelStatus::kPositive: return "positive";
    case LabelStatus::kNegative: return "negative";
    case LabelStatus::kUncertain: return "uncertain";
    case LabelStatus::kUnspecified: return "unspecified";
  }
  throw UsageError("invalid label status");
}

LabelStatus parse_label_status(std::string_view text) {
  const std::string key = lowered(trimmed(text));
  if (key.empty() || key == "unspecified") return LabelStatus::kUnspecified;
  if (key == "positive") return LabelStatus::kPositive;
  if (key == "negative") return LabelStatus::kNegative;
  if (key == "uncertain") return LabelStatus::kUncertain;
  throw ParseError("invalid label status \"" + std::string(text) + "\"");
}

std::vector<LabelVector> load_label_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path + ": missing header row");
  }
  const std::vector<std::string> header = split_csv_row(line);
  if (header.size() != 1 + kObservationNames.size()) {
    throw ParseError(path + ": header must name the id column plus the " +
                     std::to_string(kObservationNames.size()) +
                     " observation columns, got " +
                     std::to_string(header.size()));
  }
  // Column -> observation slot; observation columns may come in any order.
  std::array<std::optional<std::size_t>, 14> column_slot;
  std::array<bool, 14> seen{};
  for (std::size_t col = 1; col < header.size(); ++col) {
    std::size_t slot;
    try {
      slot = observation_index(header[col]);
    } catch (const UsageError& e) {
      throw ParseError(path + ": header: " + e.what());
    }
    if (seen[slot]) {
      throw ParseError(path + ": duplicate header column \"" + header[col] +
                       "\"");
    }
    seen[slot] = true;
    column_slot[col - 1] = slot;
  }
  std::vector<LabelVector> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n,") == std::string::npos) continue;
    const std::vector<std::string> cells = split_csv_row(line);
    if (cells.size() != header.size()) {
      throw ParseError(path + " line " + std::to_string(line_no) +
                       ": expected " + std::to_string(header.size()) +
                       " cells, got " + std::to_string(cells.size()));
    }
    LabelVector row;
    row.id = cells[0];
    for (std::size_t col = 1; col < cells.size(); ++col) {
      try {
        row.statuses[*column_slot[col - 1]] = parse_label_status(cells[col]);
      } catch (const ParseError& e) {
        throw ParseError(path + " line " + std::to_string(line_no) + ": " +
                         e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

EntityBag make_entity_bag(std::string id, std::span<const std::string> raw) {
  EntityBag bag;
  bag.id = std::move(id);
  for (const std::string& entry : raw) bag.entities.insert(normalize_span(entry));
  return bag;
}

EntityBag parse_entity_bag(const std::string& text) {
  const Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw ParseError("malformed JSON");
  }
  if (!doc.is_object()) {
    throw ParseError("entity bag must be a JSON object");
  }
  EntityBag bag;
  if (auto it = doc.find("id"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("key \"id\": expected string");
    bag.id = it->get<std::string>();
  }
  auto ents_it = doc.find("entities");
  if (ents_it == doc.end() || !ents_it->is_array()) {
    throw ParseError("key \"entities\": expected array");
  }
  for (const Json& entry : *ents_it) {
    if (!entry.is_string()) {
      throw ParseError("key \"entities\": expected array of strings");
    }
    bag.entities.insert(normalize_span(entry.get<std::string>()));
  }
  return bag;
}

std::vector<EntityBag> load_entity_bag_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  std::vector<EntityBag> bags;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      bags.push_back(parse_entity_bag(line));
    } catch (const ParseError& e) {
      throw ParseError(path + " line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return bags;
}

PRF entity_set_f1(const EntityBag& hyp, const EntityBag& ref) {
  std::int64_t matched = 0;
  for (const std::string& entity : hyp.entities) {
    matched += ref.entities.count(entity);
  }
  return prf_from_counts(matched,
                         static_cast<std::int64_t>(hyp.entities.size()),
                         static_cast<std::int64_t>(ref.entities.size()));
}

CorpusPRF corpus_entity_f1(std::span<const EntityBag> hyps,
                           std::span<const EntityBag> refs) {
  if (hyps.size() != refs.size()) {
    throw AlignmentError("corpus length mismatch: " +
                         std::to_string(hyps.size()) + " hypotheses vs " +
                         std::to_string(refs.size()) + " references");
  }
  if (hyps.empty()) {
    throw AlignmentError("empty corpus");
  }
  CorpusPRF corpus;
  corpus.per_example.reserve(hyps.size());
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    corpus.per_example.push_back(entity_set_f1(hyps[i], refs[i]));
  }
  corpus.aggregate = PRF{};
  for (const PRF& p : corpus.per_example) {
    corpus.aggregate.precision += p.precision;
    corpus.aggregate.recall += p.recall;
    corpus.aggregate.f1 += p.f1;
    corpus.aggregate.match_count += p.match_count;
    corpus.aggregate.hyp_count += p.hyp_count;
    corpus.aggregate.ref_count += p.ref_count;
  }
  const double n = static_cast<double>(hyps.size());
  corpus.aggregate.precision /= n;
  corpus.aggregate.recall /= n;
  corpus.aggregate.f1 /= n;
  return corpus;
}

ChexbertReport chexbert_f1(std::span<const LabelVector> hyps,
                           std::span<const LabelVector> refs,
                           const std::vector<std::string>& classes) {
  if (hyps.size() != refs.size()) {
    throw AlignmentError("corpus length mismatch: " +
                         std::to_string(hyps.size()) + " hypotheses vs " +
                         std::to_string(refs.size()) + " references");
  }
  if (hyps.empty()) {
    throw AlignmentError("empty corpus");
  }
  if (classes.empty()) {
    throw UsageError("empty class selection");
  }
  std::vector<std::size_t> slots;
  slots.reserve(classes.size());
  for (const std::string& name : classes) {
    const std::size_t slot = observation_index(name);
    if (std::find(slots.begin(), slots.end(), slot) != slots.end()) {
      throw UsageError("duplicate observation class \"" + name + "\"");
    }
    slots.push_back(slot);
  }
  ChexbertReport report;
  std::int64_t pooled_tp = 0, pooled_hyp = 0, pooled_ref = 0;
  for (const std::size_t slot : slots) {
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      const bool hyp_pos = hyps[i].statuses[slot] == LabelStatus::kPositive;
      const bool ref_pos = refs[i].statuses[slot] == LabelStatus::kPositive;
      tp += hyp_pos && ref_pos;
      fp += hyp_pos && !ref_pos;
      fn += !hyp_pos && ref_pos;
    }
    report.class_names.emplace_back(kObservationNames[slot]);
    report.per_class.push_back(prf_from_counts(tp, tp + fp, tp + fn));
    pooled_tp += tp;
    pooled_hyp += tp + fp;
    pooled_ref += tp + fn;
  }
  report.micro = prf_from_counts(pooled_tp, pooled_hyp, pooled_ref);
  report.macro = PRF{};
  for (const PRF& p : report.per_class) {
    report.macro.precision += p.precision;
    report.macro.recall += p.recall;
    report.macro.f1 += p.f1;
  }
  const double k = static_cast<double>(report.per_class.size());
  report.macro.precision /= k;
  report.macro.recall /= k;
  report.macro.f1 /= k;
  report.macro.match_count = pooled_tp;
  report.macro.hyp_count = pooled_hyp;
  report.macro.ref_count = pooled_ref;
  return report;
}

ChexbertReport chexbert_f1(std::span<const LabelVector> hyps,
                           std::span<const LabelVector> refs) {
  return chexbert_f1(hyps, refs, headline_classes());
}

}  // namespace radeval
