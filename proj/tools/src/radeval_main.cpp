// radeval: corpus scoring and demo front end.
//
// Subcommands dispatch into the core library; this file only does I/O,
// id/line alignment, and report assembly. Exit codes are a contract:
//   0 success, 2 alignment failure, 3 parse failure, 4 usage error,
//   1 anything else.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "radeval/annotation.hpp"
#include "radeval/error.hpp"
#include "radeval/factual.hpp"
#include "radeval/graph_reward.hpp"
#include "radeval/nlg_metrics.hpp"
#include "radeval/scst.hpp"
#include "radeval/version.hpp"

namespace {

using Json = nlohmann::ordered_json;
using radeval::AlignmentError;
using radeval::ParseError;
using radeval::UsageError;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, ',')) {
    const auto first = part.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = part.find_last_not_of(" \t");
    parts.push_back(part.substr(first, last - first + 1));
  }
  return parts;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

Json prf_to_json(const radeval::PRF& prf) {
  Json out = Json::object();
  out["precision"] = prf.precision;
  out["recall"] = prf.recall;
  out["f1"] = prf.f1;
  out["matches"] = prf.match_count;
  out["hyp_size"] = prf.hyp_count;
  out["ref_size"] = prf.ref_count;
  return out;
}

// Assembles the common report envelope. `config` is the canonical resolved
// option string whose hash makes re-runs checkable.
Json make_report(const std::string& command, const std::string& config,
                 Json inputs) {
  Json report = Json::object();
  report["tool"] = "radeval";
  report["version"] = radeval::kVersion;
  report["command"] = command;
  report["config_hash"] = hex64(fnv1a(command + "\n" + config));
  report["inputs"] = std::move(inputs);
  return report;
}

void emit_report(const Json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw UsageError("cannot write " + out_path);
  }
  out << text;
}

// Joins hypothesis items to reference items by id: result[i] pairs hyp i
// with the reference of the same id. Duplicate ids on either side and hyp
// ids missing from the reference side are alignment failures.
template <typename T>
std::vector<const T*> align_by_id(const std::vector<T>& hyps,
                                  const std::vector<T>& refs) {
  std::map<std::string, const T*> by_id;
  for (const T& ref : refs) {
    if (!by_id.emplace(ref.id, &ref).second) {
      throw AlignmentError("duplicate reference id \"" + ref.id + "\"");
    }
  }
  std::map<std::string, bool> seen_hyp;
  std::vector<const T*> aligned;
  aligned.reserve(hyps.size());
  for (const T& hyp : hyps) {
    if (!seen_hyp.emplace(hyp.id, true).second) {
      throw AlignmentError("duplicate hypothesis id \"" + hyp.id + "\"");
    }
    const auto it = by_id.find(hyp.id);
    if (it == by_id.end()) {
      throw AlignmentError("hypothesis id \"" + hyp.id +
                           "\" has no reference");
    }
    aligned.push_back(it->second);
  }
  if (hyps.empty()) {
    throw AlignmentError("empty corpus");
  }
  return aligned;
}

// ---------------------------------------------------------------- score-rg

struct ScoreRgOptions {
  std::string hyp_path, ref_path, out_path;
  std::string variants = "e,er,er_bar";
  bool per_example = false;
  unsigned jobs = 1;
};

int run_score_rg(const ScoreRgOptions& opt) {
  std::vector<radeval::RewardVariant> variants;
  for (const std::string& name : split_list(opt.variants)) {
    const auto variant = radeval::parse_reward_variant(name);
    if (!variant) {
      throw UsageError("unknown variant \"" + name +
                       "\" (expected e, er or er_bar)");
    }
    variants.push_back(*variant);
  }
  if (variants.empty()) {
    throw UsageError("no variants requested");
  }
  const auto hyps = radeval::load_annotation_jsonl(opt.hyp_path);
  const auto refs = radeval::load_annotation_jsonl(opt.ref_path);
  const auto aligned = align_by_id(hyps, refs);
  std::vector<radeval::AnnotationGraph> hyp_graphs, ref_graphs;
  hyp_graphs.reserve(hyps.size());
  ref_graphs.reserve(hyps.size());
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    hyp_graphs.push_back(hyps[i].graph);
    ref_graphs.push_back(aligned[i]->graph);
  }

  Json inputs = Json::object();
  inputs["hyp"] = opt.hyp_path;
  inputs["ref"] = opt.ref_path;
  inputs["examples"] = hyps.size();
  Json report = make_report(
      "score-rg",
      "hyp=" + opt.hyp_path + "\nref=" + opt.ref_path +
          "\nvariants=" + opt.variants +
          "\nper_example=" + (opt.per_example ? "1" : "0") +
          "\njobs=" + std::to_string(opt.jobs),
      std::move(inputs));

  std::vector<radeval::CorpusPRF> results;
  Json metrics = Json::object();
  for (const auto variant : variants) {
    results.push_back(radeval::corpus_rg(hyp_graphs, ref_graphs, variant,
                                         radeval::EpsilonMode::kOutgoingOnly,
                                         opt.jobs));
    metrics[std::string("rg_") + std::string(to_string(variant))] =
        prf_to_json(results.back().aggregate);
  }
  report["metrics"] = std::move(metrics);
  if (opt.per_example) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      Json row = Json::object();
      row["id"] = hyps[i].id;
      for (std::size_t v = 0; v < variants.size(); ++v) {
        row[std::string("rg_") + std::string(to_string(variants[v]))] =
            prf_to_json(results[v].per_example[i]);
      }
      rows.push_back(std::move(row));
    }
    report["per_example"] = std::move(rows);
  }
  emit_report(report, opt.out_path);
  return 0;
}

// --------------------------------------------------------------- score-nlg

struct ScoreNlgOptions {
  std::string hyp_path, ref_path, out_path;
  std::string metrics = "bleu4,rougel,ciderd";
  bool per_example = false;
  unsigned jobs = 1;
};

int run_score_nlg(const ScoreNlgOptions& opt) {
  const std::vector<std::string> requested = split_list(opt.metrics);
  if (requested.empty()) {
    throw UsageError("no metrics requested");
  }
  for (const std::string& name : requested) {
    if (name != "bleu4" && name != "rougel" && name != "ciderd") {
      throw UsageError("unknown metric \"" + name +
                       "\" (expected bleu4, rougel or ciderd)");
    }
  }
  const auto hyp_lines = read_lines(opt.hyp_path);
  const auto ref_lines = read_lines(opt.ref_path);
  if (hyp_lines.size() != ref_lines.size()) {
    throw AlignmentError("line count mismatch: " + opt.hyp_path + " has " +
                         std::to_string(hyp_lines.size()) + ", " +
                         opt.ref_path + " has " +
                         std::to_string(ref_lines.size()));
  }
  if (hyp_lines.empty()) {
    throw AlignmentError("empty corpus");
  }
  const auto hyps = radeval::nlg::tokenize_lines(hyp_lines);
  const auto refs = radeval::nlg::tokenize_lines(ref_lines);

  Json inputs = Json::object();
  inputs["hyp"] = opt.hyp_path;
  inputs["ref"] = opt.ref_path;
  inputs["examples"] = hyps.size();
  Json report = make_report(
      "score-nlg",
      "hyp=" + opt.hyp_path + "\nref=" + opt.ref_path +
          "\nmetrics=" + opt.metrics +
          "\nper_example=" + (opt.per_example ? "1" : "0") +
          "\njobs=" + std::to_string(opt.jobs),
      std::move(inputs));

  Json metrics = Json::object();
  std::vector<double> rouge_rows, cider_rows;
  for (const std::string& name : requested) {
    if (name == "bleu4") {
      metrics["bleu4"] = radeval::nlg::bleu4(hyps, refs);
    } else if (name == "rougel") {
      rouge_rows = radeval::nlg::rouge_l_per_example(hyps, refs, 1.2, opt.jobs);
      double sum = 0.0;
      for (const double s : rouge_rows) sum += s;
      metrics["rougel"] = sum / static_cast<double>(rouge_rows.size());
    } else {
      cider_rows = radeval::nlg::cider_d_per_example(hyps, refs, 6.0, opt.jobs);
      double sum = 0.0;
      for (const double s : cider_rows) sum += s;
      metrics["ciderd"] = sum / static_cast<double>(cider_rows.size());
    }
  }
  report["metrics"] = std::move(metrics);
  if (opt.per_example) {
    // BLEU-4 is corpus-level by construction and has no per-line row.
    Json rows = Json::array();
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      Json row = Json::object();
      row["line"] = i + 1;
      if (!rouge_rows.empty()) row["rougel"] = rouge_rows[i];
      if (!cider_rows.empty()) row["ciderd"] = cider_rows[i];
      rows.push_back(std::move(row));
    }
    report["per_example"] = std::move(rows);
  }
  emit_report(report, opt.out_path);
  return 0;
}

// ------------------------------------------------------------- chexbert-f1

struct ChexbertOptions {
  std::string hyp_path, ref_path, out_path;
  std::string classes;  // empty -> headline 5, "all" -> all 14
  bool per_example = false;
};

int run_chexbert(const ChexbertOptions& opt) {
  std::vector<std::string> classes;
  if (opt.classes.empty() || opt.classes == "headline") {
    classes = radeval::headline_classes();
  } else if (opt.classes == "all") {
    classes = radeval::all_classes();
  } else {
    classes = split_list(opt.classes);
  }
  const auto hyps = radeval::load_label_csv(opt.hyp_path);
  const auto refs = radeval::load_label_csv(opt.ref_path);
  const auto aligned = align_by_id(hyps, refs);
  std::vector<radeval::LabelVector> ref_rows;
  ref_rows.reserve(hyps.size());
  for (const auto* ref : aligned) ref_rows.push_back(*ref);

  const radeval::ChexbertReport result =
      radeval::chexbert_f1(hyps, ref_rows, classes);

  Json inputs = Json::object();
  inputs["hyp"] = opt.hyp_path;
  inputs["ref"] = opt.ref_path;
  inputs["examples"] = hyps.size();
  std::string class_list;
  for (const std::string& name : result.class_names) {
    if (!class_list.empty()) class_list += ",";
    class_list += name;
  }
  Json report = make_report(
      "chexbert-f1",
      "hyp=" + opt.hyp_path + "\nref=" + opt.ref_path +
          "\nclasses=" + class_list +
          "\nper_example=" + (opt.per_example ? "1" : "0"),
      std::move(inputs));

  Json metrics = Json::object();
  metrics["micro"] = prf_to_json(result.micro);
  metrics["macro"] = prf_to_json(result.macro);
  Json per_class = Json::object();
  for (std::size_t i = 0; i < result.class_names.size(); ++i) {
    per_class[result.class_names[i]] = prf_to_json(result.per_class[i]);
  }
  metrics["per_class"] = std::move(per_class);
  report["metrics"] = std::move(metrics);

  if (opt.per_example) {
    // Per-report pooled counts over the selected classes.
    std::vector<std::size_t> slots;
    for (const std::string& name : result.class_names) {
      slots.push_back(radeval::observation_index(name));
    }
    Json rows = Json::array();
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      std::int64_t tp = 0, fp = 0, fn = 0;
      for (const std::size_t slot : slots) {
        const bool hyp_pos =
            hyps[i].statuses[slot] == radeval::LabelStatus::kPositive;
        const bool ref_pos =
            ref_rows[i].statuses[slot] == radeval::LabelStatus::kPositive;
        tp += hyp_pos && ref_pos;
        fp += hyp_pos && !ref_pos;
        fn += !hyp_pos && ref_pos;
      }
      Json row = Json::object();
      row["id"] = hyps[i].id;
      row["labels"] = prf_to_json(radeval::prf_from_counts(tp, tp + fp,
                                                           tp + fn));
      rows.push_back(std::move(row));
    }
    report["per_example"] = std::move(rows);
  }
  emit_report(report, opt.out_path);
  return 0;
}

// --------------------------------------------------------------- entity-f1

struct EntityF1Options {
  std::string hyp_path, ref_path, out_path;
  bool per_example = false;
};

int run_entity_f1(const EntityF1Options& opt) {
  const auto hyps = radeval::load_entity_bag_jsonl(opt.hyp_path);
  const auto refs = radeval::load_entity_bag_jsonl(opt.ref_path);
  const auto aligned = align_by_id(hyps, refs);
  std::vector<radeval::EntityBag> ref_bags;
  ref_bags.reserve(hyps.size());
  for (const auto* ref : aligned) ref_bags.push_back(*ref);

  const radeval::CorpusPRF result = radeval::corpus_entity_f1(hyps, ref_bags);

  Json inputs = Json::object();
  inputs["hyp"] = opt.hyp_path;
  inputs["ref"] = opt.ref_path;
  inputs["examples"] = hyps.size();
  Json report = make_report(
      "entity-f1",
      "hyp=" + opt.hyp_path + "\nref=" + opt.ref_path +
          "\nper_example=" + (opt.per_example ? "1" : "0"),
      std::move(inputs));
  Json metrics = Json::object();
  metrics["entity_f1"] = prf_to_json(result.aggregate);
  report["metrics"] = std::move(metrics);
  if (opt.per_example) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      Json row = Json::object();
      row["id"] = hyps[i].id;
      row["entity_f1"] = prf_to_json(result.per_example[i]);
      rows.push_back(std::move(row));
    }
    report["per_example"] = std::move(rows);
  }
  emit_report(report, opt.out_path);
  return 0;
}

// --------------------------------------------------------------- scst-demo

struct ScstDemoOptions {
  std::string config_path;
  std::string out_path = "scst_curve.csv";
  std::optional<std::uint64_t> seed;
};

int run_scst_demo(const ScstDemoOptions& opt) {
  radeval::scst::TrainConfig config =
      radeval::scst::load_train_config(opt.config_path);
  if (opt.seed) config.seed = *opt.seed;
  const radeval::scst::ToyTask task =
      radeval::scst::task_by_name(config.task);
  const radeval::scst::TrainResult result =
      radeval::scst::train_scst(task, config);

  std::ofstream curve_out(opt.out_path);
  if (!curve_out) {
    throw UsageError("cannot write " + opt.out_path);
  }
  curve_out << radeval::scst::curve_to_csv(result.curve);
  curve_out.close();

  char line[256];
  std::cout << "task: " << task.name << "\n";
  std::cout << "variant: " << to_string(config.variant) << "\n";
  std::cout << "iterations: " << config.iterations << "\n";
  std::cout << "seed: " << config.seed << "\n";
  std::cout << "curve: " << opt.out_path << "\n";
  std::cout << "final greedy: \""
            << radeval::scst::to_text(task.vocab, result.final_greedy_body)
            << "\"\n";
  std::snprintf(line, sizeof(line),
                "final composite: %.6f (rg %.6f, rouge %.6f, likelihood "
                "%.6f)\n",
                result.final_greedy.total, result.final_greedy.rg,
                result.final_greedy.rouge, result.final_greedy.likelihood);
  std::cout << line;
  return 0;
}

// -------------------------------------------------------- export-dot/stats

struct ExportDotOptions {
  std::string in_path, out_path, id;
};

int run_export_dot(const ExportDotOptions& opt) {
  const auto reports = radeval::load_annotation_jsonl(opt.in_path);
  std::string dot;
  bool found = opt.id.empty();
  for (const auto& report : reports) {
    if (!opt.id.empty() && report.id != opt.id) continue;
    found = true;
    dot += radeval::export_dot(report.graph);
  }
  if (!found) {
    throw AlignmentError("no report with id \"" + opt.id + "\" in " +
                         opt.in_path);
  }
  if (opt.out_path.empty()) {
    std::cout << dot;
  } else {
    std::ofstream out(opt.out_path);
    if (!out) {
      throw UsageError("cannot write " + opt.out_path);
    }
    out << dot;
  }
  return 0;
}

struct StatsOptions {
  std::string in_path, out_path;
};

int run_stats(const StatsOptions& opt) {
  const auto reports = radeval::load_annotation_jsonl(opt.in_path);
  std::vector<radeval::AnnotationGraph> graphs;
  graphs.reserve(reports.size());
  for (const auto& report : reports) graphs.push_back(report.graph);
  const radeval::GraphStats stats = radeval::graph_stats(graphs);

  Json inputs = Json::object();
  inputs["in"] = opt.in_path;
  inputs["examples"] = reports.size();
  Json report = make_report("stats", "in=" + opt.in_path, std::move(inputs));
  Json metrics = Json::object();
  metrics["reports"] = reports.size();
  Json entity_counts = Json::object();
  for (const auto label : radeval::kEntityLabels) {
    entity_counts[std::string(to_string(label))] = stats.of(label);
  }
  Json relation_counts = Json::object();
  for (const auto label : radeval::kRelationLabels) {
    relation_counts[std::string(to_string(label))] = stats.of(label);
  }
  metrics["entity_counts"] = std::move(entity_counts);
  metrics["relation_counts"] = std::move(relation_counts);
  report["metrics"] = std::move(metrics);
  emit_report(report, opt.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factual reward and NLG metric scorer for annotated "
               "radiology-style reports"};
  app.set_version_flag("--version", radeval::kVersion);
  app.require_subcommand(1);

  ScoreRgOptions rg_opt;
  CLI::App* score_rg = app.add_subcommand(
      "score-rg", "Graph rewards between annotation JSONL corpora");
  score_rg->add_option("--hyp", rg_opt.hyp_path, "Hypothesis JSONL")
      ->required();
  score_rg->add_option("--ref", rg_opt.ref_path, "Reference JSONL")
      ->required();
  score_rg->add_option("--variants", rg_opt.variants,
                       "Comma list of e, er, er_bar");
  score_rg->add_option("--out", rg_opt.out_path, "Report path (default stdout)");
  score_rg->add_flag("--per-example", rg_opt.per_example,
                     "Include the per-report table");
  score_rg->add_option("--jobs", rg_opt.jobs, "Worker threads");

  ScoreNlgOptions nlg_opt;
  CLI::App* score_nlg = app.add_subcommand(
      "score-nlg", "BLEU-4 / ROUGE-L / CIDEr-D between line-aligned text");
  score_nlg->add_option("--hyp", nlg_opt.hyp_path, "Hypothesis text file")
      ->required();
  score_nlg->add_option("--ref", nlg_opt.ref_path, "Reference text file")
      ->required();
  score_nlg->add_option("--metrics", nlg_opt.metrics,
                        "Comma list of bleu4, rougel, ciderd");
  score_nlg->add_option("--out", nlg_opt.out_path,
                        "Report path (default stdout)");
  score_nlg->add_flag("--per-example", nlg_opt.per_example,
                      "Include the per-line table");
  score_nlg->add_option("--jobs", nlg_opt.jobs, "Worker threads");

  ChexbertOptions chex_opt;
  CLI::App* chexbert = app.add_subcommand(
      "chexbert-f1", "Clinical-label F1 between label CSVs");
  chexbert->add_option("--hyp", chex_opt.hyp_path, "Hypothesis label CSV")
      ->required();
  chexbert->add_option("--ref", chex_opt.ref_path, "Reference label CSV")
      ->required();
  chexbert->add_option("--classes", chex_opt.classes,
                       "Comma list of observation names, or headline / all");
  chexbert->add_option("--out", chex_opt.out_path,
                       "Report path (default stdout)");
  chexbert->add_flag("--per-example", chex_opt.per_example,
                     "Include the per-report table");

  EntityF1Options ent_opt;
  CLI::App* entity_f1 = app.add_subcommand(
      "entity-f1", "Entity-set F1 between entity-bag JSONL corpora");
  entity_f1->add_option("--hyp", ent_opt.hyp_path, "Hypothesis bag JSONL")
      ->required();
  entity_f1->add_option("--ref", ent_opt.ref_path, "Reference bag JSONL")
      ->required();
  entity_f1->add_option("--out", ent_opt.out_path,
                        "Report path (default stdout)");
  entity_f1->add_flag("--per-example", ent_opt.per_example,
                      "Include the per-report table");

  ScstDemoOptions scst_opt;
  CLI::App* scst_demo = app.add_subcommand(
      "scst-demo", "Self-critical training demo on a bundled toy task");
  scst_demo->add_option("--config", scst_opt.config_path,
                        "key = value configuration file")
      ->required();
  scst_demo->add_option("--out", scst_opt.out_path,
                        "Learning-curve CSV path");
  scst_demo->add_option("--seed", scst_opt.seed,
                        "Override the configured seed");

  ExportDotOptions dot_opt;
  CLI::App* export_dot = app.add_subcommand(
      "export-dot", "Render annotation graphs as DOT");
  export_dot->add_option("--in", dot_opt.in_path, "Annotation JSONL")
      ->required();
  export_dot->add_option("--id", dot_opt.id,
                         "Only the report with this id (default: all)");
  export_dot->add_option("--out", dot_opt.out_path,
                         "Output path (default stdout)");

  StatsOptions stats_opt;
  CLI::App* stats = app.add_subcommand(
      "stats", "Label and relation counts over an annotation corpus");
  stats->add_option("--in", stats_opt.in_path, "Annotation JSONL")
      ->required();
  stats->add_option("--out", stats_opt.out_path,
                    "Report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  try {
    if (score_rg->parsed()) return run_score_rg(rg_opt);
    if (score_nlg->parsed()) return run_score_nlg(nlg_opt);
    if (chexbert->parsed()) return run_chexbert(chex_opt);
    if (entity_f1->parsed()) return run_entity_f1(ent_opt);
    if (scst_demo->parsed()) return run_scst_demo(scst_opt);
    if (export_dot->parsed()) return run_export_dot(dot_opt);
    if (stats->parsed()) return run_stats(stats_opt);
  } catch (const AlignmentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
