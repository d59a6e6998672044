#include "pragcap/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace pragcap {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string config_digest(const json& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

json meta_object(const json& config, std::uint64_t seed) {
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"seed", seed},
              {"config_digest", config_digest(config)},
              {"config", config}};
}

json label_to_json(const Label& label) {
  return json(label.values());
}

Label label_from_json(const json& j) {
  if (!j.is_array() || j.size() != kFeatureCount) {
    throw std::runtime_error("label must be an array of 6 integers");
  }
  std::array<int, kFeatureCount> values{};
  for (int i = 0; i < kFeatureCount; ++i) values[i] = j[i].get<int>();
  return Label(values);
}

json constraint_to_json(const MatchConstraint& c) {
  if (c.is_random()) {
    return json{{"type", "random"}, {"k", c.random_k}};
  }
  json features = json::array();
  for (Feature f : c.features) features.push_back(std::string(feature_name(f)));
  return json{{"type", "features"}, {"features", features}};
}

MatchConstraint constraint_from_json(const json& j) {
  MatchConstraint c;
  const std::string type = j.at("type").get<std::string>();
  if (type == "random") {
    c.random_k = j.at("k").get<int>();
  } else if (type == "features") {
    for (const auto& name : j.at("features")) {
      const auto f = feature_from_name(name.get<std::string>());
      if (!f) throw std::runtime_error("unknown feature \"" + name.get<std::string>() + "\"");
      c.features.push_back(*f);
    }
  } else {
    throw std::runtime_error("unknown constraint type \"" + type + "\"");
  }
  return c;
}

json split_spec_to_json(const SplitSpec& spec) {
  return json{{"name", spec.name},
              {"category", std::string(category_name(spec.category))},
              {"constraint", constraint_to_json(spec.constraint)},
              {"pairs_per_set", spec.pairs_per_set},
              {"seed", spec.seed},
              {"unique_pairs", spec.unique_pairs}};
}

SplitSpec split_spec_from_json(const json& j) {
  SplitSpec spec;
  spec.name = j.at("name").get<std::string>();
  const auto category = category_from_name(j.at("category").get<std::string>());
  if (!category) {
    throw std::runtime_error("unknown category \"" + j.at("category").get<std::string>() + "\"");
  }
  spec.category = *category;
  spec.constraint = constraint_from_json(j.at("constraint"));
  spec.pairs_per_set = j.at("pairs_per_set").get<int>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.unique_pairs = j.value("unique_pairs", false);
  return spec;
}

json mention_record_to_json(const MentionRecord& rec) {
  json mentions = json::object();
  for (Feature f : kFeatures) {
    const auto& list = rec.mentions[feature_index(f)];
    if (list.empty()) continue;
    json entries = json::array();
    for (const auto& m : list) {
      entries.push_back(json{{"values", m.values}, {"truthful", m.truthful}});
    }
    mentions[std::string(feature_name(f))] = entries;
  }
  return json{{"mentions", mentions},
              {"unresolved_colors", rec.unresolved_colors},
              {"k", rec.truthful_feature_count()},
              {"k_all_mentions", rec.mentioned_feature_count()},
              {"false_features", rec.false_feature_count()}};
}

std::vector<json> read_jsonl(std::istream& in) {
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<json> read_jsonl_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  return read_jsonl(in);
}

double round3(double x) {
  const double r = std::round(x * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;
}

namespace {

json optional_metric(const std::optional<double>& v) {
  if (!v) return nullptr;
  return round3(*v);
}

json set_report_to_json(const SetReport& set) {
  json redundancy = json::object();
  json redundancy_counts = json::object();
  for (Feature f : kFeatures) {
    const int fi = feature_index(f);
    const std::string name(feature_name(f));
    redundancy[name] = optional_metric(set.redundancy.proportion[fi]);
    redundancy_counts[name] = json{{"mentioned", set.redundancy.mentioned[fi]},
                                   {"occasions", set.redundancy.occasions[fi]}};
  }
  json out{{"name", set.name},
              {"category", set.category},
              {"count", set.agg.count},
              {"metrics",
               json{{"discriminativity", round3(set.agg.mean_d)},
                    {"contrastive_efficiency", optional_metric(set.agg.mean_e)},
                    {"e_support", set.agg.e_support},
                    {"relevance", round3(set.agg.mean_r)},
                    {"optimal_contrastivity", round3(set.agg.mean_od)},
                    {"mentioned_features", round3(set.agg.mean_k)},
                    {"false_features", round3(set.agg.mean_false)},
                    {"listener_accuracy", optional_metric(set.agg.listener_accuracy)}}},
              {"redundancy", redundancy},
              {"redundancy_counts", redundancy_counts}};
  if (!set.uncovered.empty()) out["uncovered"] = set.uncovered;
  return out;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", round3(v));
  return buf;
}

std::string csv_metric(const std::optional<double>& v) {
  return v ? fixed3(*v) : std::string("---");
}

}  // namespace

json report_to_json(const BenchmarkReport& report, const json& meta) {
  json sets = json::array();
  for (const auto& set : report.sets) sets.push_back(set_report_to_json(set));
  json categories = json::array();
  for (const auto& cat : report.categories) categories.push_back(set_report_to_json(cat));
  return json{{"meta", meta}, {"sets", sets}, {"categories", categories}};
}

std::string report_to_csv(const BenchmarkReport& report, const json& meta) {
  std::vector<const SetReport*> columns;
  for (const auto& set : report.sets) columns.push_back(&set);
  for (const auto& cat : report.categories) columns.push_back(&cat);

  std::ostringstream out;
  out << "# " << kToolName << " v" << kToolVersion
      << " config=" << meta.value("config_digest", std::string("-"))
      << " seed=" << meta.value("seed", 0ULL) << "\n";
  out << "score";
  for (const auto* col : columns) out << ',' << col->name;
  out << "\n";

  const auto row = [&](const std::string& label, auto&& cell) {
    out << label;
    for (const auto* col : columns) out << ',' << cell(*col);
    out << "\n";
  };
  row("Discriminativity", [](const SetReport& s) { return fixed3(s.agg.mean_d); });
  row("Contrastive efficiency", [](const SetReport& s) { return csv_metric(s.agg.mean_e); });
  row("Relevance", [](const SetReport& s) { return fixed3(s.agg.mean_r); });
  row("Optimal contrastivity", [](const SetReport& s) { return fixed3(s.agg.mean_od); });
  row("Mentioned features #", [](const SetReport& s) { return fixed3(s.agg.mean_k); });
  row("False features #", [](const SetReport& s) { return fixed3(s.agg.mean_false); });
  row("Listener accuracy",
      [](const SetReport& s) { return csv_metric(s.agg.listener_accuracy); });
  row("Pairs", [](const SetReport& s) { return std::to_string(s.agg.count); });
  row("E support", [](const SetReport& s) { return std::to_string(s.agg.e_support); });
  for (Feature f : kFeatures) {
    row("Redundancy " + std::string(feature_name(f)), [&](const SetReport& s) {
      return csv_metric(s.redundancy.proportion[feature_index(f)]);
    });
  }
  return out.str();
}

}  // namespace pragcap
