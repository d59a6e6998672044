#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pragcap/agents.hpp"
#include "pragcap/caption_gen.hpp"
#include "pragcap/caption_parser.hpp"
#include "pragcap/feature_space.hpp"
#include "pragcap/io.hpp"
#include "pragcap/lexicon.hpp"
#include "pragcap/metrics.hpp"
#include "pragcap/splits.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pragcap;

namespace {

// Exit codes: 0 success, 2 argument error, 3 validation failure, 4 I/O error.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

struct CliFailure : std::runtime_error {
  CliFailure(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw CliFailure(kExitIo, "cannot write " + path.string());
  }
  return out;
}

struct CommonOptions {
  std::string lexicon_path;
  std::uint64_t seed = 0;
  int color_window = 3;
  std::string k_convention = "truthful";
  int workers = 1;
  std::string category;  // restrict evaluate/simulate to one split category
};

void filter_by_category(std::vector<PairSet>& suite, const std::string& category) {
  if (category.empty()) return;
  const auto wanted = category_from_name(category);
  if (!wanted) {
    throw CliFailure(kExitUsage, "unknown category \"" + category + "\"");
  }
  std::erase_if(suite, [&](const PairSet& set) { return set.spec.category != *wanted; });
  if (suite.empty()) {
    throw CliFailure(kExitUsage, "no sets in category \"" + category + "\"");
  }
}

Lexicon resolve_lexicon(const CommonOptions& opts, json& config) {
  std::string path = opts.lexicon_path;
  if (path.empty()) {
    if (const char* env = std::getenv("PRAGCAP_LEXICON")) path = env;
  }
  if (path.empty()) {
    config["lexicon"] = "builtin";
    return Lexicon::builtin();
  }
  config["lexicon"] = path;
  try {
    return load_lexicon(path);
  } catch (const LexiconError& e) {
    std::ostringstream msg;
    msg << e.what();
    for (const auto& v : e.violations()) {
      if (!v.note) msg << "\n  [" << v.code << "] " << v.message;
    }
    throw CliFailure(kExitValidation, msg.str());
  } catch (const LexiconFormatError& e) {
    throw CliFailure(kExitValidation, e.what());
  }
}

KConvention parse_convention(const std::string& name) {
  if (name == "truthful") return KConvention::Truthful;
  if (name == "all-mentions") return KConvention::AllMentions;
  throw CliFailure(kExitUsage, "unknown k-convention \"" + name + "\"");
}

std::array<double, kFeatureCount> parse_feature_weights(const std::string& text) {
  std::array<double, kFeatureCount> weights{};
  if (text.empty()) return weights;
  if (text.find('=') == std::string::npos) {
    weights.fill(std::stod(text));
    return weights;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw CliFailure(kExitUsage, "expected feature=value in \"" + text + "\"");
    }
    const auto f = feature_from_name(item.substr(0, eq));
    if (!f) {
      throw CliFailure(kExitUsage, "unknown feature \"" + item.substr(0, eq) + "\"");
    }
    weights[feature_index(*f)] = std::stod(item.substr(eq + 1));
  }
  return weights;
}

std::pair<ImageId, ImageId> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw CliFailure(kExitUsage, "range must be START:END, got \"" + text + "\"");
  }
  const ImageId lo = std::stoll(text.substr(0, colon));
  const ImageId hi = std::stoll(text.substr(colon + 1));
  if (lo < 0 || hi > kImageCount || lo >= hi) {
    throw CliFailure(kExitUsage, "range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                     ") is not a non-empty subrange of [0, " +
                                     std::to_string(kImageCount) + ")");
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// validate-lexicon

int cmd_validate_lexicon(const CommonOptions& opts) {
  std::string path = opts.lexicon_path;
  if (path.empty()) {
    if (const char* env = std::getenv("PRAGCAP_LEXICON")) path = env;
  }
  Lexicon lex = [&] {
    try {
      return path.empty() ? Lexicon::builtin() : Lexicon::from_file(path);
    } catch (const LexiconFormatError& e) {
      throw CliFailure(kExitValidation, std::string("schema error: ") + e.what());
    }
  }();
  const auto violations = validate_lexicon(lex);
  for (const auto& v : violations) {
    std::cout << (v.note ? "note" : "violation") << " [" << v.code << "] " << v.message
              << "\n";
  }
  const auto errors = error_count(violations);
  std::cout << (path.empty() ? "builtin lexicon" : path) << ": " << errors
            << " violation(s), " << violations.size() - errors << " note(s)\n";
  return errors == 0 ? kExitOk : kExitValidation;
}

// ---------------------------------------------------------------------------
// gen-captions

int cmd_gen_captions(const CommonOptions& opts, const std::string& range_text,
                     const std::string& kind_name, const std::string& out_path,
                     std::uint64_t shard_bytes) {
  const auto kind = caption_kind_from_name(kind_name);
  if (!kind) {
    throw CliFailure(kExitUsage, "kind must be exhaustive or short");
  }
  const auto [lo, hi] = parse_range(range_text);

  json config{{"command", "gen-captions"}, {"range", range_text}, {"kind", kind_name},
              {"out", out_path},           {"shard_bytes", shard_bytes}};
  const Lexicon lex = resolve_lexicon(opts, config);
  const json meta = meta_object(config, opts.seed);
  const std::string meta_line = json{{"meta", meta}}.dump() + "\n";

  const fs::path out(out_path);
  int shard = 0;
  std::uint64_t written = 0;
  std::ofstream stream;
  const auto open_shard = [&] {
    fs::path path = out;
    if (shard_bytes > 0) {
      char suffix[8];
      std::snprintf(suffix, sizeof(suffix), ".%03d", shard);
      path = out.parent_path() / (out.stem().string() + suffix + out.extension().string());
    }
    stream = open_out(path);
    stream << meta_line;
    written = meta_line.size();
  };
  open_shard();

  for (ImageId id = lo; id < hi; ++id) {
    const Label label = decode_id(id);
    for (const auto& caption : generate_captions(label, lex, *kind)) {
      const std::string line = json{{"image_id", id},
                                    {"label", label_to_json(label)},
                                    {"kind", caption_kind_name(*kind)},
                                    {"text", caption.text}}
                                   .dump() +
                               "\n";
      if (shard_bytes > 0 && written + line.size() > shard_bytes && written > meta_line.size()) {
        ++shard;
        open_shard();
      }
      stream << line;
      written += line.size();
    }
    if ((id - lo + 1) % 10000 == 0) {
      std::cerr << "gen-captions: " << (id - lo + 1) << "/" << (hi - lo) << " images\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// make-splits

void write_split_file(const fs::path& path, const PairSet& set, const json& meta) {
  auto out = open_out(path);
  out << json{{"meta", meta}}.dump() << "\n";
  const json constraint = constraint_to_json(set.spec.constraint);
  const std::string category(category_name(set.spec.category));
  for (std::size_t i = 0; i < set.pairs.size(); ++i) {
    out << json{{"pair_index", i},
                {"target_id", encode_id(set.pairs[i].target())},
                {"distractor_id", encode_id(set.pairs[i].distractor())},
                {"category", category},
                {"constraint", constraint},
                {"seed", set.spec.seed}}
               .dump()
        << "\n";
  }
}

int cmd_make_splits(const CommonOptions& opts, const std::string& out_dir,
                    int pairs_per_set, const std::string& custom_name,
                    const std::string& custom_match, bool unique_pairs) {
  json config{{"command", "make-splits"},
              {"out", out_dir},
              {"pairs_per_set", pairs_per_set},
              {"custom_name", custom_name},
              {"custom_match", custom_match},
              {"unique_pairs", unique_pairs}};
  config["lexicon"] = "n/a";
  const json meta = meta_object(config, opts.seed);

  std::vector<PairSet> suite;
  try {
    if (!custom_match.empty()) {
      MatchConstraint constraint;
      if (custom_match.rfind("random:", 0) == 0) {
        constraint.random_k = std::stoi(custom_match.substr(7));
      } else {
        std::stringstream ss(custom_match);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const auto f = feature_from_name(item);
          if (!f) throw CliFailure(kExitUsage, "unknown feature \"" + item + "\"");
          constraint.features.push_back(*f);
        }
      }
      SplitSpec spec;
      spec.name = custom_name.empty() ? "custom" : custom_name;
      const int size = constraint.size();
      spec.category = size == 1   ? SplitCategory::OneFeature
                      : size == 2 ? SplitCategory::TwoFeatures
                                  : SplitCategory::ThreeFeatures;
      spec.constraint = constraint;
      spec.pairs_per_set = pairs_per_set;
      spec.seed = opts.seed;
      spec.unique_pairs = unique_pairs;
      suite.push_back(build_split(spec));
    } else {
      suite = standard_suite(opts.seed, pairs_per_set);
      if (unique_pairs) {
        for (auto& set : suite) {
          set.spec.unique_pairs = true;
          set = build_split(set.spec);
        }
      }
    }
  } catch (const std::invalid_argument& e) {
    throw CliFailure(kExitUsage, e.what());
  }

  json sets = json::array();
  for (const auto& set : suite) {
    const auto violations = validate_split(set);
    if (!violations.empty()) {
      throw CliFailure(kExitValidation,
                       "internal: generated split failed validation: " + violations[0].message);
    }
    const std::string file = set.spec.name + ".jsonl";
    write_split_file(fs::path(out_dir) / file, set, meta);
    json entry = split_spec_to_json(set.spec);
    entry["file"] = file;
    sets.push_back(entry);
  }
  auto manifest = open_out(fs::path(out_dir) / "manifest.json");
  manifest << json{{"meta", meta}, {"sets", sets}}.dump(2) << "\n";
  std::cerr << "make-splits: wrote " << suite.size() << " set(s) to " << out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// shared: loading a suite from a manifest

std::vector<PairSet> load_suite(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw CliFailure(kExitIo, "cannot open " + manifest_path.string());
  }
  json manifest;
  try {
    in >> manifest;
  } catch (const json::parse_error& e) {
    throw CliFailure(kExitValidation, manifest_path.string() + ": " + e.what());
  }
  std::vector<PairSet> suite;
  for (const auto& entry : manifest.at("sets")) {
    PairSet set;
    try {
      set.spec = split_spec_from_json(entry);
    } catch (const std::exception& e) {
      throw CliFailure(kExitValidation, "manifest entry: " + std::string(e.what()));
    }
    const fs::path file = manifest_path.parent_path() / entry.at("file").get<std::string>();
    std::vector<json> records;
    try {
      records = read_jsonl_file(file.string());
    } catch (const std::runtime_error& e) {
      throw CliFailure(kExitIo, file.string() + ": " + e.what());
    }
    for (const auto& rec : records) {
      if (rec.contains("meta")) continue;
      try {
        set.pairs.emplace_back(decode_id(rec.at("target_id").get<ImageId>()),
                               decode_id(rec.at("distractor_id").get<ImageId>()));
      } catch (const std::exception& e) {
        throw CliFailure(kExitValidation, file.string() + " pair " +
                                              std::to_string(set.pairs.size()) + ": " +
                                              e.what());
      }
    }
    const auto violations = validate_split(set);
    if (!violations.empty()) {
      throw CliFailure(kExitValidation, file.string() + ": " + violations[0].message +
                                            " (and " + std::to_string(violations.size() - 1) +
                                            " more)");
    }
    suite.push_back(std::move(set));
  }
  if (suite.empty()) {
    throw CliFailure(kExitValidation, "manifest lists no sets");
  }
  return suite;
}

void write_reports(const std::string& out_prefix, const BenchmarkReport& report,
                   const json& meta, const std::string& format) {
  if (format == "json" || format == "both") {
    auto out = open_out(out_prefix + ".json");
    out << report_to_json(report, meta).dump(2) << "\n";
  }
  if (format == "csv" || format == "both") {
    auto out = open_out(out_prefix + ".csv");
    out << report_to_csv(report, meta);
  }
}

// ---------------------------------------------------------------------------
// evaluate

int cmd_evaluate(const CommonOptions& opts, const std::string& manifest_path,
                 const std::string& captions_path, const std::string& out_prefix,
                 const std::string& format, const std::string& audit_path) {
  json config{{"command", "evaluate"},       {"splits", manifest_path},
              {"captions", captions_path},   {"out", out_prefix},
              {"format", format},            {"color_window", opts.color_window},
              {"k_convention", opts.k_convention}, {"category", opts.category}};
  const Lexicon lex = resolve_lexicon(opts, config);
  const json meta = meta_object(config, opts.seed);
  const KConvention convention = parse_convention(opts.k_convention);
  const ParserConfig parser_config{opts.color_window, ColorPrecedence::UniqueFirst};

  auto suite = load_suite(manifest_path);
  filter_by_category(suite, opts.category);

  std::map<std::pair<std::string, std::int64_t>, std::string> dump;
  std::vector<json> records;
  try {
    records = read_jsonl_file(captions_path);
  } catch (const std::runtime_error& e) {
    throw CliFailure(kExitIo, captions_path + ": " + e.what());
  }
  for (const auto& rec : records) {
    if (rec.contains("meta")) continue;
    std::string set_name;
    if (rec.contains("set")) {
      set_name = rec.at("set").get<std::string>();
    } else if (suite.size() == 1) {
      set_name = suite[0].spec.name;
    } else {
      throw CliFailure(kExitValidation,
                       "caption record without \"set\" but the manifest has several sets");
    }
    dump[{set_name, rec.at("pair_index").get<std::int64_t>()}] =
        rec.at("text").get<std::string>();
  }

  std::optional<std::ofstream> audit;
  if (!audit_path.empty()) {
    audit = open_out(audit_path);
    *audit << json{{"meta", meta}}.dump() << "\n";
  }

  BenchmarkReport report;
  for (const auto& set : suite) {
    std::vector<CaptionEval> evals;
    std::vector<EvalItem> items;
    std::vector<std::int64_t> uncovered;
    for (std::size_t i = 0; i < set.pairs.size(); ++i) {
      const auto it = dump.find({set.spec.name, static_cast<std::int64_t>(i)});
      if (it == dump.end()) {
        uncovered.push_back(static_cast<std::int64_t>(i));
        continue;
      }
      EvalItem item = evaluate_text(it->second, set.pairs[i], lex, parser_config, convention);
      if (audit) {
        json line{{"set", set.spec.name},
                  {"pair_index", i},
                  {"text", it->second},
                  {"record", mention_record_to_json(item.mentions)},
                  {"c", item.eval.c},
                  {"k", item.eval.k},
                  {"z", item.eval.z},
                  {"d", item.eval.d ? 1 : 0},
                  {"e", item.eval.e ? json(round3(*item.eval.e)) : json(nullptr)},
                  {"r", round3(item.eval.r)},
                  {"od", item.eval.od ? 1 : 0}};
        *audit << line.dump() << "\n";
      }
      evals.push_back(item.eval);
      items.push_back(std::move(item));
    }
    if (!uncovered.empty()) {
      std::cerr << "warning: " << set.spec.name << ": " << uncovered.size()
                << " pair(s) not covered by the caption dump\n";
    }
    if (evals.empty()) {
      std::cerr << "warning: " << set.spec.name << ": no covered pairs; skipping\n";
      continue;
    }
    SetReport set_report;
    set_report.name = set.spec.name;
    set_report.category = std::string(category_name(set.spec.category));
    set_report.agg = aggregate(evals, set.spec.name);
    set_report.redundancy = redundancy_profile(items);
    set_report.uncovered = std::move(uncovered);
    report.sets.push_back(std::move(set_report));
  }
  if (report.sets.empty()) {
    throw CliFailure(kExitValidation, "caption dump covers no pairs of the manifest");
  }
  report.categories = rollup_categories(report.sets);
  write_reports(out_prefix, report, meta, format);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const CommonOptions& opts, const std::string& manifest_path,
                 int pairs_per_set, const std::string& speaker_name,
                 const std::string& listener_name, double alpha, const std::string& cost,
                 const std::string& redundancy, const std::string& family,
                 bool sample_listener, const std::string& out_prefix,
                 const std::string& format, const std::string& game_log_path) {
  const auto speaker_kind = speaker_kind_from_name(speaker_name);
  if (!speaker_kind) {
    throw CliFailure(kExitUsage, "unknown speaker \"" + speaker_name + "\"");
  }
  const auto listener_kind = listener_kind_from_name(listener_name);
  if (!listener_kind) {
    throw CliFailure(kExitUsage, "unknown listener \"" + listener_name + "\"");
  }

  json config{{"command", "simulate"},   {"splits", manifest_path},
              {"pairs_per_set", pairs_per_set}, {"speaker", speaker_name},
              {"listener", listener_name},     {"alpha", alpha},
              {"cost", cost},                  {"redundancy", redundancy},
              {"family", family},              {"sample_listener", sample_listener},
              {"out", out_prefix},             {"format", format},
              {"color_window", opts.color_window},
              {"k_convention", opts.k_convention}, {"category", opts.category}};
  const Lexicon lex = resolve_lexicon(opts, config);
  const json meta = meta_object(config, opts.seed);

  SpeakerConfig speaker;
  speaker.kind = *speaker_kind;
  speaker.alpha = alpha;
  try {
    speaker.feature_cost = parse_feature_weights(cost);
    speaker.redundancy = parse_feature_weights(redundancy);
  } catch (const std::exception& e) {
    throw CliFailure(kExitUsage, e.what());
  }
  if (!family.empty()) {
    speaker.family = UtteranceFamily{false, false, false};
    std::stringstream ss(family);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "minimal") speaker.family.minimal = true;
      else if (item == "short") speaker.family.short_captions = true;
      else if (item == "exhaustive") speaker.family.exhaustive = true;
      else throw CliFailure(kExitUsage, "unknown utterance family part \"" + item + "\"");
    }
  }

  ListenerConfig listener;
  listener.kind = *listener_kind;
  listener.sample = sample_listener;
  listener.color_noun_window = opts.color_window;
  listener.assumed = speaker;
  if (listener.assumed.kind != SpeakerKind::Rsa) listener.assumed.kind = SpeakerKind::Rsa;

  std::vector<PairSet> suite;
  if (!manifest_path.empty()) {
    suite = load_suite(manifest_path);
  } else {
    suite = standard_suite(opts.seed, pairs_per_set);
  }
  filter_by_category(suite, opts.category);

  std::vector<LoggedGame> log;
  std::vector<LoggedGame>* log_ptr = game_log_path.empty() ? nullptr : &log;
  const auto report = run_benchmark(speaker, listener, suite, lex, opts.seed, opts.workers,
                                    parse_convention(opts.k_convention), log_ptr);
  write_reports(out_prefix, report, meta, format);

  if (!game_log_path.empty()) {
    auto out = open_out(game_log_path);
    out << json{{"meta", meta}}.dump() << "\n";
    for (const auto& entry : log) {
      const auto& ev = entry.game.eval;
      out << json{{"set", entry.set},
                  {"pair_index", entry.pair_index},
                  {"text", entry.game.caption.text},
                  {"guess", entry.game.guess == 0 ? "target" : "distractor"},
                  {"reward", entry.game.reward},
                  {"c", ev.c},
                  {"k", ev.k},
                  {"z", ev.z},
                  {"d", ev.d ? 1 : 0},
                  {"e", ev.e ? json(round3(*ev.e)) : json(nullptr)},
                  {"r", round3(ev.r)},
                  {"od", ev.od ? 1 : 0},
                  {"false_features", ev.false_features}}
                 .dump()
          << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pragmatic caption generation, evaluation, and reference-game simulation"};
  app.require_subcommand(1);

  CommonOptions opts;
  app.add_option("--lexicon", opts.lexicon_path,
                 "lexicon JSON path (default: $PRAGCAP_LEXICON, else builtin)");
  app.add_option("--seed", opts.seed, "master seed");
  app.add_option("--color-window", opts.color_window,
                 "tokens after a color phrase scanned for a head noun")
      ->check(CLI::PositiveNumber);
  app.add_option("--k-convention", opts.k_convention, "truthful | all-mentions");
  app.add_option("--workers", opts.workers, "worker threads for simulation")
      ->check(CLI::PositiveNumber);
  app.add_option("--category", opts.category,
                 "restrict evaluate/simulate to one_feature, two_features, or three_features");

  auto* validate = app.add_subcommand("validate-lexicon", "check a lexicon and report findings");

  auto* gen = app.add_subcommand("gen-captions", "dump ground-truth captions as JSONL");
  std::string range_text, kind_name, gen_out;
  std::uint64_t shard_bytes = 0;
  gen->add_option("--range", range_text, "image-id range START:END")->required();
  gen->add_option("--kind", kind_name, "exhaustive | short")->required();
  gen->add_option("--out", gen_out, "output JSONL path")->required();
  gen->add_option("--shard-bytes", shard_bytes, "roll to a new shard after this many bytes");

  auto* splits = app.add_subcommand("make-splits", "build seeded evaluation pair sets");
  std::string splits_out, custom_name, custom_match;
  int pairs_per_set = 7500;
  bool unique_pairs = false;
  splits->add_option("--out", splits_out, "output directory")->required();
  splits->add_option("--pairs-per-set", pairs_per_set, "pairs per set")
      ->check(CLI::PositiveNumber);
  splits->add_option("--name", custom_name, "custom set name");
  splits->add_option("--match", custom_match,
                     "custom constraint: comma-separated features or random:K");
  splits->add_flag("--unique-pairs", unique_pairs, "reject duplicate pairs while sampling");

  auto* evaluate = app.add_subcommand("evaluate", "score an external caption dump");
  std::string eval_manifest, eval_captions, eval_out, eval_format = "both", audit_path;
  evaluate->add_option("--splits", eval_manifest, "split manifest.json")->required();
  evaluate->add_option("--captions", eval_captions, "caption dump JSONL")->required();
  evaluate->add_option("--out", eval_out, "report path prefix")->required();
  evaluate->add_option("--format", eval_format, "json | csv | both");
  evaluate->add_option("--audit-out", audit_path, "write per-caption mention records here");

  auto* simulate = app.add_subcommand("simulate", "run scripted reference games");
  std::string sim_manifest, speaker_name = "exhaustive", listener_name = "l0";
  std::string cost, redundancy, family, sim_out, sim_format = "both", game_log_path;
  double alpha = 1.0;
  int sim_pairs = 7500;
  bool sample_listener = false;
  simulate->add_option("--splits", sim_manifest, "split manifest.json (default: builtin suite)");
  simulate->add_option("--pairs-per-set", sim_pairs, "pairs per set for the builtin suite")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--speaker", speaker_name,
                       "exhaustive | oracle-minimal | biased | rsa");
  simulate->add_option("--listener", listener_name, "l0 | l1");
  simulate->add_option("--alpha", alpha, "RSA rationality");
  simulate->add_option("--cost", cost, "per-feature utterance cost (scalar or f=v,...)");
  simulate->add_option("--redundancy", redundancy,
                       "biased speaker redundancy probabilities (scalar or f=v,...)");
  simulate->add_option("--family", family,
                       "RSA utterance family: comma mix of minimal,short,exhaustive");
  simulate->add_flag("--sample-listener", sample_listener,
                     "sample the guess instead of argmax");
  simulate->add_option("--out", sim_out, "report path prefix")->required();
  simulate->add_option("--format", sim_format, "json | csv | both");
  simulate->add_option("--game-log", game_log_path, "per-game JSONL log path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate_lexicon(opts);
    if (gen->parsed()) return cmd_gen_captions(opts, range_text, kind_name, gen_out, shard_bytes);
    if (splits->parsed())
      return cmd_make_splits(opts, splits_out, pairs_per_set, custom_name, custom_match,
                             unique_pairs);
    if (evaluate->parsed())
      return cmd_evaluate(opts, eval_manifest, eval_captions, eval_out, eval_format, audit_path);
    if (simulate->parsed())
      return cmd_simulate(opts, sim_manifest, sim_pairs, speaker_name, listener_name, alpha,
                          cost, redundancy, family, sample_listener, sim_out, sim_format,
                          game_log_path);
  } catch (const CliFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
