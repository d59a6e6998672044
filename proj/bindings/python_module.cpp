#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include <json.hpp>

#include "pragcap/agents.hpp"
#include "pragcap/caption_gen.hpp"
#include "pragcap/caption_parser.hpp"
#include "pragcap/feature_space.hpp"
#include "pragcap/io.hpp"
#include "pragcap/lexicon.hpp"
#include "pragcap/metrics.hpp"
#include "pragcap/rng.hpp"
#include "pragcap/splits.hpp"

namespace py = pybind11;
using namespace pragcap;

namespace {

py::object to_py(const nlohmann::json& j) {
  const py::module_ pyjson = py::module_::import("json");
  return pyjson.attr("loads")(j.dump());
}

py::dict eval_to_dict(const CaptionEval& ev) {
  py::dict out;
  out["c"] = ev.c;
  out["k"] = ev.k;
  out["z"] = ev.z;
  out["d"] = ev.d ? 1 : 0;
  out["e"] = ev.e ? py::object(py::float_(*ev.e)) : py::object(py::none());
  out["r"] = ev.r;
  out["od"] = ev.od ? 1 : 0;
  out["false_features"] = ev.false_features;
  return out;
}

py::dict aggregate_to_dict(const AggregateReport& agg) {
  py::dict out;
  out["name"] = agg.name;
  out["count"] = agg.count;
  out["discriminativity"] = agg.mean_d;
  out["contrastive_efficiency"] =
      agg.mean_e ? py::object(py::float_(*agg.mean_e)) : py::object(py::none());
  out["e_support"] = agg.e_support;
  out["relevance"] = agg.mean_r;
  out["optimal_contrastivity"] = agg.mean_od;
  out["mentioned_features"] = agg.mean_k;
  out["false_features"] = agg.mean_false;
  out["listener_accuracy"] = agg.listener_accuracy
                                 ? py::object(py::float_(*agg.listener_accuracy))
                                 : py::object(py::none());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "symbolic caption generation, pragmatic metrics, and reference games";

  py::enum_<Feature>(m, "Feature")
      .value("FLOOR_COLOR", Feature::FloorColor)
      .value("WALL_COLOR", Feature::WallColor)
      .value("OBJECT_COLOR", Feature::ObjectColor)
      .value("SCALE", Feature::Scale)
      .value("SHAPE", Feature::Shape)
      .value("ORIENTATION", Feature::Orientation);

  m.attr("IMAGE_COUNT") = kImageCount;
  m.def("feature_name", [](Feature f) { return std::string(feature_name(f)); });
  m.def("cardinality", &cardinality);

  py::class_<Label>(m, "Label")
      .def(py::init<const std::array<int, kFeatureCount>&>(), py::arg("values"))
      .def_property_readonly("values", &Label::values)
      .def("__getitem__", [](const Label& l, Feature f) { return l[f]; })
      .def("__eq__", [](const Label& a, const Label& b) { return a == b; })
      .def("__hash__", [](const Label& l) { return encode_id(l); })
      .def("__repr__", [](const Label& l) {
        std::ostringstream out;
        out << "Label([";
        for (int i = 0; i < kFeatureCount; ++i) out << (i ? ", " : "") << l.values()[i];
        out << "])";
        return out.str();
      });

  m.def("encode_id", &encode_id, py::arg("label"));
  m.def("decode_id", &decode_id, py::arg("image_id"));

  py::class_<ImagePair>(m, "ImagePair")
      .def(py::init<Label, Label>(), py::arg("target"), py::arg("distractor"))
      .def_property_readonly("target", &ImagePair::target)
      .def_property_readonly("distractor", &ImagePair::distractor)
      .def("swapped", &ImagePair::swapped);

  py::class_<ContrastProfile>(m, "ContrastProfile")
      .def_readonly("z", &ContrastProfile::z)
      .def("is_contrastive", &ContrastProfile::is_contrastive)
      .def("__repr__", [](const ContrastProfile& p) {
        std::ostringstream out;
        out << "ContrastProfile(z=" << p.z << ")";
        return out.str();
      });
  m.def("contrast_profile", &contrast_profile, py::arg("pair"));

  py::class_<Lexicon>(m, "Lexicon")
      .def_static("builtin", &Lexicon::builtin, py::return_value_policy::reference)
      .def_static("from_file", &Lexicon::from_file, py::arg("path"))
      .def_static("from_json_text", [](const std::string& text) {
        return Lexicon::from_json_text(text);
      })
      .def_property_readonly("version", &Lexicon::version)
      .def("phrases_for", [](const Lexicon& lex, Feature f, int value) {
        std::vector<std::string> out;
        for (const auto* p : lex.phrases_for(f, value)) out.push_back(p->text());
        return out;
      });
  m.def("validate_lexicon", [](const Lexicon& lex) {
    py::list out;
    for (const auto& v : validate_lexicon(lex)) {
      py::dict entry;
      entry["code"] = v.code;
      entry["message"] = v.message;
      entry["note"] = v.note;
      out.append(entry);
    }
    return out;
  });
  m.def("load_lexicon", &load_lexicon, py::arg("path"));

  py::enum_<CaptionKind>(m, "CaptionKind")
      .value("EXHAUSTIVE", CaptionKind::Exhaustive)
      .value("SHORT", CaptionKind::Short);

  py::class_<Caption>(m, "Caption")
      .def_readonly("text", &Caption::text)
      .def_readonly("kind", &Caption::kind)
      .def_readonly("mentioned", &Caption::mentioned)
      .def("__repr__", [](const Caption& c) { return "Caption(" + c.text + ")"; });

  m.def("exhaustive_captions", &exhaustive_captions, py::arg("label"), py::arg("lexicon"));
  m.def("short_captions", &short_captions, py::arg("label"), py::arg("lexicon"));
  m.def("sample_caption", &sample_caption, py::arg("label"), py::arg("lexicon"),
        py::arg("kind"), py::arg("seed"));
  m.def("count_for_label", &count_for_label, py::arg("lexicon"), py::arg("kind"),
        py::arg("label"));
  m.def("count_captions", [](const Lexicon& lex, CaptionKind kind) {
    const auto counts = count_captions(lex, kind);
    py::dict out;
    out["per_image_min"] = counts.per_image_min;
    out["per_image_max"] = counts.per_image_max;
    out["total"] = counts.total;
    out["label_independent"] = counts.label_independent;
    return out;
  });

  m.def("tokenize", [](const std::string& text) { return tokenize(text); });

  py::class_<MentionRecord>(m, "MentionRecord")
      .def_property_readonly("k", &MentionRecord::truthful_feature_count)
      .def_property_readonly("k_all_mentions", &MentionRecord::mentioned_feature_count)
      .def_property_readonly("false_features", &MentionRecord::false_feature_count)
      .def_readonly("unresolved_colors", &MentionRecord::unresolved_colors)
      .def("feature_truthful", &MentionRecord::feature_truthful)
      .def("feature_mentioned", &MentionRecord::feature_mentioned)
      .def("truthful_features", &MentionRecord::truthful_features)
      .def("to_dict",
           [](const MentionRecord& rec) { return to_py(mention_record_to_json(rec)); });

  m.def("extract_mentions",
        [](const std::string& text, const Label& target, const Lexicon& lex, int color_window,
           bool noun_first) {
          const ParserConfig config{color_window, noun_first ? ColorPrecedence::NounFirst
                                                             : ColorPrecedence::UniqueFirst};
          return extract_mentions(text, target, lex, config);
        },
        py::arg("text"), py::arg("target"), py::arg("lexicon"), py::arg("color_window") = 3,
        py::arg("noun_first") = false);

  m.def("eval_from_counts", [](int c, int k, int z, int false_features) {
    return eval_to_dict(eval_from_counts(c, k, z, false_features));
  }, py::arg("c"), py::arg("k"), py::arg("z"), py::arg("false_features") = 0);

  m.def("evaluate_caption",
        [](const std::string& text, const ImagePair& pair, const Lexicon& lex,
           int color_window, bool all_mentions) {
          const ParserConfig config{color_window, ColorPrecedence::UniqueFirst};
          const auto item = evaluate_text(text, pair, lex, config,
                                          all_mentions ? KConvention::AllMentions
                                                       : KConvention::Truthful);
          return eval_to_dict(item.eval);
        },
        py::arg("text"), py::arg("pair"), py::arg("lexicon"), py::arg("color_window") = 3,
        py::arg("all_mentions") = false);

  py::enum_<SplitCategory>(m, "SplitCategory")
      .value("ONE_FEATURE", SplitCategory::OneFeature)
      .value("TWO_FEATURES", SplitCategory::TwoFeatures)
      .value("THREE_FEATURES", SplitCategory::ThreeFeatures);

  py::class_<PairSet>(m, "PairSet")
      .def_property_readonly("name", [](const PairSet& s) { return s.spec.name; })
      .def_property_readonly("category",
                             [](const PairSet& s) { return std::string(category_name(s.spec.category)); })
      .def_property_readonly("seed", [](const PairSet& s) { return s.spec.seed; })
      .def_readonly("pairs", &PairSet::pairs)
      .def("__len__", [](const PairSet& s) { return s.pairs.size(); });

  m.def("build_split",
        [](const std::string& name, const std::vector<Feature>& match, int random_k,
           int pairs_per_set, std::uint64_t seed) {
          MatchConstraint constraint{match, random_k};
          const int size = constraint.size();
          SplitSpec spec{name,
                         size == 1   ? SplitCategory::OneFeature
                         : size == 2 ? SplitCategory::TwoFeatures
                                     : SplitCategory::ThreeFeatures,
                         constraint, pairs_per_set, seed};
          return build_split(spec);
        },
        py::arg("name"), py::arg("match") = std::vector<Feature>{}, py::arg("random_k") = 0,
        py::arg("pairs_per_set") = 7500, py::arg("seed") = 0);
  m.def("standard_suite", &standard_suite, py::arg("seed"), py::arg("pairs_per_set") = 7500);
  m.def("validate_split", [](const PairSet& set) {
    py::list out;
    for (const auto& v : validate_split(set)) {
      py::dict entry;
      entry["code"] = v.code;
      entry["message"] = v.message;
      out.append(entry);
    }
    return out;
  });

  py::class_<SpeakerConfig>(m, "SpeakerConfig")
      .def(py::init([](const std::string& kind, double alpha, py::dict redundancy,
                       py::dict cost, const std::string& family) {
             SpeakerConfig config;
             const auto parsed = speaker_kind_from_name(kind);
             if (!parsed) throw std::invalid_argument("unknown speaker kind: " + kind);
             config.kind = *parsed;
             config.alpha = alpha;
             for (const auto& item : redundancy) {
               const auto f = feature_from_name(py::cast<std::string>(item.first));
               if (!f) throw std::invalid_argument("unknown feature in redundancy");
               config.redundancy[feature_index(*f)] = py::cast<double>(item.second);
             }
             for (const auto& item : cost) {
               const auto f = feature_from_name(py::cast<std::string>(item.first));
               if (!f) throw std::invalid_argument("unknown feature in cost");
               config.feature_cost[feature_index(*f)] = py::cast<double>(item.second);
             }
             if (!family.empty()) {
               config.family = UtteranceFamily{false, false, false};
               std::stringstream ss(family);
               std::string part;
               while (std::getline(ss, part, ',')) {
                 if (part == "minimal") config.family.minimal = true;
                 else if (part == "short") config.family.short_captions = true;
                 else if (part == "exhaustive") config.family.exhaustive = true;
                 else throw std::invalid_argument("unknown family part: " + part);
               }
             }
             return config;
           }),
           py::arg("kind"), py::arg("alpha") = 1.0, py::arg("redundancy") = py::dict(),
           py::arg("cost") = py::dict(), py::arg("family") = "");

  py::class_<ListenerConfig>(m, "ListenerConfig")
      .def(py::init([](const std::string& kind, bool sample, int color_window) {
             ListenerConfig config;
             const auto parsed = listener_kind_from_name(kind);
             if (!parsed) throw std::invalid_argument("unknown listener kind: " + kind);
             config.kind = *parsed;
             config.sample = sample;
             config.color_noun_window = color_window;
             return config;
           }),
           py::arg("kind") = "l0", py::arg("sample") = false, py::arg("color_window") = 3);

  m.def("speak", &speak, py::arg("speaker"), py::arg("pair"), py::arg("lexicon"),
        py::arg("seed"));
  m.def("l0_posterior", [](const std::string& text, const ImagePair& pair, const Lexicon& lex) {
    return l0_posterior(text, pair, lex);
  }, py::arg("text"), py::arg("pair"), py::arg("lexicon"));
  m.def("minimal_utterances", &minimal_utterances, py::arg("target"), py::arg("lexicon"));
  m.def("rsa_distribution",
        [](const SpeakerConfig& speaker, const ImagePair& pair, const Lexicon& lex) {
          py::list out;
          for (const auto& wu : rsa_distribution(speaker, pair, lex)) {
            py::dict entry;
            entry["text"] = wu.caption.text;
            entry["prob"] = wu.prob;
            entry["eval"] = eval_to_dict(wu.eval);
            out.append(entry);
          }
          return out;
        },
        py::arg("speaker"), py::arg("pair"), py::arg("lexicon"));

  py::class_<GameResult>(m, "GameResult")
      .def_property_readonly("caption", [](const GameResult& g) { return g.caption.text; })
      .def_property_readonly("guess",
                             [](const GameResult& g) {
                               return std::string(g.guess == 0 ? "target" : "distractor");
                             })
      .def_readonly("reward", &GameResult::reward)
      .def_property_readonly("eval", [](const GameResult& g) { return eval_to_dict(g.eval); });

  py::enum_<KConvention>(m, "KConvention")
      .value("TRUTHFUL", KConvention::Truthful)
      .value("ALL_MENTIONS", KConvention::AllMentions);

  m.def("play_game", &play_game, py::arg("pair"), py::arg("speaker"), py::arg("listener"),
        py::arg("lexicon"), py::arg("seed"), py::arg("convention") = KConvention::Truthful);
  m.def("play_game_with_caption", &play_game_with_caption, py::arg("pair"), py::arg("text"),
        py::arg("listener"), py::arg("lexicon"), py::arg("seed"),
        py::arg("convention") = KConvention::Truthful);

  m.def("run_benchmark",
        [](const SpeakerConfig& speaker, const ListenerConfig& listener,
           const std::vector<PairSet>& suite, const Lexicon& lex, std::uint64_t seed,
           int workers) {
          const auto report = run_benchmark(speaker, listener, suite, lex, seed, workers);
          const auto meta = meta_object(nlohmann::json{{"command", "python"}}, seed);
          return to_py(report_to_json(report, meta));
        },
        py::arg("speaker"), py::arg("listener"), py::arg("suite"), py::arg("lexicon"),
        py::arg("seed"), py::arg("workers") = 1);

  m.def("aggregate",
        [](const std::vector<std::array<int, 4>>& counts, const std::string& name) {
          std::vector<CaptionEval> evals;
          evals.reserve(counts.size());
          for (const auto& row : counts) {
            evals.push_back(eval_from_counts(row[0], row[1], row[2], row[3]));
          }
          return aggregate_to_dict(aggregate(evals, name));
        },
        py::arg("counts"), py::arg("name") = "split",
        "Aggregate a list of (c, k, z, false_features) rows into split means.");

  py::register_exception<LexiconError>(m, "LexiconError");
  py::register_exception<LexiconFormatError>(m, "LexiconFormatError");

  m.attr("__version__") = std::string(kToolVersion);
}
