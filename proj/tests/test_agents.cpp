#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <map>

#include "pragcap/agents.hpp"
#include "pragcap/rng.hpp"

using namespace pragcap;

namespace {

const Label kFig1Target = Label::from_values(4, 3, 0, 0, 2, 11);
const Label kFig1Distractor = Label::from_values(4, 3, 8, 0, 2, 11);

Label random_label(Rng& rng) {
  std::array<int, kFeatureCount> values{};
  for (int i = 0; i < kFeatureCount; ++i) {
    values[i] = static_cast<int>(rng.below(kCardinalities[i]));
  }
  return Label(values);
}

ImagePair random_pair(Rng& rng) {
  const Label target = random_label(rng);
  while (true) {
    const Label distractor = random_label(rng);
    if (!(distractor == target)) return ImagePair(target, distractor);
  }
}

double expected_d(const SpeakerConfig& speaker, const ImagePair& pair, const Lexicon& lex) {
  double out = 0.0;
  for (const auto& wu : rsa_distribution(speaker, pair, lex)) {
    if (wu.eval.d) out += wu.prob;
  }
  return out;
}

}  // namespace

TEST_CASE("policy names round trip") {
  for (SpeakerKind k : {SpeakerKind::Exhaustive, SpeakerKind::OracleMinimal,
                        SpeakerKind::Biased, SpeakerKind::Rsa}) {
    CHECK(speaker_kind_from_name(speaker_kind_name(k)) == k);
  }
  CHECK(listener_kind_from_name("l0") == ListenerKind::L0);
  CHECK_FALSE(speaker_kind_from_name("parrot").has_value());
}

TEST_CASE("minimal utterances cover each expressible feature with one mention") {
  const auto& lex = Lexicon::builtin();
  const auto utterances = minimal_utterances(kFig1Target, lex);
  REQUIRE(utterances.size() == 6);  // "red" is unique for this scene
  for (const auto& u : utterances) {
    REQUIRE(u.mentioned.size() == 1);
    const auto record = extract_mentions(u.text, kFig1Target, lex);
    CHECK(record.truthful_features() == u.mentioned);
    CHECK(record.truthful_feature_count() == 1);
    CHECK(record.false_feature_count() == 0);
  }

  // with a shared hue the bare object color drops out
  const Label shared = Label::from_values(4, 3, 4, 0, 2, 11);  // green floor, green object
  const auto reduced = minimal_utterances(shared, lex);
  CHECK(reduced.size() == 5);
  for (const auto& u : reduced) {
    CHECK(u.mentioned != std::vector<Feature>{Feature::ObjectColor});
  }
}

TEST_CASE("the oracle speaker is minimal and optimal on a one-contrast pair") {
  const auto& lex = Lexicon::builtin();
  const ImagePair pair(kFig1Target, kFig1Distractor);
  SpeakerConfig speaker{SpeakerKind::OracleMinimal};
  const Caption caption = speak(speaker, pair, lex, 1);
  CHECK(caption.text == "a red one");
  const auto item = evaluate_text(caption.text, pair, lex);
  CHECK(item.eval.c == 1);
  CHECK(item.eval.k == 1);
  CHECK(item.eval.d);
  CHECK(*item.eval.e == 1.0);
  CHECK(item.eval.r == 1.0);
  CHECK(item.eval.od);
}

TEST_CASE("the oracle anchors a shared object hue with the shape noun") {
  const auto& lex = Lexicon::builtin();
  // object and floor share green; only the object color is contrastive
  const Label target = Label::from_values(4, 7, 4, 0, 2, 11);
  const Label distractor = Label::from_values(4, 7, 8, 0, 2, 11);
  const ImagePair pair(target, distractor);
  SpeakerConfig speaker{SpeakerKind::OracleMinimal};
  const Caption caption = speak(speaker, pair, lex, 1);
  CHECK(caption.text == "a green ball");
  const auto item = evaluate_text(caption.text, pair, lex);
  CHECK(item.eval.c == 1);
  CHECK(item.eval.k == 2);
  CHECK(item.eval.od);
  const auto game = play_game(pair, speaker, ListenerConfig{}, lex, 3);
  CHECK(game.reward == 1);
}

TEST_CASE("oracle games always earn the reward") {
  const auto& lex = Lexicon::builtin();
  SpeakerConfig speaker{SpeakerKind::OracleMinimal};
  Rng rng(2718);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pair = random_pair(rng);
    const auto game = play_game(pair, speaker, ListenerConfig{}, lex, rng.next());
    CHECK(game.reward == 1);
    CHECK(game.eval.od);
  }
}

TEST_CASE("literal listener posteriors") {
  const auto& lex = Lexicon::builtin();
  const ImagePair pair(kFig1Target, kFig1Distractor);
  {
    // only the contrastive feature: posterior collapses onto the target
    const auto post = l0_posterior("a red one", pair, lex);
    CHECK(post[0] == 1.0);
    CHECK(post[1] == 0.0);
  }
  {
    // only non-contrastive features: both images equally consistent
    const auto post = l0_posterior("a ball on green floor", pair, lex);
    CHECK(post[0] == 0.5);
    CHECK(post[1] == 0.5);
  }
  {
    const auto post = l0_posterior("", pair, lex);
    CHECK(post[0] == 0.5);
  }
  {
    // mixed: one contrastive + one shared mention
    const auto post = l0_posterior("a red ball", pair, lex);
    CHECK(post[0] == doctest::Approx(2.0 / 3.0));
  }
}

TEST_CASE("a hue that stays unresolvable on one image still counts as consistent") {
  const auto& lex = Lexicon::builtin();
  // both scenes have a red object; the distractor's floor turned red as well,
  // so the bare hue resolves on the target but not on the distractor
  const Label target = Label::from_values(4, 7, 0, 0, 2, 11);
  const Label distractor = Label::from_values(0, 7, 0, 0, 2, 11);
  const ImagePair pair(target, distractor);
  const auto post = l0_posterior("a red one", pair, lex);
  CHECK(post[0] == 0.5);
  CHECK(post[1] == 0.5);
  // while a hue absent from an image is evidence against it
  const auto against = l0_posterior("a blue one", pair, lex);
  CHECK(against[0] == 0.5);  // blue is nowhere in either scene: uniform
}

TEST_CASE("the exhaustive speaker always wins against the literal listener") {
  const auto& lex = Lexicon::builtin();
  SpeakerConfig speaker{SpeakerKind::Exhaustive};
  Rng rng(19);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto pair = random_pair(rng);
    const auto game = play_game(pair, speaker, ListenerConfig{}, lex, rng.next());
    CHECK(game.reward == 1);
    CHECK(game.eval.k == 6);
    CHECK(game.eval.d);
  }
}

TEST_CASE("an empty caption plays at chance") {
  const auto& lex = Lexicon::builtin();
  const ImagePair pair(kFig1Target, kFig1Distractor);
  int wins = 0;
  const int trials = 2000;
  for (int seed = 0; seed < trials; ++seed) {
    const auto game = play_game_with_caption(pair, "", ListenerConfig{}, lex, seed);
    if (game.reward == 1) ++wins;
    CHECK(std::abs(game.reward) == 1);
  }
  const double accuracy = static_cast<double>(wins) / trials;
  CHECK(accuracy > 0.45);
  CHECK(accuracy < 0.55);
}

TEST_CASE("alpha = 0 with zero cost is exactly the uniform literal speaker") {
  const auto& lex = Lexicon::builtin();
  const ImagePair pair(kFig1Target, kFig1Distractor);
  SpeakerConfig speaker{SpeakerKind::Rsa};
  speaker.alpha = 0.0;
  const auto dist = rsa_distribution(speaker, pair, lex);
  const double uniform = 1.0 / static_cast<double>(dist.size());
  for (const auto& wu : dist) {
    CHECK(wu.prob == uniform);
  }
}

TEST_CASE("expected discriminativity is non-decreasing in alpha") {
  const auto& lex = Lexicon::builtin();
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pair = random_pair(rng);
    double prev = -1.0;
    for (double alpha : {0.0, 1.0, 5.0, 10.0}) {
      SpeakerConfig speaker{SpeakerKind::Rsa};
      speaker.alpha = alpha;
      const double ed = expected_d(speaker, pair, lex);
      CHECK(ed >= prev - 1e-12);
      prev = ed;
    }
  }
}

TEST_CASE("a sharp speaker on a one-contrast pair is almost surely contrastive") {
  const auto& lex = Lexicon::builtin();
  const ImagePair pair(kFig1Target, kFig1Distractor);
  SpeakerConfig speaker{SpeakerKind::Rsa};
  speaker.alpha = 10.0;
  speaker.family = UtteranceFamily{true, false, false};
  const auto dist = rsa_distribution(speaker, pair, lex);
  CHECK(dist.size() == 6);
  double contrastive_mass = 0.0;
  for (const auto& wu : dist) {
    if (wu.eval.c >= 1) contrastive_mass += wu.prob;
  }
  CHECK(contrastive_mass > 0.99);
}

TEST_CASE("utterance costs shift the speaker away from costly features") {
  const auto& lex = Lexicon::builtin();
  const ImagePair pair(kFig1Target, kFig1Distractor);
  SpeakerConfig speaker{SpeakerKind::Rsa};
  speaker.alpha = 0.0;
  speaker.feature_cost[feature_index(Feature::Shape)] = 5.0;
  const auto dist = rsa_distribution(speaker, pair, lex);
  double with_shape = 0.0, without_shape = 0.0;
  int n_with = 0, n_without = 0;
  for (const auto& wu : dist) {
    const bool mentions_shape =
        std::find(wu.caption.mentioned.begin(), wu.caption.mentioned.end(),
                  Feature::Shape) != wu.caption.mentioned.end();
    if (mentions_shape) {
      with_shape += wu.prob;
      ++n_with;
    } else {
      without_shape += wu.prob;
      ++n_without;
    }
  }
  REQUIRE(n_with > 0);
  REQUIRE(n_without > 0);
  CHECK(with_shape / n_with < without_shape / n_without);
}

TEST_CASE("rsa sampling follows the enumerated distribution") {
  const auto& lex = Lexicon::builtin();
  const ImagePair pair(kFig1Target, kFig1Distractor);
  SpeakerConfig speaker{SpeakerKind::Rsa};
  speaker.alpha = 10.0;
  speaker.family = UtteranceFamily{true, false, false};
  std::map<std::string, int> counts;
  for (int seed = 0; seed < 500; ++seed) {
    counts[speak(speaker, pair, lex, seed).text] += 1;
  }
  CHECK(counts["a red one"] > 450);  // ~99.5% of the mass
}

TEST_CASE("the L1 listener rules out images whose speaker would not say that") {
  const auto& lex = Lexicon::builtin();
  const ImagePair pair(kFig1Target, kFig1Distractor);
  ListenerConfig listener;
  listener.kind = ListenerKind::L1;
  listener.assumed.kind = SpeakerKind::Rsa;
  listener.assumed.alpha = 1.0;
  const auto post = listener_posterior(listener, "a red ball", pair, lex);
  CHECK(post[0] == 1.0);
  const auto chance = listener_posterior(listener, "a ball on green floor", pair, lex);
  CHECK(chance[0] == 0.5);
}

TEST_CASE("biased redundancy coins add truthful non-contrastive mentions") {
  const auto& lex = Lexicon::builtin();
  const ImagePair pair(kFig1Target, kFig1Distractor);
  SpeakerConfig speaker{SpeakerKind::Biased};
  speaker.redundancy[feature_index(Feature::WallColor)] = 1.0;
  const Caption caption = speak(speaker, pair, lex, 5);
  const auto record = extract_mentions(caption.text, kFig1Target, lex);
  CHECK(record.feature_truthful(Feature::WallColor));
  CHECK(record.feature_truthful(Feature::ObjectColor));
  CHECK(record.truthful_feature_count() == 2);
  CHECK(record.false_feature_count() == 0);

  SpeakerConfig plain{SpeakerKind::Biased};
  const Caption bare = speak(plain, pair, lex, 5);
  CHECK(extract_mentions(bare.text, kFig1Target, lex).truthful_feature_count() == 1);
}

TEST_CASE("run_benchmark aggregates per set and per category") {
  const auto& lex = Lexicon::builtin();
  auto suite = standard_suite(66, 40);
  suite.resize(8);  // keep the unit test quick: 6 one-feature + 2 two-feature sets
  SpeakerConfig speaker{SpeakerKind::OracleMinimal};
  std::vector<LoggedGame> log;
  const auto report =
      run_benchmark(speaker, ListenerConfig{}, suite, lex, 1, 1, KConvention::Truthful, &log);
  REQUIRE(report.sets.size() == 8);
  REQUIRE(report.categories.size() == 2);
  for (const auto& set : report.sets) {
    CHECK(set.agg.mean_od == 1.0);
    CHECK(*set.agg.listener_accuracy == 1.0);
    CHECK(set.agg.count == 40);
  }
  CHECK(report.categories[0].name == "one_feature");
  CHECK(report.categories[0].agg.count == 6 * 40);
  CHECK(report.categories[0].agg.mean_od == 1.0);
  CHECK(log.size() == 8 * 40);
  // mean reward and accuracy are the same information
  double mean_reward = 0.0;
  for (const auto& entry : log) mean_reward += entry.game.reward;
  mean_reward /= static_cast<double>(log.size());
  CHECK(mean_reward == doctest::Approx(2.0 * 1.0 - 1.0));
}

TEST_CASE("benchmarks are deterministic and worker-count invariant") {
  const auto& lex = Lexicon::builtin();
  auto suite = standard_suite(9, 30);
  suite.resize(3);
  SpeakerConfig speaker{SpeakerKind::Exhaustive};
  const auto a = run_benchmark(speaker, ListenerConfig{}, suite, lex, 5, 1);
  const auto b = run_benchmark(speaker, ListenerConfig{}, suite, lex, 5, 4);
  REQUIRE(a.sets.size() == b.sets.size());
  for (std::size_t i = 0; i < a.sets.size(); ++i) {
    CHECK(a.sets[i].agg.mean_k == b.sets[i].agg.mean_k);
    CHECK(a.sets[i].agg.mean_r == b.sets[i].agg.mean_r);
    CHECK(*a.sets[i].agg.listener_accuracy == *b.sets[i].agg.listener_accuracy);
  }
}
