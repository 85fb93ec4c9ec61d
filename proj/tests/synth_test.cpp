#include <gtest/gtest.h>

#include <set>

#include "slotfill/error.hpp"
#include "slotfill/synth.hpp"
#include "test_util.hpp"

namespace slotfill {
namespace {

SynthConfig small(std::size_t train, std::size_t test) {
  auto cfg = default_synth_config();
  cfg.train_sentences = train;
  cfg.test_sentences = test;
  return cfg;
}

TEST(Synth, SameSeedSameBytes) {
  testing::TempDir a("syn_a"), b("syn_b");
  write_synthetic_bundle(gen_synthetic(small(40, 20), 7), a.path());
  write_synthetic_bundle(gen_synthetic(small(40, 20), 7), b.path());
  for (const auto* name : {"train.txt", "test.txt", "labels.txt", "features.tsv", "gazetteers/city_name_1.txt"}) {
    EXPECT_EQ(testing::slurp(a / name), testing::slurp(b / name)) << name;
    EXPECT_FALSE(testing::slurp(a / name).empty()) << name;
  }
  EXPECT_NE(serialize_corpus(gen_synthetic(small(40, 0), 7).train, atis_label_inventory()),
            serialize_corpus(gen_synthetic(small(40, 0), 8).train, atis_label_inventory()));
}

TEST(Synth, SentenceCounts) {
  const auto bundle = gen_synthetic(small(30, 12), 7);
  EXPECT_EQ(bundle.train.sentences.size(), 30u);
  EXPECT_EQ(bundle.test.sentences.size(), 12u);
}

// Scan the written artifacts: test slot words are unseen in training and
// listed in some gazetteer.
TEST(Synth, OovWordsAbsentFromTrainPresentInGazetteers) {
  testing::TempDir dir("syn_oov");
  const auto bundle = gen_synthetic(small(200, 80), 11);
  write_synthetic_bundle(bundle, dir.path());
  const auto labels = LabelInventory::load(dir / "labels.txt");
  const auto train = load_corpus(dir / "train.txt", labels);
  const auto test = load_corpus(dir / "test.txt", labels);

  std::set<std::string> train_words, gazetteer_words;
  for (const auto& s : train.sentences)
    for (const auto& t : s.tokens) train_words.insert(t.norm);
  for (const auto& entry : std::filesystem::directory_iterator(dir / "gazetteers"))
    for (const auto& e : parse_gazetteer_entries(testing::slurp(entry.path())))
      for (std::size_t at = 0; at <= e.size();) {
        const auto sp = std::min(e.find(' ', at), e.size());
        gazetteer_words.insert(e.substr(at, sp - at));
        at = sp + 1;
      }

  std::size_t slot_tokens = 0;
  for (const auto& s : test.sentences) {
    for (const auto& t : s.tokens) {
      if (t.label == labels.o_index()) continue;
      ++slot_tokens;
      EXPECT_FALSE(train_words.count(t.norm)) << t.norm;
      EXPECT_TRUE(gazetteer_words.count(t.norm)) << t.norm;
    }
  }
  EXPECT_GT(slot_tokens, 80u);
}

TEST(Synth, ErrorsOnBrokenConfigs) {
  auto empty_lex = small(5, 5);
  empty_lex.lexicons["city"].train.clear();
  EXPECT_THROW(gen_synthetic(empty_lex, 1), ConfigError);

  auto missing = small(5, 5);
  missing.lexicons.erase("airport");
  EXPECT_THROW(gen_synthetic(missing, 1), ConfigError);

  auto leak = small(5, 5);
  leak.lexicons["city"].test.push_back("boston");
  EXPECT_THROW(gen_synthetic(leak, 1), ConfigError);

  auto bad_label = small(5, 5);
  bad_label.templates = {"to {nonexistent_slot:city}"};
  EXPECT_THROW(gen_synthetic(bad_label, 1), ConfigError);

  auto malformed = small(5, 5);
  malformed.templates = {"to {city"};
  EXPECT_THROW(gen_synthetic(malformed, 1), ConfigError);
}

TEST(Synth, MultiWordEntriesGetInsideLabels) {
  SynthConfig cfg;
  cfg.train_sentences = 3;
  cfg.test_sentences = 0;
  cfg.templates = {"to {toloc.city_name:c}"};
  cfg.lexicons["c"] = {"city_name_1", {"new york"}, {"salt lake city"}};
  const auto b = gen_synthetic(cfg, 1);
  const auto& t = b.train.sentences[0].tokens;
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(b.labels.name(t[1].label), "B-toloc.city_name");
  EXPECT_EQ(b.labels.name(t[2].label), "I-toloc.city_name");
}

TEST(Synth, ConfigJsonRoundTrip) {
  const auto cfg = default_synth_config();
  const auto again = parse_synth_config(synth_config_to_json(cfg));
  EXPECT_EQ(synth_config_to_json(again), synth_config_to_json(cfg));
  EXPECT_THROW(parse_synth_config("{not json"), ConfigError);
  EXPECT_THROW(parse_synth_config("{\"lexicons\": {}}"), ConfigError);
}

TEST(Synth, ShippedConfigMatchesDefault) {
  const auto shipped = parse_synth_config(testing::slurp(testing::kDataDir / "synth" / "flights.json"));
  EXPECT_EQ(synth_config_to_json(shipped), synth_config_to_json(default_synth_config()));
}

}  // namespace
}  // namespace slotfill
