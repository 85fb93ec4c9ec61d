#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "slotfill/corpus.hpp"

namespace slotfill {

/// Slot fillers for one placeholder type. Test entries must be made of words
/// that never occur in a training entry or a template.
struct Lexicon {
  std::string feature;  // gazetteer receiving both partitions; empty for none
  std::vector<std::string> train;
  std::vector<std::string> test;
};

/// Templates are whitespace-separated words; a `{label:lexicon}` token is a
/// slot labelled B-label / I-label, and `{a:x|b:y}` picks one alternative
/// uniformly.
struct SynthConfig {
  std::size_t train_sentences = 300;
  std::size_t test_sentences = 100;
  std::vector<std::string> templates;
  std::map<std::string, Lexicon> lexicons;
};

/// Flight-query templates over the ATIS inventory in which the same context
/// can introduce a city, an airport or a state.
SynthConfig default_synth_config();

SynthConfig parse_synth_config(std::string_view json_text);
std::string synth_config_to_json(const SynthConfig& config);

struct SyntheticBundle {
  LabelInventory labels;
  std::string manifest;  // features.tsv content
  Corpus train;
  Corpus test;           // slot words drawn only from the test partitions
  std::map<std::string, std::vector<std::string>> gazetteers;  // feature -> sorted entries
};

/// Deterministic for a fixed (config, seed).
SyntheticBundle gen_synthetic(const SynthConfig& config, std::uint64_t seed);

/// Writes train.txt, test.txt, labels.txt, features.tsv and gazetteers/<feature>.txt.
void write_synthetic_bundle(const SyntheticBundle& bundle, const std::filesystem::path& dir);

}  // namespace slotfill
