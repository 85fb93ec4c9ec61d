#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "slotfill/corpus.hpp"
#include "slotfill/error.hpp"
#include "slotfill/feature_registry.hpp"
#include "slotfill/featurizer.hpp"
#include "slotfill/metrics.hpp"
#include "slotfill/nn/model.hpp"
#include "slotfill/synth.hpp"

namespace slotfill::cli {

namespace fs = std::filesystem;

namespace {

const fs::path kAtisDir = fs::path(SLOTFILL_DATA_DIR) / "atis";

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool parse_switch(const std::string& value, const std::string& flag) {
  if (value == "on") return true;
  if (value == "off") return false;
  throw ConfigError(flag + " must be 'on' or 'off', got '" + value + "'");
}

/// Flat `key=value` config file turned into `--key value` pairs for every
/// key not already given on the command line.
std::vector<std::string> merge_config_file(const std::vector<std::string>& args) {
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (!config_path || args.empty() || args[0] != "train") return args;

  std::vector<std::string> merged = args;
  std::istringstream text(read_text(*config_path));
  std::size_t line_no = 0;
  for (std::string line; std::getline(text, line);) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(*config_path + ": expected key=value", line_no);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = "--" + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool given = false;
    for (const auto& a : args) given = given || a == key || a.rfind(key + "=", 0) == 0;
    if (!given) {
      merged.push_back(key);
      merged.push_back(value);
    }
  }
  return merged;
}

struct FeatureSources {
  std::string labels = (kAtisDir / "labels.txt").string();
  std::string manifest = (kAtisDir / "features.tsv").string();
  std::string gazetteers;
  std::string weights;
};

FeatureRegistry build_registry(const FeatureSources& src, const LabelInventory& labels, const Corpus* corpus) {
  const FeatureSpec spec = FeatureSpec::load(src.manifest, labels);
  std::vector<Gazetteer> gazetteers;
  if (!src.gazetteers.empty()) {
    if (!fs::is_directory(src.gazetteers)) throw ConfigError("gazetteer directory not found: " + src.gazetteers);
    gazetteers = load_gazetteer_dir(src.gazetteers, spec);
  }
  std::vector<double> weights;
  if (!src.weights.empty()) weights = parse_weights(read_text(src.weights), spec);
  return build_keyword_sets(spec, gazetteers, corpus, std::move(weights));
}

std::string default_registry_path(const std::string& model_path) { return model_path + ".registry"; }

std::optional<FeatureRegistry> registry_for(const nn::Model& model, const std::string& model_path,
                                            const std::string& registry_path) {
  if (!model.config.use_features) return std::nullopt;
  const std::string path = registry_path.empty() ? default_registry_path(model_path) : registry_path;
  if (!fs::exists(path)) throw ConfigError("feature registry not found: " + path);
  return load_registry(path, model.labels);
}

/// Blank-line separated blocks of `token [label]` lines.
std::vector<Sentence> read_token_blocks(std::istream& in) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string f; fields >> f;) parts.push_back(f);
    if (parts.empty()) {
      if (!current.tokens.empty()) sentences.push_back(std::move(current));
      current = Sentence{};
      continue;
    }
    if (parts.size() > 2) throw ParseError("expected 'token' or 'token label'", line_no);
    current.tokens.push_back({parts[0], normalize(parts[0]), 0});
  }
  if (!current.tokens.empty()) sentences.push_back(std::move(current));
  return sentences;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Slot filling with gazetteer feature vectors and a convolutional tagger", "slotfill"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "Train a tagger and write the model file");
  std::string corpus_path, model_out, registry_out, features_flag = "on", variant_flag = "past", config_path;
  FeatureSources train_src;
  nn::NetConfig net;
  std::size_t unk_threshold = 1;
  bool serial = false;
  train->add_option("--corpus", corpus_path, "Training corpus (token label per line)")->required();
  train->add_option("--labels", train_src.labels, "Label inventory, one label per line");
  train->add_option("--manifest", train_src.manifest, "Feature manifest (features.tsv)");
  train->add_option("--gazetteers", train_src.gazetteers, "Directory of <feature>.txt gazetteers");
  train->add_option("--weights", train_src.weights, "Optional name<TAB>weight file");
  train->add_option("--features", features_flag, "on|off");
  train->add_option("--variant", variant_flag, "past|bidir");
  train->add_option("--seed", net.seed, "Random seed");
  train->add_option("--out", model_out, "Model file to write")->required();
  train->add_option("--registry-out", registry_out, "Feature registry file (default <out>.registry)");
  train->add_option("--embed-dim", net.embed_dim);
  train->add_option("--num-filters", net.num_filters);
  train->add_option("--context-length", net.context_length);
  train->add_option("--filter-width", net.filter_width);
  train->add_option("--epochs", net.epochs);
  train->add_option("--lr", net.learning_rate);
  train->add_option("--batch-size", net.batch_size);
  train->add_option("--unk-threshold", unk_threshold);
  train->add_option("--config", config_path, "Flat key=value file; flags take precedence");
  train->add_flag("--serial", serial, "Use the serial reference kernel");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a model on a labelled corpus");
  std::string eval_model, eval_corpus, eval_labels, eval_registry, report_format = "text";
  eval->add_option("--model", eval_model)->required();
  eval->add_option("--corpus", eval_corpus)->required();
  eval->add_option("--labels", eval_labels, "Label inventory; must match the model's");
  eval->add_option("--registry", eval_registry, "Feature registry (default <model>.registry)");
  eval->add_option("--report", report_format, "text|json");

  // tag
  auto* tag = app.add_subcommand("tag", "Label pre-tokenized sentences");
  std::string tag_model, tag_input = "-", tag_registry;
  tag->add_option("--model", tag_model)->required();
  tag->add_option("--input", tag_input, "Token file, blank line between sentences ('-' = stdin)");
  tag->add_option("--registry", tag_registry, "Feature registry (default <model>.registry)");

  // featurize
  auto* featurize = app.add_subcommand("featurize", "Print word feature vectors");
  std::vector<std::string> words;
  std::string feat_input, feat_corpus, feat_registry;
  FeatureSources feat_src;
  feat_src.gazetteers = (kAtisDir / "gazetteers").string();
  featurize->add_option("--word", words, "Word to featurize (repeatable)");
  featurize->add_option("--input", feat_input, "Token file, blank line between sentences ('-' = stdin)");
  featurize->add_option("--labels", feat_src.labels);
  featurize->add_option("--manifest", feat_src.manifest);
  featurize->add_option("--gazetteers", feat_src.gazetteers);
  featurize->add_option("--weights", feat_src.weights);
  featurize->add_option("--corpus", feat_corpus, "Labelled corpus contributing label-derived keywords");
  featurize->add_option("--registry", feat_registry, "Use a saved registry instead of building one");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus and gazetteer bundle");
  std::uint64_t synth_seed = 42;
  std::string synth_config, synth_out;
  std::optional<std::size_t> synth_train, synth_test;
  bool dump_config = false;
  synth->add_option("--seed", synth_seed);
  synth->add_option("--config", synth_config, "JSON generator config (default: built-in flight domain)");
  synth->add_option("--out", synth_out, "Output directory");
  synth->add_option("--train-sentences", synth_train);
  synth->add_option("--test-sentences", synth_test);
  synth->add_flag("--dump-config", dump_config, "Print the built-in generator config and exit");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config_file(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "slotfill: error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (train->parsed()) {
      const LabelInventory labels = LabelInventory::load(train_src.labels);
      const Corpus corpus = load_corpus(corpus_path, labels);
      net.use_features = parse_switch(features_flag, "--features");
      net.feature_dim = net.use_features ? kNumFeatures : 0;
      net.variant = nn::parse_variant(variant_flag);
      net.num_labels = labels.size();
      net.validate();

      std::optional<FeatureRegistry> registry;
      if (net.use_features) {
        if (train_src.gazetteers.empty()) throw ConfigError("--gazetteers is required with --features on");
        registry = build_registry(train_src, labels, &corpus);
      }
      const auto stats = corpus.stats();
      err << "corpus: " << stats.sentences << " sentences, " << stats.tokens << " tokens, "
          << stats.distinct_norms << " distinct words\n";

      nn::Model model = nn::init_model(net, Vocabulary::build(corpus, unk_threshold), labels);
      nn::FitOptions options;
      options.parallel = !serial;
      options.after_epoch = [&](std::size_t epoch, double loss, const nn::Model&) {
        err << "epoch " << epoch + 1 << " loss " << loss << '\n';
        return true;
      };
      nn::fit(model, corpus, registry ? &*registry : nullptr, options);
      nn::save_model(model, model_out);
      if (registry) save_registry(*registry, registry_out.empty() ? default_registry_path(model_out) : registry_out);
      err << "wrote " << model_out << '\n';
      return 0;
    }

    if (eval->parsed()) {
      const nn::Model model = nn::load_model(eval_model);
      if (!eval_labels.empty() && !(LabelInventory::load(eval_labels) == model.labels)) {
        throw ConfigError("label inventory " + eval_labels + " does not match the model's inventory");
      }
      const Corpus corpus = load_corpus(eval_corpus, model.labels);
      const auto registry = registry_for(model, eval_model, eval_registry);
      const Report report = nn::evaluate(model, registry ? &*registry : nullptr, corpus);
      if (report_format == "json") {
        out << format_report_json(report);
      } else if (report_format == "text") {
        out << format_report_text(report);
      } else {
        throw ConfigError("--report must be 'text' or 'json'");
      }
      return 0;
    }

    if (tag->parsed()) {
      const nn::Model model = nn::load_model(tag_model);
      const auto registry = registry_for(model, tag_model, tag_registry);
      std::vector<Sentence> sentences;
      if (tag_input == "-") {
        sentences = read_token_blocks(in);
      } else {
        std::ifstream file(tag_input);
        if (!file) throw Error("cannot open " + tag_input);
        sentences = read_token_blocks(file);
      }
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (i > 0) out << '\n';
        const auto labels = nn::predict_labels(model, sentences[i], registry ? &*registry : nullptr);
        for (std::size_t t = 0; t < labels.size(); ++t) {
          out << sentences[i].tokens[t].surface << '\t' << model.labels.name(labels[t]) << '\n';
        }
      }
      return 0;
    }

    if (featurize->parsed()) {
      if (words.empty() && feat_input.empty()) throw ConfigError("featurize needs --word or --input");
      const LabelInventory labels = LabelInventory::load(feat_src.labels);
      std::optional<Corpus> corpus;
      if (!feat_corpus.empty()) corpus = load_corpus(feat_corpus, labels);
      const FeatureRegistry registry = feat_registry.empty()
                                           ? build_registry(feat_src, labels, corpus ? &*corpus : nullptr)
                                           : load_registry(feat_registry, labels);
      for (const auto& w : words) out << format_feature_line(w, feature_vector(registry, w)) << '\n';
      if (!feat_input.empty()) {
        std::vector<Sentence> sentences;
        if (feat_input == "-") {
          sentences = read_token_blocks(in);
        } else {
          std::ifstream file(feat_input);
          if (!file) throw Error("cannot open " + feat_input);
          sentences = read_token_blocks(file);
        }
        for (std::size_t i = 0; i < sentences.size(); ++i) {
          if (i > 0 || !words.empty()) out << '\n';
          const auto vectors = featurize_sentence(registry, sentences[i]);
          for (std::size_t t = 0; t < vectors.size(); ++t) {
            out << format_feature_line(sentences[i].tokens[t].surface, vectors[t]) << '\n';
          }
        }
      }
      return 0;
    }

    if (synth->parsed()) {
      SynthConfig config = synth_config.empty() ? default_synth_config() : parse_synth_config(read_text(synth_config));
      if (dump_config) {
        out << synth_config_to_json(config);
        return 0;
      }
      if (synth_out.empty()) throw ConfigError("synth needs --out");
      if (synth_train) config.train_sentences = *synth_train;
      if (synth_test) config.test_sentences = *synth_test;
      const SyntheticBundle bundle = gen_synthetic(config, synth_seed);
      write_synthetic_bundle(bundle, synth_out);
      err << "wrote " << bundle.train.sentences.size() << " training and " << bundle.test.sentences.size()
          << " test sentences to " << synth_out << '\n';
      return 0;
    }
  } catch (const ParseError& e) {
    err << "slotfill: parse error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "slotfill: config error: " << e.what() << '\n';
    return 3;
  } catch (const NumericError& e) {
    err << "slotfill: numeric error: " << e.what() << '\n';
    return 4;
  } catch (const ModelFormatError& e) {
    err << "slotfill: model format error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    err << "slotfill: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace slotfill::cli
