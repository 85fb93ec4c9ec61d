#include "slotfill/synth.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "slotfill/atis.hpp"
#include "slotfill/error.hpp"
#include "slotfill/random.hpp"
#include "text_util.hpp"

namespace slotfill {

namespace {

struct SlotChoice {
  std::string label;  // without the B-/I- prefix
  std::string lexicon;
};

struct TemplateToken {
  std::string word;                 // plain word, empty for a slot
  std::vector<SlotChoice> choices;  // slot alternatives
};

std::vector<TemplateToken> compile_template(std::string_view text) {
  std::vector<TemplateToken> out;
  for (auto piece : detail::split_ws(text)) {
    TemplateToken tok;
    if (piece.front() == '{') {
      if (piece.back() != '}' || piece.size() < 3) {
        throw ConfigError("malformed slot '" + std::string(piece) + "' in template '" + std::string(text) + "'");
      }
      for (auto alt : detail::split(piece.substr(1, piece.size() - 2), '|')) {
        const auto colon = alt.find(':');
        if (colon == std::string_view::npos || colon == 0 || colon + 1 == alt.size()) {
          throw ConfigError("slot alternative '" + std::string(alt) + "' must be label:lexicon");
        }
        tok.choices.push_back({std::string(alt.substr(0, colon)), std::string(alt.substr(colon + 1))});
      }
    } else {
      tok.word = normalize(piece);
    }
    out.push_back(std::move(tok));
  }
  if (out.empty()) throw ConfigError("empty template");
  return out;
}

struct CompiledConfig {
  std::vector<std::vector<TemplateToken>> templates;
  // label -> (B index, I index or 0)
  std::map<std::string, std::pair<int, int>> label_ids;
};

CompiledConfig compile(const SynthConfig& config, const LabelInventory& inventory) {
  if (config.templates.empty()) throw ConfigError("synthetic config has no templates");
  CompiledConfig out;
  std::set<std::string> template_words;
  std::set<std::string> used_lexicons;
  for (const auto& text : config.templates) {
    auto tokens = compile_template(text);
    for (const auto& tok : tokens) {
      if (!tok.word.empty()) {
        template_words.insert(tok.word);
        continue;
      }
      for (const auto& choice : tok.choices) {
        auto lex = config.lexicons.find(choice.lexicon);
        if (lex == config.lexicons.end()) throw ConfigError("template references unknown lexicon '" + choice.lexicon + "'");
        if (lex->second.train.empty() && config.train_sentences > 0) {
          throw ConfigError("lexicon '" + choice.lexicon + "' has no training entries");
        }
        if (lex->second.test.empty() && config.test_sentences > 0) {
          throw ConfigError("lexicon '" + choice.lexicon + "' has no test entries");
        }
        used_lexicons.insert(choice.lexicon);
        const auto b = inventory.find("B-" + choice.label);
        if (!b) throw ConfigError("label 'B-" + choice.label + "' is not in the inventory");
        const auto i = inventory.find("I-" + choice.label);
        out.label_ids[choice.label] = {*b, i.value_or(0)};
      }
    }
    out.templates.push_back(std::move(tokens));
  }

  // Multi-word entries need an I- label; test words must be unseen in training.
  std::set<std::string> train_words = template_words;
  for (const auto& [name, lex] : config.lexicons)
    for (const auto& entry : lex.train)
      for (auto w : detail::split_ws(entry)) train_words.insert(normalize(w));
  for (const auto& text : config.templates) {
    for (const auto& tok : compile_template(text)) {
      for (const auto& choice : tok.choices) {
        const auto& lex = config.lexicons.at(choice.lexicon);
        for (const auto* part : {&lex.train, &lex.test}) {
          for (const auto& entry : *part) {
            const auto words = detail::split_ws(entry);
            if (words.empty()) throw ConfigError("empty entry in lexicon '" + choice.lexicon + "'");
            if (words.size() > 1 && out.label_ids.at(choice.label).second == 0) {
              throw ConfigError("multi-word entry '" + entry + "' needs label 'I-" + choice.label + "'");
            }
          }
        }
      }
    }
  }
  for (const auto& name : used_lexicons) {
    for (const auto& entry : config.lexicons.at(name).test) {
      for (auto w : detail::split_ws(entry)) {
        if (train_words.count(normalize(w))) {
          throw ConfigError("test entry '" + entry + "' of lexicon '" + name + "' reuses training word '" +
                            std::string(w) + "'");
        }
      }
    }
  }
  return out;
}

Sentence generate_sentence(const CompiledConfig& cc, const SynthConfig& config, bool test, int o_index, Rng& rng) {
  const auto& tmpl = cc.templates[rng.below(cc.templates.size())];
  Sentence s;
  for (const auto& tok : tmpl) {
    if (!tok.word.empty()) {
      s.tokens.push_back({tok.word, tok.word, o_index});
      continue;
    }
    const auto& choice = tok.choices[rng.below(tok.choices.size())];
    const auto& lex = config.lexicons.at(choice.lexicon);
    const auto& pool = test ? lex.test : lex.train;
    const auto& entry = pool[rng.below(pool.size())];
    const auto [b, i] = cc.label_ids.at(choice.label);
    bool first = true;
    for (auto w : detail::split_ws(entry)) {
      s.tokens.push_back({std::string(w), normalize(w), first ? b : i});
      first = false;
    }
  }
  return s;
}

}  // namespace

SyntheticBundle gen_synthetic(const SynthConfig& config, std::uint64_t seed) {
  SyntheticBundle bundle;
  bundle.labels = atis_label_inventory();
  bundle.manifest = std::string(atis_feature_manifest());
  const CompiledConfig cc = compile(config, bundle.labels);

  Rng rng(seed);
  const int o = bundle.labels.o_index();
  for (std::size_t i = 0; i < config.train_sentences; ++i)
    bundle.train.sentences.push_back(generate_sentence(cc, config, false, o, rng));
  for (std::size_t i = 0; i < config.test_sentences; ++i)
    bundle.test.sentences.push_back(generate_sentence(cc, config, true, o, rng));

  for (const auto& [name, lex] : config.lexicons) {
    if (lex.feature.empty()) continue;
    auto& entries = bundle.gazetteers[lex.feature];
    for (const auto* part : {&lex.train, &lex.test})
      for (const auto& e : *part) {
        std::string joined;
        for (auto w : detail::split_ws(e)) {
          if (!joined.empty()) joined += ' ';
          joined += normalize(w);
        }
        entries.push_back(std::move(joined));
      }
  }
  for (auto& [feature, entries] : bundle.gazetteers) {
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  }
  return bundle;
}

void write_synthetic_bundle(const SyntheticBundle& bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "gazetteers");
  detail::write_file(dir / "train.txt", bundle.train.sentences.empty() ? "" : serialize_corpus(bundle.train, bundle.labels));
  detail::write_file(dir / "test.txt", bundle.test.sentences.empty() ? "" : serialize_corpus(bundle.test, bundle.labels));
  detail::write_file(dir / "labels.txt", bundle.labels.serialize());
  detail::write_file(dir / "features.tsv", bundle.manifest);
  for (const auto& [feature, entries] : bundle.gazetteers) {
    std::string text;
    for (const auto& e : entries) text += e + '\n';
    detail::write_file(dir / "gazetteers" / (feature + ".txt"), text);
  }
}

SynthConfig parse_synth_config(std::string_view json_text) {
  SynthConfig cfg;
  try {
    const auto j = nlohmann::json::parse(json_text);
    cfg.train_sentences = j.value("train_sentences", cfg.train_sentences);
    cfg.test_sentences = j.value("test_sentences", cfg.test_sentences);
    cfg.templates = j.at("templates").get<std::vector<std::string>>();
    for (const auto& [name, lex] : j.at("lexicons").items()) {
      Lexicon l;
      l.feature = lex.value("feature", std::string());
      l.train = lex.value("train", std::vector<std::string>{});
      l.test = lex.value("test", std::vector<std::string>{});
      cfg.lexicons.emplace(name, std::move(l));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid synthetic config: ") + e.what());
  }
  return cfg;
}

std::string synth_config_to_json(const SynthConfig& config) {
  nlohmann::ordered_json j;
  j["train_sentences"] = config.train_sentences;
  j["test_sentences"] = config.test_sentences;
  j["templates"] = config.templates;
  nlohmann::ordered_json lex = nlohmann::ordered_json::object();
  for (const auto& [name, l] : config.lexicons) {
    lex[name] = {{"feature", l.feature}, {"train", l.train}, {"test", l.test}};
  }
  j["lexicons"] = std::move(lex);
  return j.dump(2) + '\n';
}

SynthConfig default_synth_config() {
  const std::string from = "{fromloc.city_name:city|fromloc.airport_name:airport|fromloc.state_name:state}";
  const std::string to = "{toloc.city_name:city|toloc.airport_name:airport|toloc.state_name:state}";
  SynthConfig c;
  c.templates = {
      "show me flights from " + from + " to " + to,
      "can you list all flights from " + from + " to " + to,
      "i want to fly from " + from + " to " + to + " on {depart_date.day_name:day|airline_name:airline}",
      "list {airline_name:airline} flights from " + from + " to " + to +
          " in the {depart_time.period_of_day:period}",
      "what {class_type:class} fares go from " + from + " to " + to,
      "flights to " + to + " leaving " + from + " on {depart_date.month_name:month} {depart_date.day_number:daynum}",
      "i need a flight arriving in " + to + " from " + from,
  };
  c.lexicons["city"] = {"city_name_1",
                        {"boston", "denver", "atlanta", "dallas", "pittsburgh", "baltimore", "philadelphia",
                         "san francisco", "oakland", "new york", "chicago", "seattle", "miami", "houston",
                         "memphis", "phoenix", "cleveland", "detroit", "nashville", "las vegas"},
                        {"tacoma", "orlando", "salt lake city", "toronto", "montreal", "kansas city", "charlotte",
                         "milwaukee", "tampa", "cincinnati", "indianapolis", "long beach", "burbank", "columbus"}};
  c.lexicons["airport"] = {"airport_name_1",
                           {"logan", "stapleton", "midway", "hobby", "dulles", "la guardia", "love field",
                            "mccarran", "hartsfield"},
                           {"pearson", "o'hare", "lambert", "mitchell", "kennedy", "intercontinental",
                            "reagan national"}};
  c.lexicons["state"] = {"state_name_1",
                         {"colorado", "texas", "georgia", "ohio", "arizona", "north carolina", "florida", "nevada",
                          "michigan"},
                         {"utah", "oregon", "rhode island", "kentucky", "montana", "south dakota", "iowa", "idaho"}};
  c.lexicons["airline"] = {"airline_name_1",
                           {"delta", "united", "american airlines", "continental", "northwest", "southwest airlines"},
                           {"lufthansa", "midwest express", "nationair", "tower air"}};
  c.lexicons["day"] = {"day_name", {"monday", "tuesday", "wednesday", "thursday"}, {"friday", "saturday", "sunday"}};
  c.lexicons["period"] = {"period_of_day", {"morning", "evening"}, {"afternoon", "night"}};
  c.lexicons["class"] = {"class_type", {"first class", "coach"}, {"business", "economy", "thrift"}};
  c.lexicons["month"] = {"month_name",
                         {"january", "february", "march", "april", "may", "june"},
                         {"july", "august", "september", "october", "november", "december"}};
  c.lexicons["daynum"] = {"day_number",
                          {"second", "third", "fifth", "tenth", "twenty second"},
                          {"eighth", "ninth", "twelfth", "fifteenth", "thirtieth"}};
  return c;
}

}  // namespace slotfill
