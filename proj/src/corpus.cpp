#include "slotfill/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "slotfill/error.hpp"
#include "text_util.hpp"

namespace slotfill {

std::string normalize(std::string_view surface) {
  std::string out(surface);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

LabelInventory LabelInventory::from_labels(std::vector<std::string> labels) {
  LabelInventory inv;
  int o_count = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string& label = labels[i];
    const int index = static_cast<int>(i) + 1;
    if (label.empty()) throw ConfigError("label " + std::to_string(index) + " is empty");
    if (!inv.index_.emplace(label, index).second) {
      throw ConfigError("duplicate label '" + label + "' at index " + std::to_string(index));
    }
    if (label == "O") {
      ++o_count;
      inv.o_index_ = index;
    }
  }
  if (o_count != 1) throw ConfigError("label inventory must contain exactly one \"O\" label");
  inv.labels_ = std::move(labels);
  return inv;
}

LabelInventory LabelInventory::parse(std::string_view text) {
  std::vector<std::string> labels;
  std::size_t line_no = 0;
  for (std::string_view line : detail::lines(text)) {
    ++line_no;
    const std::string_view label = detail::trim(line);
    if (label.empty()) {
      // Trailing blank lines are tolerated; interior ones would shift indexes.
      continue;
    }
    if (labels.size() + 1 != line_no) {
      throw ParseError("blank line inside label inventory", line_no - 1);
    }
    labels.emplace_back(label);
  }
  if (labels.empty()) throw ParseError("label inventory is empty");
  return from_labels(std::move(labels));
}

LabelInventory LabelInventory::load(const std::filesystem::path& path) {
  return parse(detail::read_file(path));
}

const std::string& LabelInventory::name(int index) const {
  if (!contains(index)) throw ConfigError("label index out of range: " + std::to_string(index));
  return labels_[static_cast<std::size_t>(index) - 1];
}

std::optional<int> LabelInventory::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string LabelInventory::serialize() const {
  std::string out;
  for (const auto& label : labels_) {
    out += label;
    out += '\n';
  }
  return out;
}

std::size_t Corpus::token_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

CorpusStats Corpus::stats() const {
  std::set<std::string_view> norms;
  for (const auto& s : sentences)
    for (const auto& t : s.tokens) norms.insert(t.norm);
  return {sentences.size(), token_count(), norms.size()};
}

Corpus parse_corpus(std::string_view text, const LabelInventory& inventory) {
  Corpus corpus;
  Sentence current;
  std::size_t line_no = 0;
  for (std::string_view line : detail::lines(text)) {
    ++line_no;
    const auto fields = detail::split_ws(line);
    if (fields.empty()) {
      if (!current.tokens.empty()) corpus.sentences.push_back(std::move(current));
      current = Sentence{};
      continue;
    }
    if (fields.size() != 2) {
      throw ParseError("expected 'token label', got " + std::to_string(fields.size()) + " field(s)",
                       line_no);
    }
    const auto label = inventory.find(fields[1]);
    if (!label) throw ParseError("unknown label '" + std::string(fields[1]) + "'", line_no);
    current.tokens.push_back(Token{std::string(fields[0]), normalize(fields[0]), *label});
  }
  if (!current.tokens.empty()) corpus.sentences.push_back(std::move(current));
  if (corpus.sentences.empty()) throw ParseError("corpus contains no tokens");
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, const LabelInventory& inventory) {
  try {
    return parse_corpus(detail::read_file(path), inventory);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string serialize_corpus(const Corpus& corpus, const LabelInventory& inventory) {
  std::string out;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    if (i > 0) out += '\n';
    for (const auto& tok : corpus.sentences[i].tokens) {
      out += tok.surface;
      out += '\t';
      out += inventory.name(tok.label);
      out += '\n';
    }
  }
  return out;
}

Vocabulary::Vocabulary() : words_{std::string(kPadWord), std::string(kUnkWord)} {}

Vocabulary Vocabulary::build(const Corpus& corpus, std::size_t unk_threshold) {
  std::map<std::string, std::size_t, std::less<>> freq;
  for (const auto& s : corpus.sentences)
    for (const auto& t : s.tokens) ++freq[t.norm];

  Vocabulary vocab;
  vocab.unk_threshold_ = unk_threshold;
  for (const auto& [word, count] : freq) {
    if (count <= unk_threshold) continue;
    vocab.ids_.emplace(word, static_cast<int>(vocab.words_.size()));
    vocab.words_.push_back(word);
  }
  return vocab;
}

Vocabulary Vocabulary::from_words(std::vector<std::string> words, std::size_t unk_threshold) {
  if (words.size() < static_cast<std::size_t>(kFirstWord) || words[kPad] != kPadWord ||
      words[kUnk] != kUnkWord) {
    throw ConfigError("vocabulary must start with the reserved <PAD> and <UNK> entries");
  }
  Vocabulary vocab;
  vocab.unk_threshold_ = unk_threshold;
  for (std::size_t i = kFirstWord; i < words.size(); ++i) {
    if (words[i].empty()) throw ConfigError("empty vocabulary word at id " + std::to_string(i));
    if (!vocab.ids_.emplace(words[i], static_cast<int>(i)).second) {
      throw ConfigError("duplicate vocabulary word '" + words[i] + "'");
    }
  }
  vocab.words_ = std::move(words);
  return vocab;
}

int Vocabulary::id(std::string_view norm) const {
  auto it = ids_.find(norm);
  return it == ids_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view norm) const { return ids_.find(norm) != ids_.end(); }

const std::string& Vocabulary::word(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= words_.size()) {
    throw ConfigError("vocabulary id out of range: " + std::to_string(id));
  }
  return words_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(const Sentence& sentence) const {
  std::vector<int> ids;
  ids.reserve(sentence.size());
  for (const auto& t : sentence.tokens) ids.push_back(id(t.norm));
  return ids;
}

std::vector<std::ptrdiff_t> window_positions(std::size_t sentence_length, std::size_t position,
                                             std::size_t length, WindowMode mode) {
  if (length == 0) throw ConfigError("window length must be at least 1");
  if (position >= sentence_length) {
    throw ConfigError("window position " + std::to_string(position) +
                      " out of range for sentence of length " + std::to_string(sentence_length));
  }
  const auto pos = static_cast<std::ptrdiff_t>(position);
  const auto len = static_cast<std::ptrdiff_t>(length);
  std::ptrdiff_t start = 0;
  switch (mode) {
    case WindowMode::Past: start = pos - len + 1; break;
    case WindowMode::Centered: start = pos - len / 2; break;
    case WindowMode::Future: start = pos; break;
  }
  std::vector<std::ptrdiff_t> out(length);
  const auto n = static_cast<std::ptrdiff_t>(sentence_length);
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    const std::ptrdiff_t at = start + i;
    out[static_cast<std::size_t>(i)] = (at >= 0 && at < n) ? at : -1;
  }
  return out;
}

std::vector<int> context_window(std::span<const int> ids, std::size_t position, std::size_t length,
                                WindowMode mode, int pad_id) {
  const auto positions = window_positions(ids.size(), position, length, mode);
  std::vector<int> out;
  out.reserve(length);
  for (auto at : positions) out.push_back(at < 0 ? pad_id : ids[static_cast<std::size_t>(at)]);
  return out;
}

std::vector<int> context_window(const Sentence& sentence, const Vocabulary& vocab,
                                std::size_t position, std::size_t length, WindowMode mode) {
  const auto ids = vocab.encode(sentence);
  return context_window(ids, position, length, mode);
}

}  // namespace slotfill
