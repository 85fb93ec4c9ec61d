#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace slotfill {

/// Lookup form of a surface token: ASCII lowercasing, nothing else.
std::string normalize(std::string_view surface);

/// Ordered slot-label set. Label indexes are 1-based and match the line
/// numbers of the inventory file.
class LabelInventory {
 public:
  LabelInventory() = default;

  /// Validates uniqueness, non-emptiness and exactly one "O" label.
  static LabelInventory from_labels(std::vector<std::string> labels);
  static LabelInventory parse(std::string_view text);
  static LabelInventory load(const std::filesystem::path& path);

  std::size_t size() const noexcept { return labels_.size(); }
  int o_index() const noexcept { return o_index_; }
  bool contains(int index) const noexcept {
    return index >= 1 && static_cast<std::size_t>(index) <= labels_.size();
  }
  const std::string& name(int index) const;
  std::optional<int> find(std::string_view label) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// One label per line, newline-terminated.
  std::string serialize() const;

  bool operator==(const LabelInventory& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
  int o_index_ = 0;
};

struct Token {
  std::string surface;
  std::string norm;
  int label = 0;  // 1-based inventory index
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const noexcept { return tokens.size(); }
};

struct CorpusStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t distinct_norms = 0;
};

struct Corpus {
  std::vector<Sentence> sentences;

  std::size_t token_count() const noexcept;
  CorpusStats stats() const;
};

/// Parses CoNLL-style `token<whitespace>label` lines with blank lines between
/// sentences. Runs of blank lines collapse into one boundary.
Corpus parse_corpus(std::string_view text, const LabelInventory& inventory);
Corpus load_corpus(const std::filesystem::path& path, const LabelInventory& inventory);

/// Inverse of parse_corpus: `surface<TAB>label`, one blank line between sentences.
std::string serialize_corpus(const Corpus& corpus, const LabelInventory& inventory);

/// Word-to-id map with two reserved ids. Corpus words are numbered from
/// kFirstWord in lexicographic order of their normalized form.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kFirstWord = 2;
  static constexpr std::string_view kPadWord = "<PAD>";
  static constexpr std::string_view kUnkWord = "<UNK>";

  Vocabulary();

  /// Words seen more than `unk_threshold` times get their own id.
  static Vocabulary build(const Corpus& corpus, std::size_t unk_threshold);

  /// Rebuilds a vocabulary from its words in id order, reserved entries first.
  static Vocabulary from_words(std::vector<std::string> words, std::size_t unk_threshold);

  /// Id of a normalized word, kUnk when absent.
  int id(std::string_view norm) const;
  bool contains(std::string_view norm) const;
  const std::string& word(int id) const;
  std::size_t size() const noexcept { return words_.size(); }
  std::size_t unk_threshold() const noexcept { return unk_threshold_; }
  const std::vector<std::string>& words() const noexcept { return words_; }

  std::vector<int> encode(const Sentence& sentence) const;

  bool operator==(const Vocabulary& other) const {
    return words_ == other.words_ && unk_threshold_ == other.unk_threshold_;
  }

 private:
  std::vector<std::string> words_;
  std::map<std::string, int, std::less<>> ids_;
  std::size_t unk_threshold_ = 0;
};

enum class WindowMode { Past, Centered, Future };

/// Sentence offsets covered by a window of `length` slots anchored at the
/// 0-based `position`; -1 marks a padding slot.
///   Past:     the `length` tokens ending at position.
///   Centered: length/2 tokens on each side of position.
///   Future:   the `length` tokens starting at position.
std::vector<std::ptrdiff_t> window_positions(std::size_t sentence_length, std::size_t position,
                                             std::size_t length, WindowMode mode);

std::vector<int> context_window(std::span<const int> ids, std::size_t position, std::size_t length,
                                WindowMode mode, int pad_id = Vocabulary::kPad);

std::vector<int> context_window(const Sentence& sentence, const Vocabulary& vocab,
                                std::size_t position, std::size_t length, WindowMode mode);

}  // namespace slotfill
