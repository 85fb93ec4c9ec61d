#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>

#include "slotfill/error.hpp"
#include "slotfill/nn/model.hpp"

namespace slotfill::nn {

namespace {

constexpr std::string_view kMagic = "SLOTFILL-CNN";
constexpr std::string_view kVersion = "v1";
constexpr std::string_view kBinaryMarker = "BINARY";

using Kind = ModelFormatError::Kind;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename U>
U parse_number(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ModelFormatError(Kind::Corrupt, "model header lacks '" + key + "'");
  U value{};
  const std::string& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ModelFormatError(Kind::Corrupt, "model header has invalid " + key + "='" + s + "'");
  }
  return value;
}

std::string require(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ModelFormatError(Kind::Corrupt, "model header lacks '" + key + "'");
  return it->second;
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

void write_model(const Model& model, std::ostream& out) {
  const NetConfig& c = model.config;
  std::string header;
  header += std::string(kMagic) + ' ' + std::string(kVersion) + '\n';
  header += "embed_dim=" + std::to_string(c.embed_dim) + '\n';
  header += "feature_dim=" + std::to_string(c.feature_dim) + '\n';
  header += "context_length=" + std::to_string(c.context_length) + '\n';
  header += "filter_width=" + std::to_string(c.filter_width) + '\n';
  header += "num_filters=" + std::to_string(c.num_filters) + '\n';
  header += "num_labels=" + std::to_string(c.num_labels) + '\n';
  header += "variant=" + std::string(to_string(c.variant)) + '\n';
  header += "use_features=" + std::string(c.use_features ? "1" : "0") + '\n';
  header += "seed=" + std::to_string(c.seed) + '\n';
  header += "learning_rate=" + format_double(c.learning_rate) + '\n';
  header += "epochs=" + std::to_string(c.epochs) + '\n';
  header += "batch_size=" + std::to_string(c.batch_size) + '\n';
  header += "unk_threshold=" + std::to_string(model.vocab.unk_threshold()) + '\n';
  header += "labels=";
  for (std::size_t i = 0; i < model.labels.labels().size(); ++i) {
    if (i > 0) header += ' ';
    header += model.labels.labels()[i];
  }
  header += '\n';
  header += "vocab_size=" + std::to_string(model.vocab.size()) + '\n';
  for (const auto& w : model.vocab.words()) header += w + '\n';
  header += std::string(kBinaryMarker) + '\n';
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  std::string payload;
  payload.reserve(model.params.parameter_count() * 4);
  model.params.for_each_tensor([&](const std::vector<float>& t) {
    for (float v : t) {
      const auto bits = std::bit_cast<std::uint32_t>(v);
      for (int b = 0; b < 4; ++b) payload.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
    }
  });
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw Error("failed to write model");
}

Model read_model(std::istream& in) {
  std::string line;
  if (!read_line(in, line)) throw ModelFormatError(Kind::Truncated, "model file is empty");
  const auto space = line.find(' ');
  if (line.substr(0, space) != kMagic) {
    throw ModelFormatError(Kind::BadMagic, "not a model file: expected '" + std::string(kMagic) + " " +
                                               std::string(kVersion) + "' on line 1");
  }
  const std::string version = space == std::string::npos ? "" : line.substr(space + 1);
  if (version != kVersion) {
    throw ModelFormatError(Kind::VersionMismatch, "unsupported model format version '" + version +
                                                      "' (expected " + std::string(kVersion) + ")");
  }

  std::map<std::string, std::string> kv;
  while (kv.find("vocab_size") == kv.end()) {
    if (!read_line(in, line)) throw ModelFormatError(Kind::Truncated, "model header ends early");
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ModelFormatError(Kind::Corrupt, "malformed header line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }

  NetConfig cfg;
  cfg.embed_dim = parse_number<std::size_t>(kv, "embed_dim");
  cfg.feature_dim = parse_number<std::size_t>(kv, "feature_dim");
  cfg.context_length = parse_number<std::size_t>(kv, "context_length");
  cfg.filter_width = parse_number<std::size_t>(kv, "filter_width");
  cfg.num_filters = parse_number<std::size_t>(kv, "num_filters");
  cfg.num_labels = parse_number<std::size_t>(kv, "num_labels");
  cfg.use_features = parse_number<int>(kv, "use_features") != 0;
  cfg.seed = parse_number<std::uint64_t>(kv, "seed");
  cfg.learning_rate = parse_number<double>(kv, "learning_rate");
  cfg.epochs = parse_number<std::size_t>(kv, "epochs");
  cfg.batch_size = parse_number<std::size_t>(kv, "batch_size");
  const auto unk_threshold = parse_number<std::size_t>(kv, "unk_threshold");
  const auto vocab_size = parse_number<std::size_t>(kv, "vocab_size");

  Model model;
  try {
    cfg.variant = parse_variant(require(kv, "variant"));
    cfg.validate();
    std::vector<std::string> labels;
    std::istringstream ls(require(kv, "labels"));
    for (std::string label; ls >> label;) labels.push_back(label);
    model.labels = LabelInventory::from_labels(std::move(labels));
    if (model.labels.size() != cfg.num_labels) {
      throw ConfigError("num_labels=" + std::to_string(cfg.num_labels) + " but " +
                        std::to_string(model.labels.size()) + " labels listed");
    }
  } catch (const ConfigError& e) {
    throw ModelFormatError(Kind::Corrupt, std::string("inconsistent model header: ") + e.what());
  }

  std::vector<std::string> words;
  words.reserve(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    if (!read_line(in, line)) throw ModelFormatError(Kind::Truncated, "vocabulary ends early");
    words.push_back(line);
  }
  try {
    model.vocab = Vocabulary::from_words(std::move(words), unk_threshold);
  } catch (const ConfigError& e) {
    throw ModelFormatError(Kind::Corrupt, std::string("bad vocabulary: ") + e.what());
  }
  if (!read_line(in, line)) throw ModelFormatError(Kind::Truncated, "model file ends before the parameters");
  if (line != kBinaryMarker) {
    throw ModelFormatError(Kind::Corrupt, "expected '" + std::string(kBinaryMarker) + "' after the vocabulary");
  }

  model.config = cfg;
  model.params = Parameters<float>::zeros(cfg, model.vocab.size());
  const std::size_t expected = model.params.parameter_count() * 4;
  const std::string payload{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (payload.size() != expected) {
    throw ModelFormatError(Kind::Corrupt, "parameter payload has " + std::to_string(payload.size()) +
                                              " bytes but the header implies " + std::to_string(expected));
  }
  std::size_t offset = 0;
  model.params.for_each_tensor([&](std::vector<float>& t) {
    for (float& v : t) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(payload[offset++])) << (8 * b);
      v = std::bit_cast<float>(bits);
    }
  });
  return model;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write model file " + path.string());
  write_model(model, out);
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file " + path.string());
  return read_model(in);
}

}  // namespace slotfill::nn
