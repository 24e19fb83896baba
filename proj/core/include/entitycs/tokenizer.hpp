#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace entitycs {

// Special token ids shared by all tokenizers. Ids below kNumSpecialTokens
// are never produced for text and never drawn as random replacements.
inline constexpr uint32_t kPadId = 0;
inline constexpr uint32_t kUnkId = 1;
inline constexpr uint32_t kMaskId = 2;
inline constexpr uint32_t kNumSpecialTokens = 4;

// Deterministic word -> subword-id mapping. Every non-empty word maps to at
// least one subword.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<uint32_t> tokenize(std::string_view word) const = 0;
  virtual uint32_t vocab_size() const = 0;
  virtual uint32_t mask_id() const { return kMaskId; }
  // Human-readable form for the text-mode preview.
  virtual std::string piece(uint32_t id) const = 0;
};

// Character-bigram hash tokenizer with a fixed 4096-id vocabulary. Ships so
// the test suite and small runs need no model files.
class ToyTokenizer : public Tokenizer {
 public:
  static constexpr uint32_t kVocabSize = 4096;

  std::vector<uint32_t> tokenize(std::string_view word) const override;
  uint32_t vocab_size() const override { return kVocabSize; }
  std::string piece(uint32_t id) const override;
};

// Greedy longest-match wordpiece over a plain-text vocab file (one piece per
// line, id = line number; continuation pieces start with "##"). The file
// must contain <pad>, <unk> and <mask> at ids 0/1/2.
class VocabTokenizer : public Tokenizer {
 public:
  static VocabTokenizer from_file(const std::string& path);

  std::vector<uint32_t> tokenize(std::string_view word) const override;
  uint32_t vocab_size() const override;
  std::string piece(uint32_t id) const override;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

std::unique_ptr<Tokenizer> make_tokenizer(const std::string& kind,
                                          const std::string& vocab_path);

}  // namespace entitycs
