#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "entitycs/cs_generator.hpp"

namespace entitycs {

struct LanguageStats {
  uint64_t sentences = 0;
  uint64_t entities = 0;
};

struct StatsReport {
  uint64_t languages = 0;  // distinct languages seen, English included
  uint64_t english_sentences = 0;
  uint64_t english_entities = 0;
  double avg_sentence_length = 0.0;  // words per English sentence, indicators excluded
  double avg_entities_per_sentence = 0.0;
  uint64_t max_cs_per_en_sentence = 0;
  uint64_t cs_sentences = 0;
  uint64_t cs_entities = 0;
  std::map<std::string, LanguageStats> per_language;  // non-English histogram

  std::string to_json() const;
};

// Streaming accumulator over CsInstance records.
class StatsCollector {
 public:
  void add(const CsInstance& instance);
  StatsReport report() const;

 private:
  uint64_t en_sentences_ = 0;
  uint64_t en_entities_ = 0;
  uint64_t en_words_ = 0;
  uint64_t cs_sentences_ = 0;
  uint64_t cs_entities_ = 0;
  std::map<std::string, LanguageStats> per_language_;
  std::map<std::string, uint64_t> cs_per_source_;
  bool saw_english_ = false;
};

}  // namespace entitycs
