#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "entitycs/kb_index.hpp"
#include "entitycs/wiki_extract.hpp"

namespace entitycs {

inline constexpr const char* kEntityOpen = "<e>";
inline constexpr const char* kEntityClose = "</e>";

struct EntitySpan {
  uint32_t begin = 0;  // half-open token span, indicators excluded
  uint32_t end = 0;
  std::string qid;  // empty when the entity is not in the index (en fallback)
};

// One code-switched (or English fallback) sentence. Every entity span is
// wrapped in <e> ... </e> indicator tokens; for a non-English instance all
// entity surfaces are labels of one single target language.
struct CsInstance {
  std::string instance_id;
  std::string source_sentence_id;
  std::string language;
  std::vector<std::string> tokens;
  std::vector<EntitySpan> entity_spans;
};

enum class EmitEnglish { kAlways, kFallbackOnly };

struct GenerationConfig {
  uint32_t max_cs_per_sentence = 5;
  uint64_t rng_seed = 0;
  EmitEnglish emit_english = EmitEnglish::kAlways;
};

struct GenerateCounters {
  uint64_t sentences = 0;
  uint64_t english_instances = 0;
  uint64_t cs_instances = 0;
  uint64_t fallback_sentences = 0;  // no candidate language
  uint64_t escaped_tokens = 0;      // literal <e>/</e> in corpus text

  GenerateCounters& operator+=(const GenerateCounters& o);
};

// Languages whose label sets cover every wikilink target of the sentence.
std::set<std::string> candidate_languages(const SourceSentence& sentence,
                                          const EntityIndex& index);

// Emits up to max_cs_per_sentence code-switched instances (all candidates
// when few enough, otherwise a uniform draw without replacement) plus the
// English instance per the emit_english policy. The per-sentence RNG is
// seeded with derive_seed(config.rng_seed, sentence_id), so output is a pure
// function of (sentence, index, config).
std::vector<CsInstance> generate(const SourceSentence& sentence,
                                 const EntityIndex& index,
                                 const GenerationConfig& config,
                                 GenerateCounters& counters);

}  // namespace entitycs
