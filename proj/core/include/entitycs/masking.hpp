#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entitycs/cs_generator.hpp"
#include "entitycs/rng.hpp"
#include "entitycs/tokenizer.hpp"

namespace entitycs {

// Label value for positions that carry no prediction loss. Serialized as-is
// in the integer JSONL output.
inline constexpr int32_t kIgnoreLabel = -100;

enum class Strategy {
  kMlm,
  kWep,
  kPepMrs,
  kPepMs,
  kPepM,
  kWepMlm,
  kPepMrsMlm,
  kPepMsMlm,
  kPepMMlm,
};

Strategy parse_strategy(const std::string& name);
std::string strategy_name(Strategy strategy);

// Percentages over selected candidates. mask+rnd+same <= 100; the remainder
// is selected-but-unlabeled: the token is kept and no prediction is made.
struct ActionSplit {
  double mask = 0.0;
  double rnd = 0.0;
  double same = 0.0;
};

struct MaskingConfig {
  Strategy strategy = Strategy::kMlm;
  double entity_p = 0.15;  // candidate-selection probability, in [0,1]
  ActionSplit entity_split{80.0, 10.0, 10.0};
  double nonentity_p = 0.15;
  ActionSplit nonentity_split{80.0, 10.0, 10.0};
  uint32_t mask_token = kMaskId;
  uint32_t vocab_size = 0;  // filled from the tokenizer when 0
  uint64_t rng_seed = 0;

  void validate() const;
};

// Stock configuration for a strategy:
//   MLM          entity (15, 80/10/10)   non-entity (15, 80/10/10)
//   WEP          entity (100, 80/0/20)   non-entity off
//   PEP_mrs      entity (100, 80/10/10)  non-entity off
//   PEP_ms       entity (100, 80/0/10)   non-entity off
//   PEP_m        entity (100, 80/0/0)    non-entity off
//   any +MLM     entity p drops to 50, non-entity (15, 80/10/10)
// WEP selects and acts per entity (all subwords together, random replacement
// forbidden); PEP selects and acts per entity subword.
MaskingConfig default_config(Strategy strategy);

struct SubwordSpan {
  uint32_t begin = 0;
  uint32_t end = 0;
};

struct SubwordSequence {
  std::string instance_id;
  std::string language;
  std::vector<uint32_t> ids;
  std::vector<SubwordSpan> entity_spans;  // in-bounds, sorted, non-overlapping
};

struct MaskedExample {
  std::vector<uint32_t> input_ids;
  std::vector<int32_t> labels;  // source id where predicted, else kIgnoreLabel
};

struct MaskCounters {
  uint64_t sequences = 0;
  uint64_t zero_entity_sequences = 0;
  uint64_t positions = 0;
  uint64_t masked = 0;
  uint64_t randomized = 0;
  uint64_t kept_labeled = 0;

  MaskCounters& operator+=(const MaskCounters& o);
};

// Maps a CsInstance onto subword ids, dropping the indicator tokens and
// converting entity word-spans to subword spans.
SubwordSequence subword_tokenize(const CsInstance& instance,
                                 const Tokenizer& tokenizer);

// Draw procedure (documented for reference oracles): entity phase first,
// left to right — WEP draws once per entity, PEP/MLM once per subword; a
// selection draw (next_double < p), then for selected candidates one action
// draw against the split, and a rnd action draws its replacement with
// bounded(vocab_size - num_special) + num_special. The +MLM non-entity phase
// then walks non-entity positions left to right the same way. Plain MLM
// walks all positions in one pass.
MaskedExample mask(const SubwordSequence& seq, const MaskingConfig& cfg,
                   Rng& rng, MaskCounters* counters = nullptr);

// Convenience: per-instance RNG derived as derive_seed(cfg.rng_seed,
// instance_id), which keeps results independent of processing order.
MaskedExample mask_instance(const SubwordSequence& seq,
                            const MaskingConfig& cfg,
                            MaskCounters* counters = nullptr);

}  // namespace entitycs
