#include "entitycs/masking.hpp"

#include <algorithm>

#include "entitycs/errors.hpp"

namespace entitycs {

namespace {

bool is_mlm_combo(Strategy s) {
  return s == Strategy::kMlm || s == Strategy::kWepMlm ||
         s == Strategy::kPepMrsMlm || s == Strategy::kPepMsMlm ||
         s == Strategy::kPepMMlm;
}

bool is_wep(Strategy s) {
  return s == Strategy::kWep || s == Strategy::kWepMlm;
}

}  // namespace

Strategy parse_strategy(const std::string& name) {
  if (name == "mlm") return Strategy::kMlm;
  if (name == "wep") return Strategy::kWep;
  if (name == "pep_mrs") return Strategy::kPepMrs;
  if (name == "pep_ms") return Strategy::kPepMs;
  if (name == "pep_m") return Strategy::kPepM;
  if (name == "wep+mlm") return Strategy::kWepMlm;
  if (name == "pep_mrs+mlm") return Strategy::kPepMrsMlm;
  if (name == "pep_ms+mlm") return Strategy::kPepMsMlm;
  if (name == "pep_m+mlm") return Strategy::kPepMMlm;
  throw InputError("unknown masking strategy '" + name +
                   "' (mlm|wep|pep_mrs|pep_ms|pep_m, optionally +mlm)");
}

std::string strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::kMlm: return "mlm";
    case Strategy::kWep: return "wep";
    case Strategy::kPepMrs: return "pep_mrs";
    case Strategy::kPepMs: return "pep_ms";
    case Strategy::kPepM: return "pep_m";
    case Strategy::kWepMlm: return "wep+mlm";
    case Strategy::kPepMrsMlm: return "pep_mrs+mlm";
    case Strategy::kPepMsMlm: return "pep_ms+mlm";
    case Strategy::kPepMMlm: return "pep_m+mlm";
  }
  return "?";
}

MaskingConfig default_config(Strategy strategy) {
  MaskingConfig cfg;
  cfg.strategy = strategy;
  switch (strategy) {
    case Strategy::kMlm:
      cfg.entity_p = 0.15;
      cfg.entity_split = {80.0, 10.0, 10.0};
      cfg.nonentity_p = 0.15;
      cfg.nonentity_split = {80.0, 10.0, 10.0};
      return cfg;
    case Strategy::kWep:
    case Strategy::kWepMlm:
      cfg.entity_split = {80.0, 0.0, 20.0};
      break;
    case Strategy::kPepMrs:
    case Strategy::kPepMrsMlm:
      cfg.entity_split = {80.0, 10.0, 10.0};
      break;
    case Strategy::kPepMs:
    case Strategy::kPepMsMlm:
      cfg.entity_split = {80.0, 0.0, 10.0};
      break;
    case Strategy::kPepM:
    case Strategy::kPepMMlm:
      cfg.entity_split = {80.0, 0.0, 0.0};
      break;
  }
  if (is_mlm_combo(strategy)) {
    cfg.entity_p = 0.5;
    cfg.nonentity_p = 0.15;
    cfg.nonentity_split = {80.0, 10.0, 10.0};
  } else {
    cfg.entity_p = 1.0;
    cfg.nonentity_p = 0.0;
    cfg.nonentity_split = {0.0, 0.0, 0.0};
  }
  return cfg;
}

void MaskingConfig::validate() const {
  auto check_split = [](const ActionSplit& s, const char* which) {
    if (s.mask < 0 || s.rnd < 0 || s.same < 0 ||
        s.mask + s.rnd + s.same > 100.0 + 1e-9)
      throw InputError(std::string(which) +
                       " split must be non-negative and sum to at most 100");
  };
  check_split(entity_split, "entity");
  check_split(nonentity_split, "non-entity");
  if (entity_p < 0.0 || entity_p > 1.0 || nonentity_p < 0.0 ||
      nonentity_p > 1.0)
    throw InputError("selection probabilities must be in [0, 1]");
  if (is_wep(strategy) && entity_split.rnd != 0.0)
    throw InputError("wep forbids random replacement inside entities");
  if (vocab_size <= kNumSpecialTokens)
    throw InputError("vocab_size must exceed the reserved special tokens");
  if (mask_token >= vocab_size)
    throw InputError("mask_token outside the vocabulary");
}

SubwordSequence subword_tokenize(const CsInstance& instance,
                                 const Tokenizer& tokenizer) {
  // Indicator positions are structural: one before and one after each span.
  std::vector<bool> indicator(instance.tokens.size(), false);
  uint32_t prev_end = 0;
  for (const EntitySpan& span : instance.entity_spans) {
    if (span.begin == 0 || span.end >= instance.tokens.size() ||
        span.begin >= span.end ||
        (prev_end != 0 && span.begin < prev_end + 2) ||
        instance.tokens[span.begin - 1] != kEntityOpen ||
        instance.tokens[span.end] != kEntityClose)
      throw InputError("instance " + instance.instance_id +
                       ": entity span not delimited by indicator tokens");
    indicator[span.begin - 1] = true;
    indicator[span.end] = true;
    prev_end = span.end;
  }

  SubwordSequence seq;
  seq.instance_id = instance.instance_id;
  seq.language = instance.language;

  // Subword offset of each word token (indicators excluded).
  std::vector<uint32_t> offsets(instance.tokens.size() + 1, 0);
  for (size_t i = 0; i < instance.tokens.size(); ++i) {
    offsets[i] = static_cast<uint32_t>(seq.ids.size());
    if (indicator[i]) continue;
    std::vector<uint32_t> ids = tokenizer.tokenize(instance.tokens[i]);
    if (ids.empty())
      throw InternalError("tokenizer produced no subwords for token '" +
                          instance.tokens[i] + "'");
    seq.ids.insert(seq.ids.end(), ids.begin(), ids.end());
  }
  offsets[instance.tokens.size()] = static_cast<uint32_t>(seq.ids.size());

  for (const EntitySpan& span : instance.entity_spans)
    seq.entity_spans.push_back({offsets[span.begin], offsets[span.end]});
  return seq;
}

MaskCounters& MaskCounters::operator+=(const MaskCounters& o) {
  sequences += o.sequences;
  zero_entity_sequences += o.zero_entity_sequences;
  positions += o.positions;
  masked += o.masked;
  randomized += o.randomized;
  kept_labeled += o.kept_labeled;
  return *this;
}

namespace {

enum class Action { kNone, kMask, kRandom, kSame, kRemainder };

Action draw_action(Rng& rng, double p, const ActionSplit& split) {
  if (rng.next_double() >= p) return Action::kNone;
  double v = rng.next_double() * 100.0;
  if (v < split.mask) return Action::kMask;
  if (v < split.mask + split.rnd) return Action::kRandom;
  if (v < split.mask + split.rnd + split.same) return Action::kSame;
  return Action::kRemainder;
}

void apply(Action action, size_t pos, const SubwordSequence& seq,
           const MaskingConfig& cfg, Rng& rng, MaskedExample& out,
           MaskCounters* counters) {
  switch (action) {
    case Action::kNone:
    case Action::kRemainder:
      return;
    case Action::kMask:
      out.input_ids[pos] = cfg.mask_token;
      out.labels[pos] = static_cast<int32_t>(seq.ids[pos]);
      if (counters) ++counters->masked;
      return;
    case Action::kRandom: {
      // Uniform over the vocabulary minus the reserved special ids, so a
      // replacement can never be the mask token.
      uint32_t token = kNumSpecialTokens +
                       static_cast<uint32_t>(
                           rng.bounded(cfg.vocab_size - kNumSpecialTokens));
      out.input_ids[pos] = token;
      out.labels[pos] = static_cast<int32_t>(seq.ids[pos]);
      if (counters) ++counters->randomized;
      return;
    }
    case Action::kSame:
      out.labels[pos] = static_cast<int32_t>(seq.ids[pos]);
      if (counters) ++counters->kept_labeled;
      return;
  }
}

}  // namespace

MaskedExample mask(const SubwordSequence& seq, const MaskingConfig& cfg,
                   Rng& rng, MaskCounters* counters) {
  cfg.validate();
  uint32_t prev_end = 0;
  for (const SubwordSpan& span : seq.entity_spans) {
    if (span.begin < prev_end || span.end < span.begin ||
        span.end > seq.ids.size())
      throw InternalError("sequence " + seq.instance_id +
                          ": entity subword spans out of order or bounds");
    prev_end = span.end;
  }
  MaskedExample out;
  out.input_ids = seq.ids;
  out.labels.assign(seq.ids.size(), kIgnoreLabel);
  if (counters) {
    ++counters->sequences;
    counters->positions += seq.ids.size();
    if (seq.entity_spans.empty()) ++counters->zero_entity_sequences;
  }

  if (cfg.strategy == Strategy::kMlm) {
    // Entities are not special under plain MLM; one pass over all positions.
    std::vector<bool> in_entity(seq.ids.size(), false);
    for (const SubwordSpan& span : seq.entity_spans)
      for (uint32_t i = span.begin; i < span.end; ++i) in_entity[i] = true;
    for (size_t i = 0; i < seq.ids.size(); ++i) {
      Action a = in_entity[i]
                     ? draw_action(rng, cfg.entity_p, cfg.entity_split)
                     : draw_action(rng, cfg.nonentity_p, cfg.nonentity_split);
      apply(a, i, seq, cfg, rng, out, counters);
    }
    return out;
  }

  // Entity phase.
  if (is_wep(cfg.strategy)) {
    // One decision per entity, applied to all of its subwords.
    for (const SubwordSpan& span : seq.entity_spans) {
      Action a = draw_action(rng, cfg.entity_p, cfg.entity_split);
      for (uint32_t i = span.begin; i < span.end; ++i)
        apply(a, i, seq, cfg, rng, out, counters);
    }
  } else {
    for (const SubwordSpan& span : seq.entity_spans) {
      for (uint32_t i = span.begin; i < span.end; ++i) {
        Action a = draw_action(rng, cfg.entity_p, cfg.entity_split);
        apply(a, i, seq, cfg, rng, out, counters);
      }
    }
  }

  // Non-entity phase (+MLM variants only). Entity positions are never MLM
  // candidates, selected or not.
  if (is_mlm_combo(cfg.strategy)) {
    size_t next_span = 0;
    for (size_t i = 0; i < seq.ids.size(); ++i) {
      while (next_span < seq.entity_spans.size() &&
             i >= seq.entity_spans[next_span].end)
        ++next_span;
      if (next_span < seq.entity_spans.size() &&
          i >= seq.entity_spans[next_span].begin)
        continue;
      Action a = draw_action(rng, cfg.nonentity_p, cfg.nonentity_split);
      apply(a, i, seq, cfg, rng, out, counters);
    }
  }
  return out;
}

MaskedExample mask_instance(const SubwordSequence& seq,
                            const MaskingConfig& cfg, MaskCounters* counters) {
  Rng rng(derive_seed(cfg.rng_seed, seq.instance_id));
  return mask(seq, cfg, rng, counters);
}

}  // namespace entitycs
