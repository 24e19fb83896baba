#include "entitycs/cs_generator.hpp"

#include <algorithm>

#include "entitycs/errors.hpp"
#include "entitycs/rng.hpp"

namespace entitycs {

GenerateCounters& GenerateCounters::operator+=(const GenerateCounters& o) {
  sentences += o.sentences;
  english_instances += o.english_instances;
  cs_instances += o.cs_instances;
  fallback_sentences += o.fallback_sentences;
  escaped_tokens += o.escaped_tokens;
  return *this;
}

std::set<std::string> candidate_languages(const SourceSentence& sentence,
                                          const EntityIndex& index) {
  std::vector<std::string> titles;
  titles.reserve(sentence.wikilinks.size());
  for (const WikiLink& link : sentence.wikilinks)
    titles.push_back(link.target_title);
  return index.languages_covering(titles);
}

namespace {

std::string escape_indicator(const std::string& token, uint64_t& escaped) {
  if (token == kEntityOpen || token == kEntityClose) {
    ++escaped;
    return "\\" + token;
  }
  return token;
}

// Builds one instance by replacing each wikilink's tokens with the given
// per-link surfaces and wrapping them in indicators.
CsInstance build_instance(const SourceSentence& sentence,
                          const std::string& language,
                          const std::vector<std::vector<std::string>>& surfaces,
                          const std::vector<std::string>& qids,
                          uint64_t& escaped) {
  CsInstance out;
  out.source_sentence_id = sentence.sentence_id;
  out.instance_id = sentence.sentence_id + ":" + language;
  out.language = language;
  out.tokens.reserve(sentence.words.size() + sentence.wikilinks.size() * 2);
  uint32_t word = 0;
  for (size_t li = 0; li < sentence.wikilinks.size(); ++li) {
    const WikiLink& link = sentence.wikilinks[li];
    for (; word < link.token_begin; ++word)
      out.tokens.push_back(escape_indicator(sentence.words[word], escaped));
    out.tokens.push_back(kEntityOpen);
    EntitySpan span;
    span.begin = static_cast<uint32_t>(out.tokens.size());
    for (const std::string& tok : surfaces[li])
      out.tokens.push_back(escape_indicator(tok, escaped));
    span.end = static_cast<uint32_t>(out.tokens.size());
    span.qid = qids[li];
    out.tokens.push_back(kEntityClose);
    out.entity_spans.push_back(std::move(span));
    word = link.token_end;
  }
  for (; word < sentence.words.size(); ++word)
    out.tokens.push_back(escape_indicator(sentence.words[word], escaped));
  return out;
}

}  // namespace

std::vector<CsInstance> generate(const SourceSentence& sentence,
                                 const EntityIndex& index,
                                 const GenerationConfig& config,
                                 GenerateCounters& counters) {
  ++counters.sentences;

  // Resolve records once; candidates need them all, the English fallback
  // tolerates misses.
  std::vector<std::optional<uint32_t>> records;
  records.reserve(sentence.wikilinks.size());
  bool all_resolved = true;
  for (const WikiLink& link : sentence.wikilinks) {
    records.push_back(index.find(link.target_title));
    if (!records.back()) all_resolved = false;
  }

  std::vector<uint16_t> candidates;
  if (all_resolved && !sentence.wikilinks.empty()) {
    std::vector<std::string> titles;
    titles.reserve(sentence.wikilinks.size());
    for (const WikiLink& link : sentence.wikilinks)
      titles.push_back(link.target_title);
    candidates = index.covering_langs(titles);
  }

  std::vector<uint16_t> chosen;
  if (candidates.size() <= config.max_cs_per_sentence) {
    chosen = candidates;
  } else {
    // Fisher-Yates prefix over the sorted candidate list.
    Rng rng(derive_seed(config.rng_seed, sentence.sentence_id));
    std::vector<uint16_t> pool = candidates;
    for (uint32_t i = 0; i < config.max_cs_per_sentence; ++i) {
      size_t j = i + static_cast<size_t>(rng.bounded(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    chosen.assign(pool.begin(), pool.begin() + config.max_cs_per_sentence);
  }

  std::vector<std::string> qids(sentence.wikilinks.size());
  for (size_t i = 0; i < records.size(); ++i)
    if (records[i]) qids[i] = index.qid(*records[i]);

  std::vector<CsInstance> out;
  if (chosen.empty()) ++counters.fallback_sentences;

  if (config.emit_english == EmitEnglish::kAlways || chosen.empty()) {
    std::vector<std::vector<std::string>> surfaces;
    surfaces.reserve(sentence.wikilinks.size());
    for (const WikiLink& link : sentence.wikilinks) {
      surfaces.emplace_back(sentence.words.begin() + link.token_begin,
                            sentence.words.begin() + link.token_end);
    }
    out.push_back(build_instance(sentence, "en", surfaces, qids,
                                 counters.escaped_tokens));
    ++counters.english_instances;
  }

  for (uint16_t lang : chosen) {
    std::vector<std::vector<std::string>> surfaces;
    surfaces.reserve(sentence.wikilinks.size());
    for (size_t i = 0; i < sentence.wikilinks.size(); ++i) {
      auto label = index.label(*records[i], lang);
      if (!label)
        throw InternalError("candidate language '" + index.lang_code(lang) +
                            "' lost its label for " + qids[i] +
                            " at substitution time");
      surfaces.push_back(tokenize_words(*label));
    }
    out.push_back(build_instance(sentence, index.lang_code(lang), surfaces,
                                 qids, counters.escaped_tokens));
    ++counters.cs_instances;
  }
  return out;
}

}  // namespace entitycs
