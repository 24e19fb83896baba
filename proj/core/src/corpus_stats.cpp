#include "entitycs/corpus_stats.hpp"

#include <algorithm>
#include <sstream>

#include "entitycs/jsonl.hpp"

namespace entitycs {

void StatsCollector::add(const CsInstance& instance) {
  uint64_t entities = instance.entity_spans.size();
  if (instance.language == "en") {
    saw_english_ = true;
    ++en_sentences_;
    en_entities_ += entities;
    en_words_ += instance.tokens.size() - 2 * entities;  // drop indicators
  } else {
    ++cs_sentences_;
    cs_entities_ += entities;
    LanguageStats& lang = per_language_[instance.language];
    ++lang.sentences;
    lang.entities += entities;
    ++cs_per_source_[instance.source_sentence_id];
  }
}

StatsReport StatsCollector::report() const {
  StatsReport r;
  r.languages = per_language_.size() + (saw_english_ ? 1 : 0);
  r.english_sentences = en_sentences_;
  r.english_entities = en_entities_;
  if (en_sentences_ > 0) {
    r.avg_sentence_length =
        static_cast<double>(en_words_) / static_cast<double>(en_sentences_);
    r.avg_entities_per_sentence =
        static_cast<double>(en_entities_) / static_cast<double>(en_sentences_);
  }
  for (const auto& [_, n] : cs_per_source_)
    r.max_cs_per_en_sentence = std::max(r.max_cs_per_en_sentence, n);
  r.cs_sentences = cs_sentences_;
  r.cs_entities = cs_entities_;
  r.per_language = per_language_;
  return r;
}

std::string StatsReport::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\n";
  os << "  \"languages\": " << languages << ",\n";
  os << "  \"english_sentences\": " << english_sentences << ",\n";
  os << "  \"english_entities\": " << english_entities << ",\n";
  os << "  \"avg_sentence_length\": " << avg_sentence_length << ",\n";
  os << "  \"avg_entities_per_sentence\": " << avg_entities_per_sentence
     << ",\n";
  os << "  \"max_cs_per_en_sentence\": " << max_cs_per_en_sentence << ",\n";
  os << "  \"cs_sentences\": " << cs_sentences << ",\n";
  os << "  \"cs_entities\": " << cs_entities << ",\n";
  os << "  \"per_language\": {";
  bool first = true;
  for (const auto& [lang, stats] : per_language) {
    if (!first) os << ',';
    first = false;
    os << "\n    " << json_quote(lang) << ": {\"sentences\": "
       << stats.sentences << ", \"entities\": " << stats.entities << "}";
  }
  if (!per_language.empty()) os << "\n  ";
  os << "}\n}\n";
  return os.str();
}

}  // namespace entitycs
