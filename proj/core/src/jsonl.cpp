#include "entitycs/jsonl.hpp"

#include <nlohmann/json.hpp>

#include "entitycs/errors.hpp"

namespace entitycs {

using nlohmann::json;

void json_append_escaped(std::string& out, std::string_view s) {
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
}

std::string json_quote(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  json_append_escaped(out, s);
  out += '"';
  return out;
}

std::string to_jsonl(const SourceSentence& sentence) {
  std::string out;
  out.reserve(64 + sentence.words.size() * 8);
  out += "{\"sentence_id\":";
  out += json_quote(sentence.sentence_id);
  out += ",\"doc_id\":";
  out += json_quote(sentence.doc_id);
  out += ",\"words\":[";
  for (size_t i = 0; i < sentence.words.size(); ++i) {
    if (i) out += ',';
    out += json_quote(sentence.words[i]);
  }
  out += "],\"wikilinks\":[";
  for (size_t i = 0; i < sentence.wikilinks.size(); ++i) {
    const WikiLink& link = sentence.wikilinks[i];
    if (i) out += ',';
    out += "{\"target_title\":";
    out += json_quote(link.target_title);
    out += ",\"display_text\":";
    out += json_quote(link.display_text);
    out += ",\"start\":";
    out += std::to_string(link.token_begin);
    out += ",\"end\":";
    out += std::to_string(link.token_end);
    out += '}';
  }
  out += "]}";
  return out;
}

std::string to_jsonl(const CsInstance& instance) {
  std::string out;
  out.reserve(64 + instance.tokens.size() * 8);
  out += "{\"instance_id\":";
  out += json_quote(instance.instance_id);
  out += ",\"source_sentence_id\":";
  out += json_quote(instance.source_sentence_id);
  out += ",\"language\":";
  out += json_quote(instance.language);
  out += ",\"tokens\":[";
  for (size_t i = 0; i < instance.tokens.size(); ++i) {
    if (i) out += ',';
    out += json_quote(instance.tokens[i]);
  }
  out += "],\"entity_spans\":[";
  for (size_t i = 0; i < instance.entity_spans.size(); ++i) {
    const EntitySpan& span = instance.entity_spans[i];
    if (i) out += ',';
    out += "{\"start\":";
    out += std::to_string(span.begin);
    out += ",\"end\":";
    out += std::to_string(span.end);
    out += ",\"qid\":";
    out += json_quote(span.qid);
    out += '}';
  }
  out += "]}";
  return out;
}

std::string to_jsonl(std::string_view instance_id, const MaskedExample& example) {
  std::string out;
  out.reserve(32 + example.input_ids.size() * 12);
  out += "{\"instance_id\":";
  out += json_quote(instance_id);
  out += ",\"input_ids\":[";
  for (size_t i = 0; i < example.input_ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(example.input_ids[i]);
  }
  out += "],\"labels\":[";
  for (size_t i = 0; i < example.labels.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(example.labels[i]);
  }
  out += "]}";
  return out;
}

namespace {

json parse_object(std::string_view line, const char* what) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw InputError(std::string("malformed ") + what + " record");
  return j;
}

std::string get_string(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end())
    throw InputError(std::string(what) + " record missing '" + key + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer())  // ids are numeric in some dump exports
    return std::to_string(it->get<int64_t>());
  throw InputError(std::string(what) + " record field '" + key +
                   "' has wrong type");
}

}  // namespace

RawDocument parse_document_line(std::string_view line) {
  json j = parse_object(line, "document");
  RawDocument doc;
  doc.doc_id = get_string(j, "id", "document");
  if (doc.doc_id.empty()) throw InputError("document record with empty id");
  doc.title = j.contains("title") ? get_string(j, "title", "document") : "";
  doc.text = get_string(j, "text", "document");
  return doc;
}

SourceSentence parse_sentence_line(std::string_view line) {
  json j = parse_object(line, "sentence");
  SourceSentence s;
  s.sentence_id = get_string(j, "sentence_id", "sentence");
  s.doc_id = get_string(j, "doc_id", "sentence");
  auto words = j.find("words");
  auto links = j.find("wikilinks");
  if (words == j.end() || !words->is_array() || links == j.end() ||
      !links->is_array())
    throw InputError("sentence record missing words/wikilinks arrays");
  for (const auto& w : *words) {
    if (!w.is_string()) throw InputError("sentence word is not a string");
    s.words.push_back(w.get<std::string>());
  }
  for (const auto& l : *links) {
    if (!l.is_object()) throw InputError("wikilink is not an object");
    WikiLink link;
    link.target_title = get_string(l, "target_title", "wikilink");
    link.display_text = get_string(l, "display_text", "wikilink");
    if (!l.contains("start") || !l.contains("end") ||
        !l["start"].is_number_unsigned() || !l["end"].is_number_unsigned())
      throw InputError("wikilink span missing or negative");
    link.token_begin = l["start"].get<uint32_t>();
    link.token_end = l["end"].get<uint32_t>();
    if (link.token_begin >= link.token_end ||
        link.token_end > s.words.size())
      throw InputError("wikilink span out of bounds in " + s.sentence_id);
    s.wikilinks.push_back(std::move(link));
  }
  return s;
}

CsInstance parse_instance_line(std::string_view line) {
  json j = parse_object(line, "instance");
  CsInstance inst;
  inst.instance_id = get_string(j, "instance_id", "instance");
  inst.source_sentence_id = get_string(j, "source_sentence_id", "instance");
  inst.language = get_string(j, "language", "instance");
  auto tokens = j.find("tokens");
  auto spans = j.find("entity_spans");
  if (tokens == j.end() || !tokens->is_array() || spans == j.end() ||
      !spans->is_array())
    throw InputError("instance record missing tokens/entity_spans arrays");
  for (const auto& t : *tokens) {
    if (!t.is_string()) throw InputError("instance token is not a string");
    inst.tokens.push_back(t.get<std::string>());
  }
  for (const auto& sp : *spans) {
    if (!sp.is_object() || !sp.contains("start") || !sp.contains("end") ||
        !sp["start"].is_number_unsigned() || !sp["end"].is_number_unsigned())
      throw InputError("instance entity span malformed in " +
                       inst.instance_id);
    EntitySpan span;
    span.begin = sp["start"].get<uint32_t>();
    span.end = sp["end"].get<uint32_t>();
    span.qid = sp.contains("qid") ? get_string(sp, "qid", "entity span") : "";
    if (span.end > inst.tokens.size() || span.begin > span.end)
      throw InputError("instance entity span out of bounds in " +
                       inst.instance_id);
    inst.entity_spans.push_back(std::move(span));
  }
  return inst;
}

std::map<std::string, uint64_t> parse_counts_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw InputError("counts file must hold a JSON object");
  std::map<std::string, uint64_t> counts;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number_unsigned() || it.value().get<uint64_t>() == 0)
      throw InputError("count for '" + it.key() +
                       "' must be a positive integer");
    counts[it.key()] = it.value().get<uint64_t>();
  }
  return counts;
}

}  // namespace entitycs
