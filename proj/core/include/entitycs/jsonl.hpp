#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "entitycs/cs_generator.hpp"
#include "entitycs/masking.hpp"
#include "entitycs/wiki_extract.hpp"

namespace entitycs {

void json_append_escaped(std::string& out, std::string_view s);
std::string json_quote(std::string_view s);

// One-line record writers (no trailing newline). Writers are hand-rolled:
// serialization dominates generate/mask throughput.
std::string to_jsonl(const SourceSentence& sentence);
std::string to_jsonl(const CsInstance& instance);
std::string to_jsonl(std::string_view instance_id, const MaskedExample& example);

// Readers throw InputError with record context on malformed lines.
RawDocument parse_document_line(std::string_view line);
SourceSentence parse_sentence_line(std::string_view line);
CsInstance parse_instance_line(std::string_view line);
std::map<std::string, uint64_t> parse_counts_json(const std::string& text);

}  // namespace entitycs
