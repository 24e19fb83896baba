#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace entitycs {

struct RawDocument {
  std::string doc_id;
  std::string title;
  std::string text;
};

// A wikilink found in running text. Char offsets index into the plain text
// produced by parse_wikilinks; `piped` records whether the source was
// [[target|display]] or the bare [[display]] form, which is what makes
// reinsertion an exact inverse.
struct ParsedLink {
  std::string target;
  std::string display;
  size_t begin = 0;
  size_t end = 0;
  bool piped = false;
};

struct ParseResult {
  std::string text;
  std::vector<ParsedLink> links;
  uint32_t malformed = 0;
};

// Replaces every well-formed [[target|display]] / [[display]] with its
// display text and records the links. Malformed bracket syntax (unbalanced
// openers/closers, empty target or display, brackets or newlines inside a
// link) is copied through as literal text and counted, never dropped.
ParseResult parse_wikilinks(std::string_view text);

// Inverse of parse_wikilinks for well-formed input.
std::string reinsert_wikilinks(const ParseResult& parsed);

struct WikiLink {
  std::string target_title;
  std::string display_text;
  uint32_t token_begin = 0;  // half-open span over SourceSentence::words
  uint32_t token_end = 0;
};

struct SourceSentence {
  std::string sentence_id;
  std::string doc_id;
  std::vector<std::string> words;
  std::vector<WikiLink> wikilinks;
};

struct SentenceSpan {
  size_t begin = 0;  // char range in the plain text, whitespace-trimmed
  size_t end = 0;
  std::vector<ParsedLink> links;  // char spans rebased to `begin`
};

// Rule-based segmenter: terminal punctuation, capitalised-next-token check
// and an abbreviation stop list. Newlines are hard boundaries. A candidate
// boundary that would fall inside a link's char span is suppressed, so no
// link ever crosses a sentence boundary.
std::vector<SentenceSpan> segment_sentences(std::string_view plain_text,
                                            const std::vector<ParsedLink>& links);

// Whitespace tokenizer, punctuation kept attached. Joining the result with
// single spaces and re-tokenizing yields the same tokens.
std::vector<std::string> tokenize_words(std::string_view text);

struct ExtractOptions {
  uint32_t max_words = 128;
};

struct ExtractCounters {
  uint64_t documents = 0;
  uint64_t doc_errors = 0;
  uint64_t malformed_links = 0;
  uint64_t sentences_seen = 0;
  uint64_t dropped_unlinked = 0;
  uint64_t dropped_too_long = 0;
  uint64_t dropped_empty_span = 0;
  uint64_t emitted = 0;

  ExtractCounters& operator+=(const ExtractCounters& o);
};

// Runs parse -> segment -> tokenize -> filter for one document. Sentence ids
// are doc_id + "#" + running index over the document's kept sentences.
// Deterministic: a pure function of the document.
std::vector<SourceSentence> extract_document(const RawDocument& doc,
                                             const ExtractOptions& opts,
                                             ExtractCounters& counters);

}  // namespace entitycs
