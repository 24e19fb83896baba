#include "entitycs/wiki_extract.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace entitycs {

namespace {

bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return is_ws(c); });
}

}  // namespace

ParseResult parse_wikilinks(std::string_view text) {
  ParseResult result;
  result.text.reserve(text.size());
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    if (text[i] == '[' && i + 1 < n && text[i + 1] == '[') {
      // Scan the link body. Any '[', stray ']' or newline before the
      // closing "]]" makes the opener malformed; it is emitted literally
      // and scanning resumes right after it.
      size_t j = i + 2;
      size_t close = std::string_view::npos;
      while (j < n) {
        char c = text[j];
        if (c == '\n' || c == '[') break;
        if (c == ']') {
          if (j + 1 < n && text[j + 1] == ']') close = j;
          break;
        }
        ++j;
      }
      if (close == std::string_view::npos) {
        result.text += "[[";
        ++result.malformed;
        i += 2;
        continue;
      }
      std::string_view body = text.substr(i + 2, close - (i + 2));
      size_t pipe = body.find('|');
      std::string_view target =
          pipe == std::string_view::npos ? body : body.substr(0, pipe);
      std::string_view display =
          pipe == std::string_view::npos ? body : body.substr(pipe + 1);
      if (blank(target) || blank(display)) {
        result.text.append(text.substr(i, close + 2 - i));
        ++result.malformed;
        i = close + 2;
        continue;
      }
      ParsedLink link;
      link.target.assign(target);
      link.display.assign(display);
      link.piped = pipe != std::string_view::npos;
      link.begin = result.text.size();
      result.text.append(display);
      link.end = result.text.size();
      result.links.push_back(std::move(link));
      i = close + 2;
      continue;
    }
    if (text[i] == ']' && i + 1 < n && text[i + 1] == ']') {
      result.text += "]]";
      ++result.malformed;
      i += 2;
      continue;
    }
    result.text += text[i];
    ++i;
  }
  return result;
}

std::string reinsert_wikilinks(const ParseResult& parsed) {
  std::string out;
  out.reserve(parsed.text.size() + parsed.links.size() * 8);
  size_t pos = 0;
  for (const ParsedLink& link : parsed.links) {
    out.append(parsed.text, pos, link.begin - pos);
    out += "[[";
    if (link.piped) {
      out += link.target;
      out += '|';
    }
    out += link.display;
    out += "]]";
    pos = link.end;
  }
  out.append(parsed.text, pos, parsed.text.size() - pos);
  return out;
}

namespace {

// Lowercased, final period included. Covers the usual titles, months and
// street/unit abbreviations seen in encyclopedic text.
const std::unordered_set<std::string_view>& abbreviations() {
  static const std::unordered_set<std::string_view> set = {
      "mr.",   "mrs.",  "ms.",   "dr.",    "prof.", "st.",   "jr.",
      "sr.",   "vs.",   "etc.",  "e.g.",   "i.e.",  "cf.",   "inc.",
      "ltd.",  "co.",   "corp.", "mt.",    "ft.",   "gen.",  "col.",
      "lt.",   "capt.", "sgt.",  "maj.",   "adm.",  "rev.",  "hon.",
      "pres.", "gov.",  "sen.",  "rep.",   "u.s.",  "u.k.",  "u.n.",
      "jan.",  "feb.",  "mar.",  "apr.",   "jun.",  "jul.",  "aug.",
      "sep.",  "sept.", "oct.",  "nov.",   "dec.",  "no.",   "vol.",
      "pp.",   "p.",    "ave.",  "blvd.",  "rd.",   "approx.",
  };
  return set;
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']';
}

// Next-sentence openers we look through before the capital check.
bool is_opener(char c) {
  return c == '"' || c == '\'' || c == '(' || c == '[';
}

// Capitalised-next-token heuristic. Non-ASCII leading bytes are accepted:
// their case cannot be checked cheaply, and refusing them would glue
// sentences in non-Latin scripts together.
bool starts_sentence(std::string_view text, size_t pos) {
  while (pos < text.size() && (is_ws(text[pos]) || is_opener(text[pos]))) ++pos;
  if (pos >= text.size()) return false;
  unsigned char c = static_cast<unsigned char>(text[pos]);
  return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

// Word ending at `end` (exclusive), lowercased, for the abbreviation check.
std::string word_before(std::string_view text, size_t end) {
  size_t begin = end;
  while (begin > 0 && !is_ws(text[begin - 1])) --begin;
  std::string w(text.substr(begin, end - begin));
  std::transform(w.begin(), w.end(), w.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return w;
}

bool inside_any_link(const std::vector<ParsedLink>& links, size_t cut) {
  for (const ParsedLink& link : links) {
    if (link.begin < cut && cut < link.end) return true;
    if (link.begin >= cut) break;  // links are ordered
  }
  return false;
}

}  // namespace

std::vector<SentenceSpan> segment_sentences(
    std::string_view plain_text, const std::vector<ParsedLink>& links) {
  std::vector<size_t> cuts;
  const size_t n = plain_text.size();
  for (size_t i = 0; i < n; ++i) {
    if (plain_text[i] == '\n') {
      cuts.push_back(i);
      continue;
    }
    if (!is_terminal(plain_text[i])) continue;
    size_t run_end = i;
    while (run_end + 1 < n && is_terminal(plain_text[run_end + 1])) ++run_end;
    size_t cut = run_end + 1;
    while (cut < n && is_closer(plain_text[cut])) ++cut;
    bool single_period = run_end == i && plain_text[i] == '.';
    if (single_period) {
      std::string w = word_before(plain_text, i + 1);
      // Stop list plus single-letter initials ("J. Smith").
      if (abbreviations().count(w) != 0 ||
          (w.size() == 2 && std::isalpha(static_cast<unsigned char>(w[0])))) {
        i = run_end;
        continue;
      }
    }
    if (cut < n && !(is_ws(plain_text[cut]) &&
                     starts_sentence(plain_text, cut))) {
      i = run_end;
      continue;
    }
    if (inside_any_link(links, cut)) {
      i = run_end;
      continue;
    }
    cuts.push_back(cut);
    i = cut > 0 ? cut - 1 : 0;
  }
  cuts.push_back(n);

  std::vector<SentenceSpan> sentences;
  size_t start = 0;
  size_t link_idx = 0;
  for (size_t cut : cuts) {
    size_t begin = start;
    size_t end = cut;
    while (begin < end && is_ws(plain_text[begin])) ++begin;
    while (end > begin && is_ws(plain_text[end - 1])) --end;
    // The trim must not eat into a link whose display text carries leading
    // or trailing whitespace.
    for (size_t li = link_idx; li < links.size() && links[li].begin < cut;
         ++li) {
      begin = std::min(begin, links[li].begin);
      end = std::max(end, links[li].end);
    }
    if (begin < end) {
      SentenceSpan span;
      span.begin = begin;
      span.end = end;
      while (link_idx < links.size() && links[link_idx].begin < cut) {
        ParsedLink rebased = links[link_idx];
        rebased.begin -= begin;
        rebased.end -= begin;
        span.links.push_back(std::move(rebased));
        ++link_idx;
      }
      sentences.push_back(std::move(span));
    }
    start = cut + (cut < n && plain_text[cut] == '\n' ? 1 : 0);
  }
  return sentences;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ws(text[i])) ++i;
    size_t begin = i;
    while (i < text.size() && !is_ws(text[i])) ++i;
    if (i > begin) tokens.emplace_back(text.substr(begin, i - begin));
  }
  return tokens;
}

ExtractCounters& ExtractCounters::operator+=(const ExtractCounters& o) {
  documents += o.documents;
  doc_errors += o.doc_errors;
  malformed_links += o.malformed_links;
  sentences_seen += o.sentences_seen;
  dropped_unlinked += o.dropped_unlinked;
  dropped_too_long += o.dropped_too_long;
  dropped_empty_span += o.dropped_empty_span;
  emitted += o.emitted;
  return *this;
}

namespace {

struct TokenRange {
  size_t begin;
  size_t end;
};

// Whitespace tokens, additionally cut at link span edges so that an entity's
// tokens are exactly its display text. Attached punctuation ("[[Paris]].")
// becomes its own token; without the cut the entity span would swallow it
// and the display-text round trip would not hold.
std::vector<TokenRange> wordize(std::string_view text,
                                const std::vector<ParsedLink>& links) {
  std::vector<size_t> edges;
  edges.reserve(links.size() * 2);
  for (const ParsedLink& link : links) {
    edges.push_back(link.begin);
    edges.push_back(link.end);
  }
  std::vector<TokenRange> tokens;
  size_t i = 0;
  size_t e = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ws(text[i])) ++i;
    if (i >= text.size()) break;
    while (e < edges.size() && edges[e] <= i) ++e;
    size_t stop = e < edges.size() ? edges[e] : text.size();
    size_t begin = i;
    while (i < text.size() && !is_ws(text[i]) && i < stop) ++i;
    tokens.push_back({begin, i});
  }
  return tokens;
}

}  // namespace

std::vector<SourceSentence> extract_document(const RawDocument& doc,
                                             const ExtractOptions& opts,
                                             ExtractCounters& counters) {
  ++counters.documents;
  ParseResult parsed = parse_wikilinks(doc.text);
  counters.malformed_links += parsed.malformed;

  std::vector<SourceSentence> out;
  uint64_t index = 0;
  for (const SentenceSpan& span : segment_sentences(parsed.text, parsed.links)) {
    ++counters.sentences_seen;
    if (span.links.empty()) {
      ++counters.dropped_unlinked;
      continue;
    }
    std::string_view text =
        std::string_view(parsed.text).substr(span.begin, span.end - span.begin);
    std::vector<TokenRange> ranges = wordize(text, span.links);
    if (ranges.size() > opts.max_words) {
      ++counters.dropped_too_long;
      continue;
    }

    SourceSentence sentence;
    sentence.doc_id = doc.doc_id;
    sentence.words.reserve(ranges.size());
    for (const TokenRange& r : ranges)
      sentence.words.emplace_back(text.substr(r.begin, r.end - r.begin));

    bool bad_span = false;
    for (const ParsedLink& link : span.links) {
      uint32_t first = 0;
      uint32_t last = 0;
      bool seen = false;
      for (size_t t = 0; t < ranges.size(); ++t) {
        if (ranges[t].begin >= link.begin && ranges[t].end <= link.end) {
          if (!seen) first = static_cast<uint32_t>(t);
          last = static_cast<uint32_t>(t);
          seen = true;
        }
      }
      if (!seen) {  // display text was pure whitespace
        ++counters.dropped_empty_span;
        bad_span = true;
        continue;
      }
      sentence.wikilinks.push_back(
          WikiLink{link.target, link.display, first, last + 1});
    }
    if (bad_span && sentence.wikilinks.empty()) {
      ++counters.dropped_unlinked;
      continue;
    }
    sentence.sentence_id = doc.doc_id + "#" + std::to_string(index++);
    out.push_back(std::move(sentence));
    ++counters.emitted;
  }
  return out;
}

}  // namespace entitycs
