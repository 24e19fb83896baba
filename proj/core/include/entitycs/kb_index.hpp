#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace entitycs {

struct EntityRecord {
  std::string qid;                                        // "Q" + digits
  std::vector<std::pair<std::string, std::string>> labels;  // (lang, label)
};

struct IndexBuildCounters {
  uint64_t sitelink_rows = 0;
  uint64_t label_rows = 0;
  uint64_t malformed_rows = 0;
  uint64_t duplicate_titles = 0;
  uint64_t duplicate_labels = 0;
  uint64_t filtered_labels = 0;
};

// Immutable title -> QID -> per-language label index. The in-memory form is
// the serialized image itself: a versioned header, language table, title
// table sorted by normalized title, and offset-indexed label blocks. save()
// writes the image verbatim; load() maps it back, so a loaded index answers
// queries through the identical code path and byte layout.
class EntityIndex {
 public:
  EntityIndex() = default;

  static EntityIndex from_image(std::vector<uint8_t> image);
  static EntityIndex load(const std::string& path);
  void save(const std::string& path) const;

  const std::vector<std::string>& target_languages() const { return langs_; }

  // Normalized-title lookup; returns a record handle for the fast path.
  std::optional<uint32_t> find(std::string_view title) const;
  std::optional<EntityRecord> lookup(std::string_view title) const;

  std::string qid(uint32_t record) const;
  std::optional<uint16_t> lang_index(std::string_view code) const;
  const std::string& lang_code(uint16_t idx) const { return langs_[idx]; }
  std::optional<std::string_view> label(uint32_t record, uint16_t lang) const;
  // Sorted language indices with a label for this record.
  std::vector<uint16_t> label_langs(uint32_t record) const;

  // Intersection of label languages over all titles; empty if any title
  // misses. Result indices are sorted.
  std::vector<uint16_t> covering_langs(const std::vector<std::string>& titles) const;
  std::set<std::string> languages_covering(const std::vector<std::string>& titles) const;

  uint64_t title_count() const;
  uint64_t record_count() const;

  // Underscore/space unification, outer trim, ASCII fold of the first char.
  static std::string normalize_title(std::string_view title);

  void debug_dump_json(std::ostream& os) const;

 private:
  friend class IndexBuilder;

  const uint8_t* base() const { return image_.data(); }
  void attach();  // validates the header and caches section views

  std::vector<uint8_t> image_;
  std::vector<std::string> langs_;
  std::unordered_map<std::string, uint16_t> lang_to_idx_;

  uint64_t title_cnt_ = 0;
  uint64_t record_cnt_ = 0;
  uint64_t label_cnt_ = 0;
  const uint8_t* titles_ = nullptr;
  const char* title_pool_ = nullptr;
  const uint8_t* records_ = nullptr;
  const uint8_t* labels_ = nullptr;
  const char* label_pool_ = nullptr;
};

// Single-writer builder; the built EntityIndex is immutable. Duplicate rows
// follow last-write-wins with a counter; malformed rows are skipped and
// counted.
class IndexBuilder {
 public:
  explicit IndexBuilder(std::vector<std::string> target_languages);

  void add_sitelink(std::string_view title, std::string_view qid);
  void add_label(std::string_view qid, std::string_view lang,
                 std::string_view label);

  // TSV streams: "title\tqid" and "qid\tlang\tlabel".
  void add_sitelinks_tsv(std::istream& in);
  void add_labels_tsv(std::istream& in);

  EntityIndex build() const;
  const IndexBuildCounters& counters() const { return counters_; }

 private:
  std::vector<std::string> langs_;
  std::unordered_map<std::string, uint16_t> lang_to_idx_;
  std::unordered_map<std::string, uint64_t> title_to_qid_;
  std::unordered_map<uint64_t, std::map<uint16_t, std::string>> labels_;
  IndexBuildCounters counters_;
};

// Accepts "file:<path>"-less heuristics: a comma-separated list or a path to
// a file with one code per line ('#' comments allowed).
std::vector<std::string> load_language_list(const std::string& spec);

// The built-in default target set (92 codes, English excluded).
const std::vector<std::string>& default_target_languages();

}  // namespace entitycs
