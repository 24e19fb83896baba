#include "entitycs/kb_index.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "entitycs/errors.hpp"
#include "entitycs/jsonl.hpp"
#include "entitycs/log.hpp"

namespace entitycs {

namespace {

constexpr char kMagic[8] = {'E', 'C', 'S', 'I', 'D', 'X', '0', '1'};
constexpr uint32_t kEndianTag = 0x00C0FFEE;
constexpr size_t kHeaderSize = 96;
constexpr size_t kLangSlot = 16;   // u8 len + 15 bytes
constexpr size_t kEntrySize = 16;  // titles, records and labels all use 16B

template <typename T>
T rd(const uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void wr(std::vector<uint8_t>& out, T v) {
  size_t pos = out.size();
  out.resize(pos + sizeof(T));
  std::memcpy(out.data() + pos, &v, sizeof(T));
}

template <typename T>
void wr_at(std::vector<uint8_t>& out, size_t pos, T v) {
  std::memcpy(out.data() + pos, &v, sizeof(T));
}

bool valid_lang_code(std::string_view code) {
  if (code.size() < 2 || code.size() > 15) return false;
  if (code.front() == '-' || code.back() == '-') return false;
  for (char c : code) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-'))
      return false;
  }
  return true;
}

std::optional<uint64_t> parse_qid(std::string_view qid) {
  if (qid.size() < 2 || qid.size() > 20 || qid[0] != 'Q') return std::nullopt;
  uint64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(qid.data() + 1, qid.data() + qid.size(), value);
  if (ec != std::errc() || ptr != qid.data() + qid.size()) return std::nullopt;
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

std::string EntityIndex::normalize_title(std::string_view title) {
  std::string out(trim(title));
  for (char& c : out)
    if (c == '_') c = ' ';
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z')
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

void EntityIndex::attach() {
  const uint8_t* p = base();
  const size_t size = image_.size();
  if (size < kHeaderSize || std::memcmp(p, kMagic, 8) != 0 ||
      rd<uint32_t>(p + 8) != kEndianTag)
    throw InputError("not an entitycs index image (bad magic or byte order)");
  uint32_t lang_cnt = rd<uint32_t>(p + 12);
  title_cnt_ = rd<uint64_t>(p + 16);
  record_cnt_ = rd<uint64_t>(p + 24);
  label_cnt_ = rd<uint64_t>(p + 32);
  uint64_t titles_off = rd<uint64_t>(p + 40);
  uint64_t title_pool_off = rd<uint64_t>(p + 48);
  uint64_t title_pool_len = rd<uint64_t>(p + 56);
  uint64_t records_off = rd<uint64_t>(p + 64);
  uint64_t labels_off = rd<uint64_t>(p + 72);
  uint64_t label_pool_off = rd<uint64_t>(p + 80);
  uint64_t label_pool_len = rd<uint64_t>(p + 88);
  uint64_t end = label_pool_off + label_pool_len;
  if (titles_off + title_cnt_ * kEntrySize > size ||
      title_pool_off + title_pool_len > size ||
      records_off + record_cnt_ * kEntrySize > size ||
      labels_off + label_cnt_ * kEntrySize > size || end > size)
    throw InputError("truncated entitycs index image");

  langs_.clear();
  lang_to_idx_.clear();
  const uint8_t* lp = p + kHeaderSize;
  for (uint32_t i = 0; i < lang_cnt; ++i, lp += kLangSlot) {
    uint8_t len = *lp;
    if (len > 15) throw InputError("corrupt language table in index image");
    std::string code(reinterpret_cast<const char*>(lp + 1), len);
    lang_to_idx_.emplace(code, static_cast<uint16_t>(i));
    langs_.push_back(std::move(code));
  }
  titles_ = p + titles_off;
  title_pool_ = reinterpret_cast<const char*>(p + title_pool_off);
  records_ = p + records_off;
  labels_ = p + labels_off;
  label_pool_ = reinterpret_cast<const char*>(p + label_pool_off);
}

EntityIndex EntityIndex::from_image(std::vector<uint8_t> image) {
  EntityIndex idx;
  idx.image_ = std::move(image);
  idx.attach();
  return idx;
}

EntityIndex EntityIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open index file: " + path);
  std::vector<uint8_t> image((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return from_image(std::move(image));
}

void EntityIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write index file: " + path);
  out.write(reinterpret_cast<const char*>(image_.data()),
            static_cast<std::streamsize>(image_.size()));
  if (!out) throw InputError("short write to index file: " + path);
}

uint64_t EntityIndex::title_count() const { return title_cnt_; }
uint64_t EntityIndex::record_count() const { return record_cnt_; }

std::optional<uint32_t> EntityIndex::find(std::string_view title) const {
  std::string norm = normalize_title(title);
  std::string_view needle = norm;
  uint64_t lo = 0;
  uint64_t hi = title_cnt_;
  while (lo < hi) {
    uint64_t mid = lo + (hi - lo) / 2;
    const uint8_t* e = titles_ + mid * kEntrySize;
    std::string_view key(title_pool_ + rd<uint64_t>(e), rd<uint32_t>(e + 8));
    if (key < needle)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < title_cnt_) {
    const uint8_t* e = titles_ + lo * kEntrySize;
    std::string_view key(title_pool_ + rd<uint64_t>(e), rd<uint32_t>(e + 8));
    if (key == needle) return rd<uint32_t>(e + 12);
  }
  return std::nullopt;
}

std::string EntityIndex::qid(uint32_t record) const {
  return "Q" + std::to_string(rd<uint64_t>(records_ + record * kEntrySize));
}

std::optional<uint16_t> EntityIndex::lang_index(std::string_view code) const {
  auto it = lang_to_idx_.find(std::string(code));
  if (it == lang_to_idx_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string_view> EntityIndex::label(uint32_t record,
                                                   uint16_t lang) const {
  const uint8_t* r = records_ + record * kEntrySize;
  uint32_t begin = rd<uint32_t>(r + 8);
  uint32_t count = rd<uint32_t>(r + 12);
  uint32_t lo = begin;
  uint32_t hi = begin + count;
  while (lo < hi) {
    uint32_t mid = lo + (hi - lo) / 2;
    const uint8_t* e = labels_ + static_cast<size_t>(mid) * kEntrySize;
    uint16_t l = rd<uint16_t>(e + 12);
    if (l < lang)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < begin + count) {
    const uint8_t* e = labels_ + static_cast<size_t>(lo) * kEntrySize;
    if (rd<uint16_t>(e + 12) == lang)
      return std::string_view(label_pool_ + rd<uint64_t>(e), rd<uint32_t>(e + 8));
  }
  return std::nullopt;
}

std::vector<uint16_t> EntityIndex::label_langs(uint32_t record) const {
  const uint8_t* r = records_ + record * kEntrySize;
  uint32_t begin = rd<uint32_t>(r + 8);
  uint32_t count = rd<uint32_t>(r + 12);
  std::vector<uint16_t> out;
  out.reserve(count);
  for (uint32_t i = begin; i < begin + count; ++i)
    out.push_back(rd<uint16_t>(labels_ + static_cast<size_t>(i) * kEntrySize + 12));
  return out;
}

std::optional<EntityRecord> EntityIndex::lookup(std::string_view title) const {
  auto record = find(title);
  if (!record) return std::nullopt;
  EntityRecord rec;
  rec.qid = qid(*record);
  for (uint16_t lang : label_langs(*record))
    rec.labels.emplace_back(langs_[lang], std::string(*label(*record, lang)));
  return rec;
}

std::vector<uint16_t> EntityIndex::covering_langs(
    const std::vector<std::string>& titles) const {
  std::vector<uint16_t> acc;
  bool first = true;
  for (const std::string& title : titles) {
    auto record = find(title);
    if (!record) return {};
    std::vector<uint16_t> langs = label_langs(*record);
    if (first) {
      acc = std::move(langs);
      first = false;
    } else {
      std::vector<uint16_t> merged;
      std::set_intersection(acc.begin(), acc.end(), langs.begin(), langs.end(),
                            std::back_inserter(merged));
      acc = std::move(merged);
    }
    if (acc.empty()) return {};
  }
  return acc;
}

std::set<std::string> EntityIndex::languages_covering(
    const std::vector<std::string>& titles) const {
  std::set<std::string> out;
  for (uint16_t idx : covering_langs(titles)) out.insert(langs_[idx]);
  return out;
}

void EntityIndex::debug_dump_json(std::ostream& os) const {
  os << "{\"languages\":[";
  for (size_t i = 0; i < langs_.size(); ++i) {
    if (i) os << ',';
    os << json_quote(langs_[i]);
  }
  os << "],\"entries\":[";
  for (uint64_t i = 0; i < title_cnt_; ++i) {
    const uint8_t* e = titles_ + i * kEntrySize;
    std::string_view key(title_pool_ + rd<uint64_t>(e), rd<uint32_t>(e + 8));
    uint32_t record = rd<uint32_t>(e + 12);
    if (i) os << ',';
    os << "{\"title\":" << json_quote(key) << ",\"qid\":\"" << qid(record)
       << "\",\"labels\":{";
    bool first = true;
    for (uint16_t lang : label_langs(record)) {
      if (!first) os << ',';
      first = false;
      os << json_quote(langs_[lang]) << ':' << json_quote(*label(record, lang));
    }
    os << "}}";
  }
  os << "]}\n";
}

IndexBuilder::IndexBuilder(std::vector<std::string> target_languages) {
  std::sort(target_languages.begin(), target_languages.end());
  target_languages.erase(
      std::unique(target_languages.begin(), target_languages.end()),
      target_languages.end());
  for (std::string& code : target_languages) {
    if (code == "en") {
      log::warn("'en' removed from target languages (matrix language)");
      continue;
    }
    if (!valid_lang_code(code))
      throw InputError("invalid target language code: '" + code + "'");
    lang_to_idx_.emplace(code, static_cast<uint16_t>(langs_.size()));
    langs_.push_back(std::move(code));
  }
  if (langs_.size() > 0xFFFF)
    throw InputError("too many target languages (max 65535)");
}

void IndexBuilder::add_sitelink(std::string_view title, std::string_view qid) {
  ++counters_.sitelink_rows;
  auto qid_num = parse_qid(trim(qid));
  std::string norm = EntityIndex::normalize_title(title);
  if (!qid_num || norm.empty()) {
    ++counters_.malformed_rows;
    return;
  }
  auto [it, inserted] = title_to_qid_.insert_or_assign(std::move(norm), *qid_num);
  if (!inserted) ++counters_.duplicate_titles;
  labels_.try_emplace(*qid_num);
}

void IndexBuilder::add_label(std::string_view qid, std::string_view lang,
                             std::string_view label) {
  ++counters_.label_rows;
  auto qid_num = parse_qid(trim(qid));
  std::string code(trim(lang));
  std::string_view text = trim(label);
  if (!qid_num || !valid_lang_code(code) || text.empty()) {
    ++counters_.malformed_rows;
    return;
  }
  auto lang_it = lang_to_idx_.find(code);
  if (lang_it == lang_to_idx_.end()) {
    ++counters_.filtered_labels;
    return;
  }
  auto& per_record = labels_[*qid_num];
  auto [it, inserted] = per_record.insert_or_assign(lang_it->second,
                                                    std::string(text));
  if (!inserted) ++counters_.duplicate_labels;
}

namespace {

void split_tsv(std::string_view line, std::vector<std::string_view>& fields) {
  fields.clear();
  size_t pos = 0;
  while (true) {
    size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

}  // namespace

void IndexBuilder::add_sitelinks_tsv(std::istream& in) {
  std::string line;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    split_tsv(line, fields);
    if (fields.size() != 2) {
      ++counters_.sitelink_rows;
      ++counters_.malformed_rows;
      continue;
    }
    add_sitelink(fields[0], fields[1]);
  }
}

void IndexBuilder::add_labels_tsv(std::istream& in) {
  std::string line;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    split_tsv(line, fields);
    if (fields.size() != 3) {
      ++counters_.label_rows;
      ++counters_.malformed_rows;
      continue;
    }
    add_label(fields[0], fields[1], fields[2]);
  }
}

EntityIndex IndexBuilder::build() const {
  // Stable record numbering: sorted by QID.
  std::vector<uint64_t> qids;
  qids.reserve(labels_.size());
  for (const auto& [qid, _] : labels_) qids.push_back(qid);
  std::sort(qids.begin(), qids.end());
  std::unordered_map<uint64_t, uint32_t> record_of;
  record_of.reserve(qids.size());
  for (uint32_t i = 0; i < qids.size(); ++i) record_of.emplace(qids[i], i);

  std::vector<std::pair<std::string_view, uint32_t>> titles;
  titles.reserve(title_to_qid_.size());
  for (const auto& [title, qid] : title_to_qid_)
    titles.emplace_back(title, record_of.at(qid));
  std::sort(titles.begin(), titles.end());

  std::vector<uint8_t> image(kHeaderSize, 0);
  std::memcpy(image.data(), kMagic, 8);
  wr_at(image, 8, kEndianTag);
  wr_at(image, 12, static_cast<uint32_t>(langs_.size()));
  for (const std::string& code : langs_) {
    size_t pos = image.size();
    image.resize(pos + kLangSlot, 0);
    image[pos] = static_cast<uint8_t>(code.size());
    std::memcpy(image.data() + pos + 1, code.data(), code.size());
  }

  uint64_t titles_off = image.size();
  std::vector<uint8_t> pool;
  for (const auto& [title, record] : titles) {
    wr(image, static_cast<uint64_t>(pool.size()));
    wr(image, static_cast<uint32_t>(title.size()));
    wr(image, record);
    pool.insert(pool.end(), title.begin(), title.end());
  }
  uint64_t title_pool_off = image.size();
  uint64_t title_pool_len = pool.size();
  image.insert(image.end(), pool.begin(), pool.end());
  pool.clear();

  uint64_t records_off = image.size();
  uint64_t label_total = 0;
  for (uint64_t qid : qids) {
    const auto& per_record = labels_.at(qid);
    wr(image, qid);
    wr(image, static_cast<uint32_t>(label_total));
    wr(image, static_cast<uint32_t>(per_record.size()));
    label_total += per_record.size();
  }

  uint64_t labels_off = image.size();
  for (uint64_t qid : qids) {
    for (const auto& [lang, text] : labels_.at(qid)) {
      wr(image, static_cast<uint64_t>(pool.size()));
      wr(image, static_cast<uint32_t>(text.size()));
      wr(image, lang);
      wr(image, static_cast<uint16_t>(0));
      pool.insert(pool.end(), text.begin(), text.end());
    }
  }
  uint64_t label_pool_off = image.size();
  uint64_t label_pool_len = pool.size();
  image.insert(image.end(), pool.begin(), pool.end());

  wr_at(image, 16, static_cast<uint64_t>(titles.size()));
  wr_at(image, 24, static_cast<uint64_t>(qids.size()));
  wr_at(image, 32, label_total);
  wr_at(image, 40, titles_off);
  wr_at(image, 48, title_pool_off);
  wr_at(image, 56, title_pool_len);
  wr_at(image, 64, records_off);
  wr_at(image, 72, labels_off);
  wr_at(image, 80, label_pool_off);
  wr_at(image, 88, label_pool_len);
  return EntityIndex::from_image(std::move(image));
}

std::vector<std::string> load_language_list(const std::string& spec) {
  std::vector<std::string> out;
  auto push = [&out](std::string_view item) {
    std::string_view t = trim(item);
    if (!t.empty() && t[0] != '#') out.emplace_back(t);
  };
  bool looks_like_path = spec.find('/') != std::string::npos ||
                         spec.find('.') != std::string::npos;
  if (looks_like_path && spec.find(',') == std::string::npos) {
    std::ifstream in(spec);
    if (!in) throw InputError("cannot open language list: " + spec);
    std::string line;
    while (std::getline(in, line)) push(line);
    return out;
  }
  if (spec.find(',') != std::string::npos ||
      (!spec.empty() && !std::ifstream(spec).good())) {
    size_t pos = 0;
    while (pos <= spec.size()) {
      size_t comma = spec.find(',', pos);
      if (comma == std::string::npos) {
        push(std::string_view(spec).substr(pos));
        break;
      }
      push(std::string_view(spec).substr(pos, comma - pos));
      pos = comma + 1;
    }
    return out;
  }
  std::ifstream in(spec);
  if (!in) throw InputError("cannot open language list: " + spec);
  std::string line;
  while (std::getline(in, line)) push(line);
  return out;
}

const std::vector<std::string>& default_target_languages() {
  // XLM-R pre-training languages (base ISO codes) that are also Wikidata
  // label languages, English excluded: 92 codes.
  static const std::vector<std::string> langs = {
      "af", "am", "ar", "as", "az", "be", "bg", "bn", "br", "bs", "ca", "cs",
      "cy", "da", "de", "el", "eo", "es", "et", "eu", "fa", "fi", "fr", "fy",
      "ga", "gd", "gl", "gu", "ha", "he", "hi", "hr", "hu", "hy", "id", "is",
      "it", "ja", "jv", "ka", "kk", "km", "kn", "ko", "ku", "ky", "la", "lo",
      "lt", "lv", "mg", "mk", "ml", "mn", "mr", "ms", "my", "ne", "nl", "no",
      "om", "or", "pa", "pl", "ps", "pt", "ro", "ru", "sa", "sd", "si", "sk",
      "sl", "so", "sq", "sr", "su", "sv", "sw", "ta", "te", "th", "tl", "tr",
      "ug", "uk", "ur", "uz", "vi", "xh", "yi", "zh"};
  return langs;
}

}  // namespace entitycs
