#include "entitycs/tokenizer.hpp"

#include <fstream>
#include <unordered_map>

#include "entitycs/errors.hpp"
#include "entitycs/rng.hpp"

namespace entitycs {

std::vector<uint32_t> ToyTokenizer::tokenize(std::string_view word) const {
  if (word.empty()) return {kUnkId};
  std::vector<uint32_t> ids;
  ids.reserve(word.size() / 2 + 1);
  for (size_t i = 0; i < word.size(); i += 2) {
    std::string_view piece = word.substr(i, 2);
    uint32_t id = kNumSpecialTokens +
                  static_cast<uint32_t>(fnv1a64(piece) %
                                        (kVocabSize - kNumSpecialTokens));
    ids.push_back(id);
  }
  return ids;
}

std::string ToyTokenizer::piece(uint32_t id) const {
  if (id == kPadId) return "<pad>";
  if (id == kUnkId) return "<unk>";
  if (id == kMaskId) return "<mask>";
  return "#" + std::to_string(id);
}

struct VocabTokenizer::Impl {
  std::vector<std::string> pieces;
  std::unordered_map<std::string_view, uint32_t> lookup;
};

VocabTokenizer VocabTokenizer::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open vocab file: " + path);
  auto impl = std::make_shared<Impl>();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    impl->pieces.push_back(line);
  }
  impl->lookup.reserve(impl->pieces.size());
  for (uint32_t i = 0; i < impl->pieces.size(); ++i)
    impl->lookup.emplace(impl->pieces[i], i);
  auto expect = [&](uint32_t id, std::string_view piece) {
    if (impl->pieces.size() <= id || impl->pieces[id] != piece)
      throw InputError("vocab file " + path + " must define " +
                       std::string(piece) + " at id " + std::to_string(id));
  };
  expect(kPadId, "<pad>");
  expect(kUnkId, "<unk>");
  expect(kMaskId, "<mask>");
  VocabTokenizer tok;
  tok.impl_ = std::move(impl);
  return tok;
}

std::vector<uint32_t> VocabTokenizer::tokenize(std::string_view word) const {
  std::vector<uint32_t> ids;
  size_t start = 0;
  std::string buf;
  while (start < word.size()) {
    size_t end = word.size();
    uint32_t match = kUnkId;
    bool found = false;
    while (end > start) {
      buf.assign(start > 0 ? "##" : "");
      buf.append(word.substr(start, end - start));
      auto it = impl_->lookup.find(buf);
      if (it != impl_->lookup.end()) {
        match = it->second;
        found = true;
        break;
      }
      --end;
    }
    if (!found) return {kUnkId};  // unknown word collapses to a single <unk>
    ids.push_back(match);
    start = end;
  }
  if (ids.empty()) ids.push_back(kUnkId);
  return ids;
}

uint32_t VocabTokenizer::vocab_size() const {
  return static_cast<uint32_t>(impl_->pieces.size());
}

std::string VocabTokenizer::piece(uint32_t id) const {
  if (id < impl_->pieces.size()) return impl_->pieces[id];
  return "<bad:" + std::to_string(id) + ">";
}

std::unique_ptr<Tokenizer> make_tokenizer(const std::string& kind,
                                          const std::string& vocab_path) {
  if (kind == "toy") return std::make_unique<ToyTokenizer>();
  if (kind == "external-vocab") {
    if (vocab_path.empty())
      throw InputError("--tokenizer external-vocab requires --vocab <file>");
    return std::make_unique<VocabTokenizer>(VocabTokenizer::from_file(vocab_path));
  }
  throw InputError("unknown tokenizer '" + kind + "' (toy|external-vocab)");
}

}  // namespace entitycs
