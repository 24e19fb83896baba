#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "entitycs/manifest.hpp"
#include "entitycs/toml.hpp"

namespace entitycs {

struct ExtractStage {
  std::string input;
  std::string output;
  uint32_t max_words = 128;
  unsigned threads = 1;
};

struct IndexStage {
  std::string sitelinks;
  std::string labels;
  std::string languages;  // file path or comma list; empty = built-in 92
  std::string output;
  std::string debug_json;  // optional JSON dump
};

struct GenerateStage {
  std::string sentences;
  std::string index;
  std::string output_dir;
  uint32_t max_cs = 5;
  uint64_t seed = 0;
  std::string emit_english = "always";  // always | fallback-only
  bool shard_by_lang = false;
  unsigned threads = 1;
};

struct MaskStage {
  std::string input;
  std::string output;
  std::string strategy = "mlm";
  std::optional<double> entity_p;  // overrides the strategy default
  uint64_t seed = 0;
  std::string tokenizer = "toy";
  std::string vocab;
  std::string preview;  // optional text-mode rendering
  unsigned threads = 1;
};

struct SampleStage {
  std::string counts;
  double alpha = 0.7;
  uint64_t n = 0;
  uint64_t seed = 0;
  std::string output;
};

struct SplitStage {
  std::string input;
  uint32_t valid_per_lang = 100;
  uint64_t seed = 0;
  std::string train_output;
  std::string valid_output;
};

struct StatsStage {
  std::string input;
  std::string output;  // empty = stdout, no manifest
};

Manifest run_extract(const ExtractStage& stage);
Manifest run_index(const IndexStage& stage);
Manifest run_generate(const GenerateStage& stage);
Manifest run_mask(const MaskStage& stage);
Manifest run_sample(const SampleStage& stage);
Manifest run_split(const SplitStage& stage);
Manifest run_stats(const StatsStage& stage);

// Flag overrides that win over the config file.
struct PipelineOverrides {
  std::optional<std::string> output;
  std::optional<uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> strategy;
};

// extract -> [index] -> generate -> mask, chained through fixed file names
// in the output directory (sentences.jsonl, kb.idx, cs.jsonl, masked.jsonl).
Manifest run_pipeline(const TomlFile& config, const PipelineOverrides& over);

}  // namespace entitycs
