#include "entitycs/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "entitycs/corpus_stats.hpp"
#include "entitycs/cs_generator.hpp"
#include "entitycs/errors.hpp"
#include "entitycs/jsonl.hpp"
#include "entitycs/kb_index.hpp"
#include "entitycs/lang_sampler.hpp"
#include "entitycs/log.hpp"
#include "entitycs/masking.hpp"
#include "entitycs/parallel.hpp"
#include "entitycs/tokenizer.hpp"
#include "entitycs/wiki_extract.hpp"

namespace entitycs {

namespace {

constexpr size_t kChunkLines = 4096;

std::string basename_of(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open output: " + path);
  return out;
}

void add_output(Manifest& m, const std::string& path) {
  m.outputs.emplace_back(basename_of(path), file_digest(path));
}

EmitEnglish parse_emit_english(const std::string& value) {
  if (value == "always") return EmitEnglish::kAlways;
  if (value == "fallback-only") return EmitEnglish::kFallbackOnly;
  throw InputError("emit_english must be 'always' or 'fallback-only', got '" +
                   value + "'");
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Manifest run_extract(const ExtractStage& stage) {
  std::ifstream in = open_input(stage.input);
  std::ofstream out = open_output(stage.output);

  ExtractOptions opts{stage.max_words};
  ExtractCounters counters;

  struct DocResult {
    std::string lines;
    ExtractCounters counters;
  };

  std::vector<std::string> chunk;
  chunk.reserve(kChunkLines);
  uint64_t base_line = 0;
  std::string line;

  auto flush = [&] {
    auto results = parallel_map<std::string, DocResult>(
        chunk,
        [&](const std::string& doc_line) {
          DocResult r;
          if (doc_line.empty()) return r;
          RawDocument doc;
          try {
            doc = parse_document_line(doc_line);
          } catch (const InputError&) {
            ++r.counters.doc_errors;
            return r;
          }
          try {
            for (SourceSentence& s : extract_document(doc, opts, r.counters)) {
              r.lines += to_jsonl(s);
              r.lines += '\n';
            }
          } catch (const std::exception&) {
            r = DocResult{};
            ++r.counters.doc_errors;
          }
          return r;
        },
        stage.threads);
    for (size_t i = 0; i < results.size(); ++i) {
      if (results[i].counters.doc_errors > 0)
        log::warn(stage.input, ":", base_line + i + 1,
                  ": document skipped after error");
      counters += results[i].counters;
      out << results[i].lines;
    }
    base_line += chunk.size();
    chunk.clear();
  };

  while (std::getline(in, line)) {
    chunk.push_back(std::move(line));
    if (chunk.size() >= kChunkLines) flush();
  }
  flush();
  out.flush();
  if (!out) throw InputError("short write to " + stage.output);
  out.close();

  Manifest m;
  m.tool_version = kToolVersion;
  m.stage = "extract";
  m.config["max_words"] = std::to_string(stage.max_words);
  m.inputs.emplace_back(stage.input, file_digest(stage.input));
  add_output(m, stage.output);
  m.counters["documents"] = counters.documents;
  m.counters["doc_errors"] = counters.doc_errors;
  m.counters["malformed_links"] = counters.malformed_links;
  m.counters["sentences_seen"] = counters.sentences_seen;
  m.counters["dropped_unlinked"] = counters.dropped_unlinked;
  m.counters["dropped_too_long"] = counters.dropped_too_long;
  m.counters["dropped_empty_span"] = counters.dropped_empty_span;
  m.counters["emitted"] = counters.emitted;
  m.write(stage.output + ".manifest.json");
  return m;
}

Manifest run_index(const IndexStage& stage) {
  std::vector<std::string> langs = stage.languages.empty()
                                       ? default_target_languages()
                                       : load_language_list(stage.languages);
  IndexBuilder builder(std::move(langs));
  {
    std::ifstream sitelinks = open_input(stage.sitelinks);
    builder.add_sitelinks_tsv(sitelinks);
  }
  {
    std::ifstream labels = open_input(stage.labels);
    builder.add_labels_tsv(labels);
  }
  EntityIndex index = builder.build();
  index.save(stage.output);
  if (!stage.debug_json.empty()) {
    std::ofstream dump = open_output(stage.debug_json);
    index.debug_dump_json(dump);
  }

  Manifest m;
  m.tool_version = kToolVersion;
  m.stage = "index";
  std::string joined;
  for (const std::string& code : index.target_languages()) {
    if (!joined.empty()) joined += ',';
    joined += code;
  }
  m.config["languages"] = joined;
  m.inputs.emplace_back(stage.sitelinks, file_digest(stage.sitelinks));
  m.inputs.emplace_back(stage.labels, file_digest(stage.labels));
  add_output(m, stage.output);
  if (!stage.debug_json.empty()) add_output(m, stage.debug_json);
  const IndexBuildCounters& c = builder.counters();
  m.counters["sitelink_rows"] = c.sitelink_rows;
  m.counters["label_rows"] = c.label_rows;
  m.counters["malformed_rows"] = c.malformed_rows;
  m.counters["duplicate_titles"] = c.duplicate_titles;
  m.counters["duplicate_labels"] = c.duplicate_labels;
  m.counters["filtered_labels"] = c.filtered_labels;
  m.counters["titles"] = index.title_count();
  m.counters["records"] = index.record_count();
  m.write(stage.output + ".manifest.json");
  return m;
}

Manifest run_generate(const GenerateStage& stage) {
  EntityIndex index = EntityIndex::load(stage.index);
  GenerationConfig config;
  config.max_cs_per_sentence = stage.max_cs;
  config.rng_seed = stage.seed;
  config.emit_english = parse_emit_english(stage.emit_english);

  std::filesystem::create_directories(stage.output_dir);
  std::map<std::string, std::ofstream> shards;
  std::ofstream single;
  std::string single_path;
  if (!stage.shard_by_lang) {
    single_path = stage.output_dir + "/cs.jsonl";
    single = open_output(single_path);
  }
  auto shard_for = [&](const std::string& lang) -> std::ofstream& {
    auto it = shards.find(lang);
    if (it == shards.end()) {
      std::string path = stage.output_dir + "/cs." + lang + ".jsonl";
      it = shards.emplace(lang, open_output(path)).first;
    }
    return it->second;
  };

  std::ifstream in = open_input(stage.sentences);
  GenerateCounters counters;

  struct LineResult {
    // (language, serialized line) so sharding can route in order
    std::vector<std::pair<std::string, std::string>> lines;
    GenerateCounters counters;
  };

  std::vector<std::string> chunk;
  chunk.reserve(kChunkLines);
  std::string line;
  auto flush = [&] {
    auto results = parallel_map<std::string, LineResult>(
        chunk,
        [&](const std::string& sentence_line) {
          LineResult r;
          if (sentence_line.empty()) return r;
          SourceSentence sentence = parse_sentence_line(sentence_line);
          for (CsInstance& inst :
               generate(sentence, index, config, r.counters)) {
            r.lines.emplace_back(inst.language, to_jsonl(inst) + "\n");
          }
          return r;
        },
        stage.threads);
    for (LineResult& r : results) {
      counters += r.counters;
      for (auto& [lang, text] : r.lines) {
        if (stage.shard_by_lang)
          shard_for(lang) << text;
        else
          single << text;
      }
    }
    chunk.clear();
  };
  while (std::getline(in, line)) {
    chunk.push_back(std::move(line));
    if (chunk.size() >= kChunkLines) flush();
  }
  flush();

  Manifest m;
  m.tool_version = kToolVersion;
  m.stage = "generate";
  m.config["max_cs"] = std::to_string(stage.max_cs);
  m.config["seed"] = std::to_string(stage.seed);
  m.config["emit_english"] = stage.emit_english;
  m.config["shard_by_lang"] = stage.shard_by_lang ? "true" : "false";
  m.inputs.emplace_back(stage.sentences, file_digest(stage.sentences));
  m.inputs.emplace_back(stage.index, file_digest(stage.index));
  if (stage.shard_by_lang) {
    for (auto& [lang, out] : shards) out.close();
    for (auto& [lang, out] : shards)
      add_output(m, stage.output_dir + "/cs." + lang + ".jsonl");
  } else {
    single.close();
    add_output(m, single_path);
  }
  m.counters["sentences"] = counters.sentences;
  m.counters["english_instances"] = counters.english_instances;
  m.counters["cs_instances"] = counters.cs_instances;
  m.counters["fallback_sentences"] = counters.fallback_sentences;
  m.counters["escaped_tokens"] = counters.escaped_tokens;
  m.write(stage.output_dir + "/cs.manifest.json");
  return m;
}

Manifest run_mask(const MaskStage& stage) {
  std::unique_ptr<Tokenizer> tok = make_tokenizer(stage.tokenizer, stage.vocab);
  MaskingConfig cfg = default_config(parse_strategy(stage.strategy));
  if (stage.entity_p) cfg.entity_p = *stage.entity_p;
  cfg.vocab_size = tok->vocab_size();
  cfg.mask_token = tok->mask_id();
  cfg.rng_seed = stage.seed;
  cfg.validate();

  std::ifstream in = open_input(stage.input);
  std::ofstream out = open_output(stage.output);
  std::ofstream preview;
  if (!stage.preview.empty()) preview = open_output(stage.preview);

  MaskCounters counters;

  struct LineResult {
    std::string line;
    std::string preview;
    MaskCounters counters;
  };

  std::vector<std::string> chunk;
  chunk.reserve(kChunkLines);
  std::string line;
  auto flush = [&] {
    auto results = parallel_map<std::string, LineResult>(
        chunk,
        [&](const std::string& instance_line) {
          LineResult r;
          if (instance_line.empty()) return r;
          CsInstance inst = parse_instance_line(instance_line);
          SubwordSequence seq = subword_tokenize(inst, *tok);
          MaskedExample ex = mask_instance(seq, cfg, &r.counters);
          r.line = to_jsonl(seq.instance_id, ex) + "\n";
          if (!stage.preview.empty()) {
            r.preview = seq.instance_id;
            for (size_t i = 0; i < ex.input_ids.size(); ++i) {
              r.preview += ' ';
              r.preview += ex.input_ids[i] == cfg.mask_token
                               ? "[MASK]"
                               : tok->piece(ex.input_ids[i]);
            }
            r.preview += '\n';
          }
          return r;
        },
        stage.threads);
    for (LineResult& r : results) {
      counters += r.counters;
      out << r.line;
      if (!stage.preview.empty()) preview << r.preview;
    }
    chunk.clear();
  };
  while (std::getline(in, line)) {
    chunk.push_back(std::move(line));
    if (chunk.size() >= kChunkLines) flush();
  }
  flush();
  out.close();
  if (!stage.preview.empty()) preview.close();

  Manifest m;
  m.tool_version = kToolVersion;
  m.stage = "mask";
  m.config["strategy"] = strategy_name(cfg.strategy);
  m.config["entity_p"] = format_double(cfg.entity_p);
  m.config["entity_split"] = format_double(cfg.entity_split.mask) + "/" +
                             format_double(cfg.entity_split.rnd) + "/" +
                             format_double(cfg.entity_split.same);
  m.config["nonentity_p"] = format_double(cfg.nonentity_p);
  m.config["nonentity_split"] = format_double(cfg.nonentity_split.mask) + "/" +
                                format_double(cfg.nonentity_split.rnd) + "/" +
                                format_double(cfg.nonentity_split.same);
  m.config["seed"] = std::to_string(stage.seed);
  m.config["tokenizer"] = stage.tokenizer;
  if (!stage.vocab.empty()) m.config["vocab_digest"] = file_digest(stage.vocab);
  m.inputs.emplace_back(stage.input, file_digest(stage.input));
  add_output(m, stage.output);
  if (!stage.preview.empty()) add_output(m, stage.preview);
  m.counters["sequences"] = counters.sequences;
  m.counters["zero_entity_sequences"] = counters.zero_entity_sequences;
  m.counters["positions"] = counters.positions;
  m.counters["masked"] = counters.masked;
  m.counters["randomized"] = counters.randomized;
  m.counters["kept_labeled"] = counters.kept_labeled;
  m.write(stage.output + ".manifest.json");
  return m;
}

Manifest run_sample(const SampleStage& stage) {
  std::ifstream in = open_input(stage.counts);
  std::stringstream buf;
  buf << in.rdbuf();
  std::map<std::string, uint64_t> counts = parse_counts_json(buf.str());
  LangWeights weights = compute_weights(counts, stage.alpha);

  Rng rng(stage.seed);
  std::ofstream out = open_output(stage.output);
  for (uint64_t i = 0; i < stage.n; ++i)
    out << sample_language(weights, rng) << '\n';
  out.close();

  Manifest m;
  m.tool_version = kToolVersion;
  m.stage = "sample";
  m.config["alpha"] = format_double(stage.alpha);
  m.config["n"] = std::to_string(stage.n);
  m.config["seed"] = std::to_string(stage.seed);
  m.inputs.emplace_back(stage.counts, file_digest(stage.counts));
  add_output(m, stage.output);
  m.counters["languages"] = weights.languages.size();
  m.counters["draws"] = stage.n;
  m.write(stage.output + ".manifest.json");
  return m;
}

Manifest run_split(const SplitStage& stage) {
  std::ifstream in = open_input(stage.input);
  std::vector<std::string> lines;
  std::map<std::string, std::vector<uint32_t>> by_language;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CsInstance inst = parse_instance_line(line);
    by_language[inst.language].push_back(static_cast<uint32_t>(lines.size()));
    lines.push_back(std::move(line));
  }

  std::vector<bool> in_valid(lines.size(), false);
  for (const auto& [lang, indices] : by_language) {
    Rng rng(derive_seed(stage.seed, lang));
    for (uint32_t local :
         carve_pick(static_cast<uint32_t>(indices.size()),
                    stage.valid_per_lang, rng))
      in_valid[indices[local]] = true;
  }

  std::ofstream train = open_output(stage.train_output);
  std::ofstream valid = open_output(stage.valid_output);
  uint64_t valid_count = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    (in_valid[i] ? valid : train) << lines[i] << '\n';
    if (in_valid[i]) ++valid_count;
  }
  train.close();
  valid.close();

  Manifest m;
  m.tool_version = kToolVersion;
  m.stage = "split";
  m.config["valid_per_lang"] = std::to_string(stage.valid_per_lang);
  m.config["seed"] = std::to_string(stage.seed);
  m.inputs.emplace_back(stage.input, file_digest(stage.input));
  add_output(m, stage.train_output);
  add_output(m, stage.valid_output);
  m.counters["instances"] = lines.size();
  m.counters["valid"] = valid_count;
  m.counters["train"] = lines.size() - valid_count;
  m.counters["languages"] = by_language.size();
  m.write(stage.valid_output + ".manifest.json");
  return m;
}

Manifest run_stats(const StatsStage& stage) {
  std::ifstream in = open_input(stage.input);
  StatsCollector collector;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    collector.add(parse_instance_line(line));
  }
  std::string report = collector.report().to_json();

  Manifest m;
  m.tool_version = kToolVersion;
  m.stage = "stats";
  m.inputs.emplace_back(stage.input, file_digest(stage.input));
  if (stage.output.empty()) {
    std::fputs(report.c_str(), stdout);
  } else {
    std::ofstream out = open_output(stage.output);
    out << report;
    out.close();
    add_output(m, stage.output);
    m.write(stage.output + ".manifest.json");
  }
  return m;
}

Manifest run_pipeline(const TomlFile& config, const PipelineOverrides& over) {
  auto require = [&](const std::string& key) {
    auto v = config.get_string(key);
    if (!v) throw InputError("pipeline config missing '" + key + "'");
    return *v;
  };

  std::string out_dir = over.output.value_or(
      config.get_string("output").value_or(""));
  if (out_dir.empty())
    throw InputError("pipeline needs an output directory (config 'output' "
                     "or --output)");
  std::filesystem::create_directories(out_dir);

  uint64_t seed;
  if (over.seed) {
    seed = *over.seed;
  } else {
    auto v = config.get_int("seed");
    if (!v) throw InputError("pipeline config missing 'seed'");
    seed = static_cast<uint64_t>(*v);
  }
  unsigned threads = over.threads.value_or(
      static_cast<unsigned>(config.get_int("threads").value_or(1)));
  if (threads == 0) threads = 1;

  ExtractStage extract;
  extract.input = require("extract.input");
  extract.output = out_dir + "/sentences.jsonl";
  extract.max_words =
      static_cast<uint32_t>(config.get_int("extract.max_words").value_or(128));
  extract.threads = threads;
  Manifest m_extract = run_extract(extract);

  std::string index_path;
  std::optional<Manifest> m_index;
  if (config.has("index.sitelinks")) {
    IndexStage index;
    index.sitelinks = require("index.sitelinks");
    index.labels = require("index.labels");
    index.languages = config.get_string("index.languages").value_or("");
    index.output = out_dir + "/kb.idx";
    m_index = run_index(index);
    index_path = index.output;
  } else {
    index_path = require("generate.index");
  }

  GenerateStage generate;
  generate.sentences = extract.output;
  generate.index = index_path;
  generate.output_dir = out_dir;
  generate.max_cs =
      static_cast<uint32_t>(config.get_int("generate.max_cs").value_or(5));
  generate.seed = seed;
  generate.emit_english =
      config.get_string("generate.emit_english").value_or("always");
  generate.shard_by_lang =
      config.get_bool("generate.shard_by_lang").value_or(false);
  generate.threads = threads;
  if (generate.shard_by_lang)
    throw InputError("pipeline chains into mask and needs a single cs.jsonl; "
                     "run 'generate --shard-by-lang' standalone instead");
  Manifest m_generate = run_generate(generate);

  MaskStage mask;
  mask.input = out_dir + "/cs.jsonl";
  mask.output = out_dir + "/masked.jsonl";
  mask.strategy = over.strategy.value_or(
      config.get_string("mask.strategy").value_or("mlm"));
  if (auto p = config.get_double("mask.entity_p")) mask.entity_p = *p;
  mask.seed = seed;
  mask.tokenizer = config.get_string("mask.tokenizer").value_or("toy");
  mask.vocab = config.get_string("mask.vocab").value_or("");
  mask.threads = threads;
  Manifest m_mask = run_mask(mask);

  Manifest m;
  m.tool_version = kToolVersion;
  m.stage = "pipeline";
  auto merge = [&m](const Manifest& part) {
    for (const auto& [key, value] : part.config)
      m.config[part.stage + "." + key] = value;
    for (const auto& [key, value] : part.counters)
      m.counters[part.stage + "." + key] = value;
    for (const auto& out : part.outputs) m.outputs.push_back(out);
  };
  m.inputs = m_extract.inputs;
  if (m_index) {
    for (const auto& input : m_index->inputs) m.inputs.push_back(input);
    merge(*m_index);
  } else {
    m.inputs.emplace_back(index_path, file_digest(index_path));
  }
  merge(m_extract);
  merge(m_generate);
  merge(m_mask);
  m.write(out_dir + "/manifest.json");
  return m;
}

}  // namespace entitycs
