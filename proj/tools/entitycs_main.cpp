#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "entitycs/errors.hpp"
#include "entitycs/log.hpp"
#include "entitycs/pipeline.hpp"
#include "entitycs/toml.hpp"

namespace {

using namespace entitycs;

int dispatch(CLI::App& app, int argc, char** argv) {
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const InternalError& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EntityCS corpus construction and masking toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // lets `entitycs extract --threads 8` reach the app flag

  unsigned threads = 1;
  app.add_option("--threads", threads, "Stage-internal worker threads")
      ->capture_default_str();

  // extract
  auto* extract = app.add_subcommand(
      "extract", "Parse a wikilink dump into filtered sentences");
  auto extract_stage = std::make_shared<ExtractStage>();
  extract->add_option("--input", extract_stage->input, "Documents JSONL")
      ->required();
  extract->add_option("--output", extract_stage->output, "Sentences JSONL")
      ->required();
  extract->add_option("--max-words", extract_stage->max_words,
                      "Sentence length cap in words")
      ->capture_default_str();
  extract->callback([&threads, extract_stage] {
    extract_stage->threads = threads;
    run_extract(*extract_stage);
  });

  // index
  auto* index = app.add_subcommand(
      "index", "Build the title -> QID -> labels index from TSV dumps");
  auto index_stage = std::make_shared<IndexStage>();
  index->add_option("--sitelinks", index_stage->sitelinks,
                    "TSV: title\\tqid")
      ->required();
  index->add_option("--labels", index_stage->labels, "TSV: qid\\tlang\\tlabel")
      ->required();
  index->add_option("--languages", index_stage->languages,
                    "Language list file or comma list (default: built-in 92)");
  index->add_option("--output", index_stage->output, "Index file")->required();
  index->add_option("--debug-json", index_stage->debug_json,
                    "Also write a readable JSON dump");
  index->callback([index_stage] { run_index(*index_stage); });

  // generate
  auto* generate = app.add_subcommand(
      "generate", "Emit code-switched instances from sentences");
  auto generate_stage = std::make_shared<GenerateStage>();
  generate->add_option("--sentences", generate_stage->sentences,
                       "Sentences JSONL")
      ->required();
  generate->add_option("--index", generate_stage->index, "Index file")
      ->required();
  generate->add_option("--output", generate_stage->output_dir,
                       "Output directory")
      ->required();
  generate->add_option("--max-cs", generate_stage->max_cs,
                       "Max code-switched instances per sentence")
      ->capture_default_str();
  generate->add_option("--seed", generate_stage->seed, "RNG seed")->required();
  generate->add_option("--emit-english", generate_stage->emit_english,
                       "always | fallback-only")
      ->capture_default_str();
  generate->add_flag("--shard-by-lang", generate_stage->shard_by_lang,
                     "One output file per language");
  generate->callback([&threads, generate_stage] {
    generate_stage->threads = threads;
    run_generate(*generate_stage);
  });

  // mask
  auto* mask = app.add_subcommand(
      "mask", "Turn instances into masked training examples");
  auto mask_stage = std::make_shared<MaskStage>();
  double entity_p = -1.0;
  mask->add_option("--input", mask_stage->input, "Instances JSONL")
      ->required();
  mask->add_option("--output", mask_stage->output, "Masked examples JSONL")
      ->required();
  mask->add_option("--strategy", mask_stage->strategy,
                   "mlm|wep|pep_mrs|pep_ms|pep_m, optionally +mlm")
      ->capture_default_str();
  mask->add_option("--entity-p", entity_p,
                   "Entity candidate probability override, in [0,1]");
  mask->add_option("--seed", mask_stage->seed, "RNG seed")->required();
  mask->add_option("--tokenizer", mask_stage->tokenizer,
                   "toy | external-vocab")
      ->capture_default_str();
  mask->add_option("--vocab", mask_stage->vocab,
                   "Vocab file for external-vocab");
  mask->add_option("--preview", mask_stage->preview,
                   "Also write a text rendering with [MASK] markers");
  mask->callback([&threads, mask_stage, &entity_p] {
    mask_stage->threads = threads;
    if (entity_p >= 0.0) mask_stage->entity_p = entity_p;
    run_mask(*mask_stage);
  });

  // sample
  auto* sample = app.add_subcommand(
      "sample", "Draw a language schedule from smoothed counts");
  auto sample_stage = std::make_shared<SampleStage>();
  sample->add_option("--counts", sample_stage->counts,
                     "JSON object: language -> count")
      ->required();
  sample->add_option("--alpha", sample_stage->alpha, "Smoothing exponent")
      ->capture_default_str();
  sample->add_option("--n", sample_stage->n, "Number of draws")->required();
  sample->add_option("--seed", sample_stage->seed, "RNG seed")->required();
  sample->add_option("--output", sample_stage->output, "Schedule file")
      ->required();
  sample->callback([sample_stage] { run_sample(*sample_stage); });

  // split
  auto* split = app.add_subcommand(
      "split", "Carve a per-language validation set");
  auto split_stage = std::make_shared<SplitStage>();
  split->add_option("--input", split_stage->input, "Instances JSONL")
      ->required();
  split->add_option("--valid-per-lang", split_stage->valid_per_lang,
                    "Validation instances per language")
      ->capture_default_str();
  split->add_option("--seed", split_stage->seed, "RNG seed")->required();
  split->add_option("--train-output", split_stage->train_output,
                    "Training split JSONL")
      ->required();
  split->add_option("--valid-output", split_stage->valid_output,
                    "Validation split JSONL")
      ->required();
  split->callback([split_stage] { run_split(*split_stage); });

  // stats
  auto* stats = app.add_subcommand("stats", "Corpus statistics report");
  auto stats_stage = std::make_shared<StatsStage>();
  stats->add_option("--input", stats_stage->input, "Instances JSONL")
      ->required();
  stats->add_option("--output", stats_stage->output,
                    "Report JSON (default: stdout)");
  stats->callback([stats_stage] { run_stats(*stats_stage); });

  // pipeline
  auto* pipeline = app.add_subcommand(
      "pipeline", "extract -> [index] -> generate -> mask, chained");
  auto config_path = std::make_shared<std::string>();
  auto overrides = std::make_shared<PipelineOverrides>();
  std::string over_output;
  std::string over_strategy;
  uint64_t over_seed = 0;
  pipeline->add_option("--config", *config_path, "TOML config")->required();
  auto* opt_output =
      pipeline->add_option("--output", over_output, "Output directory");
  auto* opt_seed = pipeline->add_option("--seed", over_seed, "RNG seed");
  auto* opt_strategy =
      pipeline->add_option("--strategy", over_strategy, "Masking strategy");
  pipeline->callback([&, config_path, overrides] {
    if (opt_output->count() > 0) overrides->output = over_output;
    if (opt_seed->count() > 0) overrides->seed = over_seed;
    if (opt_strategy->count() > 0) overrides->strategy = over_strategy;
    if (app.count("--threads") > 0) overrides->threads = threads;
    run_pipeline(TomlFile::parse_file(*config_path), *overrides);
  });

  return dispatch(app, argc, argv);
}
