#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "entitycs/rng.hpp"

namespace entitycs {

// Exponentially smoothed language sampling distribution:
// probs[l] = counts[l]^alpha / sum_k counts[k]^alpha. Smaller alpha flattens
// the distribution towards low-resource languages.
struct LangWeights {
  double alpha = 0.7;
  std::vector<std::string> languages;  // sorted
  std::vector<double> probs;           // aligned with languages
  std::vector<double> cumulative;
};

LangWeights compute_weights(const std::map<std::string, uint64_t>& counts,
                            double alpha);

// Categorical draw: one next_double(), first cumulative bucket above it.
const std::string& sample_language(const LangWeights& weights, Rng& rng);

// Per language: a uniform without-replacement draw of min(n, size) indices
// into `valid`, the rest into `train`, both preserving input order. The
// language's RNG is seeded with derive_seed(seed, language).
template <typename T>
struct Carved {
  std::vector<T> train;
  std::vector<T> valid;
};

std::vector<uint32_t> carve_pick(uint32_t population, uint32_t n, Rng& rng);

template <typename T>
Carved<T> carve_validation(const std::vector<T>& instances, uint32_t n,
                           Rng& rng) {
  Carved<T> out;
  std::vector<uint32_t> picked =
      carve_pick(static_cast<uint32_t>(instances.size()), n, rng);
  std::vector<bool> in_valid(instances.size(), false);
  for (uint32_t i : picked) in_valid[i] = true;
  for (size_t i = 0; i < instances.size(); ++i)
    (in_valid[i] ? out.valid : out.train).push_back(instances[i]);
  return out;
}

}  // namespace entitycs
