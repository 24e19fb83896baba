#include "entitycs/lang_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "entitycs/errors.hpp"

namespace entitycs {

LangWeights compute_weights(const std::map<std::string, uint64_t>& counts,
                            double alpha) {
  if (counts.empty()) throw InputError("language counts are empty");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw InputError("alpha must be in (0, 1]");
  LangWeights w;
  w.alpha = alpha;
  double total = 0.0;
  for (const auto& [lang, count] : counts) {
    if (count == 0)
      throw InputError("language '" + lang + "' has zero count");
    w.languages.push_back(lang);
    double value = std::pow(static_cast<double>(count), alpha);
    w.probs.push_back(value);
    total += value;
  }
  double cum = 0.0;
  for (double& p : w.probs) {
    p /= total;
    cum += p;
    w.cumulative.push_back(cum);
  }
  w.cumulative.back() = 1.0;  // guard the tail against rounding
  return w;
}

const std::string& sample_language(const LangWeights& weights, Rng& rng) {
  double u = rng.next_double();
  auto it = std::upper_bound(weights.cumulative.begin(),
                             weights.cumulative.end(), u);
  size_t idx = static_cast<size_t>(it - weights.cumulative.begin());
  if (idx >= weights.languages.size()) idx = weights.languages.size() - 1;
  return weights.languages[idx];
}

std::vector<uint32_t> carve_pick(uint32_t population, uint32_t n, Rng& rng) {
  uint32_t take = std::min(population, n);
  std::vector<uint32_t> pool(population);
  std::iota(pool.begin(), pool.end(), 0u);
  // Fisher-Yates prefix, same draw procedure as the generator's language
  // sampling.
  for (uint32_t i = 0; i < take; ++i) {
    size_t j = i + static_cast<size_t>(rng.bounded(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(take);
  return pool;
}

}  // namespace entitycs
