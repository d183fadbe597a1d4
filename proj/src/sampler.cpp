#include "stpis/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stpis/errors.hpp"

namespace stpis {

std::string_view to_string(SamplingStrategy s) {
  switch (s) {
    case SamplingStrategy::Uniform: return "uniform";
    case SamplingStrategy::SqrtL: return "sqrtL";
    case SamplingStrategy::L: return "L";
    case SamplingStrategy::Custom: return "custom";
  }
  return "?";
}

SamplingStrategy parse_sampling_strategy(std::string_view name) {
  if (name == "uniform") return SamplingStrategy::Uniform;
  if (name == "sqrtL") return SamplingStrategy::SqrtL;
  if (name == "L") return SamplingStrategy::L;
  if (name == "custom") return SamplingStrategy::Custom;
  throw ConfigError("unknown sampling strategy '" + std::string(name) +
                    "' (expected uniform, sqrtL, L or custom)");
}

CoordinateSampler::CoordinateSampler(DenseVector p, SamplingStrategy strategy)
    : p_(std::move(p)), cdf_(p_.size()), strategy_(strategy) {
  std::partial_sum(p_.begin(), p_.end(), cdf_.begin());
}

CoordinateSampler CoordinateSampler::from_weights(std::vector<double> w,
                                                  SamplingStrategy strategy) {
  if (w.empty()) throw ConfigError("sampler needs at least one coordinate");
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  return CoordinateSampler(DenseVector(std::move(w)), strategy);
}

CoordinateSampler CoordinateSampler::uniform(std::size_t n) {
  if (n == 0) throw ConfigError("uniform sampler needs n >= 1");
  return CoordinateSampler(DenseVector(n, 1.0 / static_cast<double>(n)),
                           SamplingStrategy::Uniform);
}

CoordinateSampler CoordinateSampler::from_sqrt_smoothness(const CoordinateSmoothness& l) {
  std::vector<double> w(l.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::sqrt(l[i]);
  return from_weights(std::move(w), SamplingStrategy::SqrtL);
}

CoordinateSampler CoordinateSampler::from_smoothness(const CoordinateSmoothness& l) {
  return from_weights(l.values().values(), SamplingStrategy::L);
}

CoordinateSampler CoordinateSampler::custom(std::span<const double> p) {
  if (p.empty()) throw ConfigError("custom sampler needs at least one coordinate");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || !(p[i] > 0.0)) {
      throw ConfigError("custom probabilities must be finite and strictly positive (index " +
                        std::to_string(i) + ")");
    }
    total += p[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("custom probabilities must sum to 1 within 1e-9");
  }
  return from_weights(std::vector<double>(p.begin(), p.end()), SamplingStrategy::Custom);
}

std::size_t CoordinateSampler::draw(SeededRng& rng) const noexcept {
  // Scale by the table's own total so rounding in the partial sums cannot
  // leave the last coordinate unreachable.
  const double u = rng.uniform01() * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = static_cast<std::size_t>(it - cdf_.begin());
  return std::min(idx, cdf_.size() - 1);
}

CoordinateSampler make_sampler(SamplingStrategy strategy, const CoordinateSmoothness& l) {
  switch (strategy) {
    case SamplingStrategy::Uniform: return CoordinateSampler::uniform(l.size());
    case SamplingStrategy::SqrtL: return CoordinateSampler::from_sqrt_smoothness(l);
    case SamplingStrategy::L: return CoordinateSampler::from_smoothness(l);
    case SamplingStrategy::Custom: break;
  }
  throw ConfigError("custom sampling needs explicit probabilities");
}

}  // namespace stpis
