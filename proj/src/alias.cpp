#include "arw/alias.hpp"

#include <cmath>

#include "arw/error.hpp"

namespace arw {

void build_alias(std::span<const double> weights, std::span<double> prob,
                 std::span<std::uint32_t> alias) {
  const std::size_t k = weights.size();
  if (k == 0) throw InvalidArgument("alias table needs at least one weight");
  if (prob.size() != k || alias.size() != k)
    throw InvalidArgument("alias output spans have the wrong size");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw InvalidArgument("alias weights must be positive and finite");
    total += w;
  }

  std::vector<std::uint32_t> small, large;
  small.reserve(k);
  large.reserve(k);
  const double scale = static_cast<double>(k) / total;
  for (std::size_t i = 0; i < k; ++i) {
    prob[i] = weights[i] * scale;
    alias[i] = static_cast<std::uint32_t>(i);
    (prob[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t lo = small.back();
    small.pop_back();
    const std::uint32_t hi = large.back();
    large.pop_back();
    alias[lo] = hi;
    prob[hi] = (prob[hi] + prob[lo]) - 1.0;
    (prob[hi] < 1.0 ? small : large).push_back(hi);
  }
  // Leftovers are 1 up to rounding.
  for (std::uint32_t i : large) prob[i] = 1.0;
  for (std::uint32_t i : small) prob[i] = 1.0;
}

std::vector<double> alias_probabilities(std::span<const double> prob,
                                        std::span<const std::uint32_t> alias) {
  const std::size_t k = prob.size();
  std::vector<double> p(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    p[i] += prob[i];
    p[alias[i]] += 1.0 - prob[i];
  }
  for (double& x : p) x /= static_cast<double>(k);
  return p;
}

AliasTable::AliasTable(std::span<const double> weights)
    : prob_(weights.size()), alias_(weights.size()) {
  build_alias(weights, prob_, alias_);
}

}  // namespace arw
