#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "arw/random.hpp"

namespace arw {

/// Fills `prob` and `alias` (both of size K) with Vose's alias structure for
/// the unnormalized, strictly positive `weights`.
void build_alias(std::span<const double> weights, std::span<double> prob,
                 std::span<std::uint32_t> alias);

/// O(1) draw from an alias structure.
inline std::size_t alias_sample(std::span<const double> prob,
                                std::span<const std::uint32_t> alias, SplitMix64& rng) {
  const auto column = static_cast<std::size_t>(rng.below(prob.size()));
  return rng.uniform() < prob[column] ? column : alias[column];
}

/// Exact sampling distribution implied by an alias structure:
/// P(i) = (prob[i] + sum over j with alias[j] = i of (1 - prob[j])) / K.
std::vector<double> alias_probabilities(std::span<const double> prob,
                                        std::span<const std::uint32_t> alias);

class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return prob_.size(); }
  bool empty() const noexcept { return prob_.empty(); }
  std::size_t sample(SplitMix64& rng) const { return alias_sample(prob_, alias_, rng); }
  std::vector<double> probabilities() const { return alias_probabilities(prob_, alias_); }
  std::size_t memory_bytes() const noexcept {
    return prob_.size() * (sizeof(double) + sizeof(std::uint32_t));
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace arw
