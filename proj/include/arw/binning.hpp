#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "arw/attributes.hpp"

namespace arw {

enum class BinningScheme { logarithmic, equal_width, identity };

struct BinningConfig {
  double alpha = 0.5;
  BinningScheme scheme = BinningScheme::logarithmic;

  void validate() const;
};

BinningScheme parse_binning_scheme(const std::string& name);
std::string to_string(BinningScheme scheme);

/// Logarithmic binning of one column.
///
/// Values are taken in ascending order; each round hands the
/// max(1, floor(alpha * remaining)) smallest unassigned values the next bin
/// id. A round never splits a run of equal values, so equal inputs always
/// share a bin. The result is aligned with the input.
std::vector<std::int64_t> log_bin(std::span<const double> column, double alpha);

/// Equal-width binning with width alpha * (max - min), i.e. ceil(1/alpha)
/// bins. A constant column maps to bin 0.
std::vector<std::int64_t> equal_width_bin(std::span<const double> column, double alpha);

/// Replaces every column by its binned version (identity keeps it as is).
AttributeMatrix transform(const AttributeMatrix& attrs, const BinningConfig& config);

}  // namespace arw
