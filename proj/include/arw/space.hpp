#pragma once

#include <string>
#include <vector>

#include "arw/attributes.hpp"
#include "arw/binning.hpp"
#include "arw/skipgram.hpp"

namespace arw {

/// Size description of one embedding; the matrix values are not needed.
struct SpaceInput {
  std::string name;
  std::size_t rows = 0;
  std::size_t dims = 0;
  std::vector<std::string> signatures;
  bool baseline = false;

  static SpaceInput from(std::string name, const EmbeddingMatrix& embedding,
                         bool baseline = false);
};

struct SpaceEntry {
  std::string name;
  std::size_t bytes = 0;
  std::size_t rows = 0;
  std::size_t dims = 0;
  bool baseline = false;
  double log_gain = 0.0;  // log10(sigma_min / sigma)
};

/// sigma_min is the smallest baseline size, or the smallest overall when no
/// entry is marked as a baseline. Needs at least two entries.
std::vector<SpaceEntry> space_report(const std::vector<SpaceInput>& inputs);

struct TypeCountRow {
  std::string subset;
  std::vector<std::size_t> columns;  // 0-based graphlet columns
  std::size_t types = 0;
};

/// Graphlet column subsets of increasing refinement:
/// [x2 x3], [x2 x3 x4 x6 x9], [x2..x9], [x1..x9].
const std::vector<std::vector<std::size_t>>& refinement_subsets();

/// Distinct concatenated types for each subset after binning every column.
std::vector<TypeCountRow> type_count_table(const AttributeMatrix& graphlets,
                                           const BinningConfig& binning);

}  // namespace arw
