#include "arw/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arw/error.hpp"
#include "arw/graphlets.hpp"
#include "arw/type_map.hpp"

namespace arw {

SpaceInput SpaceInput::from(std::string name, const EmbeddingMatrix& embedding, bool baseline) {
  return {std::move(name), embedding.rows(), embedding.dims(), embedding.signatures(), baseline};
}

std::vector<SpaceEntry> space_report(const std::vector<SpaceInput>& inputs) {
  if (inputs.size() < 2) throw InvalidArgument("space report needs at least two embeddings");
  const bool any_baseline =
      std::any_of(inputs.begin(), inputs.end(), [](const auto& e) { return e.baseline; });
  std::vector<SpaceEntry> out;
  std::size_t sigma_min = std::numeric_limits<std::size_t>::max();
  for (const auto& in : inputs) {
    SpaceEntry e{in.name, embedding_size_bytes(in.rows, in.dims, in.signatures), in.rows,
                 in.dims, in.baseline, 0.0};
    if (!any_baseline || in.baseline) sigma_min = std::min(sigma_min, e.bytes);
    out.push_back(std::move(e));
  }
  for (auto& e : out)
    e.log_gain = std::log10(static_cast<double>(sigma_min) / static_cast<double>(e.bytes));
  return out;
}

const std::vector<std::vector<std::size_t>>& refinement_subsets() {
  static const std::vector<std::vector<std::size_t>> subsets{
      {1, 2}, {1, 2, 3, 5, 8}, {1, 2, 3, 4, 5, 6, 7, 8}, {0, 1, 2, 3, 4, 5, 6, 7, 8}};
  return subsets;
}

std::vector<TypeCountRow> type_count_table(const AttributeMatrix& graphlets,
                                           const BinningConfig& binning) {
  if (graphlets.cols() != kGraphletNames.size())
    throw InvalidArgument("type-count table needs the 9 graphlet columns");
  const AttributeMatrix binned = transform(graphlets, binning);
  std::vector<TypeCountRow> rows;
  for (const auto& cols : refinement_subsets()) {
    TypeCountRow row;
    row.columns = cols;
    row.subset = "[";
    for (std::size_t i = 0; i < cols.size(); ++i)
      row.subset += (i ? " " : "") + std::string(kGraphletNames[cols[i]]);
    row.subset += "]";
    row.types = map_concat(binned.select(cols)).num_types();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace arw
