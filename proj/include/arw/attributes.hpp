#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "arw/graph.hpp"

namespace arw {

/// Dense n x k matrix of per-node attribute values, row-major, with column
/// labels. Row i belongs to internal node i of the graph it was built for.
class AttributeMatrix {
 public:
  AttributeMatrix() = default;
  AttributeMatrix(std::size_t rows, std::size_t cols,
                  std::vector<std::string> names = {});
  AttributeMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                  std::vector<std::string> names = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> values);

  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Index of the column labelled `name`; throws if absent.
  std::size_t column_index(const std::string& name) const;

  /// New matrix holding the given columns in the given order.
  AttributeMatrix select(std::span<const std::size_t> columns) const;
  AttributeMatrix select(std::span<const std::string> names) const;

  /// Throws InvalidArgument if any entry is NaN or infinite.
  void require_finite() const;

  bool operator==(const AttributeMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> names_;
};

/// Reads an attribute TSV: a header of column names (optionally preceded by
/// a label for the id column) and one row per node holding its external id
/// followed by k numbers. Rows are reordered into the graph's internal order.
AttributeMatrix load_attributes(const std::filesystem::path& path,
                                const Graph& graph);

/// Writes the TSV read by load_attributes, with a "node" id column.
void write_attributes(const std::filesystem::path& path, const Graph& graph,
                      const AttributeMatrix& attrs);

/// Shortest text form of a number: integers without a decimal point.
std::string format_number(double value);

}  // namespace arw
