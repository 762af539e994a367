#include "arw/attributes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "arw/error.hpp"

namespace arw {

namespace {

std::vector<std::string> default_names(std::size_t cols) {
  std::vector<std::string> names(cols);
  for (std::size_t c = 0; c < cols; ++c) names[c] = "a" + std::to_string(c + 1);
  return names;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && ws(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !ws(line[i])) ++i;
    if (start < i) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

AttributeMatrix::AttributeMatrix(std::size_t rows, std::size_t cols,
                                 std::vector<std::string> names)
    : AttributeMatrix(rows, cols, std::vector<double>(rows * cols, 0.0), std::move(names)) {}

AttributeMatrix::AttributeMatrix(std::size_t rows, std::size_t cols,
                                 std::vector<double> values,
                                 std::vector<std::string> names)
    : rows_(rows), cols_(cols), values_(std::move(values)), names_(std::move(names)) {
  if (values_.size() != rows * cols)
    throw InvalidArgument("attribute value count does not match shape");
  if (names_.empty()) names_ = default_names(cols);
  if (names_.size() != cols)
    throw InvalidArgument("attribute name count does not match column count");
}

std::vector<double> AttributeMatrix::column(std::size_t c) const {
  if (c >= cols_) throw std::out_of_range("attribute column out of range");
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = values_[r * cols_ + c];
  return out;
}

void AttributeMatrix::set_column(std::size_t c, std::span<const double> values) {
  if (c >= cols_) throw std::out_of_range("attribute column out of range");
  if (values.size() != rows_) throw InvalidArgument("column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) values_[r * cols_ + c] = values[r];
}

std::size_t AttributeMatrix::column_index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw InvalidArgument("unknown attribute column '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

AttributeMatrix AttributeMatrix::select(std::span<const std::size_t> columns) const {
  std::vector<std::string> names;
  for (std::size_t c : columns) {
    if (c >= cols_) throw std::out_of_range("attribute column out of range");
    names.push_back(names_[c]);
  }
  AttributeMatrix out(rows_, columns.size(), std::move(names));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < columns.size(); ++j) out(r, j) = (*this)(r, columns[j]);
  return out;
}

AttributeMatrix AttributeMatrix::select(std::span<const std::string> names) const {
  std::vector<std::size_t> idx;
  for (const auto& n : names) idx.push_back(column_index(n));
  return select(idx);
}

void AttributeMatrix::require_finite() const {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw InvalidArgument("non-finite attribute value at row " +
                            std::to_string(i / cols_) + ", column '" +
                            names_[i % cols_] + "'");
}

AttributeMatrix load_attributes(const std::filesystem::path& path, const Graph& graph) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open attribute file '" + path.string() + "'");

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty() || fields[0].front() == '#') continue;
    for (auto f : fields) header.emplace_back(f);
    break;
  }
  if (header.empty()) throw ParseError("missing header line", line_no);

  const std::size_t n = graph.num_nodes();
  std::vector<bool> seen(n, false);
  std::size_t k = 0;
  bool have_k = false;
  std::vector<std::pair<NodeId, std::vector<double>>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty() || fields[0].front() == '#') continue;
    if (!have_k) {
      k = fields.size() - 1;
      have_k = true;
      if (k == 0) throw ParseError("attribute row has no values", line_no);
    }
    if (fields.size() != k + 1)
      throw ParseError("expected " + std::to_string(k + 1) + " fields, got " +
                           std::to_string(fields.size()), line_no);
    ExternalId id = 0;
    auto [p, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), id);
    if (ec != std::errc{} || p != fields[0].data() + fields[0].size())
      throw ParseError("invalid node id '" + std::string(fields[0]) + "'", line_no);
    auto node = graph.internal_id(id);
    if (!node) throw ParseError("unknown node id " + std::to_string(id), line_no);
    if (seen[*node]) throw ParseError("duplicate row for node " + std::to_string(id), line_no);
    seen[*node] = true;
    std::vector<double> row(k);
    for (std::size_t j = 0; j < k; ++j) {
      std::string token(fields[j + 1]);
      double v = 0;
      auto [q, ec2] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec2 != std::errc{} || q != token.data() + token.size())
        throw ParseError("non-numeric value '" + token + "'", line_no);
      if (!std::isfinite(v)) throw ParseError("non-finite value '" + token + "'", line_no);
      row[j] = v;
    }
    rows.emplace_back(*node, std::move(row));
  }
  for (NodeId i = 0; i < n; ++i)
    if (!seen[i])
      throw Error("missing attributes for node " + std::to_string(graph.external_id(i)));

  if (header.size() == k + 1) header.erase(header.begin());
  if (header.size() != k)
    throw ParseError("header has " + std::to_string(header.size()) +
                         " names for " + std::to_string(k) + " columns", 1);

  AttributeMatrix out(n, k, std::move(header));
  for (auto& [node, row] : rows)
    for (std::size_t j = 0; j < k; ++j) out(node, j) = row[j];
  return out;
}

std::string format_number(double value) {
  if (std::isfinite(value) && value == std::floor(value) && std::fabs(value) < 9.0e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, p);
}

void write_attributes(const std::filesystem::path& path, const Graph& graph,
                      const AttributeMatrix& attrs) {
  if (attrs.rows() != graph.num_nodes())
    throw InvalidArgument("attribute rows do not match graph size");
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "node";
  for (const auto& name : attrs.names()) out << '\t' << name;
  out << '\n';
  for (NodeId i = 0; i < attrs.rows(); ++i) {
    out << graph.external_id(i);
    for (double v : attrs.row(i)) out << '\t' << format_number(v);
    out << '\n';
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace arw
