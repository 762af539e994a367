#include "arw/binning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "arw/error.hpp"

namespace arw {

void BinningConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("binning alpha must lie in (0, 1)");
}

BinningScheme parse_binning_scheme(const std::string& name) {
  if (name == "log" || name == "logarithmic") return BinningScheme::logarithmic;
  if (name == "equal" || name == "equal-width") return BinningScheme::equal_width;
  if (name == "none" || name == "identity") return BinningScheme::identity;
  throw InvalidArgument("unknown binning scheme '" + name + "'");
}

std::string to_string(BinningScheme scheme) {
  switch (scheme) {
    case BinningScheme::logarithmic: return "log";
    case BinningScheme::equal_width: return "equal-width";
    case BinningScheme::identity: return "identity";
  }
  return "?";
}

std::vector<std::int64_t> log_bin(std::span<const double> column, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("binning alpha must lie in (0, 1)");
  if (column.empty()) throw InvalidArgument("cannot bin an empty column");

  const std::size_t n = column.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });

  std::vector<std::int64_t> bins(n);
  std::size_t pos = 0;
  std::int64_t bin = 0;
  while (pos < n) {
    const std::size_t remaining = n - pos;
    auto take = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(remaining)));
    std::size_t end = pos + std::max<std::size_t>(take, 1);
    while (end < n && column[order[end]] == column[order[end - 1]]) ++end;
    for (std::size_t i = pos; i < end; ++i) bins[order[i]] = bin;
    pos = end;
    ++bin;
  }
  return bins;
}

std::vector<std::int64_t> equal_width_bin(std::span<const double> column, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("binning alpha must lie in (0, 1)");
  if (column.empty()) throw InvalidArgument("cannot bin an empty column");
  auto [lo, hi] = std::minmax_element(column.begin(), column.end());
  const double range = *hi - *lo;
  const auto last = static_cast<std::int64_t>(std::ceil(1.0 / alpha)) - 1;
  std::vector<std::int64_t> bins(column.size(), 0);
  if (range <= 0.0) return bins;
  const double width = alpha * range;
  for (std::size_t i = 0; i < column.size(); ++i) {
    auto b = static_cast<std::int64_t>(std::floor((column[i] - *lo) / width));
    bins[i] = std::clamp<std::int64_t>(b, 0, last);
  }
  return bins;
}

AttributeMatrix transform(const AttributeMatrix& attrs, const BinningConfig& config) {
  config.validate();
  attrs.require_finite();
  if (config.scheme == BinningScheme::identity || attrs.rows() == 0) return attrs;
  AttributeMatrix out = attrs;
  for (std::size_t c = 0; c < attrs.cols(); ++c) {
    const auto col = attrs.column(c);
    const auto bins = config.scheme == BinningScheme::logarithmic
                          ? log_bin(col, config.alpha)
                          : equal_width_bin(col, config.alpha);
    std::vector<double> as_double(bins.begin(), bins.end());
    out.set_column(c, as_double);
  }
  return out;
}

}  // namespace arw
