#include "oodeval/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "oodeval/csv.hpp"
#include "oodeval/errors.hpp"

namespace oodeval {

namespace {

void validate_axis(const BinAxis& axis) {
  if (axis.edges.size() < 2) {
    throw invalid_input_error("BinAxis '" + axis.variable + "': need >= 1 bin");
  }
  for (std::size_t i = 1; i < axis.edges.size(); ++i) {
    if (!(axis.edges[i] > axis.edges[i - 1])) {
      throw invalid_input_error("BinAxis '" + axis.variable +
                                "': edges must be strictly increasing");
    }
  }
}

std::size_t bin_of(const BinAxis& axis, double v) {
  // edges[i] <= v < edges[i+1]; out-of-range values land in the end bins.
  const auto it = std::upper_bound(axis.edges.begin(), axis.edges.end(), v);
  const std::ptrdiff_t raw = (it - axis.edges.begin()) - 1;
  const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(axis.edges.size()) - 2;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(raw, 0, last));
}

void require_aligned(const ScoreSeries& x, const ScoreSeries& y) {
  if (x.sample_ids != y.sample_ids) {
    throw invalid_input_error(
        "histogram: series are not aligned (sample ids differ)");
  }
  if (x.values.size() != x.sample_ids.size() ||
      y.values.size() != y.sample_ids.size()) {
    throw invalid_input_error("histogram: series values/ids length mismatch");
  }
}

HistogramTable count_cells(HistogramTable::Kind kind, const ScoreSeries& x,
                           const ScoreSeries& y, const BinAxis& x_axis,
                           const BinAxis& y_axis) {
  require_aligned(x, y);
  validate_axis(x_axis);
  validate_axis(y_axis);
  HistogramTable table{kind, x_axis, y_axis, {}, {}, {}};
  table.counts.assign(table.x_bins(),
                      std::vector<std::uint64_t>(table.y_bins(), 0));
  for (std::size_t n = 0; n < x.values.size(); ++n) {
    ++table.counts[bin_of(x_axis, x.values[n])][bin_of(y_axis, y.values[n])];
  }
  return table;
}

}  // namespace

BinAxis uniform_axis(std::string variable, double lo, double hi,
                     std::size_t bins) {
  if (bins < 1 || !(hi > lo)) {
    throw invalid_input_error("uniform_axis: need bins >= 1 and hi > lo");
  }
  BinAxis axis{std::move(variable), std::vector<double>(bins + 1)};
  for (std::size_t i = 0; i <= bins; ++i) {
    axis.edges[i] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  return axis;
}

std::uint64_t HistogramTable::total_count() const {
  std::uint64_t total = 0;
  for (const auto& row : counts) {
    for (std::uint64_t c : row) total += c;
  }
  return total;
}

HistogramTable conditional_histogram(const ScoreSeries& x, const ScoreSeries& y,
                                     const BinAxis& x_axis,
                                     const BinAxis& y_axis) {
  HistogramTable table =
      count_cells(HistogramTable::Kind::kConditional, x, y, x_axis, y_axis);
  table.values.assign(table.x_bins(), std::vector<double>(table.y_bins(), 0.0));
  table.x_bin_empty.assign(table.x_bins(), false);
  for (std::size_t i = 0; i < table.x_bins(); ++i) {
    std::uint64_t in_bin = 0;
    for (std::uint64_t c : table.counts[i]) in_bin += c;
    if (in_bin == 0) {
      table.x_bin_empty[i] = true;
      continue;
    }
    for (std::size_t j = 0; j < table.y_bins(); ++j) {
      table.values[i][j] = static_cast<double>(table.counts[i][j]) /
                           static_cast<double>(in_bin);
    }
  }
  return table;
}

HistogramTable joint_histogram2d(const ScoreSeries& x, const ScoreSeries& y,
                                 const BinAxis& x_axis, const BinAxis& y_axis) {
  return count_cells(HistogramTable::Kind::kJoint, x, y, x_axis, y_axis);
}

void write_histogram_csv(const HistogramTable& table, std::string_view dataset,
                         std::ostream& out, bool with_header) {
  if (with_header) {
    out << "table,dataset,x_var,y_var,x_bin,x_lo,x_hi,y_bin,y_lo,y_hi,"
           "count,value,level,x_bin_empty\n";
  }
  const bool conditional = table.kind == HistogramTable::Kind::kConditional;
  const char* kind = conditional ? "conditional" : "joint";
  for (std::size_t i = 0; i < table.x_bins(); ++i) {
    for (std::size_t j = 0; j < table.y_bins(); ++j) {
      out << kind << ',' << dataset << ',' << table.x_axis.variable << ','
          << table.y_axis.variable << ',' << i << ','
          << format_double(table.x_axis.edges[i]) << ','
          << format_double(table.x_axis.edges[i + 1]) << ',' << j << ','
          << format_double(table.y_axis.edges[j]) << ','
          << format_double(table.y_axis.edges[j + 1]) << ','
          << table.counts[i][j] << ',';
      if (conditional) {
        out << format_double(table.values[i][j]) << ",,"
            << (table.x_bin_empty[i] ? 1 : 0);
      } else {
        out << ',' << format_double(table.x_center(i) + table.y_center(j))
            << ',';
      }
      out << '\n';
    }
  }
}

}  // namespace oodeval
