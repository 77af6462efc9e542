#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "oodeval/scores.hpp"

namespace oodeval {

/// Histogram axis: a variable name and strictly increasing bin edges.
/// Values outside the edge range fall into the first/last bin.
struct BinAxis {
  std::string variable;
  std::vector<double> edges;
};

/// Equal-width axis with `bins` bins over [lo, hi].
BinAxis uniform_axis(std::string variable, double lo, double hi,
                     std::size_t bins);

/// 2-D binned table over two aligned score series.
struct HistogramTable {
  enum class Kind { kConditional, kJoint };

  Kind kind;
  BinAxis x_axis;
  BinAxis y_axis;
  // counts[i][j]: samples with x in bin i and y in bin j.
  std::vector<std::vector<std::uint64_t>> counts;
  // Conditional tables: values[i][j] = counts[i][j] / (samples in x bin i),
  // all zero for empty x bins. Unused for joint tables.
  std::vector<std::vector<double>> values;
  std::vector<bool> x_bin_empty;  // conditional tables only

  std::size_t x_bins() const { return x_axis.edges.size() - 1; }
  std::size_t y_bins() const { return y_axis.edges.size() - 1; }
  double x_center(std::size_t i) const {
    return 0.5 * (x_axis.edges[i] + x_axis.edges[i + 1]);
  }
  double y_center(std::size_t j) const {
    return 0.5 * (y_axis.edges[j] + y_axis.edges[j + 1]);
  }
  std::uint64_t total_count() const;
};

/// For each x bin, the normalized distribution of y among the samples in
/// that bin. Series must be aligned (same sample ids, same order).
HistogramTable conditional_histogram(const ScoreSeries& x, const ScoreSeries& y,
                                     const BinAxis& x_axis,
                                     const BinAxis& y_axis);

/// Plain 2-D counts. Cells additionally carry the x_center + y_center level
/// when written out (for average-entropy x mutual-information tables that
/// sum is the ensemble entropy at the cell).
HistogramTable joint_histogram2d(const ScoreSeries& x, const ScoreSeries& y,
                                 const BinAxis& x_axis, const BinAxis& y_axis);

/// Appends one CSV row per cell:
/// table,dataset,x_var,y_var,x_bin,x_lo,x_hi,y_bin,y_lo,y_hi,count,value,level,x_bin_empty
/// Conditional rows fill value and x_bin_empty; joint rows fill level.
void write_histogram_csv(const HistogramTable& table, std::string_view dataset,
                         std::ostream& out, bool with_header);

}  // namespace oodeval
