#include "oodeval/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "oodeval/errors.hpp"

namespace oodeval {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line,
                       const std::string& message) {
  throw parse_error(path.string() + ": line " + std::to_string(line) + ": " +
                    message);
}

double parse_cell(std::string_view cell, const std::filesystem::path& path,
                  std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    fail(path, line, "non-numeric cell '" + std::string(cell) + "'");
  }
  return value;
}

std::size_t parse_label(std::string_view cell, const std::filesystem::path& path,
                        std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    fail(path, line, "non-integer label '" + std::string(cell) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

LogitMatrix load_logits_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw parse_error(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_fields(line);
  if (header.empty() || header[0] != "sample_id") {
    fail(path, 1, "header must start with 'sample_id'");
  }
  bool has_label = !header.empty() && header.back() == "label";
  const std::size_t k = header.size() - 1 - (has_label ? 1 : 0);
  if (k < 2) fail(path, 1, "need at least 2 logit columns");
  for (std::size_t i = 0; i < k; ++i) {
    const std::string want = "logit_" + std::to_string(i);
    if (header[1 + i] != want) {
      fail(path, 1, "expected column '" + want + "', got '" +
                        std::string(header[1 + i]) + "'");
    }
  }
  const std::size_t columns = header.size();

  std::vector<std::string> ids;
  std::vector<LogitVector> rows;
  std::vector<std::size_t> labels;
  std::unordered_set<std::string> seen_ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != columns) {
      fail(path, line_no,
           "expected " + std::to_string(columns) + " fields, got " +
               std::to_string(fields.size()));
    }
    if (!seen_ids.emplace(fields[0]).second) {
      fail(path, line_no, "duplicate sample_id '" + std::string(fields[0]) + "'");
    }
    ids.emplace_back(fields[0]);
    std::vector<double> values(k);
    for (std::size_t i = 0; i < k; ++i) {
      values[i] = parse_cell(fields[1 + i], path, line_no);
    }
    try {
      rows.emplace_back(std::move(values));
    } catch (const invalid_input_error& e) {
      throw invalid_input_error(path.string() + ": line " +
                                std::to_string(line_no) + ": " + e.what());
    }
    if (has_label) labels.push_back(parse_label(fields.back(), path, line_no));
  }
  if (rows.empty()) throw parse_error(path.string() + ": no data rows");

  return LogitMatrix(std::move(ids), std::move(rows),
                     has_label ? std::optional(std::move(labels)) : std::nullopt);
}

void save_logits_csv(const LogitMatrix& matrix,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw parse_error("cannot open " + path.string() + " for writing");
  out << "sample_id";
  for (std::size_t i = 0; i < matrix.num_classes(); ++i) out << ",logit_" << i;
  if (matrix.labels()) out << ",label";
  out << '\n';
  for (std::size_t n = 0; n < matrix.num_samples(); ++n) {
    out << matrix.sample_ids()[n];
    for (double v : matrix.row(n).values()) out << ',' << format_double(v);
    if (matrix.labels()) out << ',' << (*matrix.labels())[n];
    out << '\n';
  }
}

}  // namespace oodeval
