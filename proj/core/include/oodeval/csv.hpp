#pragma once

#include <filesystem>
#include <string>

#include "oodeval/logits.hpp"

namespace oodeval {

/// Formats a double with 17 significant digits, enough for an exact
/// parse round trip.
std::string format_double(double x);

/// Loads a logit CSV with header sample_id,logit_0,...,logit_{K-1}[,label].
/// K is inferred from the header; row order is preserved. Throws parse_error
/// naming the offending line on malformed headers, ragged rows, non-numeric
/// cells or duplicate sample ids.
LogitMatrix load_logits_csv(const std::filesystem::path& path);

/// Writes the matrix in the same format; values carry 17 significant digits
/// so load_logits_csv(save(m)) reproduces m exactly.
void save_logits_csv(const LogitMatrix& matrix,
                     const std::filesystem::path& path);

}  // namespace oodeval
