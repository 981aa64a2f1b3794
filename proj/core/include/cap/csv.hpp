#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cap/types.hpp"

namespace cap {

/// CSV contents: header, covariate matrix, response, and the optional
/// noiseless-mean column (recognized by the header name "true_mean").
struct DatasetCsv {
  Dataset data;
  std::vector<std::string> header;
  std::optional<Vector> true_mean;
};

/// Shortest decimal form that parses back to the same double; dot decimal
/// separator regardless of locale.
std::string format_double(double v);

/// Header plus numeric rows; the last column is the response unless it is
/// named true_mean, in which case the one before it is. Parse failures throw
/// std::invalid_argument with a 1-based line number.
DatasetCsv read_dataset_csv(std::istream& in);
DatasetCsv read_dataset_csv(const std::filesystem::path& path);

/// Numeric rows only; header returned as-is, no response-column convention.
struct RawCsv {
  std::vector<std::string> header;
  Matrix values;
};
RawCsv read_raw_csv(const std::filesystem::path& path);

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       const Vector* true_mean = nullptr);
void write_predictions_csv(const std::filesystem::path& path, const Vector& predictions);

}  // namespace cap
