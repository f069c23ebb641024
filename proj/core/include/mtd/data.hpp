#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtd/empirics.hpp"

namespace mtd {

enum class NaPolicy {
  kError,      // any missing value is an error
  kDropEdges,  // leading/trailing missing values are dropped, embedded ones are errors
};

enum class HeaderMode {
  kAuto,  // first row is a header if it names the column, reads "x", is the
          // only non-numeric entry of a numeric column, or (multi-column
          // files) never recurs in its column
  kYes,
  kNo,
};

struct IngestOptions {
  /// Column name or zero-based index; the first column when absent.
  std::optional<std::string> column;
  /// Input lists the newest observation first.
  bool reverse = false;
  NaPolicy na_policy = NaPolicy::kError;
  HeaderMode header = HeaderMode::kAuto;
};

/// Raw column of a CSV file after header handling, NA policy and reversal,
/// oldest observation first.
std::vector<std::string> read_series_column(const std::string& path, const IngestOptions& options = {});

/// Reads one symbol per row; the alphabet is the sorted set of distinct labels.
Sample ingest_series(const std::string& path, const IngestOptions& options = {});

/// Same as ingest_series, but every label must belong to `alphabet`.
Sample ingest_series(const std::string& path, const Alphabet& alphabet, const IngestOptions& options = {});

/// Numeric column for discretization.
std::vector<double> read_numeric_series(const std::string& path, const IngestOptions& options = {});

struct Discretization {
  Sample sample;
  /// k+1 edges: min, interior boundaries, max.
  std::vector<double> edges;
};

/// Equal-range binning into k bins labeled "1".."k". Bins are left-closed
/// and right-open, except the last which also includes the maximum.
Discretization discretize(std::span<const double> series, int k);

}  // namespace mtd
