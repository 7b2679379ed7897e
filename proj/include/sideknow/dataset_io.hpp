#pragma once

#include "sideknow/types.hpp"

#include <optional>
#include <string>

namespace sideknow {

/// How examples are laid out in a CSV file.
///   rows:    header "x1,...,xp[,y]", one example per line.
///   columns: the transpose of the above; each line starts with the
///            variable name followed by one value per example.
enum class CsvLayout { Rows, Columns };

CsvLayout csv_layout_from_string(const std::string& name);

/// Parsed numeric table with examples as columns.
struct FeatureTable {
  Matrix features;               // p x n
  std::optional<Vector> labels;  // present when a "y" variable exists
};

FeatureTable read_feature_table(const std::string& path, CsvLayout layout);

/// Requires a "y" variable.
LabeledDataset load_dataset(const std::string& path, CsvLayout layout,
                            std::optional<double> feature_bound = std::nullopt);

UnlabeledSet load_unlabeled(const std::string& path, CsvLayout layout);

/// Writes a rows-layout CSV (header x1..xp,y).
void write_dataset(const std::string& path, const LabeledDataset& data);

/// Shortest round-trip decimal representation used for all CSV output.
std::string format_double(double value);

}  // namespace sideknow
