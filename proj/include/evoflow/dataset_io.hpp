#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "evoflow/evaluation.hpp"

namespace evoflow {

// Strict CSV ingestion: header row, comma-separated, every feature cell must
// parse as a number. Missing or non-numeric cells are errors (no imputation);
// the label column maps to dense class ids in first-appearance order.
Dataset load_csv(const std::string& path, const std::string& label_column);

// Same, but labels map through an existing class-name table (for test sets);
// a label absent from the table is an error.
Dataset load_csv_as(const std::string& path, const std::string& label_column,
                    const std::vector<std::string>& class_names);

// Writes features with full double precision and labels as class names, so a
// reload reproduces the matrices and the id assignment exactly.
void save_csv(const Dataset& d, const std::string& path, const std::string& label_column);

// Stratified holdout: per-class largest-remainder apportionment of the test
// quota, deterministic under the seed. Both halves keep >= 1 sample of every
// class or the split fails.
std::pair<Dataset, Dataset> holdout_split(const Dataset& d, double fraction,
                                          std::uint64_t seed);

}  // namespace evoflow
