#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "evoflow/dataset_io.hpp"
#include "evoflow/errors.hpp"
#include "evoflow/rng.hpp"

namespace evoflow {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
  std::string where = "row " + std::to_string(row) + ", column '" + column + "'";
  if (cell.empty()) throw DataError("csv: empty cell at " + where);
  char* end = nullptr;
  double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || !std::isfinite(v))
    throw DataError("csv: non-numeric cell '" + cell + "' at " + where);
  return v;
}

Dataset load_csv_impl(const std::string& path, const std::string& label_column,
                      const std::vector<std::string>* fixed_classes) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  auto header = split_line(line);
  int label_col = -1;
  Dataset d;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == label_column)
      label_col = static_cast<int>(c);
    else
      d.feature_names.push_back(header[c]);
  }
  if (label_col < 0)
    throw DataError("csv: label column '" + label_column + "' not found in '" + path + "'");
  if (d.feature_names.empty()) throw DataError("csv: no feature columns in '" + path + "'");

  std::map<std::string, int> class_ids;
  if (fixed_classes) {
    d.class_names = *fixed_classes;
    for (std::size_t i = 0; i < d.class_names.size(); ++i)
      class_ids[d.class_names[i]] = static_cast<int>(i);
  }

  d.features.cols = d.feature_names.size();
  std::size_t row = 1;  // 1-based, counting the header as row 0
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      throw DataError("csv: row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (static_cast<int>(c) == label_col) continue;
      d.features.values.push_back(parse_cell(cells[c], row, header[c]));
    }
    const std::string& label = cells[label_col];
    if (label.empty())
      throw DataError("csv: empty cell at row " + std::to_string(row) + ", column '" +
                      label_column + "'");
    auto it = class_ids.find(label);
    if (it == class_ids.end()) {
      if (fixed_classes)
        throw DataError("csv: unknown class '" + label + "' at row " + std::to_string(row));
      int id = static_cast<int>(d.class_names.size());
      it = class_ids.emplace(label, id).first;
      d.class_names.push_back(label);
    }
    d.labels.push_back(it->second);
    ++row;
  }
  d.features.rows = d.labels.size();
  if (d.labels.empty()) throw DataError("csv: '" + path + "' has no data rows");
  if (d.class_names.size() < 2 && !fixed_classes)
    throw DataError("csv: '" + path + "' contains a single class");
  d.validate();
  return d;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column) {
  return load_csv_impl(path, label_column, nullptr);
}

Dataset load_csv_as(const std::string& path, const std::string& label_column,
                    const std::vector<std::string>& class_names) {
  return load_csv_impl(path, label_column, &class_names);
}

void save_csv(const Dataset& d, const std::string& path, const std::string& label_column) {
  std::ofstream out(path);
  if (!out) throw DataError("csv: cannot write '" + path + "'");
  for (const auto& name : d.feature_names) out << name << ',';
  out << label_column << '\n';
  char buf[32];
  for (std::size_t r = 0; r < d.features.rows; ++r) {
    for (std::size_t c = 0; c < d.features.cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", d.features.at(r, c));
      out << buf << ',';
    }
    out << d.class_names[d.labels[r]] << '\n';
  }
}

std::pair<Dataset, Dataset> holdout_split(const Dataset& d, double fraction,
                                          std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 0.5))
    throw ConfigError("holdout fraction must lie in (0, 0.5]");
  d.validate();

  std::map<int, std::vector<int>> by_class;
  for (std::size_t i = 0; i < d.labels.size(); ++i)
    by_class[d.labels[i]].push_back(static_cast<int>(i));

  // Per-class quotas by largest remainder so the overall test size matches
  // round(fraction * n) while staying stratified.
  long long target = std::llround(fraction * static_cast<double>(d.labels.size()));
  std::vector<std::pair<double, int>> remainders;  // (-remainder, class) for sorting
  std::map<int, long long> take;
  long long base_total = 0;
  for (const auto& [cls, rows] : by_class) {
    double quota = fraction * static_cast<double>(rows.size());
    long long base = static_cast<long long>(std::floor(quota));
    take[cls] = base;
    base_total += base;
    remainders.push_back({-(quota - static_cast<double>(base)), cls});
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::size_t i = 0; i < remainders.size() && base_total < target; ++i, ++base_total)
    ++take[remainders[i].second];

  std::vector<int> test_rows, train_rows;
  for (auto& [cls, rows] : by_class) {
    long long n_test = take[cls];
    if (n_test < 1 || n_test >= static_cast<long long>(rows.size()))
      throw DataError("holdout: class '" + d.class_names[cls] +
                      "' is too small to appear in both splits");
    RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
    std::shuffle(rows.begin(), rows.end(), rng);
    test_rows.insert(test_rows.end(), rows.begin(), rows.begin() + n_test);
    train_rows.insert(train_rows.end(), rows.begin() + n_test, rows.end());
  }
  std::sort(test_rows.begin(), test_rows.end());
  std::sort(train_rows.begin(), train_rows.end());

  auto subset = [&](const std::vector<int>& rows) {
    Dataset out;
    out.features = d.features.select_rows(rows);
    out.labels.reserve(rows.size());
    for (int r : rows) out.labels.push_back(d.labels[r]);
    out.class_names = d.class_names;
    out.feature_names = d.feature_names;
    return out;
  };
  return {subset(train_rows), subset(test_rows)};
}

}  // namespace evoflow
