#pragma once

#include <iosfwd>
#include <string>

#include "hdl/dataset.hpp"
#include "hdl/datagen.hpp"
#include "hdl/effects.hpp"

namespace hdl {

/// Malformed CSV input; line and column are 1-based.
struct CsvError : Error {
  CsvError(int l, int c, const std::string& msg)
      : Error("csv line " + std::to_string(l) + ", column " +
              std::to_string(c) + ": " + msg),
        line(l),
        column(c) {}
  int line;
  int column;
};

/// Reads a dataset. Expected layout: header row, then one row per variable
/// with the variable id in the first column. With transpose = true the file
/// holds samples as rows and variables as columns instead.
Dataset load_dataset_csv(std::istream& in, bool transpose = false);
Dataset load_dataset_csv(const std::string& path, bool transpose = false);

/// Writes the matching CSV; floating point at 17 significant digits.
void save_dataset_csv(std::ostream& out, const Dataset& data);

std::string format_double(double v);  // %.17g

/// Discovery result as JSON: causal order (variable ids), dense B and A,
/// the resolved configuration, seed-free.
void write_discovery_json(std::ostream& out, const Dataset& data,
                          const DirectEffects& direct, const TotalEffects& total,
                          const RidgeConfig& cfg, int path_len);

/// Ground truth as JSON: dense B_true and A_true, the applied permutation,
/// per-variable noise descriptors, seed and config echo.
void write_ground_truth_json(std::ostream& out, const GeneratorConfig& cfg,
                             const GroundTruth& truth);

}  // namespace hdl
