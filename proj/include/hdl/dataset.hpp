#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A variable with (numerically) zero sample variance; rejected at load time.
struct ConstantRowError : Error {
  ConstantRowError(int index, const std::string& id)
      : Error("variable '" + id + "' (row " + std::to_string(index) +
              ") has zero sample variance"),
        row(index),
        var_id(id) {}
  int row;
  std::string var_id;
};

/// Observation matrix, rows = variables, columns = samples.
struct Dataset {
  Eigen::MatrixXd values;            // p x n
  std::vector<std::string> var_ids;  // size p

  int p() const { return static_cast<int>(values.rows()); }
  int n() const { return static_cast<int>(values.cols()); }

  /// Enforces p >= 1, n >= 2, finite entries, nonzero row variances.
  void validate() const;
};

/// Default labels g1..gp.
std::vector<std::string> default_var_ids(int p);

}  // namespace hdl
