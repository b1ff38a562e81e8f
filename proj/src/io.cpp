#include "hdl/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hdl/version.hpp"

namespace hdl {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
    ++b;
  }
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
    --e;
  }
  return s.substr(b, e - b);
}

double parse_number(const std::string& raw, int line, int column) {
  const std::string s = trim(raw);
  if (s.empty()) {
    throw CsvError(line, column, "empty numeric field");
  }
  double value = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw CsvError(line, column, "cannot parse '" + s + "' as a number");
  }
  return value;
}

bool looks_numeric(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) {
    return false;
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

nlohmann::ordered_json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Dataset load_dataset_csv(std::istream& in, bool transpose) {
  std::vector<std::vector<std::string>> table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    table.push_back(split_csv_line(line));
  }
  if (table.size() < 2) {
    throw CsvError(static_cast<int>(table.size()), 1,
                   "expected a header row and at least one data row");
  }
  const std::size_t width = table[0].size();
  if (width < 2) {
    throw CsvError(1, 1, "expected an id column and at least one value column");
  }
  for (std::size_t r = 1; r < table.size(); ++r) {
    if (table[r].size() != width) {
      throw CsvError(static_cast<int>(r + 1),
                     static_cast<int>(table[r].size()),
                     "row has " + std::to_string(table[r].size()) +
                         " fields, header has " + std::to_string(width));
    }
  }

  // Header + one row per variable; ids in the first column. Transposed files
  // carry variable ids in the header instead.
  Dataset data;
  if (!transpose) {
    const int p = static_cast<int>(table.size()) - 1;
    const int n = static_cast<int>(width) - 1;
    data.values.resize(p, n);
    data.var_ids.resize(p);
    for (int r = 0; r < p; ++r) {
      const auto& row = table[r + 1];
      data.var_ids[r] = trim(row[0]);
      if (data.var_ids[r].empty()) {
        throw CsvError(r + 2, 1, "missing variable id");
      }
      for (int c = 0; c < n; ++c) {
        data.values(r, c) = parse_number(row[c + 1], r + 2, c + 2);
      }
    }
  } else {
    const int p = static_cast<int>(width) - 1;
    const int n = static_cast<int>(table.size()) - 1;
    data.values.resize(p, n);
    data.var_ids.resize(p);
    for (int v = 0; v < p; ++v) {
      data.var_ids[v] = trim(table[0][v + 1]);
      if (data.var_ids[v].empty()) {
        throw CsvError(1, v + 2, "missing variable id in header");
      }
    }
    for (int r = 0; r < n; ++r) {
      const auto& row = table[r + 1];
      for (int v = 0; v < p; ++v) {
        data.values(v, r) = parse_number(row[v + 1], r + 2, v + 2);
      }
    }
  }
  if (!transpose && looks_numeric(table[1][0]) && looks_numeric(table[0][0])) {
    // Both header and first column numeric suggests a raw matrix without ids.
    throw CsvError(1, 1, "first column must hold variable ids");
  }
  data.validate();
  return data;
}

Dataset load_dataset_csv(const std::string& path, bool transpose) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open '" + path + "' for reading");
  }
  return load_dataset_csv(in, transpose);
}

void save_dataset_csv(std::ostream& out, const Dataset& data) {
  out << "var_id";
  for (int c = 0; c < data.n(); ++c) {
    out << ",obs_" << (c + 1);
  }
  out << '\n';
  for (int r = 0; r < data.p(); ++r) {
    out << data.var_ids[r];
    for (int c = 0; c < data.n(); ++c) {
      out << ',' << format_double(data.values(r, c));
    }
    out << '\n';
  }
}

void write_discovery_json(std::ostream& out, const Dataset& data,
                          const DirectEffects& direct,
                          const TotalEffects& total, const RidgeConfig& cfg,
                          int path_len) {
  using json = nlohmann::ordered_json;
  json root;
  root["tool"] = "hdlingam";
  root["version"] = kVersion;
  json config;
  config["tau"] = cfg.tau;
  config["path_len"] = path_len;
  config["p"] = data.p();
  config["n"] = data.n();
  root["config"] = config;

  json order = json::array();
  for (int v : direct.order.order) {
    order.push_back(data.var_ids[v]);
  }
  root["order"] = order;
  root["var_ids"] = data.var_ids;
  root["B"] = matrix_json(direct.B);
  root["A"] = matrix_json(total.A);
  out << root.dump(2) << '\n';
}

void write_ground_truth_json(std::ostream& out, const GeneratorConfig& cfg,
                             const GroundTruth& truth) {
  using json = nlohmann::ordered_json;
  json root;
  root["tool"] = "hdlingam";
  root["version"] = kVersion;
  json config;
  config["p"] = cfg.p;
  config["n"] = cfg.n;
  config["seed"] = cfg.seed;
  config["expected_degree"] = cfg.expected_degree;
  config["expected_degree_used"] = truth.expected_degree_used;
  config["permuted"] = cfg.permute;
  root["config"] = config;

  root["permutation"] = truth.permutation;
  json noise = json::array();
  for (std::size_t i = 0; i < truth.noise_family.size(); ++i) {
    json entry;
    entry["family"] = noise_family_name(truth.noise_family[i]);
    entry["variance"] = truth.noise_variance[i];
    entry["mean"] = truth.noise_mean[i];
    noise.push_back(std::move(entry));
  }
  root["noise"] = noise;
  root["B_true"] = matrix_json(truth.B_true);
  root["A_true"] = matrix_json(truth.A_true);
  out << root.dump(2) << '\n';
}

}  // namespace hdl
