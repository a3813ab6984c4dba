#include "prism/features_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "prism/error.hpp"

namespace prism {

Matrix FeatureTable::matrix() const {
  Matrix m(size(), dim());
  for (Index i = 0; i < size(); ++i) {
    m.row(i) = rows[static_cast<std::size_t>(i)].values.transpose();
  }
  return m;
}

std::vector<std::string> FeatureTable::labels() const {
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const FeatureRow& r : rows) out.push_back(r.label);
  return out;
}

std::vector<std::optional<int>> FeatureTable::prompt_ids() const {
  std::vector<std::optional<int>> out;
  out.reserve(rows.size());
  for (const FeatureRow& r : rows) out.push_back(r.prompt_id);
  return out;
}

void write_features(const FeatureTable& table, const std::filesystem::path& path) {
  if (table.rows.empty()) raise(errc::invalid_argument, "no feature rows to write");
  const Index dim = table.dim();

  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot open for writing: " + path.string());

  out << "path,label,prompt_id";
  for (Index j = 0; j < dim; ++j) out << ",f_" << j;
  out << '\n';

  char buffer[40];
  for (const FeatureRow& row : table.rows) {
    if (row.values.size() != dim) {
      raise(errc::length_mismatch, "inconsistent feature dimension in table");
    }
    out << row.path << ',' << row.label << ',';
    if (row.prompt_id) out << *row.prompt_id;
    for (Index j = 0; j < dim; ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", row.values[j]);
      out << ',' << buffer;
    }
    out << '\n';
  }
  if (!out) raise(errc::io_error, "failed writing " + path.string());
}

FeatureTable read_features(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(errc::file_not_found, path.string());

  FeatureTable table;
  std::string line;
  int line_no = 0;
  Index dim = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (line_no == 1) {
      if (line.rfind("path,label,prompt_id", 0) != 0) {
        raise(errc::parse_error, "line 1: bad feature file header");
      }
      Index count = 0;
      for (char c : line) count += (c == ',');
      dim = count - 2;
      if (dim < 1) raise(errc::parse_error, "line 1: header names no features");
      continue;
    }

    std::vector<std::string> fields;
    {
      std::string field;
      std::istringstream ss(line);
      while (std::getline(ss, field, ',')) fields.push_back(field);
      if (!line.empty() && line.back() == ',') fields.emplace_back();
    }
    if (static_cast<Index>(fields.size()) != dim + 3) {
      raise(errc::parse_error, "line " + std::to_string(line_no) +
                                   ": expected " + std::to_string(dim + 3) +
                                   " fields, got " + std::to_string(fields.size()));
    }

    FeatureRow row;
    row.path = fields[0];
    row.label = fields[1];
    if (row.label.empty()) {
      raise(errc::parse_error, "line " + std::to_string(line_no) + ": empty label");
    }
    if (!fields[2].empty()) {
      try {
        row.prompt_id = std::stoi(fields[2]);
      } catch (const std::exception&) {
        raise(errc::parse_error,
              "line " + std::to_string(line_no) + ": bad prompt_id");
      }
    }
    row.values.resize(dim);
    for (Index j = 0; j < dim; ++j) {
      const std::string& f = fields[static_cast<std::size_t>(j + 3)];
      char* end = nullptr;
      double v = std::strtod(f.c_str(), &end);
      if (end != f.c_str() + f.size() || f.empty()) {
        raise(errc::parse_error, "line " + std::to_string(line_no) +
                                     ": bad feature value '" + f + "'");
      }
      row.values[j] = v;
    }
    table.rows.push_back(std::move(row));
  }

  if (line_no == 0) raise(errc::parse_error, "empty feature file");
  if (table.rows.empty()) raise(errc::parse_error, "feature file has no rows");
  return table;
}

}  // namespace prism
