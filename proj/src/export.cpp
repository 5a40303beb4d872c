// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// export.cpp

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fdlp/errors.hpp"
#include "fdlp/io.hpp"

namespace fdlp {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw FormatError("'" + s + "' is not a number");
  return v;
}

}  // namespace

void ExportTable::validate() const {
  if (values.size() != rows() * cols()) {
    throw InvalidArgument("export table '" + name + "' has " + std::to_string(values.size()) +
                          " values for " + std::to_string(rows()) + "x" + std::to_string(cols()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("export table '" + name + "' holds non-finite values");
  }
  auto bad = [](const std::string& s) { return s.find_first_of(",\n\r") != std::string::npos; };
  if (bad(row_header)) throw InvalidArgument("row header contains a separator");
  for (const auto& l : row_labels) {
    if (bad(l)) throw InvalidArgument("row label contains a separator");
  }
  for (const auto& l : column_labels) {
    if (bad(l)) throw InvalidArgument("column label contains a separator");
  }
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string> format_numbers(const std::vector<double>& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(format_number(x));
  return out;
}

std::string to_csv(const ExportTable& table) {
  table.validate();
  json meta = table.metadata;
  meta["name"] = table.name;
  std::string out = "# " + meta.dump() + "\n";
  out += table.row_header;
  for (const auto& c : table.column_labels) out += "," + c;
  out += "\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out += table.row_labels[r];
    for (std::size_t c = 0; c < table.cols(); ++c) out += "," + format_number(table.at(r, c));
    out += "\n";
  }
  return out;
}

std::string to_json(const ExportTable& table) {
  table.validate();
  json j;
  j["name"] = table.name;
  j["row_header"] = table.row_header;
  j["column_header"] = table.column_header;
  j["row_labels"] = table.row_labels;
  j["column_labels"] = table.column_labels;
  json rows = json::array();
  for (std::size_t r = 0; r < table.rows(); ++r) {
    json row = json::array();
    // Same rounding as the CSV so both exports parse to identical doubles.
    for (std::size_t c = 0; c < table.cols(); ++c) {
      row.push_back(parse_double(format_number(table.at(r, c))));
    }
    rows.push_back(std::move(row));
  }
  j["values"] = std::move(rows);
  j["metadata"] = table.metadata;
  return j.dump(2) + "\n";
}

ExportTable parse_csv(std::string_view text) {
  ExportTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw FormatError("CSV export lacks its metadata line");
  }
  try {
    const auto meta = json::parse(line.substr(2));
    for (const auto& [k, v] : meta.items()) {
      if (k == "name") {
        t.name = v.get<std::string>();
      } else {
        t.metadata[k] = v.get<std::string>();
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("CSV metadata: ") + e.what());
  }
  if (!std::getline(in, line)) throw FormatError("CSV export lacks its header row");
  auto header = split_csv_line(line);
  if (header.empty()) throw FormatError("empty CSV header");
  t.row_header = header.front();
  t.column_labels.assign(header.begin() + 1, header.end());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) throw FormatError("ragged CSV row '" + fields.front() + "'");
    t.row_labels.push_back(fields.front());
    for (std::size_t c = 1; c < fields.size(); ++c) t.values.push_back(parse_double(fields[c]));
  }
  return t;
}

ExportTable parse_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    ExportTable t;
    t.name = j.at("name").get<std::string>();
    t.row_header = j.at("row_header").get<std::string>();
    t.column_header = j.at("column_header").get<std::string>();
    t.row_labels = j.at("row_labels").get<std::vector<std::string>>();
    t.column_labels = j.at("column_labels").get<std::vector<std::string>>();
    for (const auto& row : j.at("values")) {
      if (row.size() != t.cols()) throw FormatError("ragged JSON row");
      for (const auto& v : row) t.values.push_back(v.get<double>());
    }
    t.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    t.validate();
    return t;
  } catch (const json::exception& e) {
    throw FormatError(std::string("JSON export: ") + e.what());
  }
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(path + ": cannot open for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw FormatError(path + ": write failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string default_export_dir() {
  const char* dir = std::getenv("FDLP_EXPORT_DIR");
  return dir != nullptr && *dir != '\0' ? dir : ".";
}

}  // namespace fdlp
