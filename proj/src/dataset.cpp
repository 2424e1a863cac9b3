#include "icll/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace icll {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(trim(std::string_view(s).substr(start)));
      break;
    }
    out.push_back(trim(std::string_view(s).substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& cell, double& out) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end != begin && *end == '\0' && std::isfinite(out);
}

struct Attribute {
  enum Kind { Real, Nominal } kind = Real;
  std::string name;
  std::vector<std::string> values;  // nominal only, declaration order
};

// Maps the two observed class strings to {majority -> 0, minority -> 1}.
// The rarer class becomes the minority; equal counts break toward the
// lexicographically smaller name.
std::array<std::string, 2> assign_roles(const std::map<std::string, Eigen::Index>& counts) {
  if (counts.size() != 2)
    throw std::invalid_argument("expected exactly two observed classes, got " +
                                std::to_string(counts.size()));
  auto it = counts.begin();
  const auto& [name_a, count_a] = *it;
  ++it;
  const auto& [name_b, count_b] = *it;
  // std::map iterates in lexicographic order, so name_a < name_b.
  if (count_a < count_b) return {name_b, name_a};
  if (count_b < count_a) return {name_a, name_b};
  return {name_b, name_a};  // tie: smaller name becomes minority
}

Dataset finish_dataset(std::vector<std::vector<double>> rows,
                       std::vector<std::string> raw_labels,
                       std::vector<std::string> feature_names,
                       std::string name, std::string label_name) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n < 2) throw std::invalid_argument("dataset needs at least 2 rows, got " + std::to_string(n));
  const auto p = static_cast<Eigen::Index>(feature_names.size());
  if (p < 1) throw std::invalid_argument("dataset needs at least one feature column");

  std::map<std::string, Eigen::Index> counts;
  for (const auto& l : raw_labels) ++counts[l];
  const auto roles = assign_roles(counts);

  Dataset d;
  d.features.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      d.features(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  d.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    d.labels(i) = raw_labels[static_cast<std::size_t>(i)] == roles[1] ? 1 : 0;
  d.feature_names = std::move(feature_names);
  d.name = std::move(name);
  d.label_name = std::move(label_name);
  d.class_names = roles;
  return d;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Dataset parse_keel(const std::string& text) {
  std::vector<Attribute> attributes;
  std::vector<std::string> input_names, output_names;
  std::string relation;
  bool in_data = false;

  std::vector<std::vector<std::string>> data_rows;
  std::istringstream stream(text);
  std::string raw;
  while (std::getline(stream, raw)) {
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '%') continue;
    if (!in_data && line[0] == '@') {
      const std::size_t sp = line.find_first_of(" \t");
      const std::string directive = lower(line.substr(0, sp));
      const std::string rest = sp == std::string::npos ? "" : trim(std::string_view(line).substr(sp));
      if (directive == "@relation") {
        relation = rest;
      } else if (directive == "@attribute") {
        Attribute attr;
        const std::size_t name_end = rest.find_first_of(" \t{");
        if (name_end == std::string::npos)
          throw std::invalid_argument("malformed @attribute line: " + line);
        attr.name = rest.substr(0, name_end);
        const std::string spec = trim(std::string_view(rest).substr(name_end));
        if (!spec.empty() && spec[0] == '{') {
          const std::size_t close = spec.find('}');
          if (close == std::string::npos)
            throw std::invalid_argument("unterminated nominal value list: " + line);
          attr.kind = Attribute::Nominal;
          attr.values = split_commas(spec.substr(1, close - 1));
          if (attr.values.empty() || attr.values.front().empty())
            throw std::invalid_argument("empty nominal value list: " + line);
        } else {
          const std::string type_word = lower(spec.substr(0, spec.find_first_of(" \t[")));
          if (type_word != "real" && type_word != "integer" && type_word != "numeric")
            throw std::invalid_argument("unsupported attribute type in: " + line);
          attr.kind = Attribute::Real;
        }
        attributes.push_back(std::move(attr));
      } else if (directive == "@inputs" || directive == "@input") {
        input_names = split_commas(rest);
      } else if (directive == "@outputs" || directive == "@output") {
        output_names = split_commas(rest);
      } else if (directive == "@data") {
        in_data = true;
      } else {
        throw std::invalid_argument("unknown header directive: " + directive);
      }
    } else if (in_data) {
      data_rows.push_back(split_commas(line));
    } else {
      throw std::invalid_argument("data row before @data directive: " + line);
    }
  }

  if (!in_data) throw std::invalid_argument("missing @data directive");
  if (attributes.empty()) throw std::invalid_argument("missing @attribute declarations");

  // Resolve the output attribute: declared via @outputs, else the last one.
  if (output_names.size() > 1)
    throw std::invalid_argument("exactly one output attribute is required");
  auto find_attr = [&](const std::string& name) {
    for (std::size_t a = 0; a < attributes.size(); ++a)
      if (attributes[a].name == name) return a;
    throw std::invalid_argument("attribute '" + name + "' not declared");
  };
  const std::size_t out_idx =
      output_names.empty() ? attributes.size() - 1 : find_attr(output_names[0]);
  const Attribute& out_attr = attributes[out_idx];
  if (out_attr.kind != Attribute::Nominal || out_attr.values.size() != 2)
    throw std::invalid_argument("output attribute '" + out_attr.name +
                                "' is not binary nominal");

  std::vector<std::size_t> input_idx;
  if (input_names.empty()) {
    for (std::size_t a = 0; a < attributes.size(); ++a)
      if (a != out_idx) input_idx.push_back(a);
  } else {
    for (const auto& nm : input_names) {
      const std::size_t a = find_attr(nm);
      if (a == out_idx) throw std::invalid_argument("output attribute listed in @inputs");
      input_idx.push_back(a);
    }
  }
  if (input_idx.empty()) throw std::invalid_argument("no input attributes");

  // Encoded feature layout: real attributes take one column, nominal inputs
  // one indicator column per declared value.
  std::vector<std::string> feature_names;
  for (const std::size_t a : input_idx) {
    const Attribute& attr = attributes[a];
    if (attr.kind == Attribute::Real) {
      feature_names.push_back(attr.name);
    } else {
      for (const auto& v : attr.values) feature_names.push_back(attr.name + "=" + v);
    }
  }

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  rows.reserve(data_rows.size());
  for (std::size_t r = 0; r < data_rows.size(); ++r) {
    const auto& cells = data_rows[r];
    const std::string row_tag = "data row " + std::to_string(r + 1);
    if (cells.size() != attributes.size())
      throw std::invalid_argument(row_tag + ": expected " + std::to_string(attributes.size()) +
                                  " values, got " + std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(feature_names.size());
    for (const std::size_t a : input_idx) {
      const std::string& cell = cells[a];
      if (cell == "?" || cell.empty())
        throw std::invalid_argument(row_tag + ": missing value in attribute '" +
                                    attributes[a].name + "'");
      if (attributes[a].kind == Attribute::Real) {
        double v;
        if (!parse_double(cell, v))
          throw std::invalid_argument(row_tag + ": cannot parse '" + cell +
                                      "' as a number for attribute '" + attributes[a].name + "'");
        row.push_back(v);
      } else {
        const auto& values = attributes[a].values;
        const auto it = std::find(values.begin(), values.end(), cell);
        if (it == values.end())
          throw std::invalid_argument(row_tag + ": value '" + cell +
                                      "' not declared for attribute '" + attributes[a].name + "'");
        for (const auto& v : values) row.push_back(v == cell ? 1.0 : 0.0);
      }
    }
    const std::string& label_cell = cells[out_idx];
    if (label_cell == "?" || label_cell.empty())
      throw std::invalid_argument(row_tag + ": missing class value");
    if (std::find(out_attr.values.begin(), out_attr.values.end(), label_cell) ==
        out_attr.values.end())
      throw std::invalid_argument(row_tag + ": class value '" + label_cell + "' not declared");
    rows.push_back(std::move(row));
    raw_labels.push_back(label_cell);
  }

  return finish_dataset(std::move(rows), std::move(raw_labels), std::move(feature_names),
                        relation, out_attr.name);
}

// RFC-4180 records: quoted fields may contain commas, doubled quotes and
// newlines. Returns one vector of cells per record.
std::vector<std::vector<std::string>> parse_csv_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  bool cell_started = false;
  auto end_cell = [&] {
    record.push_back(was_quoted ? cell : trim(cell));
    cell.clear();
    quoted = false;
    was_quoted = false;
    cell_started = false;
  };
  auto end_record = [&] {
    end_cell();
    const bool blank = record.size() == 1 && record[0].empty();
    if (!blank) records.push_back(std::move(record));
    record.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"' && !cell_started) {
      quoted = true;
      was_quoted = true;
      cell_started = true;
    } else if (c == ',') {
      end_cell();
    } else if (c == '\n') {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      end_record();
    } else {
      cell.push_back(c);
      cell_started = true;
    }
  }
  if (!cell.empty() && cell.back() == '\r') cell.pop_back();
  if (cell_started || !record.empty()) end_record();
  return records;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

Dataset parse_csv(const std::string& text, const std::string& label_column) {
  const auto records = parse_csv_records(text);
  if (records.size() < 3)
    throw std::invalid_argument("CSV needs a header and at least 2 data rows");
  const auto& header = records[0];

  std::size_t label_idx = header.size();
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == label_column) label_idx = c;
  if (label_idx == header.size())
    throw std::invalid_argument("label column '" + label_column + "' not found in CSV header");

  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_idx) feature_names.push_back(header[c]);
  if (feature_names.empty()) throw std::invalid_argument("CSV has no feature columns");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& cells = records[r];
    const std::string row_tag = "data row " + std::to_string(r);
    if (cells.size() != header.size())
      throw std::invalid_argument(row_tag + ": expected " + std::to_string(header.size()) +
                                  " cells, got " + std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(feature_names.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_idx) continue;
      const std::string& cell = cells[c];
      if (cell == "?" || cell.empty())
        throw std::invalid_argument(row_tag + ": missing value in column '" + header[c] + "'");
      double v;
      if (!parse_double(cell, v))
        throw std::invalid_argument(row_tag + ": cannot parse '" + cell +
                                    "' as a number in column '" + header[c] + "'");
      row.push_back(v);
    }
    const std::string& label_cell = cells[label_idx];
    if (label_cell == "?" || label_cell.empty())
      throw std::invalid_argument(row_tag + ": missing class value");
    rows.push_back(std::move(row));
    raw_labels.push_back(label_cell);
  }

  {
    std::map<std::string, Eigen::Index> distinct;
    for (const auto& l : raw_labels) ++distinct[l];
    if (distinct.size() != 2)
      throw std::invalid_argument("label column '" + label_column + "' has " +
                                  std::to_string(distinct.size()) +
                                  " distinct values, expected 2");
  }

  return finish_dataset(std::move(rows), std::move(raw_labels), std::move(feature_names), "",
                        label_column);
}

std::string serialize_csv(const Dataset& d) {
  std::string out;
  for (const auto& nm : d.feature_names) {
    out += csv_escape(nm);
    out.push_back(',');
  }
  out += csv_escape(d.label_name);
  out.push_back('\n');
  for (Eigen::Index i = 0; i < d.n_rows(); ++i) {
    for (Eigen::Index j = 0; j < d.n_features(); ++j) {
      out += format_double(d.features(i, j));
      out.push_back(',');
    }
    out += csv_escape(d.class_names[static_cast<std::size_t>(d.labels(i))]);
    out.push_back('\n');
  }
  return out;
}

ImbalanceSummary summarize(const Dataset& d) {
  ImbalanceSummary s;
  s.n_minority = d.labels.sum();
  s.n_majority = d.n_rows() - s.n_minority;
  if (s.n_minority < 1) throw std::invalid_argument("dataset has no minority instances");
  s.imbalance_ratio =
      static_cast<double>(s.n_majority) / static_cast<double>(s.n_minority);
  return s;
}

Dataset min_max_scaled(const Dataset& d) {
  Dataset out = d;
  for (Eigen::Index j = 0; j < d.n_features(); ++j) {
    const double lo = d.features.col(j).minCoeff();
    const double hi = d.features.col(j).maxCoeff();
    if (hi > lo)
      out.features.col(j) = (d.features.col(j).array() - lo) / (hi - lo);
    else
      out.features.col(j).setZero();
  }
  return out;
}

Dataset subset(const Dataset& d, const std::vector<Eigen::Index>& rows) {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), d.n_features());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = d.features.row(rows[i]);
    out.labels(static_cast<Eigen::Index>(i)) = d.labels(rows[i]);
  }
  out.feature_names = d.feature_names;
  out.name = d.name;
  out.label_name = d.label_name;
  out.class_names = d.class_names;
  return out;
}

Dataset load_dataset(const std::string& path, const std::string& csv_label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::filesystem::path p(path);
  Dataset d = lower(p.extension().string()) == ".dat" ? parse_keel(buffer.str())
                                                      : parse_csv(buffer.str(), csv_label_column);
  d.name = p.stem().string();
  return d;
}

}  // namespace icll
