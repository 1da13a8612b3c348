#include "lbiplot/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lbiplot/error.hpp"

namespace lbiplot {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> nonempty_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

double parse_double(const std::string& field, std::size_t row, std::size_t col) {
  double v = 0.0;
  const char* b = field.data();
  const char* e = b + field.size();
  if (!field.empty() && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || field.empty()) {
    throw ValidationError("CSV line " + std::to_string(row + 1) + ", field " + std::to_string(col + 1) +
                          ": '" + field + "' is not a number");
  }
  return v;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

LabeledMatrix parse_labeled_csv(const std::string& text, bool id_column) {
  const auto lines = nonempty_lines(text);
  if (lines.empty()) throw ValidationError("CSV is empty");
  LabeledMatrix m;
  auto header = split_line(lines[0]);
  if (id_column) {
    if (header.empty()) throw ValidationError("CSV header is empty");
    header.erase(header.begin());
  }
  if (header.empty()) throw ValidationError("CSV header has no variable columns");
  m.columns = header;

  const std::size_t p = header.size();
  const std::size_t n = lines.size() - 1;
  m.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t r = 0; r < n; ++r) {
    auto fields = split_line(lines[r + 1]);
    std::size_t offset = 0;
    if (id_column) {
      if (fields.empty()) throw ValidationError("CSV line " + std::to_string(r + 2) + " is missing its id");
      m.ids.push_back(fields[0]);
      offset = 1;
    } else {
      m.ids.push_back("s" + std::to_string(r + 1));
    }
    if (fields.size() != p + offset) {
      throw ValidationError("CSV line " + std::to_string(r + 2) + " has " + std::to_string(fields.size()) +
                            " fields, expected " + std::to_string(p + offset));
    }
    for (std::size_t c = 0; c < p; ++c) {
      m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_double(fields[c + offset], r + 1, c + offset);
    }
  }
  return m;
}

LabeledMatrix read_labeled_csv(const std::string& path, bool id_column) {
  return parse_labeled_csv(read_text_file(path), id_column);
}

Eigen::MatrixXd parse_matrix_csv(const std::string& text) {
  const auto lines = nonempty_lines(text);
  if (lines.empty()) throw ValidationError("matrix CSV is empty");
  const std::size_t cols = split_line(lines[0]).size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(lines.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < lines.size(); ++r) {
    auto fields = split_line(lines[r]);
    if (fields.size() != cols) {
      throw ValidationError("matrix CSV line " + std::to_string(r + 1) + " has " + std::to_string(fields.size()) +
                            " fields, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_double(fields[c], r, c);
    }
  }
  return m;
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) { return parse_matrix_csv(read_text_file(path)); }

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_labeled_csv(const std::vector<std::string>& columns, const Eigen::MatrixXd& values) {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c) out += ',';
      out += format_number(values(r, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace lbiplot
