#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lbiplot {

struct LabeledMatrix {
  std::vector<std::string> ids;      // one per row
  std::vector<std::string> columns;  // one per column
  Eigen::MatrixXd values;
};

/// Header row of column names, one sample per row. With id_column the first
/// field of each row is the sample id; otherwise ids are s1..sn.
LabeledMatrix read_labeled_csv(const std::string& path, bool id_column);
LabeledMatrix parse_labeled_csv(const std::string& text, bool id_column);

/// Header-free numeric matrix (e.g. a Q form).
Eigen::MatrixXd read_matrix_csv(const std::string& path);
Eigen::MatrixXd parse_matrix_csv(const std::string& text);

/// Header row then one line per row; numbers at 17 significant digits.
std::string format_labeled_csv(const std::vector<std::string>& columns, const Eigen::MatrixXd& values);
std::string format_number(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace lbiplot
