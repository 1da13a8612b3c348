#pragma once

#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace lbiplot {

using json = nlohmann::json;

/// Serializes with every floating-point value printed at 17 significant
/// digits (non-finite values become null). Object keys keep nlohmann's sorted order.
std::string dump_json(const json& value, int indent = 2);

json to_json(const Eigen::MatrixXd& m);  // array of rows
json to_json(const Eigen::VectorXd& v);
Eigen::MatrixXd matrix_from_json(const json& rows);
Eigen::VectorXd vector_from_json(const json& arr);

}  // namespace lbiplot
