#pragma once

#include "cocycle/path.hpp"
#include "cocycle/polynomial.hpp"
#include "cocycle/tensor.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace cocycle::io {

using Json = nlohmann::ordered_json;

struct CsvPath {
    std::vector<double> times;
    std::vector<std::vector<double>> points;
};

// Header `t,x1,...,xd`, one row per sample, strictly increasing t.
CsvPath read_csv(std::istream& in, const std::string& source);
CsvPath read_csv_file(const std::string& path);

Json read_json_file(const std::string& path);

// {system, d, n, coeffs: [{index, value}]} in index order.
Json tensor_to_json(const GradedTensor& a);
GradedTensor tensor_from_json(const Json& j);

// {system, d, n, times, values: [[coeffs in index order]]}
Json path_to_json(const SampledGroupPath& g);
SampledGroupPath path_from_json(const Json& j);

// {d, target_dim, degree, derivatives: [l -> array]}. As a one-form the output has
// target_dim * d components; as a function it has target_dim.
Polynomial polynomial_from_json(const Json& j, bool one_form);

// Every floating-point number is written with 17 significant digits.
std::string dump(const Json& j);
std::string format_number(double v);

} // namespace cocycle::io
