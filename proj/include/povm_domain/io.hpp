#pragma once

// JSON file formats:
//   state:  {"d": int, "matrix": [[[re, im], ...], ...]}
//   POVM:   {"d": int, "effects": [ <matrix as above>, ... ]}
//   counts: {"n": int, "counts": [int, ...]}

#include <string>

#include <json.hpp>

#include "povm_domain/estimation.hpp"

namespace povm_domain::io {

using Json = nlohmann::json;

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, std::size_t dim);

Json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const Json& j, double tol = kDefaultTol);

Json povm_to_json(const Povm& povm);
Povm povm_from_json(const Json& j);

Json counts_to_json(const CountRecord& rec);
CountRecord counts_from_json(const Json& j);

/// Throws ParseError for unreadable files and malformed JSON.
Json read_json_file(const std::string& path);

/// Serializes with every floating value printed as %.17g.
std::string dump(const Json& j, int indent = -1);

/// "%.17g" rendering used by both JSON and CSV output.
std::string format_double(double v);

}  // namespace povm_domain::io
