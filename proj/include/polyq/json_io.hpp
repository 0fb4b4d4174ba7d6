#pragma once

#include <string>

#include <json.hpp>

#include "polyq/pipeline.hpp"

namespace polyq {

using Json = nlohmann::json;

// {"n": int, "terms": [{"vars": [1-based sorted ints], "coef": float}]}
Json to_json(const MultilinearPolynomial& p);
MultilinearPolynomial polynomial_from_json(const Json& j);

// {"k": int, "block_size": int, "coeffs": [{"idx": [ints, 0 = dummy], "coef": float}]}
Json to_json(const BlockMultilinearForm& form);
BlockMultilinearForm form_from_json(const Json& j);

// {"n": int, "points": [{"x": [+-1...], "f": 0|1}]}
Json to_json(const PartialBooleanFunction& f);
PartialBooleanFunction function_from_json(const Json& j);

// {"rows": int, "cols": int, "data": [[float...]...]} (row-major)
Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j);

Json to_json(const NormReport& report);
Json to_json(const SimulationReport& report);
Json to_json(const CompileReport& report);
Json to_json(const VerifyReport& report);
Json split_to_json(const ReduceResult& result);

// {"n_prime", "m_prime", "C", "U", "bias", "origin_rows", "origin_cols"}
Json circuit_to_json(const OneQueryAlgorithm& alg);
OneQueryAlgorithm circuit_from_json(const Json& j);

Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);

}  // namespace polyq
