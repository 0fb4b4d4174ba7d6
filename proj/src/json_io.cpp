#include "polyq/json_io.hpp"

#include <fstream>

namespace polyq {

namespace {

std::vector<double> vector_to_std(const Vector& v) {
  return {v.data(), v.data() + v.size()};
}

Json vector_to_json(const Vector& v) { return Json(vector_to_std(v)); }

}  // namespace

Json to_json(const MultilinearPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [mask, c] : p.terms())
    terms.push_back({{"vars", subset_vars(mask)}, {"coef", c}});
  return {{"n", p.variable_count()}, {"terms", terms}};
}

MultilinearPolynomial polynomial_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  std::map<std::uint64_t, double> terms;
  for (const Json& t : j.at("terms")) {
    const auto vars = t.at("vars").get<std::vector<int>>();
    terms[subset_mask(vars, n)] += t.at("coef").get<double>();
  }
  return MultilinearPolynomial(n, std::move(terms));
}

Json to_json(const BlockMultilinearForm& form) {
  Json coeffs = Json::array();
  for (const auto& [idx, c] : form.coefficients())
    coeffs.push_back({{"idx", idx}, {"coef", c}});
  return {{"k", form.block_count()},
          {"block_size", form.block_size()},
          {"coeffs", coeffs}};
}

BlockMultilinearForm form_from_json(const Json& j) {
  BlockMultilinearForm form(j.at("k").get<int>(),
                            j.at("block_size").get<int>());
  for (const Json& t : j.at("coeffs"))
    form.add(t.at("idx").get<std::vector<int>>(), t.at("coef").get<double>());
  return form;
}

Json to_json(const PartialBooleanFunction& f) {
  Json points = Json::array();
  for (const auto& [x, v] : f.points) points.push_back({{"x", x}, {"f", v}});
  return {{"n", f.n}, {"points", points}};
}

PartialBooleanFunction function_from_json(const Json& j) {
  PartialBooleanFunction f;
  f.n = j.at("n").get<int>();
  for (const Json& p : j.at("points"))
    f.points.emplace_back(p.at("x").get<std::vector<int>>(),
                          p.at("f").get<int>());
  f.validate();
  return f;
}

Json matrix_to_json(const Matrix& a) {
  Json rows = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"data", rows}};
}

Matrix matrix_from_json(const Json& j) {
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  if (rows < 1 || cols < 1) throw std::invalid_argument("empty matrix");
  const Json& data = j.at("data");
  if (static_cast<Index>(data.size()) != rows)
    throw std::invalid_argument("matrix row count mismatch");
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = data.at(i);
    if (static_cast<Index>(row.size()) != cols)
      throw std::invalid_argument("matrix column count mismatch");
    for (Index c = 0; c < cols; ++c) a(i, c) = row.at(c).get<double>();
  }
  if (!a.allFinite()) throw std::invalid_argument("non-finite matrix entry");
  return a;
}

Json to_json(const NormReport& report) {
  return {{"spectral", report.spectral},
          {"inf_to_one", report.inf_to_one},
          {"gamma", report.gamma},
          {"g_ratio", report.g_ratio},
          {"grothendieck_upper", report.grothendieck_upper},
          {"ratio_G", report.ratio_G},
          {"witnesses",
           {{"x", vector_to_json(report.sign_witness.x)},
            {"y", vector_to_json(report.sign_witness.y)},
            {"exact", report.sign_witness.exact},
            {"w", vector_to_json(report.weights.w)},
            {"v", vector_to_json(report.weights.v)},
            {"converged", report.weights.converged}}}};
}

Json to_json(const SimulationReport& report) {
  Json j = {{"r", report.r},
            {"q", report.q},
            {"decision", report.decision},
            {"p_value", report.p_value},
            {"error_bound", report.error_bound}};
  if (report.sampled_bit) j["sampled_bit"] = *report.sampled_bit;
  return j;
}

Json to_json(const CompileReport& report) {
  return {{"used_general_path", report.used_general_path},
          {"epsilon_claimed", report.epsilon_claimed},
          {"epsilon_measured", report.epsilon_measured},
          {"cube_max_decoupled", report.cube_max_decoupled},
          {"rescale_constant", report.rescale_constant},
          {"worst_case_constant", report.worst_case_constant},
          {"eps_prime_formula", report.eps_prime_formula},
          {"inf_to_one", report.inf_to_one},
          {"optimizer_value", report.optimizer_value},
          {"C", report.scale},
          {"ratio", report.ratio},
          {"n_prime", report.n_prime},
          {"m_prime", report.m_prime},
          {"row_copies", report.row_copies},
          {"col_copies", report.col_copies},
          {"eps_prime", report.eps_prime},
          {"error_bound", report.error_bound},
          {"max_observed_error", report.max_observed_error},
          {"pass", report.pass},
          {"query_count", report.query_count},
          {"paper_bounds",
           {{"c_form", report.error_bound},
            {"k_form", report.k_form_bound},
            {"k_form_statement", report.k_form_statement},
            {"note",
             "k_form follows the proof denominator 2K+1; k_form_statement "
             "is the 2K+2 variant reported for comparison"}}}};
}

Json to_json(const VerifyReport& report) {
  return {{"max_error", report.max_error},
          {"worst_point", report.worst_point},
          {"error_bound", report.error_bound},
          {"pass", report.pass}};
}

Json split_to_json(const ReduceResult& result) {
  return {{"a_prime", matrix_to_json(result.split.matrix)},
          {"plan",
           {{"k", result.split.plan.row_copies},
            {"l", result.split.plan.col_copies},
            {"row_fit", result.split.plan.row_fit},
            {"col_fit", result.split.plan.col_fit}}},
          {"C", result.scale},
          {"inf_to_one", result.inf_to_one},
          {"ratio", result.ratio},
          {"optimizer_value", result.optimizer_value},
          {"origin_rows", result.row_map},
          {"origin_cols", result.col_map},
          {"ok", result.ok}};
}

Json circuit_to_json(const OneQueryAlgorithm& alg) {
  Json u = Json::array();
  for (Index i = 0; i < alg.dilation.u.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < alg.dilation.u.cols(); ++j)
      row.push_back(alg.dilation.u(i, j));
    u.push_back(std::move(row));
  }
  return {{"n_prime", alg.n_prime},
          {"m_prime", alg.m_prime},
          {"C", alg.scale},
          {"U", u},
          {"bias", alg.bias},
          {"origin_rows", alg.origin_rows},
          {"origin_cols", alg.origin_cols}};
}

OneQueryAlgorithm circuit_from_json(const Json& j) {
  OneQueryAlgorithm alg;
  alg.n_prime = j.at("n_prime").get<Index>();
  alg.m_prime = j.at("m_prime").get<Index>();
  alg.scale = j.at("C").get<double>();
  const Json& u = j.at("U");
  const Index k = static_cast<Index>(u.size());
  if (k < std::max(alg.n_prime, alg.m_prime))
    throw std::invalid_argument("circuit unitary smaller than the embedding");
  Matrix um(k, k);
  for (Index i = 0; i < k; ++i) {
    const Json& row = u.at(i);
    if (static_cast<Index>(row.size()) != k)
      throw std::invalid_argument("circuit unitary must be square");
    for (Index c = 0; c < k; ++c) um(i, c) = row.at(c).get<double>();
  }
  alg.dilation.u = std::move(um);
  alg.dilation.scale = alg.scale;
  alg.dilation.rows = alg.n_prime;
  alg.dilation.cols = alg.m_prime;
  alg.dilation.b =
      alg.dilation.u.topLeftCorner(alg.n_prime, alg.m_prime) * alg.scale;
  alg.origin_rows = j.at("origin_rows").get<std::vector<int>>();
  alg.origin_cols = j.at("origin_cols").get<std::vector<int>>();
  alg.bias = 1.0 / (2.0 * alg.scale + 1.0);
  if (static_cast<Index>(alg.origin_rows.size()) != alg.n_prime ||
      static_cast<Index>(alg.origin_cols.size()) != alg.m_prime)
    throw std::invalid_argument("origin map length mismatch");
  return alg;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace polyq
