#include "polyq/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace polyq {

namespace {

constexpr double kCheckSlack = 1e-12;

Vector point_vector(const std::vector<int>& x) {
  Vector v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i];
  return v;
}

// Diagonal +-1 assignment of both sides, lifted through the origin maps.
std::pair<Vector, Vector> lifted_diagonal(const OneQueryAlgorithm& alg,
                                          const Vector& x) {
  Vector ext(x.size() + 1);
  ext[0] = 1.0;
  ext.tail(x.size()) = x;
  Vector xs(alg.n_prime), ys(alg.m_prime);
  for (Index r = 0; r < alg.n_prime; ++r) {
    const int o = alg.origin_rows[r];
    if (o < 0 || o >= ext.size())
      throw std::invalid_argument("origin row map outside the input space");
    xs[r] = ext[o];
  }
  for (Index c = 0; c < alg.m_prime; ++c) {
    const int o = alg.origin_cols[c];
    if (o < 0 || o >= ext.size())
      throw std::invalid_argument("origin column map outside the input space");
    ys[c] = ext[o];
  }
  return {std::move(xs), std::move(ys)};
}

struct GeneralStage {
  bool used = false;
  double epsilon_claimed = 0.0, epsilon_measured = 0.0;
  double cube_max = 0.0, constant = 0.0, eps_formula = 0.0;
};

CompiledAlgorithm compile_form(const BlockMultilinearForm& form,
                               const PartialBooleanFunction& f,
                               const CompileConfig& config,
                               const GeneralStage& stage) {
  f.validate();
  if (form.block_count() != 2)
    throw std::invalid_argument("compilation requires a 2-block form");
  if (form.block_size() != f.n + 1)
    throw std::invalid_argument("block size must be n + 1");
  if (!(config.epsilon_input >= 0.0 && config.epsilon_input < 0.5))
    throw std::invalid_argument("claimed epsilon must lie in [0, 1/2)");

  const double cube_max = cube_max_abs(form);
  if (cube_max > 1.0 + 1e-9)
    throw check_failure("form exceeds 1 on the cube: max " +
                        std::to_string(cube_max));

  const double claimed =
      stage.used ? std::min(0.5 - kCheckSlack, std::max(stage.eps_formula, 0.0))
                 : config.epsilon_input;
  const auto diag = [&](const Vector& x) {
    return diagonal_restriction(form, x);
  };
  ApproximationReport approx = check_approximation(diag, f, claimed);
  if (approx.max_error > claimed + kCheckSlack)
    throw check_failure("approximation check failed: measured error " +
                        std::to_string(approx.max_error) + " above claimed " +
                        std::to_string(claimed));
  const double eps_prime = approx.max_error;
  if (eps_prime >= 0.5)
    throw check_failure("approximation error reaches 1/2");

  const Matrix a = coefficient_matrix(form);
  ReduceOptions reduce_options;
  reduce_options.delta = config.delta;
  reduce_options.denominator_cap = config.denominator_cap;
  reduce_options.split_budget = config.split_budget;
  reduce_options.minimize.seed = config.seed;
  const ReduceResult reduced = reduce_scale_ratio(a, reduce_options);
  if (!reduced.ok)
    throw numeric_error("splitting stalled at ratio " +
                        std::to_string(reduced.ratio) +
                        "; target K+delta not met");

  CompiledAlgorithm out;
  out.algorithm = build_algorithm(reduced.split.matrix, reduced.scale,
                                  reduced.row_map, reduced.col_map);

  CompileReport& rep = out.report;
  rep.used_general_path = stage.used;
  rep.epsilon_claimed = stage.used ? stage.epsilon_claimed : config.epsilon_input;
  rep.epsilon_measured = stage.used ? stage.epsilon_measured : approx.max_error;
  rep.cube_max_decoupled = stage.cube_max;
  rep.rescale_constant = stage.constant;
  rep.worst_case_constant = stage.used ? decoupling_bound(2) : 0.0;
  rep.eps_prime_formula = stage.eps_formula;
  rep.inf_to_one = reduced.inf_to_one;
  rep.optimizer_value = reduced.optimizer_value;
  rep.scale = reduced.scale;
  rep.ratio = reduced.ratio;
  rep.n_prime = out.algorithm.n_prime;
  rep.m_prime = out.algorithm.m_prime;
  rep.row_copies = reduced.split.plan.row_copies;
  rep.col_copies = reduced.split.plan.col_copies;
  rep.eps_prime = eps_prime;
  rep.error_bound = wrapper_error_bound(reduced.scale, eps_prime);
  const double k_upper = grothendieck_constant_bounds().second;
  rep.k_form_bound = (k_upper + eps_prime) / (2.0 * k_upper + 1.0);
  rep.k_form_statement = (k_upper + eps_prime) / (2.0 * (k_upper + 1.0));

  const VerifyReport checked = verify(out.algorithm, f, eps_prime);
  rep.max_observed_error = checked.max_error;
  rep.pass = checked.pass;
  return out;
}

}  // namespace

CompiledAlgorithm compile(const BlockMultilinearForm& form,
                          const PartialBooleanFunction& f,
                          const CompileConfig& config) {
  return compile_form(form, f, config, {});
}

CompiledAlgorithm compile(const MultilinearPolynomial& q,
                          const PartialBooleanFunction& f,
                          const CompileConfig& config) {
  f.validate();
  if (q.variable_count() != f.n)
    throw std::invalid_argument("polynomial arity does not match the function");
  if (q.degree() > 2) throw std::invalid_argument("polynomial degree above 2");
  if (!(config.epsilon_input >= 0.0 && config.epsilon_input < 0.5))
    throw std::invalid_argument("claimed epsilon must lie in [0, 1/2)");

  const auto [lo, hi] = cube_range(q);
  if (lo < -1e-9 || hi > 1.0 + 1e-9)
    throw check_failure("polynomial leaves [0, 1] on the cube: range [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  const auto value = [&](const Vector& x) { return evaluate(q, x); };
  const ApproximationReport approx =
      check_approximation(value, f, config.epsilon_input);
  if (approx.max_error > config.epsilon_input + kCheckSlack)
    throw check_failure("approximation check failed: measured error " +
                        std::to_string(approx.max_error) + " above claimed " +
                        std::to_string(config.epsilon_input));

  // shift to 2q - 1, which is bounded by 1 in absolute value on the cube
  std::map<std::uint64_t, double> shifted;
  for (const auto& [mask, c] : q.terms()) shifted[mask] = 2.0 * c;
  shifted[0] -= 1.0;
  const MultilinearPolynomial centered(q.variable_count(), std::move(shifted));

  const DecouplingResult dec = decouple(centered, 2);
  const double measured_max = cube_max_abs(dec.form);
  const double worst_case = dec.bound;  // B(2) = 3
  double constant = config.worst_case_rescale
                        ? worst_case
                        : std::min(std::max(measured_max, 1e-9), worst_case);

  GeneralStage stage;
  stage.used = true;
  stage.epsilon_claimed = config.epsilon_input;
  stage.epsilon_measured = approx.max_error;
  stage.cube_max = measured_max;
  stage.constant = constant;
  stage.eps_formula = rescaled_epsilon(approx.max_error, constant);

  const BlockMultilinearForm rescaled =
      rescale_to_probability_range(dec.form, constant);
  return compile_form(rescaled, f, config, stage);
}

CompiledAlgorithm compile(const PartialBooleanFunction& f,
                          const CompileConfig& config) {
  f.validate();
  if (!f.total())
    throw std::invalid_argument(
        "partial functions need a supplied polynomial; only total functions "
        "can be interpolated");
  std::vector<double> table(std::size_t{1} << f.n, 0.0);
  for (const auto& [x, v] : f.points) {
    std::uint64_t idx = 0;
    for (int i = 0; i < f.n; ++i)
      if (x[i] < 0) idx |= std::uint64_t{1} << i;
    table[idx] = v;
  }
  const MultilinearPolynomial q = fourier_expand(f.n, table);
  if (q.degree() > 2)
    throw std::invalid_argument("function needs degree " +
                                std::to_string(q.degree()) +
                                "; only degree <= 2 is compilable");
  CompileConfig cfg = config;
  cfg.epsilon_input = 0.0;
  return compile(q, f, cfg);
}

VerifyReport verify(const OneQueryAlgorithm& alg,
                    const PartialBooleanFunction& f, double eps_prime) {
  f.validate();
  VerifyReport report;
  report.error_bound = wrapper_error_bound(alg.scale, eps_prime);
  for (const auto& [x, fx] : f.points) {
    const auto [xs, ys] = lifted_diagonal(alg, point_vector(x));
    const SimulationReport sim = acceptance_probability(alg, xs, ys);
    const double q = (1.0 - alg.bias) * sim.r;
    const double err = fx == 1 ? 1.0 - q : q;
    if (report.worst_point.empty() || err > report.max_error) {
      report.max_error = err;
      report.worst_point = x;
    }
  }
  report.pass = report.max_error <= report.error_bound + 1e-9;
  return report;
}

namespace {

void fwht(std::vector<double>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1)
    for (std::size_t i = 0; i < a.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const double u = a[j], v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
}

}  // namespace

InterpolationCheck interpolate_acceptance(const OneQueryAlgorithm& alg,
                                          int max_total_vars) {
  const int n = static_cast<int>(alg.n_prime);
  const int m = static_cast<int>(alg.m_prime);
  if (n + m > max_total_vars)
    throw capacity_error("interpolate_acceptance: " + std::to_string(n + m) +
                         " variables exceed the interpolation cap");

  // table of r over the full cube, x in the low bits, y in the high bits
  const std::size_t total = std::size_t{1} << (n + m);
  std::vector<double> table(total);
  const Index k = alg.dilation.u.rows();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::uint64_t ym = 0; ym < (std::uint64_t{1} << m); ++ym) {
    Vector yhat = Vector::Zero(k);
    const Vector y = cube_point(ym, m);
    yhat.head(m) = y / std::sqrt(static_cast<double>(m));
    const Vector head = (alg.dilation.u * yhat).head(n) * inv_sqrt_n;
    for (std::uint64_t xm = 0; xm < (std::uint64_t{1} << n); ++xm) {
      const Vector x = cube_point(xm, n);
      table[(ym << n) | xm] = 0.5 * (1.0 + x.dot(head));
    }
  }
  fwht(table);
  const double scale = 1.0 / static_cast<double>(total);

  InterpolationCheck out;
  out.cross = Matrix::Zero(n, m);
  out.max_extraneous = 0.0;
  for (std::size_t mask = 0; mask < total; ++mask) {
    const double c = table[mask] * scale;
    const std::uint64_t xpart = mask & ((std::uint64_t{1} << n) - 1);
    const std::uint64_t ypart = mask >> n;
    if (mask == 0) {
      out.constant = c;
    } else if (std::popcount(xpart) == 1 && std::popcount(ypart) == 1) {
      out.cross(std::countr_zero(xpart), std::countr_zero(ypart)) = c;
    } else {
      out.max_extraneous = std::max(out.max_extraneous, std::abs(c));
    }
  }
  out.structure_ok = out.max_extraneous <= 1e-8;
  out.cube_bound = std::abs(out.constant) + inf_to_one_norm(out.cross).value;
  return out;
}

}  // namespace polyq
