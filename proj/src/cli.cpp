#include "polyq/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "polyq/json_io.hpp"

namespace polyq {

namespace {

Vector parse_signs(const std::string& s) {
  Vector v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+')
      v[i] = 1.0;
    else if (s[i] == '-')
      v[i] = -1.0;
    else
      throw std::invalid_argument("sign strings use only '+' and '-'");
  }
  return v;
}

void emit(const Json& j, const std::string& out_path) {
  if (!out_path.empty()) save_json(out_path, j);
  std::cout << j.dump(2) << std::endl;
}

int run_norms(const std::string& matrix_path, bool heuristic,
              std::uint64_t seed, const std::string& out_path) {
  MinimizeOptions options;
  options.seed = seed;
  const Matrix a = matrix_from_json(load_json(matrix_path));
  const NormReport report = norm_report(a, options, 24, heuristic);
  emit(to_json(report), out_path);
  return 0;
}

int run_decouple(const std::string& poly_path, int degree,
                 const std::string& out_path) {
  const MultilinearPolynomial p = polynomial_from_json(load_json(poly_path));
  const DecouplingResult result = decouple(p, degree);
  Json summary = {{"blocks", degree},
                  {"block_size", p.variable_count() + 1},
                  {"bound", result.bound},
                  {"monomials", result.form.coefficients().size()}};
  const long enumerated =
      static_cast<long>(degree - 1) * (p.variable_count() + 1);
  if (enumerated <= 24) summary["cube_max"] = cube_max_abs(result.form);
  if (!out_path.empty())
    save_json(out_path, to_json(result.form));
  else
    summary["form"] = to_json(result.form);
  std::cout << summary.dump(2) << std::endl;
  return 0;
}

int run_split(const std::string& matrix_path, double delta, int cap,
              long budget, std::uint64_t seed, const std::string& out_path) {
  ReduceOptions options;
  options.delta = delta;
  options.denominator_cap = cap;
  options.split_budget = budget;
  options.minimize.seed = seed;
  const Matrix a = matrix_from_json(load_json(matrix_path));
  const ReduceResult result = reduce_scale_ratio(a, options);
  emit(split_to_json(result), out_path);
  return result.ok ? 0 : 1;
}

int run_compile(const std::string& poly_path, const std::string& form_path,
                const std::string& function_path, const CompileConfig& config,
                const std::string& out_path, const std::string& report_path) {
  const PartialBooleanFunction f = function_from_json(load_json(function_path));
  CompiledAlgorithm compiled;
  if (!poly_path.empty() && !form_path.empty())
    throw std::invalid_argument("--poly and --form are mutually exclusive");
  if (!poly_path.empty())
    compiled = compile(polynomial_from_json(load_json(poly_path)), f, config);
  else if (!form_path.empty())
    compiled = compile(form_from_json(load_json(form_path)), f, config);
  else
    compiled = compile(f, config);
  if (!out_path.empty()) save_json(out_path, circuit_to_json(compiled.algorithm));
  if (!report_path.empty()) save_json(report_path, to_json(compiled.report));
  std::cout << to_json(compiled.report).dump(2) << std::endl;
  return compiled.report.pass ? 0 : 1;
}

int run_simulate(const std::string& circuit_path, const std::string& xs,
                 const std::string& ys, double eps_prime,
                 std::optional<std::uint64_t> seed,
                 const std::string& out_path) {
  const OneQueryAlgorithm alg = circuit_from_json(load_json(circuit_path));
  const Vector x = parse_signs(xs), y = parse_signs(ys);
  const SimulationReport base = acceptance_probability(alg, x, y);
  SimulationReport report = biased_decision(alg, base.r, eps_prime, seed);
  report.p_value = base.p_value;
  emit(to_json(report), out_path);
  return 0;
}

int run_verify(const std::string& circuit_path, const std::string& function_path,
               double eps_prime, const std::string& out_path) {
  const OneQueryAlgorithm alg = circuit_from_json(load_json(circuit_path));
  const PartialBooleanFunction f = function_from_json(load_json(function_path));
  const VerifyReport report = verify(alg, f, eps_prime);
  emit(to_json(report), out_path);
  return report.pass ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"compiles bounded degree-2 polynomials into 1-query quantum "
               "algorithms and verifies the results"};
  app.require_subcommand(1);

  std::string matrix_path, poly_path, form_path, function_path, circuit_path;
  std::string out_path, report_path, xs, ys;
  double delta = 0.05, epsilon = 0.0, eps_prime = 0.0;
  int cap = 64, degree = 2;
  long budget = 4096;
  std::uint64_t seed = 0;
  bool heuristic = false, exact = false, use_bd = false;
  bool has_seed_flag = false;

  CLI::App* norms = app.add_subcommand("norms", "matrix norm report");
  norms->add_option("--matrix", matrix_path, "matrix JSON")->required();
  norms->add_flag("--exact", exact, "fail instead of falling back to search");
  norms->add_flag("--heuristic", heuristic, "allow flagged non-exact search");
  norms->add_option("--seed", seed, "random seed");
  norms->add_option("--out", out_path, "also write the report here");

  CLI::App* dec = app.add_subcommand("decouple", "lift a polynomial to a block form");
  dec->add_option("--poly", poly_path, "polynomial JSON")->required();
  dec->add_option("--degree", degree, "number of blocks (>= degree)")->required();
  dec->add_option("--out", out_path, "write the block form here");

  CLI::App* split = app.add_subcommand("split", "row/column splitting to K+delta");
  split->add_option("--matrix", matrix_path, "matrix JSON")->required();
  split->add_option("--delta", delta, "slack over the Grothendieck constant");
  split->add_option("--cap", cap, "denominator cap");
  split->add_option("--budget", budget, "split size budget");
  split->add_option("--seed", seed, "random seed");
  split->add_option("--out", out_path, "also write the result here");

  CLI::App* comp = app.add_subcommand("compile", "polynomial/form -> 1-query circuit");
  comp->add_option("--poly", poly_path, "degree-2 polynomial JSON");
  comp->add_option("--form", form_path, "2-block form JSON");
  comp->add_option("--function", function_path, "partial function JSON")->required();
  comp->add_option("--delta", delta, "splitting slack");
  comp->add_option("--cap", cap, "denominator cap");
  comp->add_option("--budget", budget, "split size budget");
  comp->add_option("--epsilon", epsilon, "claimed approximation error");
  comp->add_flag("--use-bd", use_bd, "rescale by B(2)=3 instead of the measured max");
  comp->add_option("--seed", seed, "random seed");
  comp->add_option("--out", out_path, "write the circuit here");
  comp->add_option("--report", report_path, "write the report here");

  CLI::App* sim = app.add_subcommand("simulate", "run the circuit on one input");
  sim->add_option("--circuit", circuit_path, "circuit JSON")->required();
  sim->add_option("--x", xs, "first-block signs, e.g. \"+-+\"")->required();
  sim->add_option("--y", ys, "second-block signs")->required();
  sim->add_option("--eps-prime", eps_prime, "eps' for the reported bound");
  sim->add_option("--seed", seed, "sample one output bit")->each(
      [&](const std::string&) { has_seed_flag = true; });
  sim->add_option("--out", out_path, "also write the report here");

  CLI::App* ver = app.add_subcommand("verify", "exact error sweep over a function");
  ver->add_option("--circuit", circuit_path, "circuit JSON")->required();
  ver->add_option("--function", function_path, "partial function JSON")->required();
  ver->add_option("--eps-prime", eps_prime, "eps' used for the bound");
  ver->add_option("--out", out_path, "also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (norms->parsed())
      return run_norms(matrix_path, heuristic && !exact, seed, out_path);
    if (dec->parsed()) return run_decouple(poly_path, degree, out_path);
    if (split->parsed())
      return run_split(matrix_path, delta, cap, budget, seed, out_path);
    if (comp->parsed()) {
      CompileConfig config;
      config.delta = delta;
      config.denominator_cap = cap;
      config.split_budget = budget;
      config.epsilon_input = epsilon;
      config.worst_case_rescale = use_bd;
      config.seed = seed;
      return run_compile(poly_path, form_path, function_path, config, out_path,
                         report_path);
    }
    if (sim->parsed())
      return run_simulate(circuit_path, xs, ys, eps_prime,
                          has_seed_flag ? std::optional<std::uint64_t>(seed)
                                        : std::nullopt,
                          out_path);
    if (ver->parsed())
      return run_verify(circuit_path, function_path, eps_prime, out_path);
  } catch (const check_failure& e) {
    std::cerr << "check failed: " << e.what() << std::endl;
    return 1;
  } catch (const capacity_error& e) {
    std::cerr << "capacity: " << e.what() << std::endl;
    return 3;
  } catch (const numeric_error& e) {
    std::cerr << "numeric: " << e.what() << std::endl;
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input: " << e.what() << std::endl;
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "input: " << e.what() << std::endl;
    return 2;
  }
  return 2;
}

}  // namespace polyq
