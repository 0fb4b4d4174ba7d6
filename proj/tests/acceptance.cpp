// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "polyq/json_io.hpp"
#include "polyq/pipeline.hpp"
#include "test_support.hpp"

using namespace polyq;

namespace {

using testing::Rng;

struct DecoupledInstance {
  MultilinearPolynomial p;
  int d = 0;
  DecouplingResult result;
};

// Shared ensemble for criteria 1-3: 200 random polynomials, n <= 6, d <= 4,
// scaled to unit cube max.
std::vector<DecoupledInstance>& decoupling_ensemble() {
  static std::vector<DecoupledInstance> ensemble = [] {
    std::vector<DecoupledInstance> out;
    Rng rng(20240917);
    while (out.size() < 200) {
      const int n = 1 + static_cast<int>(rng() % 6);
      const int max_deg = std::min(n, 4);
      MultilinearPolynomial p = testing::scale_to_unit_cube_max(
          testing::random_polynomial(rng, n, max_deg));
      const int lo = std::max(1, p.degree());
      const int d = lo + static_cast<int>(rng() % (4 - lo + 1));
      out.push_back({p, d, decouple(p, d)});
    }
    return out;
  }();
  return ensemble;
}

struct ParityFixture {
  PartialBooleanFunction fn;
  BlockMultilinearForm form;

  ParityFixture()
      : form(2, 3, {{{0, 0}, 0.5}, {{1, 2}, -0.5}}) {
    fn.n = 2;
    fn.points = {{{1, 1}, 0}, {{1, -1}, 1}, {{-1, 1}, 1}, {{-1, -1}, 0}};
  }
};

// Degree-2 polynomial mapped affinely onto [0, 1] with the extremal points of
// the cube as the exactly-represented domain (at most `max_points`).
struct ExactInstance {
  MultilinearPolynomial q;
  PartialBooleanFunction f;
};

ExactInstance random_exact_instance(Rng& rng, int max_points = 8) {
  while (true) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const MultilinearPolynomial r =
        testing::random_polynomial(rng, n, 2, 8);
    std::vector<double> values(std::size_t{1} << n);
    for (std::size_t i = 0; i < values.size(); ++i)
      values[i] = evaluate(r, cube_point(i, n));
    const auto [lo_it, hi_it] =
        std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi - lo < 0.1) continue;

    const double scale = 1.0 / (hi - lo);
    std::map<std::uint64_t, double> terms;
    for (const auto& [mask, c] : r.terms()) terms[mask] += c * scale;
    terms[0] -= lo * scale;
    ExactInstance out{MultilinearPolynomial(n, std::move(terms)), {}};

    out.f.n = n;
    int zeros = 0, ones = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const bool is_min = values[i] == lo;
      const bool is_max = values[i] == hi;
      if (!is_min && !is_max) continue;
      if (is_min && zeros >= max_points / 2) continue;
      if (is_max && ones >= max_points / 2) continue;
      const Vector x = cube_point(i, n);
      std::vector<int> xi(n);
      for (int b = 0; b < n; ++b) xi[b] = static_cast<int>(x[b]);
      out.f.points.emplace_back(xi, is_max ? 1 : 0);
      (is_max ? ones : zeros) += 1;
    }
    if (zeros == 0 || ones == 0) continue;
    return out;
  }
}

// Compiled ensemble shared by criteria 10 and 11.
std::vector<CompiledAlgorithm>& compiled_ensemble() {
  static std::vector<CompiledAlgorithm> compiled = [] {
    std::vector<CompiledAlgorithm> out;
    Rng rng(571);
    CompileConfig config;
    config.epsilon_input = 1e-9;
    config.seed = 17;
    for (int i = 0; i < 50; ++i) {
      const ExactInstance inst = random_exact_instance(rng);
      out.push_back(compile(inst.q, inst.f, config));
    }
    return out;
  }();
  return compiled;
}

bool criterion_decoupling_identity(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const DecoupledInstance& inst : decoupling_ensemble()) {
    const int n = inst.p.variable_count();
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      const Vector x = cube_point(m, n);
      worst = std::max(worst,
                       std::abs(diagonal_restriction(inst.result.form, x) -
                                evaluate(inst.p, x)));
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::ostringstream os;
  os << "max deviation " << worst << ", " << seconds << "s";
  detail = os.str();
  return worst <= 1e-10 && seconds < 30.0;
}

bool criterion_decoupling_bound(std::string& detail) {
  double worst_excess = -1.0;
  for (const DecoupledInstance& inst : decoupling_ensemble()) {
    const double max_abs = cube_max_abs(inst.result.form);
    worst_excess = std::max(worst_excess, max_abs - inst.result.bound);
  }
  bool values_ok = std::abs(decoupling_bound(2) - 3.0) == 0.0 &&
                   std::abs(decoupling_bound(3) - 9.0) == 0.0 &&
                   std::abs(decoupling_bound(4) - 85.0 / 3.0) < 1e-12;
  bool ratios_ok = true;
  for (int d = 15; d <= 20; ++d) {
    const double ratio = decoupling_bound(d + 1) / decoupling_bound(d);
    if (std::abs(ratio / kDecouplingGrowthRate - 1.0) > 0.05) ratios_ok = false;
  }
  std::ostringstream os;
  os << "max excess over B(d) " << worst_excess
     << (values_ok ? ", B(2..4) exact" : ", B value mismatch")
     << (ratios_ok ? ", growth within 5%" : ", growth off");
  detail = os.str();
  return worst_excess <= 1e-9 && values_ok && ratios_ok;
}

bool criterion_polarization_oracle(std::string& detail) {
  Rng rng(777);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0.0;
  int checked = 0;
  const auto& ensemble = decoupling_ensemble();
  while (checked < 1000) {
    const DecoupledInstance& inst = ensemble[checked % ensemble.size()];
    std::vector<Vector> blocks(inst.d,
                               Vector(inst.p.variable_count() + 1));
    for (Vector& z : blocks)
      for (Index i = 0; i < z.size(); ++i) z[i] = unif(rng);
    const double a = evaluate(inst.result.form, blocks);
    const double b = polarization_value(inst.p, inst.d, blocks);
    worst = std::max(worst, std::abs(a - b));
    ++checked;
  }
  std::ostringstream os;
  os << checked << " inputs, max deviation " << worst;
  detail = os.str();
  return worst <= 1e-9;
}

bool criterion_norm_preservation(std::string& detail) {
  Rng rng(911);
  std::uniform_int_distribution<long> mult(1, 3);
  std::uniform_int_distribution<Index> dim(1, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = testing::random_matrix(rng, dim(rng), dim(rng));
    SplitPlan plan;
    for (Index i = 0; i < a.rows(); ++i) plan.row_copies.push_back(mult(rng));
    for (Index j = 0; j < a.cols(); ++j) plan.col_copies.push_back(mult(rng));
    const SplitMatrix split = apply_split(a, plan);
    const double before = testing::brute_bilinear_max_rows(a);
    const double after = testing::brute_bilinear_max_rows(split.matrix);
    worst = std::max(worst, std::abs(before - after));
  }
  std::ostringstream os;
  os << "max norm drift " << worst;
  detail = os.str();
  return worst <= 1e-9;
}

bool criterion_gamma_characterization(std::string& detail) {
  Rng rng(913);
  std::uniform_int_distribution<long> mult(1, 3);
  std::uniform_int_distribution<Index> dim(1, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = testing::random_matrix(rng, dim(rng), dim(rng));
    SplitPlan plan;
    Vector w(a.rows()), v(a.cols());
    for (Index i = 0; i < a.rows(); ++i) {
      plan.row_copies.push_back(mult(rng));
      w[i] = std::sqrt(static_cast<double>(plan.row_copies.back()));
    }
    for (Index j = 0; j < a.cols(); ++j) {
      plan.col_copies.push_back(mult(rng));
      v[j] = std::sqrt(static_cast<double>(plan.col_copies.back()));
    }
    const SplitMatrix split = apply_split(a, plan);
    const double direct = dilation_scale(split.matrix);
    const double formula = operator_norm(diagonal_scaled(a, w, v)) *
                           w.norm() * v.norm();
    worst = std::max(worst, std::abs(direct - formula));
  }
  std::ostringstream os;
  os << "max formula gap " << worst;
  detail = os.str();
  return worst <= 1e-9;
}

bool criterion_grothendieck_machinery(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  MinimizeOptions options;
  options.seed = 41;

  Matrix chsh(2, 2);
  chsh << 1, 1, 1, -1;
  const double chsh_value = minimize_weighted_gamma(chsh, options).value;
  const bool chsh_ok = std::abs(chsh_value - 2.0 * std::sqrt(2.0)) <= 1e-4;

  Rng rng(997);
  std::uniform_real_distribution<double> unif(0.2, 2.0);
  bool rank1_ok = true;
  double rank1_worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 2 + trial % 3, m = 2 + (trial / 2) % 3;
    Vector u(n), v(m);
    for (Index i = 0; i < n; ++i) u[i] = unif(rng) * ((rng() & 1u) ? 1 : -1);
    for (Index j = 0; j < m; ++j) v[j] = unif(rng) * ((rng() & 1u) ? 1 : -1);
    const Matrix a = u * v.transpose();
    const double value = minimize_weighted_gamma(a, options).value;
    const double expect = u.lpNorm<1>() * v.lpNorm<1>();
    rank1_worst = std::max(rank1_worst, std::abs(value - expect));
    if (std::abs(value - expect) > 1e-4) rank1_ok = false;
  }

  const double k_upper = grothendieck_constant_bounds().second;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + trial % 5, m = 2 + (trial / 5) % 5;
    Matrix a = testing::random_matrix(rng, n, m);
    for (Index i = 0; i < n; ++i)
      if (a.row(i).cwiseAbs().maxCoeff() < 0.05) a(i, 0) = 0.5;
    for (Index j = 0; j < m; ++j)
      if (a.col(j).cwiseAbs().maxCoeff() < 0.05) a(0, j) = 0.5;
    const double upper = minimize_weighted_gamma(a, options).value;
    worst_ratio = std::max(worst_ratio, upper / inf_to_one_norm(a).value);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::ostringstream os;
  os << "chsh " << chsh_value << ", rank-1 gap " << rank1_worst
     << ", worst ratio " << worst_ratio << " (K upper " << k_upper << "), "
     << seconds << "s";
  detail = os.str();
  return chsh_ok && rank1_ok && worst_ratio <= k_upper + 1e-3 &&
         seconds < 180.0;
}

bool criterion_dilation(std::string& detail) {
  Rng rng(1009);
  std::uniform_real_distribution<double> slack(1.0, 2.0);
  double worst_unitarity = 0.0, worst_embed = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 1 + trial % 6, m = 1 + (trial / 6) % 6;
    const Matrix b = testing::random_matrix(rng, n, m);
    const double norm = operator_norm(b);
    if (norm == 0.0) continue;
    const double scale = (trial % 7 == 0) ? norm : norm * slack(rng);
    const Dilation d = dilate(b, scale);
    const Index k = d.u.rows();
    worst_unitarity = std::max(
        worst_unitarity,
        (d.u.transpose() * d.u - Matrix::Identity(k, k)).cwiseAbs().maxCoeff());
    worst_embed = std::max(
        worst_embed,
        (d.u.topLeftCorner(n, m) - b / scale).cwiseAbs().maxCoeff());
  }
  std::ostringstream os;
  os << "max |U^T U - I| " << worst_unitarity << ", max embed gap "
     << worst_embed;
  detail = os.str();
  return worst_unitarity <= 1e-10 && worst_embed <= 1e-10;
}

bool criterion_simulator_contract(std::string& detail) {
  Rng rng(1013);
  std::uniform_real_distribution<double> slack(1.0, 1.5);
  double worst_formula = 0.0, worst_paths = 0.0;
  long swept = 0;

  std::vector<std::pair<Index, Index>> shapes = {
      {2, 2}, {3, 4}, {5, 5}, {6, 4}, {10, 10}};
  for (const auto& [n, m] : shapes) {
    const Matrix a = testing::random_matrix(rng, n, m);
    const double scale = dilation_scale(a) * slack(rng);
    const OneQueryAlgorithm alg = build_algorithm(a, scale);
    for (std::uint64_t ym = 0; ym < (std::uint64_t{1} << m); ++ym) {
      const Vector y = cube_point(ym, static_cast<int>(m));
      const Vector ay = a * y;
      for (std::uint64_t xm = 0; xm < (std::uint64_t{1} << n); ++xm) {
        const Vector x = cube_point(xm, static_cast<int>(n));
        const SimulationReport rep = acceptance_probability(alg, x, y);
        const double expected = 0.5 * (1.0 + x.dot(ay) / scale);
        worst_formula = std::max(worst_formula, std::abs(rep.r - expected));
        worst_paths = std::max(
            worst_paths, std::abs(swap_test_statevector(alg, x, y) - rep.r));
        ++swept;
      }
    }
  }
  std::ostringstream os;
  os << swept << " inputs, max formula gap " << worst_formula
     << ", max path gap " << worst_paths;
  detail = os.str();
  return worst_formula <= 1e-9 && worst_paths <= 1e-12;
}

bool criterion_parity_end_to_end(std::string& detail) {
  const ParityFixture parity;
  const CompiledAlgorithm out = compile(parity.form, parity.fn);
  double worst_gap = 0.0;
  for (const auto& [x, fx] : parity.fn.points) {
    Vector ext(3);
    ext << 1.0, x[0], x[1];
    Vector xs(out.algorithm.n_prime), ys(out.algorithm.m_prime);
    for (Index r = 0; r < out.algorithm.n_prime; ++r)
      xs[r] = ext[out.algorithm.origin_rows[r]];
    for (Index c = 0; c < out.algorithm.m_prime; ++c)
      ys[c] = ext[out.algorithm.origin_cols[c]];
    const SimulationReport rep = acceptance_probability(out.algorithm, xs, ys);
    const double expect = fx == 1 ? 2.0 / 3.0 : 1.0 / 3.0;
    worst_gap = std::max(worst_gap, std::abs(rep.q - expect));
  }
  const bool scale_ok = std::abs(out.report.scale - 1.0) <= 1e-9;
  const bool bound_ok =
      std::abs(out.report.error_bound - 1.0 / 3.0) <= 1e-12 &&
      std::abs(out.report.max_observed_error - 1.0 / 3.0) <= 1e-12;
  const bool k_form_ok =
      out.report.max_observed_error <= out.report.k_form_bound &&
      std::abs(out.report.k_form_bound - 0.39045724792286) <= 1e-9;
  std::ostringstream os;
  os << "C " << out.report.scale << ", max |q - expected| " << worst_gap
     << ", error " << out.report.max_observed_error << ", K-form bound "
     << out.report.k_form_bound;
  detail = os.str();
  return worst_gap <= 1e-12 && scale_ok && bound_ok && k_form_ok &&
         out.report.pass;
}

bool criterion_ensemble_end_to_end(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  double worst_margin = -1.0;
  bool all_pass = true;
  for (const CompiledAlgorithm& out : compiled_ensemble()) {
    if (!out.report.pass || !(out.report.error_bound < 0.5)) all_pass = false;
    worst_margin = std::max(
        worst_margin, out.report.max_observed_error - out.report.error_bound);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::ostringstream os;
  os << compiled_ensemble().size() << " instances, worst error-bound margin "
     << worst_margin << ", " << seconds << "s";
  detail = os.str();
  return all_pass && worst_margin <= 1e-9 && seconds < 300.0;
}

bool criterion_round_trip_closure(std::string& detail) {
  const ParityFixture parity;
  const CompiledAlgorithm base = compile(parity.form, parity.fn);
  int checked = 0;
  double worst_extraneous = 0.0, worst_bound = 0.0;
  const auto inspect = [&](const OneQueryAlgorithm& alg) {
    if (alg.n_prime + alg.m_prime > 20) return;
    const InterpolationCheck check = interpolate_acceptance(alg);
    worst_extraneous = std::max(worst_extraneous, check.max_extraneous);
    worst_bound = std::max(worst_bound, check.cube_bound);
    ++checked;
  };
  inspect(base.algorithm);
  for (const CompiledAlgorithm& out : compiled_ensemble())
    inspect(out.algorithm);
  std::ostringstream os;
  os << checked << " circuits interpolated, max extraneous coefficient "
     << worst_extraneous << ", max cube bound " << worst_bound;
  detail = os.str();
  return checked >= 10 && worst_extraneous <= 1e-8 &&
         worst_bound <= 1.0 + 1e-8;
}

struct Criterion {
  int id;
  const char* title;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "decoupling identity on the diagonal", criterion_decoupling_identity},
      {2, "decoupling cube bound and growth rate", criterion_decoupling_bound},
      {3, "polarization oracle equivalence", criterion_polarization_oracle},
      {4, "splitting preserves the sign-vector norm", criterion_norm_preservation},
      {5, "scale characterization of splits", criterion_gamma_characterization},
      {6, "weighted-gamma descent reaches the constant", criterion_grothendieck_machinery},
      {7, "unitary dilation", criterion_dilation},
      {8, "simulator contract", criterion_simulator_contract},
      {9, "parity end-to-end", criterion_parity_end_to_end},
      {10, "random exact ensemble end-to-end", criterion_ensemble_end_to_end},
      {11, "acceptance probability interpolates back", criterion_round_trip_closure},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %2d: %s (%.2fs) — %s\n", ok ? "PASS" : "FAIL",
                criterion.id, criterion.title, seconds, detail.c_str());
    if (!ok) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
