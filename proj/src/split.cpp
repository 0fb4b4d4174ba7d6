#include "polyq/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace polyq {

Matrix diagonal_scaled(const Matrix& a, const Vector& w, const Vector& v) {
  if (w.size() != a.rows() || v.size() != a.cols())
    throw std::invalid_argument("weight length mismatch");
  if ((w.array() <= 0.0).any() || (v.array() <= 0.0).any())
    throw std::invalid_argument("weights must be strictly positive");
  return w.cwiseInverse().asDiagonal() * a * v.cwiseInverse().asDiagonal();
}

namespace {

// Squared weights normalized so the smallest is 1.
Vector squared_ratios(const Vector& w) {
  if ((w.array() <= 0.0).any())
    throw std::invalid_argument("weights must be strictly positive");
  const Vector sq = w.array().square().matrix();
  return sq / sq.minCoeff();
}

struct SideFit {
  std::vector<long> copies;
  double fit = 0.0;
  bool feasible = false;
};

SideFit round_side(const Vector& ratios, long denominator, long copy_cap) {
  SideFit out;
  out.feasible = true;
  out.copies.resize(ratios.size());
  for (Index i = 0; i < ratios.size(); ++i) {
    const double target = ratios[i] * static_cast<double>(denominator);
    const long k = std::max<long>(1, std::llround(target));
    if (k > copy_cap) {
      out.feasible = false;
      return out;
    }
    out.copies[i] = k;
    out.fit = std::max(out.fit, std::abs(k / target - 1.0));
  }
  return out;
}

}  // namespace

SplitPlan rationalize_weights(const Vector& w, const Vector& v, int cap) {
  if (cap < 1) throw std::invalid_argument("denominator cap must be >= 1");
  const Vector rw = squared_ratios(w);
  const Vector rv = squared_ratios(v);
  const long copy_cap = static_cast<long>(cap) * cap;

  SplitPlan best;
  best.row_target = w;
  best.col_target = v;
  best.denominator_cap = cap;
  bool have_best = false;
  double best_fit = 0.0;
  for (long d = 1; d <= cap; ++d) {
    const SideFit rows = round_side(rw, d, copy_cap);
    const SideFit cols = round_side(rv, d, copy_cap);
    if (!rows.feasible || !cols.feasible) continue;
    const double fit = std::max(rows.fit, cols.fit);
    if (!have_best || fit < best_fit) {
      best.row_copies = rows.copies;
      best.col_copies = cols.copies;
      best.row_fit = rows.fit;
      best.col_fit = cols.fit;
      best_fit = fit;
      have_best = true;
    }
    if (have_best && best_fit <= 1e-3) break;
  }
  if (!have_best)
    throw numeric_error(
        "rationalize_weights: no denominator <= " + std::to_string(cap) +
        " keeps every multiplicity within cap^2; weight spread " +
        std::to_string(std::max(rw.maxCoeff(), rv.maxCoeff())));
  return best;
}

SplitMatrix apply_split(const Matrix& a, const SplitPlan& plan) {
  if (static_cast<Index>(plan.row_copies.size()) != a.rows() ||
      static_cast<Index>(plan.col_copies.size()) != a.cols())
    throw std::invalid_argument("split plan dimension mismatch");
  for (long k : plan.row_copies)
    if (k < 1) throw std::invalid_argument("row multiplicity below 1");
  for (long l : plan.col_copies)
    if (l < 1) throw std::invalid_argument("column multiplicity below 1");

  SplitMatrix out;
  out.plan = plan;
  for (Index i = 0; i < a.rows(); ++i)
    for (long c = 0; c < plan.row_copies[i]; ++c)
      out.origin_row.push_back(static_cast<int>(i));
  for (Index j = 0; j < a.cols(); ++j)
    for (long c = 0; c < plan.col_copies[j]; ++c)
      out.origin_col.push_back(static_cast<int>(j));

  out.matrix.resize(static_cast<Index>(out.origin_row.size()),
                    static_cast<Index>(out.origin_col.size()));
  for (std::size_t r = 0; r < out.origin_row.size(); ++r)
    for (std::size_t c = 0; c < out.origin_col.size(); ++c) {
      const int i = out.origin_row[r];
      const int j = out.origin_col[c];
      out.matrix(r, c) = a(i, j) / (static_cast<double>(plan.row_copies[i]) *
                                    static_cast<double>(plan.col_copies[j]));
    }
  return out;
}

std::pair<Vector, Vector> lift_assignment(const Vector& x, const Vector& y,
                                          const SplitPlan& plan) {
  if (static_cast<std::size_t>(x.size()) != plan.row_copies.size() ||
      static_cast<std::size_t>(y.size()) != plan.col_copies.size())
    throw std::invalid_argument("assignment dimension mismatch");
  const long rows = std::accumulate(plan.row_copies.begin(),
                                    plan.row_copies.end(), 0L);
  const long cols = std::accumulate(plan.col_copies.begin(),
                                    plan.col_copies.end(), 0L);
  Vector xs(rows), ys(cols);
  Index r = 0;
  for (Index i = 0; i < x.size(); ++i)
    for (long c = 0; c < plan.row_copies[i]; ++c) xs[r++] = x[i];
  Index s = 0;
  for (Index j = 0; j < y.size(); ++j)
    for (long c = 0; c < plan.col_copies[j]; ++c) ys[s++] = y[j];
  return {std::move(xs), std::move(ys)};
}

namespace {

Vector realized_weights(const std::vector<long>& copies) {
  Vector w(copies.size());
  for (std::size_t i = 0; i < copies.size(); ++i)
    w[i] = std::sqrt(static_cast<double>(copies[i]));
  return w;
}

long plan_area(const SplitPlan& plan) {
  const long rows = std::accumulate(plan.row_copies.begin(),
                                    plan.row_copies.end(), 0L);
  const long cols = std::accumulate(plan.col_copies.begin(),
                                    plan.col_copies.end(), 0L);
  return rows * cols;
}

SplitPlan plan_for_denominator(const Vector& w, const Vector& v, long d,
                               int cap) {
  const long copy_cap = static_cast<long>(cap) * cap;
  const SideFit rows = round_side(squared_ratios(w), d, copy_cap);
  const SideFit cols = round_side(squared_ratios(v), d, copy_cap);
  if (!rows.feasible || !cols.feasible)
    throw numeric_error("infeasible denominator");
  SplitPlan p;
  p.row_target = w;
  p.col_target = v;
  p.denominator_cap = cap;
  p.row_copies = rows.copies;
  p.col_copies = cols.copies;
  p.row_fit = rows.fit;
  p.col_fit = cols.fit;
  return p;
}

}  // namespace

ReduceResult reduce_scale_ratio(const Matrix& a, const ReduceOptions& options) {
  if (!(options.delta > 0.0))
    throw std::invalid_argument("delta must be positive");
  const StrippedMatrix stripped = strip_zeros(a);
  const Matrix& core = stripped.matrix;

  ReduceResult out;
  out.inf_to_one = inf_to_one_norm(core).value;
  out.weights = minimize_weighted_gamma(core, options.minimize);
  out.optimizer_value = out.weights.value;

  SplitPlan plan =
      rationalize_weights(out.weights.w, out.weights.v, options.denominator_cap);

  // Realized scale per the split characterization; rescan denominators when
  // rounding cost the plan more than the rationalization tolerance.
  auto realized = [&](const SplitPlan& p) {
    return weighted_gamma(core, realized_weights(p.row_copies),
                          realized_weights(p.col_copies));
  };
  double value = realized(plan);
  if (value > out.optimizer_value * (1.0 + 1e-3) ||
      plan_area(plan) > options.split_budget) {
    bool found = plan_area(plan) <= options.split_budget;
    for (long d = 1; d <= options.denominator_cap; ++d) {
      SplitPlan cand;
      try {
        cand = plan_for_denominator(out.weights.w, out.weights.v, d,
                                    options.denominator_cap);
      } catch (const numeric_error&) {
        continue;
      }
      if (plan_area(cand) > options.split_budget) continue;
      const double cand_value = realized(cand);
      if (!found || cand_value < value) {
        value = cand_value;
        plan = cand;
        found = true;
      }
    }
    if (!found)
      throw capacity_error("reduce_scale_ratio: split budget " +
                           std::to_string(options.split_budget) +
                           " admits no feasible plan up to denominator " +
                           std::to_string(options.denominator_cap));
  }

  out.split = apply_split(core, plan);
  for (int r : out.split.origin_row)
    out.row_map.push_back(stripped.row_map[r]);
  for (int c : out.split.origin_col)
    out.col_map.push_back(stripped.col_map[c]);
  out.scale = dilation_scale(out.split.matrix);
  out.ratio = out.scale / out.inf_to_one;
  const double k_upper = grothendieck_constant_bounds().second;
  out.ok = out.ratio <= k_upper + options.delta + 1e-12;
  return out;
}

}  // namespace polyq
