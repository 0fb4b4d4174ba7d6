#pragma once

#include <utility>
#include <vector>

#include "polyq/norms.hpp"

namespace polyq {

struct SplitPlan {
  std::vector<long> row_copies, col_copies;  // multiplicities, all >= 1
  Vector row_target, col_target;             // the weights being realized
  int denominator_cap = 64;
  double row_fit = 0.0;  // max relative error of realized squared weights
  double col_fit = 0.0;  // against the target ratios
};

// D_w^-1 A D_v^-1.
Matrix diagonal_scaled(const Matrix& a, const Vector& w, const Vector& v);

// Integer multiplicities approximating the squared-weight ratios with a
// single common denominator D <= cap (smallest D whose fit is within 1e-3,
// otherwise the best fit found). Multiplicities are capped at cap^2.
SplitPlan rationalize_weights(const Vector& w, const Vector& v, int cap = 64);

struct SplitMatrix {
  Matrix matrix;  // (sum k_i) x (sum l_j); entry = a_ij / (k_i l_j)
  std::vector<int> origin_row, origin_col;  // split index -> source index
  SplitPlan plan;
};

SplitMatrix apply_split(const Matrix& a, const SplitPlan& plan);

// Replicates +-1 assignments along the plan; the bilinear value is preserved
// exactly.
std::pair<Vector, Vector> lift_assignment(const Vector& x, const Vector& y,
                                          const SplitPlan& plan);

struct ReduceOptions {
  double delta = 0.05;
  int denominator_cap = 64;
  long split_budget = 4096;  // cap on rows(A') * cols(A')
  MinimizeOptions minimize;
};

struct ReduceResult {
  SplitMatrix split;                  // of the stripped matrix
  std::vector<int> row_map, col_map;  // split index -> index in the input A
  double scale = 0.0;                 // C = dilation_scale(split.matrix)
  double inf_to_one = 0.0;            // of the input (splitting preserves it)
  double ratio = 0.0;                 // scale / inf_to_one
  double optimizer_value = 0.0;       // weighted gamma at the optimum found
  WeightPair weights;
  bool ok = false;  // ratio <= K_upper + delta
};

// strip_zeros -> minimize_weighted_gamma -> rationalize_weights ->
// apply_split, with a denominator rescan when the realized scale lands too
// far above the optimizer value.
ReduceResult reduce_scale_ratio(const Matrix& a,
                                const ReduceOptions& options = {});

}  // namespace polyq
