#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "polyq/common.hpp"

namespace polyq {

// Largest singular value.
double operator_norm(const Matrix& a);

struct SignVectorPair {
  Vector x, y;  // +-1 entries
  double value = 0.0;
  bool exact = true;
};

// Max of x^T A y over sign vectors (the infinity-to-1 norm). Exact mode
// enumerates the smaller dimension, closing the other side as sign(A^T x);
// when both dimensions exceed the cap, a seeded alternating ascent is used
// if allowed (flagged non-exact), otherwise a capacity error is raised.
SignVectorPair inf_to_one_norm(const Matrix& a, int enumeration_cap = 24,
                               bool allow_heuristic = false,
                               std::uint64_t seed = 0);

// ||A|| * sqrt(rows*cols): the scale the dilation of the corresponding
// bilinear form requires.
double dilation_scale(const Matrix& a);

// dilation_scale / inf-to-1; >= 1 for every nonzero matrix.
double scale_ratio(const Matrix& a);

struct StrippedMatrix {
  Matrix matrix;
  std::vector<int> row_map, col_map;  // stripped index -> original index
};

// Removes zero rows and columns; both the operator norm and the inf-to-1
// norm are unchanged.
StrippedMatrix strip_zeros(const Matrix& a);

// ||D_w^-1 A D_v^-1|| * ||w|| * ||v||: the dilation scale a split realizing
// the weights (w, v) achieves.
double weighted_gamma(const Matrix& a, const Vector& w, const Vector& v);

struct WeightPair {
  Vector w, v;         // strictly positive, unit norm
  double value = 0.0;  // weighted_gamma(a, w, v)
  bool converged = false;
};

struct MinimizeOptions {
  int restarts = 20;
  int max_iters = 5000;
  double rel_tol = 1e-10;
  std::uint64_t seed = 0;
};

// Adaptive gradient descent over log-weights for the infimum of
// weighted_gamma. The infimum equals the Grothendieck norm of A, so any
// returned value is an upper bound on it. Requires A without zero
// rows/columns (strip first).
WeightPair minimize_weighted_gamma(const Matrix& a,
                                   const MinimizeOptions& options = {});

// Lower bound on the Grothendieck norm: alternating maximization of
// sum a_ij <p_i, q_j> over unit vectors in R^r. With r = 1 this degenerates
// to a sign-vector ascent for the inf-to-1 norm.
double grothendieck_lower_bound(const Matrix& a, int r, int restarts = 50,
                                std::uint64_t seed = 0);

// (pi/2, pi/(2 ln(1+sqrt 2))).
std::pair<double, double> grothendieck_constant_bounds();

struct NormReport {
  double spectral = 0.0;
  double inf_to_one = 0.0;
  double gamma = 0.0;    // spectral * sqrt(rows*cols)
  double g_ratio = 0.0;  // gamma / inf_to_one
  double grothendieck_upper = 0.0;
  double ratio_G = 0.0;  // grothendieck_upper / inf_to_one
  SignVectorPair sign_witness;
  WeightPair weights;
};

NormReport norm_report(const Matrix& a, const MinimizeOptions& options = {},
                       int enumeration_cap = 24, bool allow_heuristic = false);

}  // namespace polyq
