#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polyq/common.hpp"

namespace polyq {

struct Dilation {
  Matrix b;            // embedded matrix, ||b|| <= scale
  double scale = 1.0;  // C
  Matrix u;            // k x k orthogonal; top-left rows x cols block = b/scale
  Index rows = 0, cols = 0;
};

// Stacks b/scale on top of W = sqrt(Lambda) V^T from the eigendecomposition
// of I - (b/scale)^T (b/scale), prunes the all-zero rows of W, and completes
// the columns to an orthogonal matrix (deterministic QR completion, first
// significant entry of each added column positive).
Dilation dilate(const Matrix& b, double scale);

struct OneQueryAlgorithm {
  Dilation dilation;
  Index n_prime = 0, m_prime = 0;
  std::vector<int> origin_rows, origin_cols;  // split index -> original index
  double scale = 1.0;                         // C
  double bias = 0.0;                          // 1/(2C+1)
};

// Wraps sqrt(n'm') * A' at scale C (requires C >= ||A'|| sqrt(n'm')).
OneQueryAlgorithm build_algorithm(const Matrix& a_prime, double scale,
                                  std::vector<int> origin_rows = {},
                                  std::vector<int> origin_cols = {});

struct SimulationReport {
  double r = 0.0;        // raw acceptance probability
  double q = 0.0;        // biased acceptance probability
  int decision = 0;      // 1 iff q > 1/2
  double p_value = 0.0;  // exact bilinear value x^T A' y
  double error_bound = 0.0;
  std::optional<int> sampled_bit;
};

// Analytic path: r = (1 + <x_hat|U|y_hat>)/2 with unit-normalized,
// zero-padded sign vectors; fills q/decision with the zero-eps wrapper.
SimulationReport acceptance_probability(const OneQueryAlgorithm& alg,
                                        const Vector& x, const Vector& y);

// Statevector path: prepares (|0>|psi> + |1>|psi'>)/sqrt(2) with psi = x_hat
// and psi' = U y_hat, applies the Hadamard on the control pair-wise and sums
// the squared control-0 amplitudes.
double swap_test_statevector(const OneQueryAlgorithm& alg, const Vector& x,
                             const Vector& y);

// Output-1 probability after prepending "answer 0 with probability
// 1/(2C+1)"; optional seed also samples one concrete output bit.
SimulationReport biased_decision(const OneQueryAlgorithm& alg, double r,
                                 double eps_prime = 0.0,
                                 std::optional<std::uint64_t> seed = {});

// (C + eps')/(2C + 1); strictly below 1/2 iff eps' < 1/2.
double wrapper_error_bound(double scale, double eps_prime);

}  // namespace polyq
