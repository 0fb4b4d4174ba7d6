#pragma once

#include <cstdint>
#include <vector>

#include "polyq/decouple.hpp"
#include "polyq/norms.hpp"
#include "polyq/poly.hpp"
#include "polyq/quantum.hpp"
#include "polyq/split.hpp"

namespace polyq {

// A claimed check did not hold on the supplied data (distinct from usage and
// capacity errors so the CLI can map it to its own exit code).
class check_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CompileConfig {
  double delta = 0.05;
  int denominator_cap = 64;
  long split_budget = 4096;
  double epsilon_input = 0.0;  // claimed approximation error, verified
  bool worst_case_rescale = false;  // use B(2) = 3 instead of the measured max
  std::uint64_t seed = 0;
};

struct CompileReport {
  bool used_general_path = false;  // went through decouple + rescale
  // rescaling stage (general path only)
  double epsilon_claimed = 0.0;
  double epsilon_measured = 0.0;   // of the supplied polynomial on the domain
  double cube_max_decoupled = 0.0;
  double rescale_constant = 0.0;   // C_d actually used
  double worst_case_constant = 0.0;  // B(2)
  double eps_prime_formula = 0.0;  // 1/2 - (1/2 - eps)/C_d
  // splitting stage
  double inf_to_one = 0.0;
  double optimizer_value = 0.0;
  double scale = 0.0;  // C
  double ratio = 0.0;  // C / inf-to-1
  long n_prime = 0, m_prime = 0;
  std::vector<long> row_copies, col_copies;
  // final bounds
  double eps_prime = 0.0;     // measured over the domain, drives the bound
  double error_bound = 0.0;   // (C + eps')/(2C + 1) with the achieved C
  double k_form_bound = 0.0;  // (K + eps')/(2K + 1), K taken at its upper bound
  double k_form_statement = 0.0;  // (K + eps')/(2K + 2) variant, reported only
  double max_observed_error = 0.0;
  bool pass = false;
  int query_count = 1;
};

struct CompiledAlgorithm {
  OneQueryAlgorithm algorithm;
  CompileReport report;
};

// Exact degree-2 block form entry (k = 2, block size n+1).
CompiledAlgorithm compile(const BlockMultilinearForm& form,
                          const PartialBooleanFunction& f,
                          const CompileConfig& config = {});

// General degree-2 polynomial entry: shift to 2q - 1, decouple, rescale.
CompiledAlgorithm compile(const MultilinearPolynomial& q,
                          const PartialBooleanFunction& f,
                          const CompileConfig& config = {});

// Total functions only: interpolates the truth table and requires degree <= 2.
CompiledAlgorithm compile(const PartialBooleanFunction& f,
                          const CompileConfig& config = {});

struct VerifyReport {
  double max_error = 0.0;
  std::vector<int> worst_point;
  double error_bound = 0.0;
  bool pass = false;
};

// Exact single-shot error of the algorithm over the domain of f, assignments
// lifted through the origin maps.
VerifyReport verify(const OneQueryAlgorithm& alg,
                    const PartialBooleanFunction& f, double eps_prime);

struct InterpolationCheck {
  bool structure_ok = false;  // Fourier support on the constant + cross pairs
  double max_extraneous = 0.0;
  double constant = 0.0;  // recovered dummy-dummy coefficient
  Matrix cross;           // recovered cross-block coefficient matrix
  double cube_bound = 0.0;  // |constant| + inf-to-1 of cross
};

// Interpolates the acceptance probability over the full lifted cube and
// checks that it is a degree-2 block-multilinear polynomial bounded by 1.
InterpolationCheck interpolate_acceptance(const OneQueryAlgorithm& alg,
                                          int max_total_vars = 20);

}  // namespace polyq
