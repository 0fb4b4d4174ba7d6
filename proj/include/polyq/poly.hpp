#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "polyq/common.hpp"

namespace polyq {

// Partial Boolean function on a subset of the {-1,+1}^n cube, values in {0,1}.
struct PartialBooleanFunction {
  int n = 0;
  std::vector<std::pair<std::vector<int>, int>> points;  // (+-1 point, value)

  void validate() const;
  bool total() const;
};

// Multilinear polynomial over x_1..x_n in the Fourier basis. Terms are keyed
// by variable subsets encoded as bitmasks (bit i-1 <-> x_i). Zero
// coefficients are dropped so the degree is recoverable from the term set.
class MultilinearPolynomial {
 public:
  MultilinearPolynomial() = default;
  MultilinearPolynomial(int n, std::map<std::uint64_t, double> terms);

  int variable_count() const { return n_; }
  int degree() const;
  double coefficient(std::uint64_t subset) const;
  const std::map<std::uint64_t, double>& terms() const { return terms_; }

 private:
  int n_ = 0;
  std::map<std::uint64_t, double> terms_;
};

// Form over k blocks of block_size variables each; index 0 of every block is
// the dummy slot, set to 1 on diagonal inputs. Every monomial takes exactly
// one index per block.
class BlockMultilinearForm {
 public:
  BlockMultilinearForm() = default;
  BlockMultilinearForm(int k, int block_size,
                       std::map<std::vector<int>, double> coeffs = {});

  int block_count() const { return k_; }
  int block_size() const { return block_size_; }
  const std::map<std::vector<int>, double>& coefficients() const {
    return coeffs_;
  }
  // Accumulates into the monomial, erasing it when the sum reaches zero.
  void add(const std::vector<int>& idx, double value);

 private:
  int k_ = 1;
  int block_size_ = 1;
  std::map<std::vector<int>, double> coeffs_;
};

double evaluate(const MultilinearPolynomial& p, const Vector& x);
double evaluate(const BlockMultilinearForm& form,
                const std::vector<Vector>& blocks);

// Form value with every block set to (1, x).
double diagonal_restriction(const BlockMultilinearForm& form, const Vector& x);

// Exact max of |form| over all +-1 assignments. The last block is closed
// analytically (sum of absolute coefficients), the remaining blocks are
// enumerated with one sign per block fixed by symmetry; enumeration_cap
// bounds the number of enumerated variables.
double cube_max_abs(const BlockMultilinearForm& form, int enumeration_cap = 24);

// Exact (min, max) of p over the +-1 cube.
std::pair<double, double> cube_range(const MultilinearPolynomial& p,
                                     int enumeration_cap = 24);

// Unique multilinear interpolation of a full truth table; table[i] is the
// value at cube_point(i, n).
MultilinearPolynomial fourier_expand(int n, const std::vector<double>& table);

struct ApproximationReport {
  double max_error = 0.0;
  std::vector<int> witness;  // domain point with the largest error
  bool pass = false;
};

// Max over the domain of |value(x) - f(x)|; pass iff <= epsilon.
ApproximationReport check_approximation(
    const std::function<double(const Vector&)>& value,
    const PartialBooleanFunction& f, double epsilon);

// Degree-2 form <-> (block_size x block_size) matrix, dummy slot = index 0.
Matrix coefficient_matrix(const BlockMultilinearForm& form);
BlockMultilinearForm form_from_matrix(const Matrix& a);

// Subset encoding used by the JSON schema: sorted 1-based variable lists.
std::uint64_t subset_mask(const std::vector<int>& vars, int n);
std::vector<int> subset_vars(std::uint64_t mask);

}  // namespace polyq
