#include "polyq/decouple.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace polyq {

namespace {

// Number of block-subset/bijection pairs a term of size s fans out to.
std::size_t fanout(int d, int s) {
  std::size_t binom = 1;
  for (int t = 1; t <= s; ++t) binom = binom * (d - t + 1) / t;
  std::size_t fact = 1;
  for (int t = 2; t <= s; ++t) fact *= t;
  return binom * fact;
}

}  // namespace

DecouplingResult decouple(const MultilinearPolynomial& p, int d,
                          const DecoupleLimits& limits) {
  if (d < 1 || d < p.degree())
    throw std::invalid_argument("block count below polynomial degree");
  if (d > limits.max_blocks)
    throw capacity_error("decouple: d exceeds block cap " +
                         std::to_string(limits.max_blocks));
  std::size_t monomials = 0;
  for (const auto& [mask, c] : p.terms()) {
    monomials += fanout(d, std::popcount(mask));
    if (monomials > limits.max_monomials)
      throw capacity_error("decouple: monomial fan-out exceeds cap");
  }

  const int n = p.variable_count();
  BlockMultilinearForm form(d, n + 1);
  std::vector<int> idx(d);
  for (const auto& [mask, c] : p.terms()) {
    std::vector<int> vars = subset_vars(mask);
    const int s = static_cast<int>(vars.size());
    double factor = c;  // (d-s)!/d! = 1/(d (d-1) ... (d-s+1))
    for (int t = 0; t < s; ++t) factor /= static_cast<double>(d - t);

    std::vector<int> blocks(s);
    std::iota(blocks.begin(), blocks.end(), 0);
    while (true) {
      std::vector<int> perm = vars;
      do {
        std::fill(idx.begin(), idx.end(), 0);
        for (int r = 0; r < s; ++r) idx[blocks[r]] = perm[r];
        form.add(idx, factor);
      } while (std::next_permutation(perm.begin(), perm.end()));

      // next s-combination of [0, d)
      int pos = s - 1;
      while (pos >= 0 && blocks[pos] == d - s + pos) --pos;
      if (pos < 0) break;
      ++blocks[pos];
      for (int t = pos + 1; t < s; ++t) blocks[t] = blocks[t - 1] + 1;
    }
  }
  return {std::move(form), decoupling_bound(d), d};
}

double evaluate_homogenized(const MultilinearPolynomial& p, int d,
                            const Vector& z) {
  if (d < p.degree())
    throw std::invalid_argument("homogenization degree below polynomial degree");
  if (z.size() != p.variable_count() + 1)
    throw std::invalid_argument("point dimension mismatch");
  double sum = 0.0;
  for (const auto& [mask, c] : p.terms()) {
    double prod = c;
    for (int t = std::popcount(mask); t < d; ++t) prod *= z[0];
    for (std::uint64_t m = mask; m != 0; m &= m - 1)
      prod *= z[std::countr_zero(m) + 1];
    sum += prod;
  }
  return sum;
}

double polarization_value(const MultilinearPolynomial& p, int d,
                          const std::vector<Vector>& blocks) {
  if (d < 1 || d > 20)
    throw capacity_error("polarization_value: d outside [1, 20]");
  if (static_cast<int>(blocks.size()) != d)
    throw std::invalid_argument("block count mismatch");
  const Index len = p.variable_count() + 1;
  for (const Vector& z : blocks)
    if (z.size() != len) throw std::invalid_argument("block length mismatch");

  double total = 0.0;
  for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << d); ++subset) {
    const int t = std::popcount(subset);
    Vector mean = Vector::Zero(len);
    for (std::uint64_t m = subset; m != 0; m &= m - 1)
      mean += blocks[std::countr_zero(m)];
    mean /= static_cast<double>(t);
    double term = evaluate_homogenized(p, d, mean);
    for (int r = 0; r < d; ++r) term *= t;
    total += ((d - t) % 2 == 0) ? term : -term;
  }
  double fact = 1.0;
  for (int r = 2; r <= d; ++r) fact *= r;
  return total / fact;
}

double decoupling_bound(int d) {
  if (d < 1 || d > 30)
    throw std::invalid_argument("decoupling_bound: d outside [1, 30]");
  namespace mp = boost::multiprecision;
  mp::cpp_int numerator = 0, binom = 1, factorial = 1;
  for (int s = 1; s <= d; ++s) {
    binom = binom * (d - s + 1) / s;
    mp::cpp_int power = 1;
    for (int t = 0; t < d; ++t) power *= s;
    numerator += binom * power;
    factorial *= s;
  }
  return mp::cpp_rational(numerator, factorial).convert_to<double>();
}

BlockMultilinearForm rescale_to_probability_range(
    const BlockMultilinearForm& form, double scale) {
  if (!(scale > 0.0))
    throw std::invalid_argument("rescale: scale must be positive");
  BlockMultilinearForm out(form.block_count(), form.block_size());
  const double inv = 1.0 / (2.0 * scale);
  for (const auto& [idx, c] : form.coefficients()) out.add(idx, c * inv);
  out.add(std::vector<int>(form.block_count(), 0), 0.5);
  return out;
}

double rescaled_epsilon(double eps, double scale) {
  if (!(scale > 0.0))
    throw std::invalid_argument("rescaled_epsilon: scale must be positive");
  return 0.5 - (0.5 - eps) / scale;
}

}  // namespace polyq
