#include "polyq/poly.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>

namespace polyq {

void PartialBooleanFunction::validate() const {
  if (n < 1 || n > 63) throw std::invalid_argument("function arity out of range");
  if (points.empty()) throw std::invalid_argument("domain must be non-empty");
  std::set<std::uint64_t> seen;
  for (const auto& [x, v] : points) {
    if (static_cast<int>(x.size()) != n)
      throw std::invalid_argument("domain point has wrong length");
    std::uint64_t idx = 0;
    for (int i = 0; i < n; ++i) {
      if (x[i] != 1 && x[i] != -1)
        throw std::invalid_argument("domain point entries must be +-1");
      if (x[i] < 0) idx |= std::uint64_t{1} << i;
    }
    if (v != 0 && v != 1)
      throw std::invalid_argument("function values must be 0 or 1");
    if (!seen.insert(idx).second)
      throw std::invalid_argument("duplicate domain point");
  }
}

bool PartialBooleanFunction::total() const {
  return n <= 24 && points.size() == (std::size_t{1} << n);
}

MultilinearPolynomial::MultilinearPolynomial(int n,
                                             std::map<std::uint64_t, double> terms)
    : n_(n), terms_(std::move(terms)) {
  if (n < 0 || n > 63) throw std::invalid_argument("variable count out of range");
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (n < 64 && (it->first >> n) != 0)
      throw std::invalid_argument("term references a variable beyond n");
    if (!std::isfinite(it->second))
      throw std::invalid_argument("non-finite coefficient");
    it = (it->second == 0.0) ? terms_.erase(it) : std::next(it);
  }
}

int MultilinearPolynomial::degree() const {
  int d = 0;
  for (const auto& [mask, c] : terms_) d = std::max(d, std::popcount(mask));
  return d;
}

double MultilinearPolynomial::coefficient(std::uint64_t subset) const {
  auto it = terms_.find(subset);
  return it == terms_.end() ? 0.0 : it->second;
}

BlockMultilinearForm::BlockMultilinearForm(int k, int block_size,
                                           std::map<std::vector<int>, double> coeffs)
    : k_(k), block_size_(block_size), coeffs_(std::move(coeffs)) {
  if (k < 1) throw std::invalid_argument("block count must be >= 1");
  if (block_size < 1) throw std::invalid_argument("block size must be >= 1");
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    const auto& idx = it->first;
    if (static_cast<int>(idx.size()) != k_)
      throw std::invalid_argument("monomial must take one index per block");
    for (int i : idx)
      if (i < 0 || i >= block_size_)
        throw std::invalid_argument("monomial index outside block");
    if (!std::isfinite(it->second))
      throw std::invalid_argument("non-finite coefficient");
    it = (it->second == 0.0) ? coeffs_.erase(it) : std::next(it);
  }
}

void BlockMultilinearForm::add(const std::vector<int>& idx, double value) {
  if (static_cast<int>(idx.size()) != k_)
    throw std::invalid_argument("monomial must take one index per block");
  for (int i : idx)
    if (i < 0 || i >= block_size_)
      throw std::invalid_argument("monomial index outside block");
  double& c = coeffs_[idx];
  c += value;
  if (c == 0.0) coeffs_.erase(idx);
}

double evaluate(const MultilinearPolynomial& p, const Vector& x) {
  if (x.size() != p.variable_count())
    throw std::invalid_argument("point dimension mismatch");
  double sum = 0.0;
  for (const auto& [mask, c] : p.terms()) {
    double prod = c;
    for (std::uint64_t m = mask; m != 0; m &= m - 1)
      prod *= x[std::countr_zero(m)];
    sum += prod;
  }
  return sum;
}

double evaluate(const BlockMultilinearForm& form,
                const std::vector<Vector>& blocks) {
  if (static_cast<int>(blocks.size()) != form.block_count())
    throw std::invalid_argument("block count mismatch");
  for (const Vector& z : blocks)
    if (z.size() != form.block_size())
      throw std::invalid_argument("block length mismatch");
  double sum = 0.0;
  for (const auto& [idx, c] : form.coefficients()) {
    double prod = c;
    for (std::size_t j = 0; j < idx.size(); ++j) prod *= blocks[j][idx[j]];
    sum += prod;
  }
  return sum;
}

double diagonal_restriction(const BlockMultilinearForm& form, const Vector& x) {
  if (x.size() != form.block_size() - 1)
    throw std::invalid_argument("point dimension mismatch");
  Vector ext(form.block_size());
  ext[0] = 1.0;
  ext.tail(x.size()) = x;
  return evaluate(form, std::vector<Vector>(form.block_count(), ext));
}

namespace {

// buf[level] holds the dense coefficient tensor over the blocks not yet
// assigned (size block_size^(k-level), leading index = next block).
double cube_max_rec(std::vector<std::vector<double>>& buf, int level, int bs,
                    int k) {
  const std::vector<double>& state = buf[level];
  if (level == k - 1) {
    double s = 0.0;
    for (double c : state) s += std::abs(c);
    return s;
  }
  std::vector<double>& child = buf[level + 1];
  const std::size_t stride = child.size();
  double best = 0.0;
  // Flipping a whole block only negates the form, so the first variable of
  // every enumerated block can be pinned to +1.
  const std::uint64_t masks = std::uint64_t{1} << (bs - 1);
  for (std::uint64_t m = 0; m < masks; ++m) {
    for (std::size_t r = 0; r < stride; ++r) {
      double acc = state[r];
      for (int b = 1; b < bs; ++b) {
        const double v = state[b * stride + r];
        acc += ((m >> (b - 1)) & 1u) ? -v : v;
      }
      child[r] = acc;
    }
    best = std::max(best, cube_max_rec(buf, level + 1, bs, k));
  }
  return best;
}

}  // namespace

double cube_max_abs(const BlockMultilinearForm& form, int enumeration_cap) {
  const int k = form.block_count();
  const int bs = form.block_size();
  const long enumerated = static_cast<long>(k - 1) * bs;
  if (enumerated > enumeration_cap)
    throw capacity_error("cube_max_abs: " + std::to_string(enumerated) +
                         " variables to enumerate exceed cap " +
                         std::to_string(enumeration_cap));
  std::vector<std::vector<double>> buf(k);
  std::size_t size = bs;
  for (int level = k - 1; level >= 0; --level) {
    buf[level].assign(size, 0.0);
    size *= bs;
  }
  for (const auto& [idx, c] : form.coefficients()) {
    std::size_t flat = 0;
    for (int j = 0; j < k; ++j) flat = flat * bs + idx[j];
    buf[0][flat] = c;
  }
  return cube_max_rec(buf, 0, bs, k);
}

namespace {

// In-place Walsh transform matching the cube_point sign convention:
// out[m] = sum_T in[T] * (-1)^popcount(m & T).
void walsh_transform(std::vector<double>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1)
    for (std::size_t i = 0; i < a.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const double u = a[j], v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
}

}  // namespace

std::pair<double, double> cube_range(const MultilinearPolynomial& p,
                                     int enumeration_cap) {
  const int n = p.variable_count();
  if (n > enumeration_cap)
    throw capacity_error("cube_range: dimension exceeds enumeration cap");
  std::vector<double> vals(std::size_t{1} << n, 0.0);
  for (const auto& [mask, c] : p.terms()) vals[mask] = c;
  walsh_transform(vals);
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  return {*lo, *hi};
}

MultilinearPolynomial fourier_expand(int n, const std::vector<double>& table) {
  if (n < 0 || n > 20)
    throw capacity_error("fourier_expand: supported up to n = 20");
  if (table.size() != (std::size_t{1} << n))
    throw std::invalid_argument("truth table must list all 2^n values");
  std::vector<double> coef = table;
  walsh_transform(coef);
  const double scale = 1.0 / static_cast<double>(std::size_t{1} << n);
  std::map<std::uint64_t, double> terms;
  for (std::size_t mask = 0; mask < coef.size(); ++mask)
    if (coef[mask] != 0.0) terms[mask] = coef[mask] * scale;
  return MultilinearPolynomial(n, std::move(terms));
}

ApproximationReport check_approximation(
    const std::function<double(const Vector&)>& value,
    const PartialBooleanFunction& f, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 0.5))
    throw std::invalid_argument("epsilon must lie in [0, 1/2)");
  f.validate();
  ApproximationReport report;
  for (const auto& [x, fx] : f.points) {
    Vector xv(f.n);
    for (int i = 0; i < f.n; ++i) xv[i] = x[i];
    const double err = std::abs(value(xv) - fx);
    if (report.witness.empty() || err > report.max_error) {
      report.max_error = err;
      report.witness = x;
    }
  }
  report.pass = report.max_error <= epsilon;
  return report;
}

Matrix coefficient_matrix(const BlockMultilinearForm& form) {
  if (form.block_count() != 2)
    throw std::invalid_argument("coefficient matrix requires exactly 2 blocks");
  Matrix a = Matrix::Zero(form.block_size(), form.block_size());
  for (const auto& [idx, c] : form.coefficients()) a(idx[0], idx[1]) = c;
  return a;
}

BlockMultilinearForm form_from_matrix(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1)
    throw std::invalid_argument("matrix must be non-empty");
  if (a.rows() != a.cols())
    throw std::invalid_argument("uniform block size requires a square matrix");
  if (!a.allFinite()) throw std::invalid_argument("non-finite matrix entry");
  BlockMultilinearForm form(2, static_cast<int>(a.rows()));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0)
        form.add({static_cast<int>(i), static_cast<int>(j)}, a(i, j));
  return form;
}

std::uint64_t subset_mask(const std::vector<int>& vars, int n) {
  std::uint64_t mask = 0;
  int prev = 0;
  for (int v : vars) {
    if (v < 1 || v > n) throw std::invalid_argument("variable index out of range");
    if (v <= prev) throw std::invalid_argument("variables must be sorted and unique");
    mask |= std::uint64_t{1} << (v - 1);
    prev = v;
  }
  return mask;
}

std::vector<int> subset_vars(std::uint64_t mask) {
  std::vector<int> vars;
  for (std::uint64_t m = mask; m != 0; m &= m - 1)
    vars.push_back(std::countr_zero(m) + 1);
  return vars;
}

}  // namespace polyq
