#include "polyq/quantum.hpp"

#include <cmath>
#include <random>
#include <string>

#include "polyq/norms.hpp"

namespace polyq {

namespace {

// Rows of W below this norm squared are dropped; the unitarity defect this
// introduces stays two orders below the 1e-10 contract.
constexpr double kPruneEigenvalue = 1e-12;

void fix_column_sign(Matrix& u, Index col) {
  for (Index i = 0; i < u.rows(); ++i) {
    if (std::abs(u(i, col)) > 1e-12) {
      if (u(i, col) < 0.0) u.col(col) = -u.col(col);
      return;
    }
  }
}

}  // namespace

Dilation dilate(const Matrix& b, double scale) {
  if (b.rows() < 1 || b.cols() < 1)
    throw std::invalid_argument("matrix must be non-empty");
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  const double bnorm = operator_norm(b);
  if (bnorm > scale * (1.0 + 1e-9))
    throw numeric_error("dilate: ||B|| = " + std::to_string(bnorm) +
                        " exceeds the scale " + std::to_string(scale));

  const Index n = b.rows(), m = b.cols();
  const Matrix top = b / scale;
  const Matrix gram = Matrix::Identity(m, m) - top.transpose() * top;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success)
    throw numeric_error("dilate: eigendecomposition failed");

  std::vector<Index> kept;
  for (Index i = 0; i < m; ++i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda < -1e-9)
      throw numeric_error("dilate: eigenvalue " + std::to_string(lambda) +
                          " signals a scale violation");
    if (lambda > kPruneEigenvalue) kept.push_back(i);
  }

  const Index k = n + static_cast<Index>(kept.size());
  Matrix u0(k, m);
  u0.topRows(n) = top;
  for (std::size_t r = 0; r < kept.size(); ++r)
    u0.row(n + static_cast<Index>(r)) =
        std::sqrt(es.eigenvalues()(kept[r])) *
        es.eigenvectors().col(kept[r]).transpose();

  Dilation out;
  out.b = b;
  out.scale = scale;
  out.rows = n;
  out.cols = m;
  if (k == m) {
    out.u = u0;
    return out;
  }
  if (k < m)
    throw numeric_error("dilate: isometry lost too many rows to pruning");
  Eigen::HouseholderQR<Matrix> qr(u0);
  const Matrix q = qr.householderQ();
  out.u.resize(k, k);
  out.u.leftCols(m) = u0;
  out.u.rightCols(k - m) = q.rightCols(k - m);
  for (Index col = m; col < k; ++col) fix_column_sign(out.u, col);
  return out;
}

OneQueryAlgorithm build_algorithm(const Matrix& a_prime, double scale,
                                  std::vector<int> origin_rows,
                                  std::vector<int> origin_cols) {
  const Index n = a_prime.rows(), m = a_prime.cols();
  const Matrix b =
      std::sqrt(static_cast<double>(n) * static_cast<double>(m)) * a_prime;
  OneQueryAlgorithm alg;
  alg.dilation = dilate(b, scale);  // checks scale >= ||B|| = dilation scale
  alg.n_prime = n;
  alg.m_prime = m;
  if (origin_rows.empty())
    for (Index i = 0; i < n; ++i) origin_rows.push_back(static_cast<int>(i));
  if (origin_cols.empty())
    for (Index j = 0; j < m; ++j) origin_cols.push_back(static_cast<int>(j));
  if (static_cast<Index>(origin_rows.size()) != n ||
      static_cast<Index>(origin_cols.size()) != m)
    throw std::invalid_argument("origin map length mismatch");
  alg.origin_rows = std::move(origin_rows);
  alg.origin_cols = std::move(origin_cols);
  alg.scale = scale;
  alg.bias = 1.0 / (2.0 * scale + 1.0);
  return alg;
}

namespace {

void check_signs(const Vector& x, Index expected, const char* what) {
  if (x.size() != expected)
    throw std::invalid_argument(std::string(what) + " has wrong length");
  for (Index i = 0; i < x.size(); ++i)
    if (x[i] != 1.0 && x[i] != -1.0)
      throw std::invalid_argument(std::string(what) + " must have +-1 entries");
}

}  // namespace

SimulationReport acceptance_probability(const OneQueryAlgorithm& alg,
                                        const Vector& x, const Vector& y) {
  check_signs(x, alg.n_prime, "x");
  check_signs(y, alg.m_prime, "y");
  const Index k = alg.dilation.u.rows();
  Vector yhat = Vector::Zero(k);
  yhat.head(alg.m_prime) = y / std::sqrt(static_cast<double>(alg.m_prime));
  const Vector image = alg.dilation.u * yhat;
  const double ip =
      x.dot(image.head(alg.n_prime)) / std::sqrt(static_cast<double>(alg.n_prime));

  SimulationReport report;
  report.r = 0.5 * (1.0 + ip);
  report.p_value =
      x.dot(alg.dilation.b * y) /
      std::sqrt(static_cast<double>(alg.n_prime) *
                static_cast<double>(alg.m_prime));
  report.q = (1.0 - alg.bias) * report.r;
  report.decision = report.q > 0.5 ? 1 : 0;
  report.error_bound = wrapper_error_bound(alg.scale, 0.0);
  return report;
}

double swap_test_statevector(const OneQueryAlgorithm& alg, const Vector& x,
                             const Vector& y) {
  check_signs(x, alg.n_prime, "x");
  check_signs(y, alg.m_prime, "y");
  const Index k = alg.dilation.u.rows();
  Vector psi = Vector::Zero(k);
  psi.head(alg.n_prime) = x / std::sqrt(static_cast<double>(alg.n_prime));
  Vector yhat = Vector::Zero(k);
  yhat.head(alg.m_prime) = y / std::sqrt(static_cast<double>(alg.m_prime));
  const Vector psi_prime = alg.dilation.u * yhat;

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Vector state(2 * k);
  state.head(k) = inv_sqrt2 * psi;        // control |0>
  state.tail(k) = inv_sqrt2 * psi_prime;  // control |1>
  double prob0 = 0.0;
  for (Index i = 0; i < k; ++i) {
    const double a0 = inv_sqrt2 * (state[i] + state[k + i]);
    prob0 += a0 * a0;
  }
  return prob0;
}

SimulationReport biased_decision(const OneQueryAlgorithm& alg, double r,
                                 double eps_prime,
                                 std::optional<std::uint64_t> seed) {
  if (r < -1e-9 || r > 1.0 + 1e-9)
    throw std::invalid_argument("acceptance probability outside [0, 1]");
  r = std::min(1.0, std::max(0.0, r));
  SimulationReport report;
  report.r = r;
  report.q = (1.0 - alg.bias) * r;
  report.decision = report.q > 0.5 ? 1 : 0;
  report.p_value = alg.scale * (2.0 * r - 1.0);
  report.error_bound = wrapper_error_bound(alg.scale, eps_prime);
  if (seed) {
    std::mt19937_64 rng(*seed);
    std::bernoulli_distribution bit(report.q);
    report.sampled_bit = bit(rng) ? 1 : 0;
  }
  return report;
}

double wrapper_error_bound(double scale, double eps_prime) {
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  if (!(eps_prime >= 0.0 && eps_prime < 0.5))
    throw std::invalid_argument("eps' must lie in [0, 1/2)");
  return (scale + eps_prime) / (2.0 * scale + 1.0);
}

}  // namespace polyq
