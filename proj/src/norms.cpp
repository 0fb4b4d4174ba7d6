#include "polyq/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace polyq {

double operator_norm(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1)
    throw std::invalid_argument("matrix must be non-empty");
  if (!a.allFinite()) throw std::invalid_argument("non-finite matrix entry");
  if (a.isZero(0.0)) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

namespace {

// Exact sweep over sign assignments of the rows of m (first sign pinned to +1
// by symmetry); the column side is closed analytically.
SignVectorPair enumerate_rows(const Matrix& m) {
  const Index rows = m.rows();
  SignVectorPair best;
  best.value = -1.0;
  Vector x(rows), s(m.cols());
  const std::uint64_t count = std::uint64_t{1} << (rows - 1);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    x[0] = 1.0;
    for (Index i = 1; i < rows; ++i)
      x[i] = ((mask >> (i - 1)) & 1u) ? -1.0 : 1.0;
    s.noalias() = m.transpose() * x;
    const double val = s.lpNorm<1>();
    if (val > best.value) {
      best.value = val;
      best.x = x;
      best.y = s.unaryExpr([](double t) { return t < 0.0 ? -1.0 : 1.0; });
    }
  }
  return best;
}

SignVectorPair ascend_signs(const Matrix& a, int restarts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SignVectorPair best;
  best.value = -1.0;
  best.exact = false;
  for (int r = 0; r < restarts; ++r) {
    Vector y(a.cols());
    for (Index j = 0; j < a.cols(); ++j)
      y[j] = (rng() & 1u) ? -1.0 : 1.0;
    Vector x(a.rows());
    double val = -1.0;
    for (int iter = 0; iter < 1000; ++iter) {
      x = (a * y).unaryExpr([](double t) { return t < 0.0 ? -1.0 : 1.0; });
      y = (a.transpose() * x)
              .unaryExpr([](double t) { return t < 0.0 ? -1.0 : 1.0; });
      const double next = x.dot(a * y);
      if (next <= val) break;
      val = next;
    }
    if (val > best.value) {
      best.value = val;
      best.x = x;
      best.y = y;
    }
  }
  return best;
}

}  // namespace

SignVectorPair inf_to_one_norm(const Matrix& a, int enumeration_cap,
                               bool allow_heuristic, std::uint64_t seed) {
  if (a.rows() < 1 || a.cols() < 1)
    throw std::invalid_argument("matrix must be non-empty");
  if (!a.allFinite()) throw std::invalid_argument("non-finite matrix entry");
  const bool rows_smaller = a.rows() <= a.cols();
  const Index enumerated = rows_smaller ? a.rows() : a.cols();
  if (enumerated > enumeration_cap) {
    if (!allow_heuristic)
      throw capacity_error(
          "inf_to_one_norm: smaller dimension " + std::to_string(enumerated) +
          " exceeds cap " + std::to_string(enumeration_cap) +
          "; enable heuristic mode for a flagged lower estimate");
    return ascend_signs(a, 32, seed);
  }
  if (rows_smaller) return enumerate_rows(a);
  SignVectorPair t = enumerate_rows(a.transpose());
  std::swap(t.x, t.y);
  return t;
}

double dilation_scale(const Matrix& a) {
  return operator_norm(a) *
         std::sqrt(static_cast<double>(a.rows()) *
                   static_cast<double>(a.cols()));
}

double scale_ratio(const Matrix& a) {
  const double denom = inf_to_one_norm(a).value;
  if (denom == 0.0)
    throw std::invalid_argument("scale_ratio undefined for the zero matrix");
  return dilation_scale(a) / denom;
}

StrippedMatrix strip_zeros(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1)
    throw std::invalid_argument("matrix must be non-empty");
  StrippedMatrix out;
  for (Index i = 0; i < a.rows(); ++i)
    if (!a.row(i).isZero(0.0)) out.row_map.push_back(static_cast<int>(i));
  for (Index j = 0; j < a.cols(); ++j)
    if (!a.col(j).isZero(0.0)) out.col_map.push_back(static_cast<int>(j));
  if (out.row_map.empty())
    throw std::invalid_argument("cannot strip the zero matrix");
  out.matrix.resize(out.row_map.size(), out.col_map.size());
  for (std::size_t i = 0; i < out.row_map.size(); ++i)
    for (std::size_t j = 0; j < out.col_map.size(); ++j)
      out.matrix(i, j) = a(out.row_map[i], out.col_map[j]);
  return out;
}

double weighted_gamma(const Matrix& a, const Vector& w, const Vector& v) {
  if (w.size() != a.rows() || v.size() != a.cols())
    throw std::invalid_argument("weight length mismatch");
  if ((w.array() <= 0.0).any() || (v.array() <= 0.0).any())
    throw std::invalid_argument("weights must be strictly positive");
  const Matrix scaled =
      w.cwiseInverse().asDiagonal() * a * v.cwiseInverse().asDiagonal();
  return operator_norm(scaled) * w.norm() * v.norm();
}

namespace {

struct Objective {
  double value = 0.0;  // log of weighted_gamma
  Vector grad_row, grad_col;
};

// Objective and gradient in log-weights. The gradient of log sigma_max is
// -u_i^2 / -v_j^2 through the diagonal scaling; near-degenerate top singular
// pairs get a tiny seeded perturbation for the gradient only.
Objective eval_log_gamma(const Matrix& a, const Vector& theta,
                         const Vector& phi, bool want_grad,
                         std::mt19937_64& rng) {
  const Vector w = theta.array().exp().matrix();
  const Vector v = phi.array().exp().matrix();
  const Matrix scaled =
      w.cwiseInverse().asDiagonal() * a * v.cwiseInverse().asDiagonal();
  Objective out;
  if (!want_grad) {
    Eigen::JacobiSVD<Matrix> svd(scaled);
    out.value = std::log(svd.singularValues()(0)) + std::log(w.norm()) +
                std::log(v.norm());
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(scaled,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma = svd.singularValues()(0);
  out.value = std::log(sigma) + std::log(w.norm()) + std::log(v.norm());
  Vector u = svd.matrixU().col(0);
  Vector z = svd.matrixV().col(0);
  const Index rank = svd.singularValues().size();
  if (rank > 1 && svd.singularValues()(1) >= sigma * (1.0 - 1e-9)) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Matrix perturbed = scaled;
    for (Index i = 0; i < perturbed.rows(); ++i)
      for (Index j = 0; j < perturbed.cols(); ++j)
        perturbed(i, j) += 1e-9 * unif(rng);
    Eigen::JacobiSVD<Matrix> svd2(perturbed,
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd2.matrixU().col(0);
    z = svd2.matrixV().col(0);
  }
  const double wn2 = w.squaredNorm(), vn2 = v.squaredNorm();
  out.grad_row = (w.array().square() / wn2 - u.array().square()).matrix();
  out.grad_col = (v.array().square() / vn2 - z.array().square()).matrix();
  return out;
}

struct DescentOutcome {
  Vector theta, phi;
  double value = 0.0;
  bool converged = false;
};

DescentOutcome descend(const Matrix& a, Vector theta, Vector phi,
                       const MinimizeOptions& options, std::mt19937_64& rng) {
  Objective cur = eval_log_gamma(a, theta, phi, true, rng);
  double step = 0.25;
  bool converged = false;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    const double gnorm2 =
        cur.grad_row.squaredNorm() + cur.grad_col.squaredNorm();
    if (gnorm2 < 1e-24) {
      converged = true;
      break;
    }
    bool accepted = false;
    Vector t_cand, p_cand;
    Objective next;
    for (int back = 0; back < 60; ++back) {
      t_cand = theta - step * cur.grad_row;
      p_cand = phi - step * cur.grad_col;
      next = eval_log_gamma(a, t_cand, p_cand, false, rng);
      if (next.value <= cur.value - 1e-4 * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      converged = true;
      break;
    }
    const double improvement = cur.value - next.value;
    theta = t_cand;
    phi = p_cand;
    theta.array() -= theta.mean();  // objective is shift-invariant per side
    phi.array() -= phi.mean();
    cur = eval_log_gamma(a, theta, phi, true, rng);
    step = std::min(step * 1.5, 4.0);
    if (improvement <= options.rel_tol * std::max(1.0, std::abs(cur.value))) {
      converged = true;
      break;
    }
  }
  return {std::move(theta), std::move(phi), cur.value, converged};
}

}  // namespace

WeightPair minimize_weighted_gamma(const Matrix& a,
                                   const MinimizeOptions& options) {
  if (a.rows() < 1 || a.cols() < 1)
    throw std::invalid_argument("matrix must be non-empty");
  for (Index i = 0; i < a.rows(); ++i)
    if (a.row(i).isZero(0.0))
      throw std::invalid_argument("zero row: strip_zeros before minimizing");
  for (Index j = 0; j < a.cols(); ++j)
    if (a.col(j).isZero(0.0))
      throw std::invalid_argument("zero column: strip_zeros before minimizing");

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 0.6);

  DescentOutcome best;
  bool have_best = false;
  const int total = std::max(options.restarts, 1) + 2;
  for (int restart = 0; restart < total; ++restart) {
    Vector theta = Vector::Zero(a.rows());
    Vector phi = Vector::Zero(a.cols());
    if (restart == 1) {
      // seed from the inf-to-1 witness: weights proportional to the sqrt of
      // the witness row/column sums
      const SignVectorPair wit = inf_to_one_norm(a, 24, true, options.seed);
      const Vector rs = (a * wit.y).cwiseAbs();
      const Vector cs = (a.transpose() * wit.x).cwiseAbs();
      const double rfloor = 1e-3 * (rs.maxCoeff() + 1e-300);
      const double cfloor = 1e-3 * (cs.maxCoeff() + 1e-300);
      theta = (rs.array() + rfloor).log().matrix() * 0.5;
      phi = (cs.array() + cfloor).log().matrix() * 0.5;
      theta.array() -= theta.mean();
      phi.array() -= phi.mean();
    } else if (restart >= 2) {
      for (Index i = 0; i < theta.size(); ++i) theta[i] = gauss(rng);
      for (Index j = 0; j < phi.size(); ++j) phi[j] = gauss(rng);
    }
    DescentOutcome out = descend(a, std::move(theta), std::move(phi), options, rng);
    if (!have_best || out.value < best.value) {
      best = std::move(out);
      have_best = true;
    }
  }

  WeightPair result;
  Vector w = best.theta.array().exp().matrix();
  Vector v = best.phi.array().exp().matrix();
  result.w = w / w.norm();
  result.v = v / v.norm();
  result.value = weighted_gamma(a, result.w, result.v);
  result.converged = best.converged;
  return result;
}

double grothendieck_lower_bound(const Matrix& a, int r, int restarts,
                                std::uint64_t seed) {
  if (r < 1) throw std::invalid_argument("vector dimension must be >= 1");
  if (a.rows() < 1 || a.cols() < 1)
    throw std::invalid_argument("matrix must be non-empty");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = 0.0;
  for (int restart = 0; restart < std::max(restarts, 1); ++restart) {
    Matrix q(r, a.cols());
    for (Index j = 0; j < q.cols(); ++j) {
      Vector g(r);
      for (int t = 0; t < r; ++t) g[t] = gauss(rng);
      const double norm = g.norm();
      q.col(j) = norm > 0 ? Vector(g / norm) : Vector::Unit(r, 0);
    }
    double value = 0.0;
    for (int iter = 0; iter < 500; ++iter) {
      Matrix p = q * a.transpose();  // column i = sum_j a_ij q_j
      for (Index i = 0; i < p.cols(); ++i) {
        const double norm = p.col(i).norm();
        p.col(i) = norm > 0 ? Vector(p.col(i) / norm) : Vector::Unit(r, 0);
      }
      const Matrix s = p * a;  // column j = sum_i a_ij p_i
      double next = 0.0;
      for (Index j = 0; j < s.cols(); ++j) {
        const double norm = s.col(j).norm();
        q.col(j) = norm > 0 ? Vector(s.col(j) / norm) : Vector::Unit(r, 0);
        next += norm;
      }
      if (next <= value + 1e-13 * std::max(1.0, value)) {
        value = std::max(value, next);
        break;
      }
      value = next;
    }
    best = std::max(best, value);
  }
  return best;
}

std::pair<double, double> grothendieck_constant_bounds() {
  const double pi = std::numbers::pi;
  return {pi / 2.0, pi / (2.0 * std::log(1.0 + std::numbers::sqrt2))};
}

NormReport norm_report(const Matrix& a, const MinimizeOptions& options,
                       int enumeration_cap, bool allow_heuristic) {
  NormReport report;
  report.spectral = operator_norm(a);
  report.sign_witness =
      inf_to_one_norm(a, enumeration_cap, allow_heuristic, options.seed);
  report.inf_to_one = report.sign_witness.value;
  if (report.inf_to_one == 0.0)
    throw std::invalid_argument("norm report undefined for the zero matrix");
  report.gamma = dilation_scale(a);
  report.g_ratio = report.gamma / report.inf_to_one;
  const StrippedMatrix stripped = strip_zeros(a);
  WeightPair wp = minimize_weighted_gamma(stripped.matrix, options);
  if (stripped.matrix.rows() == a.rows() && stripped.matrix.cols() == a.cols()) {
    report.weights = std::move(wp);
  } else {
    // weights on stripped coordinates; restore with unit weights elsewhere
    report.weights.w = Vector::Ones(a.rows());
    report.weights.v = Vector::Ones(a.cols());
    for (std::size_t i = 0; i < stripped.row_map.size(); ++i)
      report.weights.w[stripped.row_map[i]] = wp.w[i];
    for (std::size_t j = 0; j < stripped.col_map.size(); ++j)
      report.weights.v[stripped.col_map[j]] = wp.v[j];
    report.weights.value = wp.value;
    report.weights.converged = wp.converged;
  }
  report.grothendieck_upper = report.weights.value;
  report.ratio_G = report.grothendieck_upper / report.inf_to_one;
  return report;
}

}  // namespace polyq
