#include <doctest.h>

#include <cmath>

#include "polyq/split.hpp"
#include "test_support.hpp"

using namespace polyq;

namespace {

Matrix chsh() {
  Matrix a(2, 2);
  a << 1, 1, 1, -1;
  return a;
}

SplitPlan plan_of(std::vector<long> k, std::vector<long> l) {
  SplitPlan p;
  p.row_copies = std::move(k);
  p.col_copies = std::move(l);
  return p;
}

Vector realized(const std::vector<long>& copies) {
  Vector w(copies.size());
  for (std::size_t i = 0; i < copies.size(); ++i)
    w[i] = std::sqrt(static_cast<double>(copies[i]));
  return w;
}

}  // namespace

TEST_CASE("diagonal scaling") {
  const Matrix a = chsh();
  CHECK(diagonal_scaled(a, Vector::Ones(2), Vector::Ones(2)) == a);

  const Vector half = Vector::Constant(2, 1.0 / std::sqrt(2.0));
  CHECK((diagonal_scaled(a, half, half) - 2.0 * a).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));

  Matrix c(1, 1);
  c << 5.0;
  Vector w(1), v(1);
  w << 2.0;
  v << 3.0;
  CHECK(diagonal_scaled(c, w, v)(0, 0) == doctest::Approx(5.0 / 6.0));

  Vector bad(2);
  bad << 1.0, -1.0;
  CHECK_THROWS_AS(diagonal_scaled(a, bad, half), std::invalid_argument);
}

TEST_CASE("weight rationalization") {
  Vector w(2), v(2);
  w << 1, 1;
  v << 1, 1;
  SplitPlan p = rationalize_weights(w, v, 64);
  CHECK(p.row_copies == std::vector<long>{1, 1});
  CHECK(p.col_copies == std::vector<long>{1, 1});
  CHECK(p.row_fit == doctest::Approx(0.0));

  w << 1.0, std::sqrt(2.0);  // squared ratios (1, 2)
  p = rationalize_weights(w, v, 64);
  CHECK(p.row_copies == std::vector<long>{1, 2});

  w << 1.0, std::sqrt(1.5);  // squared ratios (1, 1.5): denominator 2
  p = rationalize_weights(w, v, 64);
  CHECK(p.row_copies == std::vector<long>{2, 3});
  CHECK(p.row_fit <= 1e-9);

  // spread beyond cap^2 is infeasible at every denominator
  Vector spread(2);
  spread << 1.0, 40.0;  // squared ratio 1600 > 3^2
  CHECK_THROWS_AS(rationalize_weights(spread, v, 3), numeric_error);
}

TEST_CASE("applying a split") {
  const Matrix a = chsh();
  SplitMatrix s = apply_split(a, plan_of({2, 1}, {1, 1}));
  Matrix expect(3, 2);
  expect << 0.5, 0.5, 0.5, 0.5, 1, -1;
  CHECK((s.matrix - expect).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK(s.origin_row == std::vector<int>{0, 0, 1});
  CHECK(s.origin_col == std::vector<int>{0, 1});

  CHECK(apply_split(a, plan_of({1, 1}, {1, 1})).matrix == a);

  // uniform N-fold copies keep the dilation scale
  const SplitMatrix u = apply_split(a, plan_of({3, 3}, {3, 3}));
  CHECK(dilation_scale(u.matrix) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(apply_split(a, plan_of({1}, {1, 1})), std::invalid_argument);
}

TEST_CASE("split characterization of the scale") {
  testing::Rng rng(61);
  std::uniform_int_distribution<long> mult(1, 3);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + trial % 3, m = 2 + (trial / 3) % 3;
    const Matrix a = testing::random_matrix(rng, n, m);
    SplitPlan plan;
    for (Index i = 0; i < n; ++i) plan.row_copies.push_back(mult(rng));
    for (Index j = 0; j < m; ++j) plan.col_copies.push_back(mult(rng));
    const SplitMatrix s = apply_split(a, plan);
    const double direct = dilation_scale(s.matrix);
    const double formula = weighted_gamma(a, realized(plan.row_copies),
                                          realized(plan.col_copies));
    CHECK(direct == doctest::Approx(formula).epsilon(1e-9));
    // splitting preserves the sign-vector norm exactly
    CHECK(inf_to_one_norm(s.matrix).value ==
          doctest::Approx(inf_to_one_norm(a).value).epsilon(1e-12));
  }
}

TEST_CASE("assignment lifting") {
  const Matrix a = chsh();
  const SplitPlan trivial = plan_of({1, 1}, {1, 1});
  Vector x(2), y(2);
  x << 1, -1;
  y << -1, 1;
  auto [xt, yt] = lift_assignment(x, y, trivial);
  CHECK(xt == x);
  CHECK(yt == y);

  const SplitPlan wide = plan_of({2, 1}, {1, 1});
  auto [xs, ys] = lift_assignment(x, y, wide);
  CHECK(xs.size() == 3);
  CHECK(xs[0] == 1.0);
  CHECK(xs[1] == 1.0);
  CHECK(xs[2] == -1.0);

  // bilinear values transfer exactly, swept over every sign assignment
  const SplitMatrix s = apply_split(a, wide);
  for (std::uint64_t xm = 0; xm < 4; ++xm)
    for (std::uint64_t ym = 0; ym < 4; ++ym) {
      const Vector xb = cube_point(xm, 2), yb = cube_point(ym, 2);
      auto [xl, yl] = lift_assignment(xb, yb, wide);
      CHECK(xl.dot(s.matrix * yl) ==
            doctest::Approx(xb.dot(a * yb)).epsilon(1e-12));
    }
}

TEST_CASE("splitting composes multiplicatively") {
  testing::Rng rng(67);
  const Matrix a = testing::random_matrix(rng, 3, 2);
  const SplitPlan first = plan_of({2, 1, 3}, {1, 2});
  const SplitMatrix once = apply_split(a, first);

  // split each copy of row i into c_i further rows (same count per copy)
  const std::vector<long> again_rows = {2, 3, 1};
  const std::vector<long> again_cols = {2, 1};
  SplitPlan second;
  for (int src : once.origin_row) second.row_copies.push_back(again_rows[src]);
  for (int src : once.origin_col) second.col_copies.push_back(again_cols[src]);
  const SplitMatrix twice = apply_split(once.matrix, second);

  SplitPlan combined;
  for (std::size_t i = 0; i < 3; ++i)
    combined.row_copies.push_back(first.row_copies[i] * again_rows[i]);
  for (std::size_t j = 0; j < 2; ++j)
    combined.col_copies.push_back(first.col_copies[j] * again_cols[j]);
  const SplitMatrix direct = apply_split(a, combined);

  CHECK(dilation_scale(twice.matrix) ==
        doctest::Approx(dilation_scale(direct.matrix)).epsilon(1e-12));
  CHECK(inf_to_one_norm(twice.matrix).value ==
        doctest::Approx(inf_to_one_norm(direct.matrix).value).epsilon(1e-12));
}

TEST_CASE("ratio reduction") {
  ReduceOptions options;
  options.minimize.seed = 8;

  Matrix half = Matrix::Zero(2, 2);
  half(0, 0) = 0.5;
  half(1, 1) = -0.5;
  const ReduceResult r = reduce_scale_ratio(half, options);
  CHECK(r.ok);
  CHECK(r.scale == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.split.plan.row_copies == std::vector<long>{1, 1});

  const ReduceResult c = reduce_scale_ratio(chsh(), options);
  CHECK(c.ok);
  CHECK(c.scale == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-6));
  CHECK(c.ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(c.split.plan.row_copies == std::vector<long>{1, 1});

  // zero rows are stripped and the maps point back to the original indices
  Matrix padded = Matrix::Zero(3, 3);
  padded(0, 0) = 0.5;
  padded(1, 2) = -0.5;
  const ReduceResult p = reduce_scale_ratio(padded, options);
  CHECK(p.ok);
  CHECK(p.scale == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p.row_map == std::vector<int>{0, 1});
  CHECK(p.col_map == std::vector<int>{0, 2});

  const double k_upper = grothendieck_constant_bounds().second;
  testing::Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = testing::random_matrix(rng, 4, 4);
    for (Index i = 0; i < 4; ++i)
      if (a.row(i).cwiseAbs().maxCoeff() < 0.05) a(i, 1) = 0.3;
    const ReduceResult rr = reduce_scale_ratio(a, options);
    CHECK(rr.ok);
    CHECK(rr.ratio <= k_upper + options.delta + 1e-9);
    CHECK(dilation_scale(rr.split.matrix) ==
          doctest::Approx(rr.scale).epsilon(1e-12));
  }
}
