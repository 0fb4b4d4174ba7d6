#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>

namespace polyq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// An exact enumeration, fan-out or split budget would exceed its cap.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric routine cannot meet its contract (scale violation, stalled
// optimizer, infeasible rationalization).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point of the {-1,+1}^n cube addressed by a bit index: bit i-1 set means
// x_i = -1, so index 0 is the all-ones point and the enumeration order
// 0,1,2,... is lexicographic with +1 < -1.
inline Vector cube_point(std::uint64_t index, int n) {
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = ((index >> i) & 1u) ? -1.0 : 1.0;
  return x;
}

inline std::uint64_t cube_index(const Vector& x) {
  std::uint64_t m = 0;
  for (Index i = 0; i < x.size(); ++i)
    if (x[i] < 0) m |= std::uint64_t{1} << i;
  return m;
}

}  // namespace polyq
