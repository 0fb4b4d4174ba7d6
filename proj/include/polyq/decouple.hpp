#pragma once

#include <cstddef>
#include <vector>

#include "polyq/poly.hpp"

namespace polyq {

// Growth rate of the decoupling bound, 1/W(1/e).
inline constexpr double kDecouplingGrowthRate = 3.591121477;

struct DecouplingResult {
  BlockMultilinearForm form;  // d blocks of n+1 variables, dummy slot 0
  double bound = 0.0;         // cube bound for unit-cube-max inputs
  int source_degree = 0;
};

struct DecoupleLimits {
  int max_blocks = 6;
  std::size_t max_monomials = 1'000'000;
};

// Symmetrized block-multilinear lift of p: each Fourier term fans out over
// block subsets and bijections; the diagonal restriction reproduces p and the
// cube values stay within decoupling_bound(d) times the cube max of p.
DecouplingResult decouple(const MultilinearPolynomial& p, int d,
                          const DecoupleLimits& limits = {});

// Degree-d homogenization at z in R^{n+1}: the diagonal of the decoupled
// form; equals p(z_1..z_n) when z_0 = 1.
double evaluate_homogenized(const MultilinearPolynomial& p, int d,
                            const Vector& z);

// Polarization identity over signed subset sums. Shares no code with
// decouple(); serves as its independent evaluation oracle.
double polarization_value(const MultilinearPolynomial& p, int d,
                          const std::vector<Vector>& blocks);

// (1/d!) * sum_{s=1}^{d} C(d,s) s^d in exact rational arithmetic, 1 <= d <= 30.
double decoupling_bound(int d);

// 1/2 + form/(2*scale), the constant carried by the all-dummy monomial. Lands
// in [0,1] on the cube whenever scale >= cube_max_abs(form).
BlockMultilinearForm rescale_to_probability_range(
    const BlockMultilinearForm& form, double scale);

// Error map of the rescaling when the form's diagonal equals 2q - 1 for a
// polynomial q approximating f within eps.
double rescaled_epsilon(double eps, double scale);

}  // namespace polyq
