#pragma once

#include "qlab/numq/hp.hpp"

namespace qlab {

/// Dilogarithm Li2(z) = sum z^n/n^2 for real z in [-1, 1].
/// Direct series for |z| <= 1/2, reflection for z in (1/2, 1], Landen's
/// transform for z in [-1, -1/2). Accurate to about 2^(-prec+4).
HPReal li2(const HPReal &z);

/// Dilogarithm for complex |z| <= 1. Direct series for |z| <= 1/2,
/// reflection when |1 - z| <= 1/2, otherwise the Bernoulli series in
/// u = -log(1 - z) (|u| < 2 pi on the remaining region).
HPComplex li2(const HPComplex &z);

/// Root in (0, 1) of w + w^e / z = 1, for z > 0, e in (0, 1].
/// `alpha` is validated (alpha >= 1) but only `exponent` enters the equation.
/// Residual below 2^(-bits+8).
HPReal solve_w(const HPReal &alpha, const HPReal &z, const HPReal &exponent,
	       const Precision &p);

/// Root in (0, 1) of a z^(2b) + z - 1 = 0 for a, b > 0.
HPReal solve_macmain_z(const HPReal &a, const HPReal &b, const Precision &p);

/// delta_alpha(z) from the closed form in w_alpha, w_beta. alpha >= 1, z > 0.
/// At alpha = 1 it needs z >= 1: z > 1 uses w_beta = 1 - 1/z, z = 1 is the
/// limit alpha -> 1+ (where the w_beta terms vanish).
HPReal delta_alpha(const HPReal &alpha, const HPReal &z, const Precision &p);

/// delta_alpha(z) = 1/alpha - (pi^2/6 + c_alpha(z) + (alpha/2) log^2 z)/(2 pi^2)
/// with c_alpha built from Li2(1 - w1), Li2(1 - w2), where w1 solves
/// z^alpha w^alpha + w = 1 and w2 solves w + w^(1-1/alpha)/z = 1.
/// Requires alpha > 1.
HPReal delta_alpha_via_growth(const HPReal &alpha, const HPReal &z,
			      const Precision &p);

} // namespace qlab
