#pragma once

#include "qlab/numq/hp.hpp"

#include <gmpxx.h>
#include <optional>
#include <vector>

namespace qlab {

template <class T> struct SidePair {
	T lhs;
	T rhs;
};

/// Main term of the q -> 1 growth of f1(a, b, c; e^{-t}):
/// z^c / sqrt(z + 2b(1 - z)) exp((Li2(1 - z) + b log^2 z)/t), a z^{2b} + z = 1.
HPReal macmain_leading(const HPReal &a, const HPReal &b, const HPReal &c, const HPReal &t,
		       const Precision &p);
/// The exponential rate Li2(1 - z) + b log^2 z of the main term.
HPReal macmain_rate(const HPReal &a, const HPReal &b, const Precision &p);

/// Both sides of the rotated-sum transformation of L_alpha(zx; q, z^alpha) at
/// q = e^{-t}. n_max < 0 cuts the Gaussian sum automatically once
/// e^{-2 pi^2 n^2/(alpha t)} < 2^{-bits} and the rotated terms are negligible.
SidePair<HPComplex> main1_sides(const mpq_class &alpha, const HPReal &x, const HPReal &z,
				const HPReal &t, const Precision &p, long n_max = -1);

/// Vector analogue: L_alpha(z x; z^{-1} y; q, z^alpha) against the Gaussian sum
/// of H_alpha(e^{2 pi i n/alpha} x; e^{-2 pi i n/alpha} y; q). r = x.size() <= 2.
SidePair<HPComplex> mth1_sides(const mpq_class &alpha, const std::vector<HPReal> &x,
			       const std::vector<HPReal> &y, const HPReal &z, const HPReal &t,
			       const Precision &p, long n_max = -1);

/// sum_{n in mu + Z} z^n e^{-t binom(n,2)} and its Gaussian dual cut at |n| <= n_cut.
SidePair<HPComplex> lem21_sides(const HPReal &z, const HPReal &t, const HPReal &mu,
				long n_cut, const Precision &p);

/// Parameters of the asymptotic claims. Only the fields a claim reads matter.
struct ClaimParams {
	mpq_class alpha = 2;
	mpq_class z = 1;
	mpq_class x = -1;
	mpq_class a = 1;
	mpq_class b = 1;
	mpq_class c = 0;
	mpq_class w = mpq_class(1, 2); // y = q^w
	std::vector<mpq_class> xs{mpq_class(-1, 2), mpq_class(-1, 3)};
	std::vector<mpq_class> ys{mpq_class(-1, 4), mpq_class(-1, 5)};
};

enum class Predicted { MM10, MM20, Cor2, Cor1 };

/// Closed-form predicted quotient (error term excluded).
HPReal predicted_ratio(Predicted which, const ClaimParams &cp, const HPReal &t,
		       const Precision &p);

/// One point of an asymptotic measurement: the measured quantity, its
/// prediction and the residual whose decay is fitted.
struct AsymSample {
	HPReal t;
	HPReal lhs;
	HPReal rhs;
	HPReal residual;
};

enum class Claim { Eta, Cor2, Cor1, Cor02, CorMth1, MM10, MM20, Prop10, Cor32, Asymm };

/// Evaluate a claim at one t.
AsymSample measure(Claim which, const ClaimParams &cp, const HPReal &t, const Precision &p);

/// Predicted decay constant of the residual, if the claim states one.
std::optional<HPReal> predicted_rate(Claim which, const ClaimParams &cp, const Precision &p);

/// Direct product of the two sums and the closed form pi/(2 a^c t) exp(...).
SidePair<HPReal> asymm_sides(const HPReal &a, const HPReal &c, const HPReal &t,
			     const Precision &p);
/// The product of the two theta quotients (leading term of each sum).
HPReal asymm_theta_route(const HPReal &a, const HPReal &c, const HPReal &t, const Precision &p);
/// The product of the exact decompositions (theta quotient minus correction sum).
HPReal asymm_decomposition_route(const HPReal &a, const HPReal &c, const HPReal &t,
				 const Precision &p);

struct RateFit {
	std::vector<HPReal> t;
	std::vector<HPReal> residual;
	HPReal c_fit;
	std::optional<HPReal> c_pred;
	std::optional<HPReal> rel_err;
	/// log(r_k / r_{k+1}) / (1/t_{k+1} - 1/t_k)
	std::vector<HPReal> pairwise;
};

/// Least-squares slope of log(residual) against -1/t. Needs >= 3 samples
/// with strictly decreasing t; NonPositiveResidual for residual <= 0.
RateFit rate_fit(const std::vector<HPReal> &t, const std::vector<HPReal> &residual,
		 std::optional<HPReal> c_pred = std::nullopt);

/// Residuals strictly decreasing, C_fit > 0, every pairwise rate positive and
/// the last pairwise rate at least 3/4 of the first.
bool decays_exponentially(const RateFit &f);
/// Residuals strictly decreasing and |C_fit - C_pred| <= tol C_pred.
bool rate_matches(const RateFit &f, double tol);
/// Residuals strictly decreasing and C_fit >= (1 - tol) C_pred.
bool rate_bounds(const RateFit &f, double tol);

/// Local power exponent log(r_1/r_2) / log(t_1/t_2) between two samples.
HPReal local_power(const HPReal &t1, const HPReal &r1, const HPReal &t2, const HPReal &r2);

} // namespace qlab
