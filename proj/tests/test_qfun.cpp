#include "qlab/errors.hpp"
#include "qlab/qfun/qfun.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qlab;

namespace {

const ExponentGrid G40(1, 40);

ExactSeries one(long denom = 1, long order = 40) { return ExactSeries::constant(1, denom, order); }

ExactSeries mono(const mpq_class &c, const mpq_class &e, const mpq_class &order)
{
	ExactSeries s = ExactSeries::monomial(c, e, 1, 1);
	long d = grid_for(s.denom(), order);
	return ExactSeries::monomial(c, e, d, grid_index(order, d));
}

// exact series evaluated at q agrees with a numeric value to 2^{-bits+16}
void expect_cross(const ExactSeries &s, const HPComplex &v, const Nome &q, const Precision &p)
{
	HPReal e = evaluate(s, q);
	HPReal scale = max(HPReal(1, p.working()), abs(v));
	HPReal dev = abs(HPComplex(e) - v);
	EXPECT_TRUE(dev <= ldexp(scale, -p.bits + 16)) << dev.str(5);
}

} // namespace

TEST(Poch, IndexZeroIsOne)
{
	EXPECT_EQ(poch_series({mpq_class(3, 7), 0}, PochIndex::integer(0), G40), one());
}

TEST(Poch, EulerIdentity)
{
	// sum z^n q^{binom(n,2)}/(q)_n = (-z; q)_inf, z = 1/3
	const mpq_class z(1, 3);
	ExactSeries lhs(1, 40);
	for (long n = 0; n * (n - 1) / 2 < 40; ++n) {
		ExactSeries t = poch_inv_series({1, 1}, PochIndex::integer(n), G40);
		lhs += t.times_monomial(pow(ExactMono{z, 0}, n).c, mpq_class(n * (n - 1) / 2)).truncated(40);
	}
	EXPECT_EQ(lhs, poch_series({-z, 0}, PochIndex::infinity(), G40));
}

TEST(Poch, NegativeIndexProduct)
{
	// (-q)_{-n} (-1)_n = q^{n(n-1)/2}
	for (long n = 1; n <= 6; ++n) {
		ExactSeries a = poch_series({-1, 1}, PochIndex::integer(-n), G40);
		ExactSeries b = poch_series({-1, 0}, PochIndex::integer(n), G40);
		EXPECT_EQ((a * b).truncated(40), mono(1, n * (n - 1) / 2, 40)) << n;
	}
}

TEST(Poch, PoleAndZeroConventions)
{
	// (q)_{-n} has the factor 1/(1 - q^0)
	EXPECT_THROW(poch_series({1, 1}, PochIndex::integer(-2), G40), PolePoch);
	// 1/(q)_{-n} = 0
	EXPECT_TRUE(poch_inv_series({1, 1}, PochIndex::integer(-2), G40).is_zero());
	// (q^{-1})_3 contains 1 - q^0
	EXPECT_TRUE(poch_series({1, -1}, PochIndex::integer(3), G40).is_zero());
	EXPECT_THROW(poch_series({1, 0}, PochIndex::real(HPReal(2, 64)), G40), UnsupportedMode);
}

TEST(Poch, InfiniteWithNegativePower)
{
	// (q^{-2}; q)_inf = (1 - q^{-2})(1 - q^{-1}) (1)_inf = 0
	EXPECT_TRUE(pinf_series({1, -2}, 1, 40).is_zero());
	// (2 q^{-1}; q)_inf (q^2/2 ; q)_inf / (q)_inf ... compare with the theta sum
	ExactSeries th = theta_series({2, -1}, 1, 40);
	ExactSeries prod = pinf_series({2, -1}, 1, 60) * pinf_series({mpq_class(1, 2), 2}, 1, 60) *
			   pinf_series({1, 1}, 1, 60);
	EXPECT_EQ(prod.truncated(40), th);
}

TEST(PochProperty, ReflectionRelation)
{
	// (1/u)_n (uq)_{-n} = (-u)^{-n} q^{binom(n,2)}
	std::mt19937 rng(5);
	std::uniform_int_distribution<long> num(-7, 7), den(2, 9);
	for (int it = 0; it < 6; ++it) {
		mpq_class u(num(rng), den(rng));
		u.canonicalize();
		if (u == 0 || u == 1)
			u = mpq_class(3, 4);
		for (long n = 1; n <= 8; ++n) {
			ExactSeries a = poch_series({1 / u, 0}, PochIndex::integer(n), G40);
			ExactSeries b = poch_series({u, 1}, PochIndex::integer(-n), G40);
			ExactSeries rhs = mono(pow(ExactMono{-u, 0}, -n).c, n * (n - 1) / 2, 40);
			EXPECT_EQ((a * b).truncated(40), rhs) << u.get_str() << " n=" << n;
		}
	}
}

TEST(PochValue, IndexOne)
{
	Precision p(128);
	HPComplex x(HPReal::from_string("0.3", 160), HPReal::from_string("0.1", 160));
	HPComplex q(HPReal::from_string("0.5", 160));
	HPComplex v = poch_value(x, PochIndex::integer(1), q, p);
	HPComplex d = v - (1 - x);
	EXPECT_LT(abs(d).to_double(), 1e-35);
}

TEST(PochValue, RealIndexCollapses)
{
	Precision p(256);
	HPComplex a(mpq_class(1, 4), p.working());
	HPComplex q(mpq_class(1, 3), p.working());
	HPComplex v1 = poch_value(a, PochIndex::real(HPReal(3, p.working())), q, p);
	HPComplex v2 = poch_value(a, PochIndex::integer(3), q, p);
	EXPECT_LT(abs(v1 - v2).to_double(), 1e-70);
}

TEST(PochValue, DomainErrorOutsideDisk)
{
	Precision p(64);
	HPComplex q(1, p.working());
	EXPECT_THROW(poch_value(q, PochIndex::infinity(), q, p), DomainError);
}

TEST(PochValue, EulerProductCrossEngine)
{
	// (q; q)_inf at q = 1/10 against the exact truncation; order 60 puts the
	// truncation error near 1e-60
	Precision p(256);
	HPReal q = HPReal(mpq_class(1, 10), p.working());
	ExactSeries s = pinf_series({1, 1}, 1, 60);
	HPComplex v = poch_value(HPComplex(q), PochIndex::infinity(), HPComplex(q), p);
	HPReal e = evaluate(s, Nome::from_q(q));
	EXPECT_LT(abs(HPComplex(e) - v).to_double(), 1e-50);
	EXPECT_NEAR(v.re.to_double(), 0.8900100999989990, 1e-15);
}

TEST(Theta, VanishesAtQ)
{
	EXPECT_TRUE(theta_series({1, 1}, 1, 40).is_zero());
	EXPECT_TRUE(theta_series({1, 1}, 1, 40, ThetaForm::Product).is_zero());
}

TEST(Theta, SumEqualsProduct)
{
	for (auto z : {ExactMono{2, 0}, ExactMono{mpq_class(-3, 5), 0}, ExactMono{7, mpq_class(1, 3)}})
		EXPECT_EQ(theta_series(z, 1, 40), theta_series(z, 1, 40, ThetaForm::Product))
		    << z.c.get_str();
}

TEST(Theta, HalfBaseJacobiTripleProduct)
{
	ExactMono z{-1, mpq_class(1, 4)};
	ExactSeries a = theta_series(z, mpq_class(1, 2), 40);
	ExactSeries b = theta_series(z, mpq_class(1, 2), 40, ThetaForm::Product);
	EXPECT_EQ(a.denom(), 4);
	EXPECT_EQ(a, b);
}

TEST(Theta, MinusOne)
{
	// theta(-1; q) = 2 (-q)_inf (q^2; q^2)_inf
	ExactSeries rhs = (pinf_series({-1, 1}, 1, 40) * pinf_series({1, 2}, 2, 40)).scaled(2);
	EXPECT_EQ(theta_series({-1, 0}, 1, 40), rhs);
}

TEST(Theta, DomainErrorAtZero)
{
	EXPECT_THROW(theta_series({0, 0}, 1, 40, ThetaForm::Product), DomainError);
}

TEST(ThetaProperty, QuasiPeriodicity)
{
	// theta(z) = (-z)^l q^{binom(l,2)} theta(q^l z)
	for (ExactMono z : {ExactMono{2, 0}, ExactMono{mpq_class(-1, 3), mpq_class(1, 2)}})
		for (long l : {-2L, -1L, 1L, 2L}) {
			ExactSeries lhs = theta_series(z, 1, 40);
			ExactMono f = pow(-z, l);
			ExactSeries rhs = theta_series(qshift(z, l), 1, 60)
					      .times_monomial(f.c, f.e + mpq_class(l * (l - 1) / 2));
			EXPECT_EQ(lhs, rhs.truncated_q(40)) << l;
		}
}

TEST(ThetaProperty, ZerosAtHalfIntegerPowers)
{
	for (long l = -2; l <= 2; ++l)
		EXPECT_TRUE(theta_series({1, mpq_class(l) / 2}, mpq_class(1, 2), 40).is_zero()) << l;
}

TEST(ThetaValue, SumEqualsProductNumeric)
{
	Precision p(256);
	HPComplex z(HPReal::from_string("1.3", p.working()), HPReal::from_string("-0.4", p.working()));
	HPComplex q(HPReal::from_string("0.45", p.working()), HPReal::from_string("0.2", p.working()));
	HPComplex a = theta_value(z, q, p), b = theta_value(z, q, p, ThetaForm::Product);
	EXPECT_LT(abs(a - b).to_double(), 1e-70);
}

TEST(CrossEngine, ThetaAndProducts)
{
	Precision p(128);
	Nome q = Nome::from_q(HPReal(mpq_class(1, 64), p.working()));
	const mpq_class order = 40;
	ExactMono z{mpq_class(5, 3), mpq_class(-1, 2)};
	NumMono zn{HPComplex(z.c, p.working()), z.e};
	expect_cross(theta_series(z, 1, order), theta_value(zn, q, 1, p), q, p);
	expect_cross(theta_series(z, mpq_class(1, 2), order),
		     theta_value(zn, q, mpq_class(1, 2), p), q, p);
	expect_cross(pinf_series(z, 1, order), pinf_value(zn, q, 1, p), q, p);
	expect_cross(pinf_inv_series(z, 2, order), HPComplex(1, p.working()) / pinf_value(zn, q, 2, p),
		     q, p);
	for (long n : {-4L, -1L, 3L, 6L}) {
		expect_cross(poch_series(z, PochIndex::integer(n), ExponentGrid(2, 80)),
			     poch_value(zn, n, q, 1, p), q, p);
		expect_cross(poch_inv_series(z, PochIndex::integer(n), ExponentGrid(2, 80)),
			     poch_inv_value(zn, n, q, 1, p), q, p);
	}
}

TEST(Eta, SelfDualPoint)
{
	Precision p(512);
	HPReal t = const_pi(p.working()) * 2;
	auto [l, r] = eta_transform_sides(t, p);
	EXPECT_LT((abs(l - r) / l).to_double(), 1e-60);
}

TEST(Eta, TOne)
{
	Precision p(512);
	auto [l, r] = eta_transform_sides(HPReal(1, p.working()), p);
	EXPECT_LT((abs(l - r) / l).to_double(), 1e-60);
	EXPECT_NEAR(l.to_double(), 0.50442865472596640333, 1e-15);
}

TEST(Eta, TransformAsAccelerator)
{
	// slow product at t = 0.3 against the fast leading term times a short product
	Precision p(512);
	HPReal t = HPReal::from_string("0.3", p.working());
	auto [l, r] = eta_transform_sides(t, p);
	EXPECT_LT((abs(l - r) / l).to_double(), 1e-60);
	HPReal lead = eta_leading(t, p);
	// the dropped factor is 1 - e^{-4 pi^2/t} + ...
	EXPECT_LT((abs(l - lead) / l).to_double(), 1e-55);
}
