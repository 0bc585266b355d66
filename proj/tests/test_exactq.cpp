#include "qlab/errors.hpp"
#include "qlab/exactq/exact_series.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qlab;

namespace {

ExactSeries poly(std::vector<long> cs, long denom = 1, long order = 20)
{
	std::vector<mpq_class> v;
	for (long c : cs)
		v.emplace_back(c);
	return ExactSeries::from_coeffs(v, 0, denom, order);
}

ExactSeries random_series(std::mt19937 &rng, long denom, long order, bool unit)
{
	std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
	std::vector<mpq_class> v(static_cast<size_t>(order));
	for (auto &c : v)
		c = mpq_class(num(rng), den(rng));
	if (unit && v[0] == 0)
		v[0] = 1;
	return ExactSeries::from_coeffs(v, 0, denom, order);
}

} // namespace

TEST(ExactSeries, AddCancellation)
{
	ExactSeries s = poly({1, 1}) + poly({1, -1});
	EXPECT_EQ(s, ExactSeries::constant(2, 1, 20));
}

TEST(ExactSeries, AddZeroIdentity)
{
	ExactSeries s = poly({3, 0, -2, 5});
	EXPECT_EQ(s + ExactSeries(1, 20), s);
}

TEST(ExactSeries, RegridThenAddSelf)
{
	ExactSeries s = poly({1, 1}).regrid(2);
	ExactSeries d = s + s;
	EXPECT_EQ(d.denom(), 2);
	EXPECT_EQ(d.coeff(0), 2);
	EXPECT_EQ(d.coeff(1), 0);
	EXPECT_EQ(d.coeff(2), 2);
}

TEST(ExactSeries, MulDifferenceOfSquares)
{
	EXPECT_EQ(poly({1, -1}) * poly({1, 1}), poly({1, 0, -1}));
}

TEST(ExactSeries, MulUnit)
{
	ExactSeries s = poly({2, -3, 7});
	EXPECT_EQ(s * ExactSeries::constant(1, 1, 20), s);
}

TEST(ExactSeries, GeometricTelescope)
{
	std::vector<long> ones(20, 1);
	EXPECT_EQ(poly({1, -1}) * poly(ones), ExactSeries::constant(1, 1, 20));
}

TEST(ExactSeries, InvertOneMinusQ)
{
	std::vector<long> ones(20, 1);
	EXPECT_EQ(poly({1, -1}).invert(), poly(ones));
	EXPECT_EQ(ExactSeries::constant(1, 1, 20).invert(), ExactSeries::constant(1, 1, 20));
}

TEST(ExactSeries, InvertZeroConstantTermThrows)
{
	EXPECT_THROW(poly({0, 1}).invert(), ZeroConstantTerm);
}

TEST(ExactSeries, PartitionsFromEulerProduct)
{
	// brute-force partition counts p(0..11)
	const long N = 12;
	std::vector<long> p(N, 0);
	p[0] = 1;
	for (long part = 1; part < N; ++part)
		for (long k = part; k < N; ++k)
			p[k] += p[k - part];
	ExactSeries prod = ExactSeries::constant(1, 1, N);
	for (long j = 1; j < N; ++j)
		prod = prod.mul_binomial(1, j);
	ExactSeries inv = prod.invert();
	EXPECT_EQ(inv.coeff(5), 7);
	for (long k = 0; k < N; ++k)
		EXPECT_EQ(inv.coeff(k), p[static_cast<size_t>(k)]) << k;
}

TEST(ExactSeries, PentagonalExpansion)
{
	const long N = 40;
	ExactSeries prod = ExactSeries::constant(1, 1, N);
	for (long j = 1; j < N; ++j)
		prod = prod.mul_binomial(1, j);
	std::vector<mpq_class> c(N);
	for (long k = -10; k <= 10; ++k) {
		long e = k * (3 * k - 1) / 2;
		if (e < N)
			c[static_cast<size_t>(e)] += (k % 2 == 0) ? 1 : -1;
	}
	EXPECT_EQ(prod, ExactSeries::from_coeffs(c, 0, 1, N));
}

TEST(ExactSeries, RegridIndices)
{
	ExactSeries s = poly({1, 1}, 1, 5).regrid(2);
	EXPECT_EQ(s.order(), 10);
	EXPECT_EQ(s.coeff(0), 1);
	EXPECT_EQ(s.coeff(2), 1);
	EXPECT_EQ(s.coeff(1), 0);
}

TEST(ExactSeries, RegridRoundTrip)
{
	ExactSeries s = poly({1, 2, 0, -4}, 2, 9);
	ExactSeries r = s.regrid(6);
	std::vector<mpq_class> back;
	for (long k = 0; k < 9; ++k)
		back.push_back(r.coeff(3 * k));
	EXPECT_EQ(ExactSeries::from_coeffs(back, 0, 2, 9), s);
}

TEST(ExactSeries, RegridIncompatible)
{
	EXPECT_THROW(poly({1}, 2, 4).regrid(3), IncompatibleGrid);
}

TEST(ExactSeries, CommonGridOnAdd)
{
	ExactSeries a = ExactSeries::monomial(1, mpq_class(1, 2), 1, 4);
	ExactSeries b = ExactSeries::monomial(1, mpq_class(1, 3), 1, 4);
	ExactSeries s = a + b;
	EXPECT_EQ(s.denom(), 6);
	EXPECT_EQ(s.coeff(3), 1);
	EXPECT_EQ(s.coeff(2), 1);
}

TEST(ExactSeries, TruncationCoherence)
{
	std::mt19937 rng(7);
	for (int it = 0; it < 20; ++it) {
		ExactSeries a = random_series(rng, 1, 16, true);
		ExactSeries b = random_series(rng, 1, 16, true);
		ExactSeries full = (a * b.invert()).truncated(9);
		ExactSeries direct = a.truncated(9) * b.truncated(9).invert();
		EXPECT_EQ(full, direct);
	}
}

TEST(ExactSeries, TruncateCannotRaiseOrder)
{
	EXPECT_THROW(poly({1, 2}, 1, 5).truncated(6), DomainError);
}

TEST(ExactSeries, BinomialMulDivRoundTrip)
{
	ExactSeries s = poly({3, -1, 4, 1, -5, 9});
	for (long k : {-3L, -1L, 1L, 2L, 5L}) {
		ExactSeries t = s.mul_binomial(mpq_class(2, 3), k).div_binomial(mpq_class(2, 3), k);
		EXPECT_EQ(t.truncated(t.order()), s.truncated(t.order())) << k;
	}
}

TEST(ExactSeries, NegativeExponentBinomialDivision)
{
	// 1/(1 - 2 q^{-1}) = -(q/2)/(1 - q/2)
	ExactSeries one = ExactSeries::constant(1, 1, 8);
	ExactSeries s = one.div_binomial(2, -1);
	EXPECT_EQ(s.valuation(), 1);
	EXPECT_EQ(s.coeff(1), mpq_class(-1, 2));
	EXPECT_EQ(s.coeff(2), mpq_class(-1, 4));
	EXPECT_GE(s.order(), 8);
}

TEST(ExactSeries, VanishingBinomialIsPole)
{
	EXPECT_THROW(ExactSeries::constant(1, 1, 8).div_binomial(1, 0), PolePoch);
}

TEST(ExactSeries, ReciprocalLaurent)
{
	ExactSeries s = poly({0, 0, 2, 1}, 1, 12); // 2q^2 + q^3
	ExactSeries r = s.reciprocal();
	EXPECT_EQ(r.valuation(), -2);
	ExactSeries prod = s * r;
	EXPECT_EQ(prod.truncated(prod.order()),
		  ExactSeries::constant(1, 1, prod.order()));
}

TEST(ExactSeries, CsvFormat)
{
	ExactSeries s = ExactSeries::from_coeffs({mpq_class(1), mpq_class(0), mpq_class(-3, 2)},
						 0, 2, 4);
	EXPECT_EQ(s.to_csv(), "# D=2 N=4\n0,1,1\n2,-3,2\n");
}

TEST(ExactSeriesProperty, RingAxioms)
{
	std::mt19937 rng(2024);
	std::uniform_int_distribution<int> dsel(0, 2);
	const long denoms[] = {1, 2, 3};
	for (int it = 0; it < 120; ++it) {
		long da = denoms[dsel(rng)], db = denoms[dsel(rng)], dc = denoms[dsel(rng)];
		ExactSeries a = random_series(rng, da, 6 * da, false);
		ExactSeries b = random_series(rng, db, 6 * db, false);
		ExactSeries c = random_series(rng, dc, 6 * dc, false);
		EXPECT_EQ((a + b) + c, a + (b + c));
		EXPECT_EQ(a + b, b + a);
		EXPECT_EQ((a * b) * c, a * (b * c));
		EXPECT_EQ(a * b, b * a);
		EXPECT_EQ(a * (b + c), a * b + a * c);
	}
}

TEST(ExactSeriesProperty, InvertRoundTrip)
{
	std::mt19937 rng(99);
	for (int it = 0; it < 120; ++it) {
		long d = 1 + it % 3;
		ExactSeries a = random_series(rng, d, 10 * d, true);
		ExactSeries one = ExactSeries::constant(1, d, 10 * d);
		EXPECT_EQ(a * a.invert(), one);
		EXPECT_EQ(a.invert() * a, one);
	}
}
