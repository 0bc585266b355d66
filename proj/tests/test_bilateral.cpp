#include "qlab/bilateral/bilateral.hpp"
#include "qlab/errors.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qlab;

namespace {

using F = FFamily<ExactEngine>;
using FN = FFamily<NumericEngine>;

ExactMono P(const mpq_class &c, const mpq_class &e = 0) { return {c, e}; }

mpq_class Qr(long a, long b)
{
	mpq_class r(a, b);
	r.canonicalize();
	return r;
}

ExactSeries cut(const ExactSeries &s, const mpq_class &n) { return s.truncated_q(n); }

// exact series evaluated at q agrees with a numeric value to 2^{-bits+16}
void expect_cross(const ExactSeries &s, const HPComplex &v, const NumericEngine &ne)
{
	HPReal e = evaluate(s, ne.nome());
	HPReal scale = max(HPReal(1, ne.wp()), abs(v));
	HPReal dev = abs(HPComplex(e) - v);
	EXPECT_TRUE(dev <= ldexp(scale, -ne.precision().bits + 16)) << dev.str(5);
}

NumMono N(const NumericEngine &ne, const ExactMono &p) { return ne.param(p.c, p.e); }

std::vector<NumMono> N(const NumericEngine &ne, const std::vector<ExactMono> &v)
{
	std::vector<NumMono> out;
	for (const auto &p : v)
		out.push_back(N(ne, p));
	return out;
}

NumericEngine small_q(long bits = 128)
{
	Precision p(bits);
	return NumericEngine(Nome::from_q(HPReal(Qr(1, 64), p.working())), p);
}

} // namespace

TEST(LScalar, EulerCollapse)
{
	// L_1(q; q, z) = (-z)_inf: only n >= 0 survives since 1/(q)_{-n} = 0
	ExactEngine e(40);
	EXPECT_EQ(L_scalar(e, mpq_class(1), P(1, 1), P(Qr(1, 3))), e.pinf(P(Qr(-1, 3))));
}

TEST(LScalar, F2HatDirectBilateral)
{
	// L_3(-1; q, q) = sum_{n in Z} q^{n^2} (-q)_n, expanded term by term
	ExactEngine e(30);
	ExactSeries direct = e.zero();
	for (long n = -20; n <= 20; ++n) {
		ExactSeries t = poch_series(P(-1, 1), PochIndex::integer(n), ExponentGrid(1, 80));
		direct += cut(t.times_monomial(1, n * n), 30);
	}
	EXPECT_EQ(L_scalar(e, mpq_class(3), P(-1), P(1, 1)), direct);
}

TEST(LScalar, ZeroArgument)
{
	ExactEngine e(30);
	EXPECT_EQ(L_scalar(e, mpq_class(3), P(Qr(1, 2)), P(0)), e.one());
	NumericEngine ne = small_q();
	HPComplex v = L_scalar(ne, ne.quad(3), N(ne, P(Qr(1, 2))), N(ne, P(0)));
	EXPECT_TRUE(v.re == 1 && v.im.is_zero());
}

TEST(LScalar, DivergentBelowOne)
{
	ExactEngine e(20);
	EXPECT_THROW(L_scalar(e, Qr(1, 2), P(Qr(1, 2)), P(Qr(1, 3))), Divergence);
}

TEST(LScalar, VanishingDenominatorIsPole)
{
	// (q^{-1})_n contains 1 - q^0 for n >= 2
	ExactEngine e(20);
	EXPECT_THROW(L_scalar(e, mpq_class(3), P(1, -1), P(Qr(1, 3))), PolePoch);
	// 1/(q^2)_{-n} = 0 for n >= 2: the sum just stops
	EXPECT_NO_THROW(L_scalar(e, mpq_class(3), P(1, 2), P(Qr(1, 3))));
}

TEST(LVector, ZeroYReducesToScalar)
{
	ExactEngine e(30);
	ExactSeries v = L_vector(e, mpq_class(3), {P(Qr(1, 2))}, {P(0)}, P(Qr(1, 5)));
	EXPECT_EQ(v, L_scalar(e, mpq_class(3), P(Qr(1, 2)), P(Qr(1, 5))));
	EXPECT_EQ(v, L_vector_product_form(e, mpq_class(3), {P(Qr(1, 2))}, {P(0)}, P(Qr(1, 5))));
}

TEST(LVector, ZeroZ)
{
	ExactEngine e(30);
	EXPECT_EQ(L_vector(e, mpq_class(3), {P(Qr(1, 2)), P(2)}, {P(3), P(Qr(1, 7))}, P(0)), e.one());
}

TEST(LVectorProperty, TwoFormsAgree)
{
	std::mt19937 rng(17);
	std::uniform_int_distribution<long> num(-5, 5), den(2, 7), pw(0, 1);
	auto rnd = [&]() {
		mpq_class c = Qr(num(rng), den(rng));
		if (c == 0)
			c = Qr(2, 3);
		return P(c, pw(rng));
	};
	ExactEngine e(30);
	const std::vector<mpq_class> alphas1{Qr(3, 2), 2, 3}, alphas2{Qr(5, 2), 3, 4};
	for (int it = 0; it < 6; ++it) {
		for (long r : {1L, 2L}) {
			std::vector<ExactMono> x, y;
			for (long s = 0; s < r; ++s) {
				x.push_back(rnd());
				y.push_back(rnd());
			}
			ExactMono z = rnd();
			mpq_class alpha = (r == 1 ? alphas1 : alphas2)[static_cast<size_t>(it % 3)];
			ExactSeries a = L_vector(e, alpha, x, y, z);
			ExactSeries b = L_vector_product_form(e, alpha, x, y, z);
			ASSERT_GE(b.order_q(), 30);
			EXPECT_EQ(a, cut(b, 30)) << "r=" << r << " alpha=" << alpha.get_str();
		}
	}
}

TEST(LVector, NumericTwoFormsAgree)
{
	Precision p(256);
	NumericEngine ne(Nome::from_q(HPReal(Qr(2, 5), p.working())), p);
	HPComplex x1(HPReal::from_string("-0.3", p.working()), HPReal::from_string("0.2", p.working()));
	std::vector<NumMono> x{{x1, 0}, ne.param(Qr(1, 3), 0)};
	std::vector<NumMono> y{ne.param(Qr(-1, 4), 0), ne.param(Qr(2, 3), 0)};
	NumMono z = ne.param(Qr(7, 5), 0);
	HPComplex a = L_vector(ne, ne.quad(Qr(5, 2)), x, y, z);
	HPComplex b = L_vector_product_form(ne, ne.quad(Qr(5, 2)), x, y, z);
	EXPECT_LT((abs(a - b) / abs(a)).to_double(), 1e-70);
}

TEST(Psi, RamanujanOnePsiOne)
{
	// 1psi1(b; a; q, w) = (q, a/b, bw, q/(bw))_inf / (a, q/b, w, a/(bw))_inf
	ExactEngine e(30);
	ExactMono b = P(Qr(1, 2)), a = P(2, 2), w = P(Qr(1, 3), 1);
	ExactSeries lhs = psi_r(e, {b}, {a}, w);
	ExactSeries rhs = e.pinf(P(1, 1)) * e.pinf(a * inverse(b)) * e.pinf(b * w) *
			  e.pinf(qshift(inverse(b * w), 1)) * e.pinf_inv(a) * e.pinf_inv(qshift(inverse(b), 1)) *
			  e.pinf_inv(w) * e.pinf_inv(a * inverse(b * w));
	EXPECT_EQ(lhs, cut(rhs, 30));

	// coefficients grow like 12^k, so the cross-check needs a higher order
	NumericEngine ne = small_q();
	expect_cross(psi_r(ExactEngine(80), {b}, {a}, w), psi_r(ne, {N(ne, b)}, {N(ne, a)}, N(ne, w)), ne);
}

TEST(Psi, ZeroArgumentAndDomain)
{
	ExactEngine e(30);
	EXPECT_EQ(psi_r(e, {P(Qr(1, 2))}, {P(2, 2)}, P(0)), e.one());
	EXPECT_THROW(psi_r(e, {P(0)}, {P(2, 2)}, P(1, 1)), DomainError);
}

TEST(H, ZeroYReducesToSingleSum)
{
	// H_alpha(x; 0; q) = sum_i q^{(1 - 1/alpha) i^2/2} (-x)^i / (q)_i, alpha = 2, x = 1/3
	ExactEngine e(30);
	ExactSeries direct = e.zero();
	for (long i = 0; i * i < 4 * 30; ++i) {
		ExactSeries t = poch_inv_series(P(1, 1), PochIndex::integer(i), ExponentGrid(4, 160));
		mpq_class c = pow(P(Qr(-1, 3)), i).c;
		direct += cut(t.times_monomial(c, Qr(i * i, 4)), 30);
	}
	EXPECT_EQ(H_alpha(e, mpq_class(2), {P(Qr(1, 3))}, {P(0)}), direct);
}

TEST(H, SquareProductEvaluation)
{
	// H_2(x; -x; q) = (-x^2 q; q^2)_inf, x = 1/2
	ExactEngine e(30);
	ExactMono x = P(Qr(1, 2));
	EXPECT_EQ(H_alpha(e, mpq_class(2), {x}, {-x}), e.pinf(P(Qr(-1, 4), 1), 2));
}

TEST(H, HalfPowerProductEvaluation)
{
	// H_2(x; xq; q^2) = (x q^{1/2})_inf, x = 1/3
	ExactEngine e(30);
	ExactMono x = P(Qr(1, 3));
	ExactSeries h = H_alpha(e, mpq_class(2), {x}, {qshift(x, 1)}, 2);
	EXPECT_EQ(h, e.pinf(qshift(x, Qr(1, 2))));
	EXPECT_EQ(h.denom(), 2);
}

TEST(H, RankTwoAgainstBoxSum)
{
	// grouped evaluation against the plain 4-fold sum over i, j in [0, 12)
	ExactEngine e(12);
	std::vector<ExactMono> x{P(Qr(1, 2), 1), P(Qr(-1, 3), 1)}, y{P(2, 1), P(Qr(1, 5), 2)};
	const mpq_class alpha = 3;
	QuadFormQ Q{alpha, 2};
	ExactSeries box = e.zero();
	for (long i1 = 0; i1 < 12; ++i1)
		for (long i2 = 0; i2 < 12; ++i2)
			for (long j1 = 0; j1 < 12; ++j1)
				for (long j2 = 0; j2 < 12; ++j2) {
					mpq_class ex = Q({i1, i2}, {j1, j2}) / 2 + i1 + i2 + j1 + 2 * j2;
					if (ex >= 12)
						continue;
					ExponentGrid g(6, 200);
					ExactSeries t = poch_inv_series(P(1, 1), PochIndex::integer(i1), g) *
							poch_inv_series(P(1, 1), PochIndex::integer(i2), g) *
							poch_inv_series(P(1, 1), PochIndex::integer(j1), g) *
							poch_inv_series(P(1, 1), PochIndex::integer(j2), g);
					mpq_class c = pow(-x[0], i1).c * pow(-x[1], i2).c * pow(-y[0], j1).c *
						      pow(-y[1], j2).c;
					box += cut(t.times_monomial(c, ex), 12);
				}
	EXPECT_EQ(H_alpha(e, alpha, x, y), box);
}

TEST(H, BoundaryAlphaNeedsPositiveValuation)
{
	ExactEngine e(20);
	EXPECT_THROW(H_alpha(e, mpq_class(1), {P(Qr(1, 2))}, {P(Qr(1, 3))}), Divergence);
	EXPECT_NO_THROW(H_alpha(e, mpq_class(1), {P(Qr(1, 2), 1)}, {P(Qr(1, 3), 1)}));
	EXPECT_THROW(H_alpha(e, Qr(1, 2), {P(1, 1)}, {P(1, 1)}), Divergence);
}

TEST(H, NumericProductEvaluations)
{
	Precision p(256);
	NumericEngine ne(Nome::from_q(HPReal(Qr(1, 2), p.working())), p);
	NumMono x = ne.param(Qr(1, 2), 0);
	HPComplex a = H_alpha(ne, ne.quad(2), {x}, {-x});
	HPComplex b = ne.pinf(ne.param(Qr(-1, 4), 1), 2);
	EXPECT_LT((abs(a - b) / abs(b)).to_double(), 1e-70);
	NumMono x3 = ne.param(Qr(1, 3), 0);
	HPComplex c = H_alpha(ne, ne.quad(2), {x3}, {qshift(x3, 1)}, 2);
	HPComplex d = ne.pinf(qshift(x3, Qr(1, 2)));
	EXPECT_LT((abs(c - d) / abs(d)).to_double(), 1e-70);
}

TEST(QuadFormProperty, OrthantPositivity)
{
	for (long r : {1L, 2L})
		for (const mpq_class &alpha : std::vector<mpq_class>{mpq_class(r) + Qr(1, 2), mpq_class(r + 1), mpq_class(2 * r + 1)}) {
			QuadFormQ Q{alpha, r};
			for (long a = 0; a <= 10; ++a)
				for (long b = 0; b <= 10; ++b)
					for (long c = 0; c <= (r == 2 ? 10 : 0); ++c)
						for (long d = 0; d <= (r == 2 ? 10 : 0); ++d) {
							std::vector<long> i{a}, j{b};
							if (r == 2) {
								i.push_back(c);
								j.push_back(d);
							}
							if (a == 0 && b == 0 && c == 0 && d == 0)
								continue;
							EXPECT_GT(Q(i, j), 0) << r << " " << alpha.get_str();
						}
		}
}

TEST(QuadFormProperty, SignedBox)
{
	// positive definite on the full signed box only for alpha > 2r
	for (long r : {1L, 2L}) {
		QuadFormQ big{mpq_class(2 * r + 1), r};
		QuadFormQ mid{mpq_class(r) + Qr(1, 2), r};
		bool mid_nonpos = false;
		for (long a = -10; a <= 10; ++a)
			for (long b = -10; b <= 10; ++b) {
				if (a == 0 && b == 0)
					continue;
				std::vector<long> i(static_cast<size_t>(r), a), j(static_cast<size_t>(r), b);
				EXPECT_GT(big(i, j), 0);
				if (mid(i, j) <= 0)
					mid_nonpos = true;
			}
		EXPECT_TRUE(mid_nonpos) << r;
	}
}

TEST(FFamily, F1HatEqualsF1)
{
	ExactEngine e(30);
	EXPECT_EQ(F::f1hat(e, P(1), 1, 0), F::f1(e, P(1), 1, 0));
	EXPECT_EQ(F::f1hat(e, P(Qr(2, 3)), Qr(3, 2), Qr(1, 3)), F::f1(e, P(Qr(2, 3)), Qr(3, 2), Qr(1, 3)));
}

TEST(FFamily, F2HatTail)
{
	ExactEngine e(30);
	ExactSeries hat = F::f2hat(e, P(1), 1, 0);
	ExactSeries f2 = F::f2(e, P(1), 1, 0);
	ExactSeries tail = F::f2_tail(e, P(1), 1, 0);
	EXPECT_EQ(hat, f2 + tail);
	EXPECT_FALSE(tail.is_zero());
	// tail against the direct negative-index part of sum_n q^{n^2} (-q)_n
	ExactSeries neg = e.zero();
	for (long n = -20; n < 0; ++n) {
		ExactSeries t = poch_series(P(-1, 1), PochIndex::integer(n), ExponentGrid(1, 80));
		neg += cut(t.times_monomial(1, n * n), 30);
	}
	EXPECT_EQ(tail, neg);
}

TEST(FFamily, F2ViaL3)
{
	ExactEngine e(30);
	EXPECT_EQ(L_scalar(e, mpq_class(3), P(-1), P(1, 1)) - F::f2_tail(e, P(1), 1, 0),
		  F::f2(e, P(1), 1, 0));
}

TEST(FFamily, TildeForms)
{
	// f1tilde(1, 1, 0) = f1(-1, 1/4, 1/2); f2tilde(1, 1, 0) = f1(1, 1/3, -1/3)
	ExactEngine e(30);
	EXPECT_EQ(F::f1tilde(e, P(1), 1, 0), F::f1(e, P(-1), Qr(1, 4), Qr(1, 2)));
	EXPECT_EQ(F::f2tilde(e, P(1), 1, 0), F::f1(e, P(1), Qr(1, 3), Qr(-1, 3)));
	EXPECT_THROW(F::f1tilde(e, P(2), 1, 0), UnsupportedMode);
	EXPECT_THROW(F::f1tilde(e, P(1), Qr(1, 2), 0), DomainError);
}

TEST(FFamily, NumericMatchesExact)
{
	NumericEngine ne = small_q();
	ExactEngine e(40);
	expect_cross(F::f1(e, P(1), 1, 0), FN::f1(ne, N(ne, P(1)), 1, 0), ne);
	expect_cross(F::f2(e, P(1), 1, 0), FN::f2(ne, N(ne, P(1)), 1, 0), ne);
	expect_cross(F::f2hat(e, P(1), 1, 0), FN::f2hat(ne, N(ne, P(1)), 1, 0), ne);
	expect_cross(F::f2_tail(e, P(1), 1, 0), FN::f2_tail(ne, N(ne, P(1)), 1, 0), ne);
	expect_cross(F::f1tilde(e, P(1), 1, 0), FN::f1tilde(ne, N(ne, P(1)), 1, 0), ne);
}

TEST(CrossEngine, BilateralSeries)
{
	NumericEngine ne = small_q();
	ExactEngine e(40);
	SCOPED_TRACE("scalar");
	expect_cross(L_scalar(e, mpq_class(3), P(Qr(1, 2)), P(Qr(1, 5))),
		     L_scalar(ne, ne.quad(3), N(ne, P(Qr(1, 2))), N(ne, P(Qr(1, 5)))), ne);
	SCOPED_TRACE("laurent z");
	expect_cross(L_scalar(e, Qr(5, 2), P(-1), P(2, Qr(-1, 2))),
		     L_scalar(ne, ne.quad(Qr(5, 2)), N(ne, P(-1)), N(ne, P(2, Qr(-1, 2)))), ne);
	std::vector<ExactMono> x{P(Qr(1, 3)), P(-2)}, y{P(Qr(3, 4)), P(Qr(-1, 5))};
	ExactMono z = P(Qr(2, 7));
	SCOPED_TRACE("vector");
	expect_cross(L_vector(e, mpq_class(3), x, y, z),
		     L_vector(ne, ne.quad(3), N(ne, x), N(ne, y), N(ne, z)), ne);
	SCOPED_TRACE("H rank 2");
	expect_cross(H_alpha(e, mpq_class(3), x, y), H_alpha(ne, ne.quad(3), N(ne, x), N(ne, y)), ne);
	SCOPED_TRACE("H rank 1");
	expect_cross(H_alpha(e, Qr(5, 2), {P(Qr(1, 2))}, {P(3)}),
		     H_alpha(ne, ne.quad(Qr(5, 2)), {N(ne, P(Qr(1, 2)))}, {N(ne, P(3))}), ne);
}
