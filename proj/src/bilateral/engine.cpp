#include "qlab/bilateral/engine.hpp"

#include "qlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qlab {

namespace {

constexpr long kMaxTerms = 1000000;

long den_of(const mpq_class &x)
{
	mpz_class d = x.get_den();
	if (!d.fits_slong_p())
		throw IncompatibleGrid("exponent denominator too large");
	return d.get_si();
}

long floor_of(const mpq_class &x)
{
	mpz_class f;
	mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
	return f.get_si();
}

long ceil_of(const mpq_class &x)
{
	mpz_class c;
	mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
	return c.get_si();
}

mpq_class negpart(const mpq_class &k) { return k < 0 ? k : mpq_class(0); }

mpq_class binom2(long n) { return mpq_class(n * (n - 1) / 2); }

ExactSeries unit_series(const mpq_class &order)
{
	long d = den_of(order);
	return ExactSeries::constant(1, d, ceil_of(order * d));
}

ExactSeries zero_series(const mpq_class &order)
{
	long d = den_of(order);
	return ExactSeries(d, ceil_of(order * d));
}

// truncate to q^n if that lowers the order
ExactSeries cut(const ExactSeries &s, const mpq_class &n)
{
	return n < s.order_q() ? s.truncated_q(n) : s;
}

mpq_class qpow(const mpq_class &c, long n) { return pow(ExactMono{c, 0}, n).c; }

// Valuation lower bound of (c q^k; q)_inf for c != 0.
mpq_class pinf_val(const mpq_class &k)
{
	mpq_class v = 0;
	for (mpq_class kk = k; kk < 0; kk += 1)
		v += kk;
	return v;
}

struct Fac {
	mpq_class c, e, b;
	mpq_class k(long n) const { return e + b * n; }
	bool zero_at(long n) const { return c == 1 && k(n) == 0; }
};

// regime bounds: for n >= hi (n <= lo) every exponent e + b n has a fixed sign
void regime(const std::vector<Fac> &fs, long &lo, long &hi)
{
	lo = 0;
	hi = 0;
	for (const auto &f : fs) {
		if (f.b == 0)
			continue;
		mpq_class r = -f.e / f.b;
		hi = std::max(hi, ceil_of(r) + 1);
		lo = std::min(lo, floor_of(r) - 1);
	}
}

bool is_one(const HPComplex &c) { return c.re == 1 && c.im.is_zero(); }

double logabs(const HPComplex &c)
{
	if (c.is_zero())
		return -INFINITY;
	HPReal a = abs(c);
	long e = a.exponent2();
	return std::log(ldexp(a, -e).to_double()) + static_cast<double>(e) * std::log(2.0);
}

} // namespace

// ---- exact ------------------------------------------------------------------

ExactEngine::ExactEngine(mpq_class order) : order_(std::move(order))
{
	if (order_ <= 0)
		throw DomainError("exact engine order must be positive");
}

ExactMono ExactEngine::root_of_unity(long a, long u) const
{
	if (a == 1)
		return {1, 0};
	if (a == 2)
		return {(u % 2 == 0) ? 1 : -1, 0};
	throw UnsupportedMode("roots of unity of order " + std::to_string(a) +
			      " are not exact rationals; use the numeric engine");
}

ExactMono ExactEngine::root(const Param &p, long k) const
{
	if (k == 1)
		return p;
	mpz_class num = p.c.get_num(), den = p.c.get_den();
	bool neg = num < 0;
	if (neg && k % 2 == 0)
		throw DomainError("even root of a negative coefficient");
	if (neg)
		num = -num;
	mpz_class rn, rd;
	int en = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(k));
	int ed = mpz_root(rd.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(k));
	if (!en || !ed)
		throw UnsupportedMode("coefficient " + p.c.get_str() + " has no rational " +
				      std::to_string(k) + "-th root");
	mpq_class r(neg ? mpz_class(-rn) : rn, rd);
	r.canonicalize();
	return {r, p.e / k};
}

ExactSeries ExactEngine::zero() const { return zero_series(order_); }
ExactSeries ExactEngine::one() const { return unit_series(order_); }
ExactSeries ExactEngine::constant(const mpq_class &c) const { return one().scaled(c); }
ExactSeries ExactEngine::mono(const Param &p) const { return times(one(), p); }

ExactSeries ExactEngine::times(const Value &v, const Param &p) const
{
	return v.times_monomial(p.c, p.e);
}

ExactSeries ExactEngine::poch(const Param &x, long n, const mpq_class &base) const
{
	long d = den_of(order_);
	return poch_series(x, PochIndex::integer(n), ExponentGrid(d, ceil_of(order_ * d)), base);
}

ExactSeries ExactEngine::poch_inv(const Param &x, long n, const mpq_class &base) const
{
	long d = den_of(order_);
	return poch_inv_series(x, PochIndex::integer(n), ExponentGrid(d, ceil_of(order_ * d)), base);
}

ExactSeries ExactEngine::pinf(const Param &x, const mpq_class &base) const
{
	return pinf_series(x, base, order_);
}

ExactSeries ExactEngine::pinf_inv(const Param &x, const mpq_class &base) const
{
	return pinf_inv_series(x, base, order_);
}

ExactSeries ExactEngine::theta(const Param &z, const mpq_class &base) const
{
	return theta_series(z, base, order_);
}

ExactSeries ExactEngine::theta_product(const Param &z, const mpq_class &base) const
{
	return theta_series(z, base, order_, ThetaForm::Product);
}

ExactSeries ExactEngine::bilateral(const BilateralSpec<ExactEngine> &s) const
{
	if (s.z.c == 0)
		return s.nmin <= 0 ? one() : zero();
	std::vector<Fac> num, den, all;
	for (const auto &f : s.num)
		if (f.x.c != 0)
			num.push_back({f.x.c, f.x.e, f.base});
	for (const auto &f : s.den)
		if (f.x.c != 0)
			den.push_back({f.x.c, f.x.e, f.base});
	all = num;
	all.insert(all.end(), den.begin(), den.end());

	const mpq_class &W = order_;
	// valuation increment from term n to term n+1
	auto delta = [&](long n) -> mpq_class {
		mpq_class d = s.z.e + s.quad * n;
		for (const auto &f : num)
			d += negpart(f.k(n));
		for (const auto &f : den)
			d -= negpart(f.k(n));
		return d;
	};
	auto any_zero = [](const std::vector<Fac> &fs, long n) {
		return std::any_of(fs.begin(), fs.end(), [n](const Fac &f) { return f.zero_at(n); });
	};
	long n_lo, n_hi;
	regime(all, n_lo, n_hi);

	std::vector<mpq_class> vup{0}, vdown{0};
	{
		mpq_class v = 0;
		for (long n = 0;; ++n) {
			if (n > kMaxTerms)
				throw Divergence("bilateral sum: term cap reached as n -> +inf");
			if (any_zero(num, n))
				break;
			mpq_class d = delta(n);
			if (n >= n_hi) {
				mpq_class S = delta(n + 1) - d;
				if (S < 0 || (S == 0 && d <= 0))
					throw Divergence("bilateral sum diverges as n -> +inf");
				if (v >= W && d > 0)
					break;
			}
			if (any_zero(den, n))
				throw PolePoch("vanishing denominator factor in a bilateral summand");
			v += d;
			vup.push_back(v);
		}
	}
	{
		mpq_class v = 0;
		for (long n = 0;; --n) {
			if (n - 1 < s.nmin)
				break;
			if (-n > kMaxTerms)
				throw Divergence("bilateral sum: term cap reached as n -> -inf");
			if (any_zero(den, n - 1))
				break;
			mpq_class d = -delta(n - 1);
			if (n <= n_lo) {
				mpq_class S = -delta(n - 2) - d;
				if (S < 0 || (S == 0 && d <= 0))
					throw Divergence("bilateral sum diverges as n -> -inf");
				if (v >= W && d > 0)
					break;
			}
			if (any_zero(num, n - 1))
				throw PolePoch("vanishing numerator factor in a bilateral summand at negative n");
			v += d;
			vdown.push_back(v);
		}
	}

	mpq_class vmin = 0;
	for (const auto &v : vup)
		if (v < vmin)
			vmin = v;
	for (const auto &v : vdown)
		if (v < vmin)
			vmin = v;
	const mpq_class R = W - vmin;

	const ExactSeries seed = unit_series(R);
	ExactSeries result = zero();
	if (s.nmin <= 0)
		result += seed;
	ExactSeries t = seed;
	for (size_t i = 0; i + 1 < vup.size(); ++i) {
		const long n = static_cast<long>(i);
		t = t.times_monomial(s.z.c, s.z.e + s.quad * n);
		for (const auto &f : num)
			t = t.mul_binomial_q(f.c, f.k(n));
		for (const auto &f : den)
			t = t.div_binomial_q(f.c, f.k(n));
		if (n + 1 >= s.nmin && vup[i + 1] < W)
			result += t;
	}
	t = seed;
	for (size_t i = 0; i + 1 < vdown.size(); ++i) {
		const long n = -static_cast<long>(i) - 1; // factor index of the step
		t = t.times_monomial(1 / s.z.c, -(s.z.e + s.quad * n));
		for (const auto &f : den)
			t = t.mul_binomial_q(f.c, f.k(n));
		for (const auto &f : num)
			t = t.div_binomial_q(f.c, f.k(n));
		if (vdown[i + 1] < W)
			result += t;
	}
	return result;
}

namespace {

// One side of the grouped H sum: per-parameter terms A_s(i) and the
// valuation bound of P_I = sum_{i_1 + ... + i_r = I} prod A_s(i_s).
struct ExactSide {
	std::vector<ExactMono> p;
	mpq_class base;

	mpq_class vA(size_t s, long i) const { return p[s].e * i + base * mpq_class(i * i) / 2; }
	bool allowed(size_t s, long i) const { return i == 0 || p[s].c != 0; }

	// min over splits; false if no split is allowed (P_I = 0)
	bool vP(long I, mpq_class &out) const
	{
		bool found = false;
		if (p.size() == 1) {
			if (!allowed(0, I))
				return false;
			out = vA(0, I);
			return true;
		}
		for (long i = 0; i <= I; ++i) {
			if (!allowed(0, i) || !allowed(1, I - i))
				continue;
			mpq_class v = vA(0, i) + vA(1, I - i);
			if (!found || v < out)
				out = v;
			found = true;
		}
		return found;
	}

	bool trivial() const
	{
		return std::all_of(p.begin(), p.end(), [](const ExactMono &m) { return m.c == 0; });
	}

	mpq_class emin() const
	{
		mpq_class m;
		bool first = true;
		for (const auto &x : p)
			if (x.c != 0 && (first || x.e < m)) {
				m = x.e;
				first = false;
			}
		return m;
	}
};

} // namespace

ExactSeries ExactEngine::H(const Quad &alpha, const std::vector<Param> &x,
			   const std::vector<Param> &y, const mpq_class &base) const
{
	const size_t r = x.size();
	if (r == 0 || r > 2 || y.size() != r)
		throw DomainError("H needs r in {1, 2} parameters on each side");
	if (base <= 0 || alpha <= 0)
		throw DomainError("H needs positive alpha and q-base");
	const mpq_class c = mpq_class(1, static_cast<long>(r)) - 1 / alpha;
	if (c < 0)
		throw Divergence("H needs alpha >= r");
	const mpq_class &W = order_;
	ExactSide X{x, base}, Y{y, base};

	// index bound per side
	auto side_max = [&](const ExactSide &a, const ExactSide &b) -> long {
		if (a.trivial())
			return 0;
		const mpq_class ea = a.emin();
		if (c == 0) {
			if (ea <= 0)
				throw Divergence("H at alpha = r needs every parameter to have positive q-valuation");
			if (!b.trivial() && b.emin() <= 0)
				throw Divergence("H at alpha = r needs every parameter to have positive q-valuation");
			return ceil_of(W / ea) + 1;
		}
		const mpq_class k = base * c / 2;
		mpq_class other = 0;
		if (!b.trivial()) {
			const mpq_class eb = b.emin();
			for (long J = 0; J < 100000; ++J) {
				mpq_class v = k * J * J + eb * J;
				if (v < other)
					other = v;
				if (J > 0 && v > 0)
					break;
			}
		}
		for (long I = 0; I < kMaxTerms; ++I) {
			mpq_class v = k * I * I + ea * I + other;
			if (v >= W && 2 * k * I + ea > 0)
				return I;
		}
		throw Divergence("H index bound not found");
	};
	const long Imax = side_max(X, Y), Jmax = side_max(Y, X);

	std::vector<mpq_class> vP(static_cast<size_t>(Imax + 1)), vQ(static_cast<size_t>(Jmax + 1));
	std::vector<char> okP(vP.size()), okQ(vQ.size());
	for (long I = 0; I <= Imax; ++I)
		okP[static_cast<size_t>(I)] = X.vP(I, vP[static_cast<size_t>(I)]);
	for (long J = 0; J <= Jmax; ++J)
		okQ[static_cast<size_t>(J)] = Y.vP(J, vQ[static_cast<size_t>(J)]);

	auto shift = [&](long I, long J) -> mpq_class {
		return -base * mpq_class((I - J) * (I - J)) / (2 * alpha);
	};
	struct Pair {
		long I, J;
		mpq_class g;
	};
	std::vector<Pair> pairs;
	mpq_class gmin = W;
	for (long I = 0; I <= Imax; ++I) {
		if (!okP[static_cast<size_t>(I)])
			continue;
		for (long J = 0; J <= Jmax; ++J) {
			if (!okQ[static_cast<size_t>(J)])
				continue;
			mpq_class g = vP[static_cast<size_t>(I)] + vQ[static_cast<size_t>(J)] + shift(I, J);
			if (g < W) {
				pairs.push_back({I, J, g});
				if (g < gmin)
					gmin = g;
			}
		}
	}
	ExactSeries result = zero();
	if (pairs.empty())
		return result;
	const mpq_class R = W - gmin;

	// order each P_I / Q_J must reach
	std::vector<mpq_class> needP(vP.size()), needQ(vQ.size());
	std::vector<char> useP(vP.size(), 0), useQ(vQ.size(), 0);
	for (const auto &pr : pairs) {
		const size_t I = static_cast<size_t>(pr.I), J = static_cast<size_t>(pr.J);
		mpq_class nP = W - vQ[J] - shift(pr.I, pr.J);
		mpq_class nQ = W - vP[I] - shift(pr.I, pr.J);
		if (!useP[I] || nP > needP[I])
			needP[I] = nP;
		if (!useQ[J] || nQ > needQ[J])
			needQ[J] = nQ;
		useP[I] = useQ[J] = 1;
	}

	// 1/(q^base; q^base)_i at relative order R
	const long Mmax = std::max(Imax, Jmax);
	std::vector<ExactSeries> inv;
	inv.push_back(unit_series(R));
	for (long i = 1; i <= Mmax; ++i)
		inv.push_back(inv.back().div_binomial_q(1, base * i));

	auto A = [&](const ExactSide &side, size_t s, long i) {
		return inv[static_cast<size_t>(i)].times_monomial(qpow(-side.p[s].c, i), side.vA(s, i));
	};
	auto build = [&](const ExactSide &side, long I, const mpq_class &need) {
		ExactSeries acc = zero_series(need);
		if (side.p.size() == 1)
			return cut(A(side, 0, I), need);
		for (long i = 0; i <= I; ++i) {
			if (!side.allowed(0, i) || !side.allowed(1, I - i))
				continue;
			if (side.vA(0, i) + side.vA(1, I - i) >= need)
				continue;
			ExactSeries a = cut(A(side, 0, i), need - side.vA(1, I - i));
			ExactSeries b = cut(A(side, 1, I - i), need - side.vA(0, i));
			acc += a * b;
		}
		return acc;
	};
	std::vector<ExactSeries> P, Q;
	for (long I = 0; I <= Imax; ++I)
		P.push_back(useP[static_cast<size_t>(I)] ? build(X, I, needP[static_cast<size_t>(I)])
							 : zero_series(1));
	for (long J = 0; J <= Jmax; ++J)
		Q.push_back(useQ[static_cast<size_t>(J)] ? build(Y, J, needQ[static_cast<size_t>(J)])
							 : zero_series(1));
	for (const auto &pr : pairs) {
		const mpq_class sh = shift(pr.I, pr.J);
		ExactSeries a = cut(P[static_cast<size_t>(pr.I)], W - vQ[static_cast<size_t>(pr.J)] - sh);
		ExactSeries b = cut(Q[static_cast<size_t>(pr.J)], W - vP[static_cast<size_t>(pr.I)] - sh);
		result += (a * b).times_monomial(1, sh);
	}
	return result;
}

ExactSeries ExactEngine::L_product_form(const Quad &alpha, const std::vector<Param> &x,
					const std::vector<Param> &y, const Param &z) const
{
	if (x.size() != y.size() || x.empty())
		throw DomainError("L needs matching non-empty parameter vectors");
	if (z.c == 0)
		return one();
	// the partial sum may have negative valuation before the prefactor
	// multiplies it back; raise the working order until the result reaches order_
	mpq_class W = order_;
	for (int attempt = 0; attempt < 6; ++attempt) {
		ExactSeries s = ExactEngine(W).product_form_at(alpha, x, y, z);
		if (s.order_q() >= order_)
			return s.truncated_q(order_);
		W += order_ - s.order_q();
	}
	throw PrecisionLoss("product form: order not reached");
}

ExactSeries ExactEngine::product_form_at(const Quad &alpha, const std::vector<Param> &x,
					 const std::vector<Param> &y, const Param &z) const
{
	const mpq_class &W = order_;
	auto fval = [](const Param &p, const mpq_class &k) -> mpq_class {
		return p.c == 0 ? mpq_class(0) : pinf_val(k);
	};
	auto v2 = [&](long n) -> mpq_class {
		mpq_class v = z.e * n + alpha * binom2(n);
		for (size_t s = 0; s < x.size(); ++s)
			v += fval(x[s], x[s].e + n) + fval(y[s], y[s].e + 1 - n);
		return v;
	};
	long hi = 2, lo = -2;
	for (size_t s = 0; s < x.size(); ++s) {
		hi = std::max({hi, ceil_of(-x[s].e) + 2, ceil_of(y[s].e) + 3});
		lo = std::min({lo, floor_of(-x[s].e) - 2, floor_of(y[s].e) - 1});
	}
	auto term = [&](long n) -> ExactSeries {
		const mpq_class vn = v2(n);
		ExactSeries prod = unit_series(W - vn);
		for (size_t s = 0; s < x.size(); ++s) {
			for (const Param &p : {qshift(x[s], n), qshift(y[s], 1 - n)}) {
				if (p.c == 0)
					continue;
				mpq_class vf = pinf_val(p.e);
				ExactSeries f = pinf_series(p, 1, W - vn + vf);
				if (f.is_zero())
					return zero();
				prod = prod * f;
			}
		}
		return prod.times_monomial(qpow(z.c, n), z.e * n + alpha * binom2(n));
	};
	ExactSeries sum = zero();
	for (int dir : {1, -1}) {
		int rising = 0;
		for (long n = dir > 0 ? 0 : -1;; n += dir) {
			if (std::labs(n) > kMaxTerms)
				throw Divergence("product form: term cap reached");
			const mpq_class vn = v2(n);
			if (vn < W)
				sum += term(n);
			const bool beyond = dir > 0 ? n >= hi : n <= lo;
			if (beyond && vn >= W && v2(n + dir) > vn)
				++rising;
			else
				rising = 0;
			if (rising >= 3)
				break;
		}
	}
	for (size_t s = 0; s < x.size(); ++s) {
		if (x[s].c != 0)
			sum = sum * pinf_inv(x[s]);
		if (y[s].c != 0)
			sum = sum * pinf_inv(qshift(y[s], 1));
	}
	return sum;
}

// ---- numeric ----------------------------------------------------------------

NumericEngine::NumericEngine(Nome q, Precision prec) : q_(std::move(q)), prec_(prec)
{
	q_.q = q_.q.with_prec(prec_.working());
	q_.t = q_.t.with_prec(prec_.working());
}

NumMono NumericEngine::param(const mpq_class &c, const mpq_class &e) const
{
	return {HPComplex(c, wp()), e};
}

NumMono NumericEngine::root_of_unity(long a, long u) const
{
	if (a <= 0)
		throw DomainError("root of unity order must be positive");
	long k = ((u % a) + a) % a;
	if (k == 0)
		return param(1, 0);
	if (2 * k == a)
		return param(-1, 0);
	HPReal phi = const_pi(wp()) * 2 * k / a;
	return {HPComplex::expi(phi), 0};
}

NumMono NumericEngine::root(const Param &p, long k) const
{
	if (k == 1)
		return p;
	HPComplex c = p.c.is_zero() ? p.c : exp(log(p.c) / k);
	return {c, p.e / k};
}

HPComplex NumericEngine::poch(const Param &x, long n, const mpq_class &base) const
{
	return poch_value(x, n, q_, base, prec_);
}

HPComplex NumericEngine::poch_inv(const Param &x, long n, const mpq_class &base) const
{
	return poch_inv_value(x, n, q_, base, prec_);
}

HPComplex NumericEngine::pinf(const Param &x, const mpq_class &base) const
{
	return pinf_value(x, q_, base, prec_);
}

HPComplex NumericEngine::pinf_inv(const Param &x, const mpq_class &base) const
{
	HPComplex v = pinf(x, base);
	if (v.is_zero())
		throw PolePoch("1/(x)_inf with a vanishing factor");
	return one() / v;
}

HPComplex NumericEngine::theta(const Param &z, const mpq_class &base) const
{
	return theta_value(z, q_, base, prec_);
}

HPComplex NumericEngine::theta_product(const Param &z, const mpq_class &base) const
{
	return theta_value(z, q_, base, prec_, ThetaForm::Product);
}

namespace {

struct NumFac {
	HPComplex c;
	mpq_class e, b;
	HPReal qb; // q^b
	HPComplex cur; // c q^{e + b n} at the current n
	bool one;
	bool zero_at(long n) const { return one && e + b * n == 0; }
};

} // namespace

HPComplex NumericEngine::bilateral(const BilateralSpec<NumericEngine> &s) const
{
	const mpfr_prec_t p = wp();
	if (s.z.c.is_zero())
		return s.nmin <= 0 ? one() : zero();
	const HPComplex zv = mono(s.z);
	const HPReal qquad = exp(-q_.t * s.quad.with_prec(p));
	auto make = [&](const std::vector<PochFactor<NumMono>> &in) {
		std::vector<NumFac> out;
		for (const auto &f : in)
			if (!f.x.c.is_zero())
				out.push_back({f.x.c, f.x.e, f.base, q_.pow(f.base).with_prec(p),
					       q_.value(f.x), is_one(f.x.c)});
		return out;
	};
	const std::vector<NumFac> num0 = make(s.num), den0 = make(s.den);
	std::vector<Fac> all;
	for (const auto *v : {&num0, &den0})
		for (const auto &f : *v)
			all.push_back({1, f.e, f.b});
	long n_lo, n_hi;
	regime(all, n_lo, n_hi);

	const HPReal eps = ldexp(HPReal(1, p), -static_cast<long>(p));
	HPComplex sum = s.nmin <= 0 ? one() : zero();
	auto converged = [&](const HPComplex &term, const HPComplex &ratio, bool beyond, int &small) {
		HPReal ar = abs(ratio);
		if (beyond && ar < 1) {
			HPReal tail = abs(term) * max(HPReal(1, p), 1 / (1 - ar));
			if (tail <= eps * abs(sum))
				return ++small >= 3;
		}
		small = 0;
		return false;
	};

	{ // n -> +inf; ratio(n) = term(n+1)/term(n)
		std::vector<NumFac> num = num0, den = den0;
		HPComplex term = one();
		HPReal qn(1, p); // q^{quad n}
		int small = 0;
		for (long n = 0;; ++n) {
			if (n > kMaxTerms)
				throw Divergence("numeric bilateral sum: term cap reached as n -> +inf");
			bool stop = false;
			HPComplex ratio = zv * qn;
			for (auto &f : num) {
				if (f.zero_at(n))
					stop = true;
				ratio *= 1 - f.cur;
				f.cur *= f.qb;
			}
			if (stop)
				break;
			for (auto &f : den) {
				if (f.zero_at(n))
					throw PolePoch("vanishing denominator factor in a bilateral summand");
				ratio /= 1 - f.cur;
				f.cur *= f.qb;
			}
			term *= ratio;
			if (n + 1 >= s.nmin)
				sum += term;
			qn *= qquad;
			if (term.is_zero() || converged(term, ratio, n >= n_hi, small))
				break;
		}
	}
	{ // n -> -inf; term(n-1) = term(n) / ratio(n-1)
		std::vector<NumFac> num = num0, den = den0;
		for (auto *v : {&num, &den})
			for (auto &f : *v)
				f.cur = f.cur / f.qb; // index -1
		HPComplex term = one();
		const HPReal qquad_inv = 1 / qquad;
		HPReal qn = qquad_inv; // q^{quad (n-1)} at n = 0
		const HPComplex zinv = one() / zv;
		int small = 0;
		for (long n = 0;; --n) {
			if (n - 1 < s.nmin)
				break;
			if (-n > kMaxTerms)
				throw Divergence("numeric bilateral sum: term cap reached as n -> -inf");
			bool stop = false;
			HPComplex ratio = zinv / qn; // 1/ratio(n-1)
			for (auto &f : den) {
				if (f.zero_at(n - 1))
					stop = true;
				ratio *= 1 - f.cur;
				f.cur = f.cur / f.qb;
			}
			if (stop)
				break;
			for (auto &f : num) {
				if (f.zero_at(n - 1))
					throw PolePoch("vanishing numerator factor at negative n");
				ratio /= 1 - f.cur;
				f.cur = f.cur / f.qb;
			}
			term *= ratio;
			sum += term;
			qn *= qquad_inv;
			if (term.is_zero() || converged(term, ratio, n - 1 <= n_lo, small))
				break;
		}
	}
	return sum;
}

HPComplex NumericEngine::H(const Quad &alpha0, const std::vector<Param> &x,
			   const std::vector<Param> &y, const mpq_class &base) const
{
	const size_t r = x.size();
	if (r == 0 || r > 2 || y.size() != r)
		throw DomainError("H needs r in {1, 2} parameters on each side");
	if (base <= 0 || !(alpha0 > 0))
		throw DomainError("H needs positive alpha and q-base");
	const mpfr_prec_t p = wp();
	const HPReal alpha = alpha0.with_prec(p);
	const HPReal c = HPReal(1, p) / static_cast<long>(r) - 1 / alpha;
	if (c.sign() < 0)
		throw Divergence("H needs alpha >= r");
	const bool flat = c.is_zero() || c.to_double() < 1e-30;

	const double tb = (q_.t * HPReal(base, p)).to_double();
	const HPReal qb = q_.pow(base).with_prec(p);
	// K = -log (q^b; q^b)_inf bounds log 1/(q^b)_i
	double K = 0;
	{
		double qd = qb.to_double(), qj = qd;
		for (int j = 0; j < 100000 && qj > 1e-300; ++j, qj *= qd)
			K -= std::log1p(-qj);
	}
	const double margin = static_cast<double>(p) * std::log(2.0) + 30;

	struct Side {
		std::vector<HPComplex> v; // parameter values
		std::vector<double> la;   // log |value|
	};
	auto mk = [&](const std::vector<Param> &ps) {
		Side s;
		for (const auto &m : ps) {
			s.v.push_back(q_.value(m));
			s.la.push_back(logabs(s.v.back()));
		}
		return s;
	};
	const Side X = mk(x), Y = mk(y);
	auto lmax = [](const Side &s) { return *std::max_element(s.la.begin(), s.la.end()); };
	const double lx = lmax(X), ly = lmax(Y);
	const double cd = flat ? 0.0 : c.to_double();

	// envelope of log |P_I| + log |Q_J| over the other index
	auto envelope = [&](double la, double lb, long I) -> double {
		if (std::isinf(la))
			return I == 0 ? 0.0 : -INFINITY;
		double other = 0;
		if (!std::isinf(lb) && !flat) {
			double Jv = std::max(0.0, lb / (tb * cd));
			other = -tb * cd / 2 * Jv * Jv + lb * Jv;
		}
		return -tb * cd / 2 * I * I + la * I + other + 2 * r * K + std::log(I + 1.0) * 2;
	};
	auto side_max = [&](double la, double lb) -> long {
		if (std::isinf(la))
			return 0;
		if (flat && (la >= 0 || (!std::isinf(lb) && lb >= 0)))
			throw Divergence("H at alpha = r needs |x_s|, |y_s| < 1");
		double top = -INFINITY;
		for (long I = 0; I < kMaxTerms; ++I) {
			double e = envelope(la, lb, I);
			top = std::max(top, e);
			bool past = flat || I > (la / (tb * cd)) + 1;
			if (past && e < std::min(top, 0.0) - margin)
				return I;
		}
		throw Divergence("H index bound not found");
	};
	const long Imax = side_max(lx, ly), Jmax = side_max(ly, lx);

	// A_s(i) = (-x_s)^i q^{b i^2/2}/(q^b; q^b)_i
	const HPReal qh = q_.pow(base / 2).with_prec(p);
	auto terms = [&](const Side &s, long M) {
		std::vector<std::vector<HPComplex>> A(s.v.size());
		for (size_t k = 0; k < s.v.size(); ++k) {
			A[k].push_back(one());
			HPReal qodd = qh;	  // q^{b(2i-1)/2}
			HPReal qi = qb;		  // q^{b i}
			for (long i = 1; i <= M; ++i) {
				A[k].push_back(A[k].back() * (-s.v[k]) * qodd / (1 - qi));
				qodd *= qb;
				qi *= qb;
			}
		}
		std::vector<HPComplex> Psum(static_cast<size_t>(M + 1), zero());
		for (long I = 0; I <= M; ++I) {
			if (s.v.size() == 1) {
				Psum[static_cast<size_t>(I)] = A[0][static_cast<size_t>(I)];
				continue;
			}
			for (long i = 0; i <= I; ++i)
				Psum[static_cast<size_t>(I)] +=
				    A[0][static_cast<size_t>(i)] * A[1][static_cast<size_t>(I - i)];
		}
		return Psum;
	};
	const auto P = terms(X, Imax), Q = terms(Y, Jmax);
	HPComplex sum = zero();
	const HPReal tba = q_.t * HPReal(base, p) / (alpha * 2);
	for (long I = 0; I <= Imax; ++I)
		for (long J = 0; J <= Jmax; ++J) {
			const auto &a = P[static_cast<size_t>(I)];
			const auto &b = Q[static_cast<size_t>(J)];
			if (a.is_zero() || b.is_zero())
				continue;
			const long d = I - J;
			sum += a * b * exp(tba * (d * d));
		}
	return sum;
}

HPComplex NumericEngine::L_product_form(const Quad &alpha0, const std::vector<Param> &x,
					const std::vector<Param> &y, const Param &z) const
{
	if (x.size() != y.size() || x.empty())
		throw DomainError("L needs matching non-empty parameter vectors");
	if (z.c.is_zero())
		return one();
	const mpfr_prec_t p = wp();
	const HPReal alpha = alpha0.with_prec(p);
	const HPComplex zv = mono(z);
	long hi = 2, lo = -2;
	for (size_t s = 0; s < x.size(); ++s) {
		hi = std::max({hi, ceil_of(-x[s].e) + 2, ceil_of(y[s].e) + 3});
		lo = std::min({lo, floor_of(-x[s].e) - 2, floor_of(y[s].e) - 1});
	}
	auto term = [&](long n) {
		HPComplex t = pow(zv, n) * exp(-q_.t * alpha * (n * (n - 1) / 2));
		for (size_t s = 0; s < x.size(); ++s) {
			t *= pinf(qshift(x[s], n));
			t *= pinf(qshift(y[s], 1 - n));
		}
		return t;
	};
	const HPReal eps = ldexp(HPReal(1, p), -static_cast<long>(p));
	HPComplex sum = zero();
	for (int dir : {1, -1}) {
		int small = 0;
		HPReal prev(p);
		for (long n = dir > 0 ? 0 : -1;; n += dir) {
			if (std::labs(n) > kMaxTerms)
				throw Divergence("product form: term cap reached");
			HPComplex t = term(n);
			sum += t;
			HPReal at = abs(t);
			const bool beyond = dir > 0 ? n >= hi : n <= lo;
			if (beyond && at <= eps * abs(sum) && (prev.is_zero() || at <= prev))
				++small;
			else
				small = 0;
			prev = at;
			if (small >= 3)
				break;
		}
	}
	for (size_t s = 0; s < x.size(); ++s)
		sum = sum * pinf_inv(x[s]) * pinf_inv(qshift(y[s], 1));
	return sum;
}

} // namespace qlab
