#pragma once

#include "qlab/bilateral/engine.hpp"
#include "qlab/errors.hpp"

#include <type_traits>
#include <vector>

namespace qlab {

inline bool is_zero(const ExactMono &p) { return p.c == 0; }
inline bool is_zero(const NumMono &p) { return p.c.is_zero(); }

/// L_alpha(x; q, z) = sum_n z^n q^{alpha binom(n,2)} / (x)_n.
template <class E>
typename E::Value L_scalar(const E &eng, const typename E::Quad &alpha,
			   const typename E::Param &x, const typename E::Param &z)
{
	BilateralSpec<E> s{z, alpha, {}, {{x, 1}}};
	return eng.bilateral(s);
}

/// L_alpha(x; y; q, z) = sum_n z^n q^{(alpha-r) binom(n,2)} prod_s (1/y_s)_n (-y_s)^n / (x_s)_n.
/// A zero y_s contributes q^{binom(n,2)}, the y_s -> 0 limit of (1/y_s)_n (-y_s)^n.
template <class E>
typename E::Value L_vector(const E &eng, const typename E::Quad &alpha,
			   const std::vector<typename E::Param> &x,
			   const std::vector<typename E::Param> &y, const typename E::Param &z)
{
	if (x.empty() || x.size() != y.size())
		throw DomainError("L needs matching non-empty parameter vectors");
	BilateralSpec<E> s{z, alpha - static_cast<long>(x.size()), {}, {}};
	for (size_t k = 0; k < x.size(); ++k) {
		s.den.push_back({x[k], 1});
		if (is_zero(y[k])) {
			s.quad = s.quad + 1L;
			continue;
		}
		s.z = s.z * (-y[k]);
		s.num.push_back({inverse(y[k]), 1});
	}
	return eng.bilateral(s);
}

/// Second displayed form: sum_n z^n q^{alpha binom(n,2)} prod (x_s q^n, y_s q^{1-n})_inf
/// divided by prod (x_s, q y_s)_inf.
template <class E>
typename E::Value L_vector_product_form(const E &eng, const typename E::Quad &alpha,
					const std::vector<typename E::Param> &x,
					const std::vector<typename E::Param> &y,
					const typename E::Param &z)
{
	return eng.L_product_form(alpha, x, y, z);
}

/// H_alpha(x; y; q^base) = sum_{i, j >= 0} q^{base Q_alpha(i,j)/2} prod (-x_s)^{i_s} (-y_s)^{j_s}
/// / ((q^base; q^base)_{i_s} (q^base; q^base)_{j_s}).
template <class E>
typename E::Value H_alpha(const E &eng, const typename E::Quad &alpha,
			  const std::vector<typename E::Param> &x,
			  const std::vector<typename E::Param> &y, const mpq_class &base = 1)
{
	return eng.H(alpha, x, y, base);
}

/// r psi r (b; a; q, w) = sum_n (b)_n / (a)_n w^n, computed as L_r(a; 1/b; q, (-1)^r prod b_s w).
template <class E>
typename E::Value psi_r(const E &eng, const std::vector<typename E::Param> &b,
			const std::vector<typename E::Param> &a, const typename E::Param &w)
{
	if (b.empty() || b.size() != a.size())
		throw DomainError("psi needs matching non-empty parameter vectors");
	std::vector<typename E::Param> y;
	typename E::Param z = w;
	for (const auto &bs : b) {
		if (is_zero(bs))
			throw DomainError("psi numerator parameter must be nonzero");
		y.push_back(inverse(bs));
		z = z * (-bs);
	}
	return L_vector(eng, eng.quad(static_cast<long>(b.size())), a, y, z);
}

/// sum_{n >= 0} term(sub, n). For the exact engine `val(n)` is a lower bound of
/// the q-valuation of term n; summation stops once it is past the order and
/// increasing. The numeric engine stops after three consecutive negligible,
/// non-increasing terms.
template <class E, class Term, class Val>
typename E::Value unilateral_sum(const E &eng, Term term, Val val)
{
	constexpr long cap = 1000000;
	if constexpr (std::is_same_v<E, ExactEngine>) {
		const mpq_class &W = eng.order();
		std::vector<long> keep;
		mpq_class vmin = 0;
		for (long n = 0;; ++n) {
			if (n > cap)
				throw Divergence("unilateral sum: term cap reached");
			mpq_class v = val(n), v1 = val(n + 1), v2 = val(n + 2);
			if (v < W) {
				keep.push_back(n);
				if (v < vmin)
					vmin = v;
			} else if (v1 > v && v2 - v1 >= v1 - v) {
				break;
			}
		}
		ExactEngine sub(W - vmin);
		ExactSeries sum = eng.zero();
		for (long n : keep) {
			ExactSeries t = term(sub, n);
			sum += t.order_q() > W ? t.truncated_q(W) : t;
		}
		return sum;
	} else {
		const HPReal eps = ldexp(HPReal(1, eng.wp()), -static_cast<long>(eng.wp()));
		HPComplex sum = eng.zero();
		HPReal prev(eng.wp());
		int small = 0;
		for (long n = 0;; ++n) {
			if (n > cap)
				throw Divergence("unilateral sum: term cap reached");
			HPComplex t = term(eng, n);
			sum += t;
			HPReal at = abs(t);
			if (n > 2 && at <= eps * abs(sum) && at <= prev)
				++small;
			else
				small = 0;
			prev = at;
			if (small >= 3)
				break;
		}
		return sum;
	}
}

/// McIntosh-type families with a > 0 (coefficient) and rational b, c.
template <class E> struct FFamily {
	using P = typename E::Param;

	/// f1 = sum_{n >= 0} a^n q^{b n^2 + c n} / (q)_n, summed directly.
	static typename E::Value f1(const E &eng, const P &a, const mpq_class &b, const mpq_class &c)
	{
		if (b <= 0)
			throw DomainError("f1 needs b > 0");
		const P A = qshift(a, c);
		return unilateral_sum(
		    eng,
		    [&](const E &sub, long n) {
			    P m = pow(A, n);
			    return sub.times(sub.poch_inv(sub.param(1, 1), n), qshift(m, b * (n * n)));
		    },
		    [&](long n) -> mpq_class { return A.e * n + b * (n * n); });
	}

	/// f2 = sum_{n >= 0} (a q^c)^n q^{b n^2} (-q)_n, summed directly.
	static typename E::Value f2(const E &eng, const P &a, const mpq_class &b, const mpq_class &c)
	{
		if (b < 0)
			throw DomainError("f2 needs b >= 0");
		const P A = qshift(a, c);
		return unilateral_sum(
		    eng,
		    [&](const E &sub, long n) {
			    P m = pow(A, n);
			    return sub.times(sub.poch(sub.param(-1, 1), n), qshift(m, b * (n * n)));
		    },
		    [&](long n) -> mpq_class { return A.e * n + b * (n * n); });
	}

	/// f1hat = L_{2b}(q; q, a q^{b+c}).
	static typename E::Value f1hat(const E &eng, const P &a, const mpq_class &b, const mpq_class &c)
	{
		return L_scalar(eng, eng.quad(2 * b), eng.param(1, 1), qshift(a, b + c));
	}

	/// f2hat = L_{1+2b}(-1; q, a^{-1} q^{b-c}).
	static typename E::Value f2hat(const E &eng, const P &a, const mpq_class &b, const mpq_class &c)
	{
		return L_scalar(eng, eng.quad(1 + 2 * b), eng.param(-1, 0), qshift(inverse(a), b - c));
	}

	/// f2hat - f2 = sum_{n >= 1} q^{b n^2 - c n} / (a^n (-1; q^{-1})_n).
	static typename E::Value f2_tail(const E &eng, const P &a, const mpq_class &b,
					 const mpq_class &c)
	{
		const P A = qshift(inverse(a), -c);
		return unilateral_sum(
		    eng,
		    [&](const E &sub, long n) {
			    if (n == 0)
				    return sub.zero();
			    P m = pow(A, n);
			    return sub.times(sub.poch_inv(sub.param(-1, 0), n, -1), qshift(m, b * (n * n)));
		    },
		    // 1/(-1; q^{-1})_n has valuation binom(n,2)
		    [&](long n) -> mpq_class { return A.e * n + b * (n * n) + mpq_class(n * (n - 1) / 2); });
	}

	/// f1tilde = f1(-a^{-1/(2b)}, 1/2 - 1/(4b), 1/2 - c/(2b)).
	static typename E::Value f1tilde(const E &eng, const P &a, const mpq_class &b,
					 const mpq_class &c)
	{
		if (b <= mpq_class(1, 2))
			throw DomainError("f1tilde needs b > 1/2");
		const P r = rational_power(eng, a, -1 / (2 * b));
		return f1(eng, -r, mpq_class(1, 2) - 1 / (4 * b), mpq_class(1, 2) - c / (2 * b));
	}

	/// f2tilde = f1(a^{1/(1+2b)}, b/(1+2b), (c-b)/(1+2b)).
	static typename E::Value f2tilde(const E &eng, const P &a, const mpq_class &b,
					 const mpq_class &c)
	{
		const mpq_class d = 1 + 2 * b;
		const P r = rational_power(eng, a, 1 / d);
		return f1(eng, r, b / d, (c - b) / d);
	}

	/// a^e for a rational exponent e = u/v: the v-th root of a^u.
	static P rational_power(const E &eng, const P &a, const mpq_class &e)
	{
		mpz_class u = e.get_num(), v = e.get_den();
		return eng.root(pow(a, u.get_si()), v.get_si());
	}
};

/// Q_alpha(i, j) = sum_s (i_s^2 + j_s^2) - (sum_s (i_s - j_s))^2 / alpha.
struct QuadFormQ {
	mpq_class alpha;
	long r;

	mpq_class operator()(const std::vector<long> &i, const std::vector<long> &j) const
	{
		mpq_class sq = 0, d = 0;
		for (long k = 0; k < r; ++k) {
			sq += i[static_cast<size_t>(k)] * i[static_cast<size_t>(k)] +
			      j[static_cast<size_t>(k)] * j[static_cast<size_t>(k)];
			d += i[static_cast<size_t>(k)] - j[static_cast<size_t>(k)];
		}
		return sq - d * d / alpha;
	}
};

} // namespace qlab
