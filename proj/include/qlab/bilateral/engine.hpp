#pragma once

#include "qlab/qfun/qfun.hpp"

#include <climits>
#include <vector>

namespace qlab {

/// One q-shifted factorial (x; q^base)_n in a bilateral summand.
template <class P> struct PochFactor {
	P x;
	mpq_class base = 1;
};

/// sum_{n >= nmin} z^n q^{quad binom(n,2)} prod_num (x; q^b)_n / prod_den (x; q^b)_n.
/// Terms are generated by the ratio term(n+1)/term(n) so negative n need no
/// separate reflection step; a vanishing numerator factor ends the sum in
/// that direction, a vanishing denominator factor is a pole.
template <class E> struct BilateralSpec {
	typename E::Param z;
	typename E::Quad quad;
	std::vector<PochFactor<typename E::Param>> num;
	std::vector<PochFactor<typename E::Param>> den;
	long nmin = LONG_MIN;
};

/// Exact engine: values are truncated series known modulo q^order.
/// Every operation returns a series whose order is at least `order` in the
/// absence of negative-valuation inputs; callers that multiply Laurent
/// factors check the final order.
class ExactEngine {
public:
	using Value = ExactSeries;
	using Param = ExactMono;
	using Quad = mpq_class;

	explicit ExactEngine(mpq_class order);

	const mpq_class &order() const { return order_; }

	Param param(const mpq_class &c, const mpq_class &e) const { return {c, e}; }
	Quad quad(const mpq_class &r) const { return r; }
	/// e^{2 pi i u / a}; only a in {1, 2} is representable exactly.
	Param root_of_unity(long a, long u) const;
	/// p^(1/k) when the coefficient has an exact rational k-th root.
	Param root(const Param &p, long k) const;

	Value zero() const;
	Value one() const;
	Value constant(const mpq_class &c) const;
	Value mono(const Param &p) const;
	Value times(const Value &v, const Param &p) const;

	Value poch(const Param &x, long n, const mpq_class &base = 1) const;
	Value poch_inv(const Param &x, long n, const mpq_class &base = 1) const;
	Value pinf(const Param &x, const mpq_class &base = 1) const;
	Value pinf_inv(const Param &x, const mpq_class &base = 1) const;
	Value theta(const Param &z, const mpq_class &base = 1) const;
	Value theta_product(const Param &z, const mpq_class &base = 1) const;

	Value bilateral(const BilateralSpec<ExactEngine> &s) const;
	/// H_alpha(x; y; q^base). x and y have equal length r; a zero coefficient
	/// stands for the designated Zero parameter.
	Value H(const Quad &alpha, const std::vector<Param> &x, const std::vector<Param> &y,
		const mpq_class &base = 1) const;
	/// Second displayed form of L_alpha(x; y; q, z): termwise infinite products.
	Value L_product_form(const Quad &alpha, const std::vector<Param> &x,
			     const std::vector<Param> &y, const Param &z) const;

private:
	Value product_form_at(const Quad &alpha, const std::vector<Param> &x,
			      const std::vector<Param> &y, const Param &z) const;

	mpq_class order_;
};

/// Numeric engine: values are HPComplex at the working precision of `prec`.
class NumericEngine {
public:
	using Value = HPComplex;
	using Param = NumMono;
	using Quad = HPReal;

	NumericEngine(Nome q, Precision prec);

	const Nome &nome() const { return q_; }
	const Precision &precision() const { return prec_; }
	mpfr_prec_t wp() const { return prec_.working(); }

	Param param(const mpq_class &c, const mpq_class &e) const;
	Param param(const HPComplex &c, const mpq_class &e) const { return {c, e}; }
	Quad quad(const mpq_class &r) const { return HPReal(r, wp()); }
	Param root_of_unity(long a, long u) const;
	/// Principal k-th root of the coefficient.
	Param root(const Param &p, long k) const;

	Value zero() const { return HPComplex(0, wp()); }
	Value one() const { return HPComplex(1, wp()); }
	Value constant(const mpq_class &c) const { return HPComplex(c, wp()); }
	Value mono(const Param &p) const { return q_.value(p); }
	Value times(const Value &v, const Param &p) const { return v * mono(p); }

	Value poch(const Param &x, long n, const mpq_class &base = 1) const;
	Value poch_inv(const Param &x, long n, const mpq_class &base = 1) const;
	Value pinf(const Param &x, const mpq_class &base = 1) const;
	Value pinf_inv(const Param &x, const mpq_class &base = 1) const;
	Value theta(const Param &z, const mpq_class &base = 1) const;
	Value theta_product(const Param &z, const mpq_class &base = 1) const;

	Value bilateral(const BilateralSpec<NumericEngine> &s) const;
	Value H(const Quad &alpha, const std::vector<Param> &x, const std::vector<Param> &y,
		const mpq_class &base = 1) const;
	Value L_product_form(const Quad &alpha, const std::vector<Param> &x,
			     const std::vector<Param> &y, const Param &z) const;

private:
	Nome q_;
	Precision prec_;
};

} // namespace qlab
