#pragma once

#include "qlab/exactq/exact_series.hpp"
#include "qlab/numq/hp.hpp"

#include <optional>
#include <utility>

namespace qlab {

/// c * q^e. The exponent is always an exact rational; the coefficient is a
/// rational in the exact engine and an HPComplex in the numeric engine.
template <class C> struct QMono {
	C c;
	mpq_class e;
};

using ExactMono = QMono<mpq_class>;
using NumMono = QMono<HPComplex>;

template <class C> QMono<C> operator*(const QMono<C> &a, const QMono<C> &b)
{
	return {a.c * b.c, a.e + b.e};
}

template <class C> QMono<C> operator-(const QMono<C> &a) { return {-a.c, a.e}; }

inline ExactMono inverse(const ExactMono &a) { return {1 / a.c, -a.e}; }
NumMono inverse(const NumMono &a);

/// a * q^s
template <class C> QMono<C> qshift(const QMono<C> &a, const mpq_class &s)
{
	return {a.c, a.e + s};
}

ExactMono pow(const ExactMono &a, long n);
NumMono pow(const NumMono &a, long n);

/// Numeric nome q = e^{-t}, 0 < q < 1, stored with both q and t.
struct Nome {
	HPReal q;
	HPReal t;

	static Nome from_q(const HPReal &q);
	static Nome from_t(const HPReal &t);
	mpfr_prec_t prec() const { return q.prec(); }
	/// q^e
	HPReal pow(const HPReal &e) const { return exp(-t * e); }
	HPReal pow(const mpq_class &e) const;
	HPComplex value(const NumMono &m) const;
};

/// Index of a q-shifted factorial: integer (possibly negative), infinity,
/// or a real c (numeric engine only).
struct PochIndex {
	enum class Kind { Integer, Infinity, RealC };
	Kind kind = Kind::Integer;
	long n = 0;
	std::optional<HPReal> c;

	static PochIndex integer(long n) { return {Kind::Integer, n, std::nullopt}; }
	static PochIndex infinity() { return {Kind::Infinity, 0, std::nullopt}; }
	static PochIndex real(const HPReal &c) { return {Kind::RealC, 0, c}; }
};

// ---- exact engine ---------------------------------------------------------

/// (x; q^base)_n truncated modulo q^(order/denom) of `grid`.
/// Negative n uses (x)_{-m} = 1/prod_{j=1}^m (1 - x q^{-j base}); a factor
/// that vanishes identically raises PolePoch for negative n and yields the
/// zero series for n >= 0.
ExactSeries poch_series(const ExactMono &x, const PochIndex &idx,
			const ExponentGrid &grid, const mpq_class &base = 1);

/// 1/(x; q^base)_n. Identically vanishing factors of a negative-index
/// product give the zero series (the convention 1/(q)_{-n} = 0); vanishing
/// denominators raise PolePoch.
ExactSeries poch_inv_series(const ExactMono &x, const PochIndex &idx,
			    const ExponentGrid &grid, const mpq_class &base = 1);

/// (x; q^base)_infinity known modulo q^order (absolute power of q).
ExactSeries pinf_series(const ExactMono &x, const mpq_class &base,
			const mpq_class &order);
/// 1/(x; q^base)_infinity known modulo q^order.
ExactSeries pinf_inv_series(const ExactMono &x, const mpq_class &base,
			    const mpq_class &order);

enum class ThetaForm { Sum, Product };

/// theta(z; q^base) = sum (-z)^n q^{base binom(n,2)} = (z, q^base/z, q^base; q^base)_inf
/// known modulo q^order.
ExactSeries theta_series(const ExactMono &z, const mpq_class &base,
			 const mpq_class &order, ThetaForm form = ThetaForm::Sum);

// ---- numeric engine -------------------------------------------------------

/// (x; q)_index for complex x, q with |q| < 1. Infinite products stop once
/// |x q^j| < 2^{-(working+8)} (1-|q|); the neglected tail is below the
/// reported accuracy.
HPComplex poch_value(const HPComplex &x, const PochIndex &idx, const HPComplex &q,
		     const Precision &p);

/// theta(z; q) for complex z != 0, |q| < 1.
HPComplex theta_value(const HPComplex &z, const HPComplex &q, const Precision &p,
		      ThetaForm form = ThetaForm::Sum);

/// Both sides of the eta transformation at t > 0:
/// (e^{-t}; e^{-t})_inf and (2 pi/t)^{1/2} e^{t/24 - pi^2/(6t)} (e^{-4pi^2/t}; e^{-4pi^2/t})_inf.
std::pair<HPReal, HPReal> eta_transform_sides(const HPReal &t, const Precision &p);

/// Leading part of the eta transformation: the right side with the
/// (e^{-4pi^2/t})_inf factor dropped.
HPReal eta_leading(const HPReal &t, const Precision &p);

/// Monomial-parameter numeric q-shifted factorials with exact zero detection:
/// a factor (1 - c q^k) is exactly zero iff c == 1 and k == 0.
HPComplex poch_value(const NumMono &x, long n, const Nome &q, const mpq_class &base,
		     const Precision &p);
HPComplex poch_inv_value(const NumMono &x, long n, const Nome &q,
			 const mpq_class &base, const Precision &p);
HPComplex pinf_value(const NumMono &x, const Nome &q, const mpq_class &base,
		     const Precision &p);
HPComplex theta_value(const NumMono &z, const Nome &q, const mpq_class &base,
		      const Precision &p, ThetaForm form = ThetaForm::Sum);

/// Evaluate an exact series at a numeric nome.
HPReal evaluate(const ExactSeries &s, const Nome &q);

} // namespace qlab
