#pragma once

#include <gmpxx.h>
#include <iosfwd>
#include <string>
#include <vector>

namespace qlab {

/// Exponent grid: indices k mean q^(k/D); a series is known modulo q^(N/D).
struct ExponentGrid {
	long denom = 1;
	long order = 1;

	ExponentGrid() = default;
	ExponentGrid(long denom, long order);
};

/// Truncated formal Laurent series in q^(1/D) with rational coefficients.
///
/// Coefficients are stored densely from the lowest nonzero index up to
/// order-1; indices may be negative. Every operation tracks the order
/// honestly: a result is only claimed modulo q^(order/D).
class ExactSeries {
public:
	/// Zero series known modulo q^(order/denom).
	ExactSeries(long denom, long order);
	explicit ExactSeries(const ExponentGrid &g) : ExactSeries(g.denom, g.order) {}

	static ExactSeries constant(const mpq_class &c, long denom, long order);
	/// c * q^(k/denom)
	static ExactSeries monomial(const mpq_class &c, long k, long denom, long order);
	/// c * q^e with rational e; the grid is refined to fit e.
	static ExactSeries monomial(const mpq_class &c, const mpq_class &e,
				    long denom, long order);
	/// coeffs[i] is the coefficient of q^((lo+i)/denom).
	static ExactSeries from_coeffs(std::vector<mpq_class> coeffs, long lo,
				       long denom, long order);

	long denom() const { return denom_; }
	long order() const { return order_; }
	ExponentGrid grid() const { return {denom_, order_ < 1 ? 1 : order_}; }
	/// Lowest index with a nonzero coefficient, or order() if zero.
	long valuation() const { return lo_; }
	bool is_zero() const { return coeffs_.empty(); }
	mpq_class coeff(long k) const;
	/// Nonzero terms as (index, coefficient), ascending.
	std::vector<std::pair<long, mpq_class>> terms() const;
	/// Absolute order as a rational power of q.
	mpq_class order_q() const
	{
		mpq_class r(order_, denom_);
		r.canonicalize();
		return r;
	}

	ExactSeries regrid(long new_denom) const;
	/// Series on the grid lcm(denom, den(e)) so that q^e is representable.
	ExactSeries fit_exponent(const mpq_class &e) const;
	/// Drop everything at index >= order (order may only decrease).
	ExactSeries truncated(long order) const;
	/// Truncate to an absolute order q^N (N may be fractional).
	ExactSeries truncated_q(const mpq_class &n) const;

	/// times q^(k/D)
	ExactSeries shifted(long k) const;
	/// times c q^e
	ExactSeries times_monomial(const mpq_class &c, const mpq_class &e) const;
	ExactSeries scaled(const mpq_class &c) const;
	/// times (1 - A q^(k/D))
	ExactSeries mul_binomial(const mpq_class &A, long k) const;
	/// divided by (1 - A q^(k/D)); PolePoch if the factor is identically 0.
	ExactSeries div_binomial(const mpq_class &A, long k) const;
	/// Rational exponent versions (the grid is refined when needed).
	ExactSeries mul_binomial_q(const mpq_class &A, const mpq_class &e) const;
	ExactSeries div_binomial_q(const mpq_class &A, const mpq_class &e) const;

	/// Multiplicative inverse; ZeroConstantTerm unless the exponent-0
	/// coefficient is nonzero and nothing lies below it.
	ExactSeries invert() const;
	/// Inverse of a general nonzero Laurent series q^v u (u a unit).
	ExactSeries reciprocal() const;

	ExactSeries operator-() const;
	ExactSeries &operator+=(const ExactSeries &o);
	ExactSeries &operator-=(const ExactSeries &o);
	ExactSeries &operator*=(const ExactSeries &o);

	/// Same order and coefficients, compared on a common grid.
	bool operator==(const ExactSeries &o) const;

	/// CSV dump: header "# D=<D> N=<N>", then "k,num,den" per nonzero term.
	std::string to_csv() const;

private:
	long denom_;
	long order_;
	long lo_;
	std::vector<mpq_class> coeffs_;

	void normalize();
	friend ExactSeries operator+(const ExactSeries &, const ExactSeries &);
	friend ExactSeries operator*(const ExactSeries &, const ExactSeries &);
};

ExactSeries operator+(const ExactSeries &a, const ExactSeries &b);
ExactSeries operator-(const ExactSeries &a, const ExactSeries &b);
ExactSeries operator*(const ExactSeries &a, const ExactSeries &b);
inline ExactSeries operator*(const ExactSeries &a, const mpq_class &c) { return a.scaled(c); }
inline ExactSeries operator*(const mpq_class &c, const ExactSeries &a) { return a.scaled(c); }

/// Writes the CSV form (used by test diagnostics).
std::ostream &operator<<(std::ostream &os, const ExactSeries &s);

/// Bring two series to a common denominator (lcm).
void common_grid(ExactSeries &a, ExactSeries &b);

/// Exponent index of q^e on a grid with denominator D; IncompatibleGrid if
/// e*D is not an integer.
long grid_index(const mpq_class &e, long denom);

/// lcm of denom and the denominator of e
long grid_for(long denom, const mpq_class &e);

} // namespace qlab
