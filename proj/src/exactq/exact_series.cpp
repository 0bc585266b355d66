#include "qlab/exactq/exact_series.hpp"

#include "qlab/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qlab {

ExponentGrid::ExponentGrid(long d, long n) : denom(d), order(n)
{
	if (d < 1)
		throw IncompatibleGrid("denominator must be >= 1");
	if (n < 1)
		throw IncompatibleGrid("order must be >= 1");
}

long grid_index(const mpq_class &e, long denom)
{
	mpq_class k = e * denom;
	if (k.get_den() != 1)
		throw IncompatibleGrid("exponent " + e.get_str() +
				       " not on grid 1/" + std::to_string(denom));
	if (!k.get_num().fits_slong_p())
		throw IncompatibleGrid("exponent index too large");
	return k.get_num().get_si();
}

long grid_for(long denom, const mpq_class &e)
{
	mpz_class d = e.get_den();
	if (!d.fits_slong_p())
		throw IncompatibleGrid("exponent denominator too large");
	return std::lcm(denom, d.get_si());
}

ExactSeries::ExactSeries(long denom, long order)
    : denom_(denom), order_(order), lo_(order)
{
	if (denom < 1)
		throw IncompatibleGrid("denominator must be >= 1");
}

ExactSeries ExactSeries::constant(const mpq_class &c, long denom, long order)
{
	return monomial(c, 0L, denom, order);
}

ExactSeries ExactSeries::monomial(const mpq_class &c, long k, long denom, long order)
{
	ExactSeries s(denom, order);
	if (c != 0 && k < order) {
		s.lo_ = k;
		s.coeffs_.assign(1, c);
		s.coeffs_[0].canonicalize();
	}
	return s;
}

ExactSeries ExactSeries::monomial(const mpq_class &c, const mpq_class &e,
				  long denom, long order)
{
	long d = grid_for(denom, e);
	return monomial(c, grid_index(e, d), d, order * (d / denom));
}

ExactSeries ExactSeries::from_coeffs(std::vector<mpq_class> coeffs, long lo,
				     long denom, long order)
{
	ExactSeries s(denom, order);
	s.lo_ = lo;
	s.coeffs_ = std::move(coeffs);
	for (auto &c : s.coeffs_)
		c.canonicalize();
	s.normalize();
	return s;
}

void ExactSeries::normalize()
{
	if (lo_ >= order_) {
		coeffs_.clear();
		lo_ = order_;
		return;
	}
	if (static_cast<long>(coeffs_.size()) > order_ - lo_)
		coeffs_.resize(static_cast<size_t>(order_ - lo_));
	while (!coeffs_.empty() && coeffs_.back() == 0)
		coeffs_.pop_back();
	size_t first = 0;
	while (first < coeffs_.size() && coeffs_[first] == 0)
		++first;
	if (first == coeffs_.size()) {
		coeffs_.clear();
		lo_ = order_;
		return;
	}
	if (first) {
		coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(first));
		lo_ += static_cast<long>(first);
	}
}

mpq_class ExactSeries::coeff(long k) const
{
	if (k < lo_ || k >= lo_ + static_cast<long>(coeffs_.size()))
		return 0;
	return coeffs_[static_cast<size_t>(k - lo_)];
}

std::vector<std::pair<long, mpq_class>> ExactSeries::terms() const
{
	std::vector<std::pair<long, mpq_class>> out;
	for (size_t i = 0; i < coeffs_.size(); ++i)
		if (coeffs_[i] != 0)
			out.emplace_back(lo_ + static_cast<long>(i), coeffs_[i]);
	return out;
}

ExactSeries ExactSeries::regrid(long new_denom) const
{
	if (new_denom < 1 || new_denom % denom_ != 0)
		throw IncompatibleGrid("cannot regrid 1/" + std::to_string(denom_) +
				       " to 1/" + std::to_string(new_denom));
	const long m = new_denom / denom_;
	if (m == 1)
		return *this;
	ExactSeries s(new_denom, order_ * m);
	if (coeffs_.empty())
		return s;
	s.lo_ = lo_ * m;
	s.coeffs_.assign((coeffs_.size() - 1) * static_cast<size_t>(m) + 1, 0);
	for (size_t i = 0; i < coeffs_.size(); ++i)
		s.coeffs_[i * static_cast<size_t>(m)] = coeffs_[i];
	return s;
}

ExactSeries ExactSeries::fit_exponent(const mpq_class &e) const
{
	return regrid(grid_for(denom_, e));
}

ExactSeries ExactSeries::truncated(long order) const
{
	if (order > order_)
		throw DomainError("cannot truncate to order " + std::to_string(order) +
				  " above known order " + std::to_string(order_));
	ExactSeries s = *this;
	s.order_ = order;
	s.normalize();
	return s;
}

ExactSeries ExactSeries::truncated_q(const mpq_class &n) const
{
	mpq_class k = n * denom_;
	mpz_class c;
	mpz_cdiv_q(c.get_mpz_t(), k.get_num_mpz_t(), k.get_den_mpz_t());
	return truncated(c.get_si());
}

ExactSeries ExactSeries::shifted(long k) const
{
	ExactSeries s = *this;
	s.order_ += k;
	s.lo_ += k;
	return s;
}

ExactSeries ExactSeries::times_monomial(const mpq_class &c, const mpq_class &e) const
{
	ExactSeries s = fit_exponent(e);
	return s.scaled(c).shifted(grid_index(e, s.denom_));
}

ExactSeries ExactSeries::scaled(const mpq_class &c) const
{
	ExactSeries s(denom_, order_);
	if (c == 0)
		return s;
	s = *this;
	for (auto &x : s.coeffs_)
		x *= c;
	return s;
}

ExactSeries ExactSeries::mul_binomial(const mpq_class &A, long k) const
{
	if (A == 0)
		return *this;
	if (k == 0)
		return scaled(1 - A);
	ExactSeries s(denom_, k > 0 ? order_ : order_ + k);
	if (coeffs_.empty())
		return s;
	const long lo = std::min(lo_, lo_ + k);
	const long hi = std::max(lo_, lo_ + k) + static_cast<long>(coeffs_.size());
	const long top = std::min(hi, s.order_);
	if (top <= lo)
		return s;
	s.lo_ = lo;
	s.coeffs_.assign(static_cast<size_t>(top - lo), 0);
	const long n = static_cast<long>(coeffs_.size());
	for (long i = 0; i < n; ++i) {
		long a = lo_ + i;
		if (a < top)
			s.coeffs_[static_cast<size_t>(a - lo)] += coeffs_[static_cast<size_t>(i)];
		long b = a + k;
		if (b < top)
			s.coeffs_[static_cast<size_t>(b - lo)] -= A * coeffs_[static_cast<size_t>(i)];
	}
	s.normalize();
	return s;
}

ExactSeries ExactSeries::div_binomial(const mpq_class &A, long k) const
{
	if (A == 0)
		return *this;
	if (k == 0) {
		if (A == 1)
			throw PolePoch("division by the zero factor (1 - q^0)");
		return scaled(1 / (1 - A));
	}
	if (k < 0) {
		// 1/(1 - A q^k) = -A^{-1} q^{-k} / (1 - A^{-1} q^{-k})
		mpq_class inv = 1 / A;
		return shifted(-k).scaled(-inv).div_binomial(inv, -k);
	}
	ExactSeries s = *this;
	if (coeffs_.empty())
		return s;
	const long len = order_ - lo_;
	s.coeffs_.resize(static_cast<size_t>(len), 0);
	for (long i = k; i < len; ++i)
		if (s.coeffs_[static_cast<size_t>(i - k)] != 0)
			s.coeffs_[static_cast<size_t>(i)] += A * s.coeffs_[static_cast<size_t>(i - k)];
	s.normalize();
	return s;
}

ExactSeries ExactSeries::mul_binomial_q(const mpq_class &A, const mpq_class &e) const
{
	ExactSeries s = fit_exponent(e);
	return s.mul_binomial(A, grid_index(e, s.denom_));
}

ExactSeries ExactSeries::div_binomial_q(const mpq_class &A, const mpq_class &e) const
{
	ExactSeries s = fit_exponent(e);
	return s.div_binomial(A, grid_index(e, s.denom_));
}

ExactSeries ExactSeries::invert() const
{
	if (coeffs_.empty() || lo_ != 0)
		throw ZeroConstantTerm("constant term vanishes or negative powers present");
	const long len = order_;
	std::vector<mpq_class> b(static_cast<size_t>(len));
	mpq_class inv0 = 1 / coeffs_[0];
	b[0] = inv0;
	const long na = static_cast<long>(coeffs_.size());
	for (long n = 1; n < len; ++n) {
		mpq_class acc = 0;
		for (long k = 1; k <= std::min(n, na - 1); ++k)
			if (coeffs_[static_cast<size_t>(k)] != 0)
				acc += coeffs_[static_cast<size_t>(k)] * b[static_cast<size_t>(n - k)];
		b[static_cast<size_t>(n)] = -acc * inv0;
	}
	return from_coeffs(std::move(b), 0, denom_, order_);
}

ExactSeries ExactSeries::reciprocal() const
{
	if (coeffs_.empty())
		throw ZeroConstantTerm("reciprocal of the zero series");
	const long v = lo_;
	return shifted(-v).invert().shifted(-v);
}

ExactSeries ExactSeries::operator-() const { return scaled(-1); }

ExactSeries &ExactSeries::operator+=(const ExactSeries &o) { return *this = *this + o; }
ExactSeries &ExactSeries::operator-=(const ExactSeries &o) { return *this = *this - o; }
ExactSeries &ExactSeries::operator*=(const ExactSeries &o) { return *this = *this * o; }

// equal as truncated series: same order and coefficients on a common grid
bool ExactSeries::operator==(const ExactSeries &o) const
{
	if (denom_ != o.denom_) {
		long d = std::lcm(denom_, o.denom_);
		return regrid(d) == o.regrid(d);
	}
	return order_ == o.order_ && lo_ == o.lo_ && coeffs_ == o.coeffs_;
}

std::string ExactSeries::to_csv() const
{
	std::ostringstream os;
	os << "# D=" << denom_ << " N=" << order_ << "\n";
	for (const auto &[k, c] : terms())
		os << k << "," << c.get_num().get_str() << "," << c.get_den().get_str() << "\n";
	return os.str();
}

std::ostream &operator<<(std::ostream &os, const ExactSeries &s) { return os << s.to_csv(); }

void common_grid(ExactSeries &a, ExactSeries &b)
{
	if (a.denom() == b.denom())
		return;
	long d = std::lcm(a.denom(), b.denom());
	a = a.regrid(d);
	b = b.regrid(d);
}

ExactSeries operator+(const ExactSeries &a0, const ExactSeries &b0)
{
	ExactSeries a = a0, b = b0;
	common_grid(a, b);
	ExactSeries s(a.denom_, std::min(a.order_, b.order_));
	if (a.coeffs_.empty() && b.coeffs_.empty())
		return s;
	long lo = s.order_;
	if (!a.coeffs_.empty())
		lo = std::min(lo, a.lo_);
	if (!b.coeffs_.empty())
		lo = std::min(lo, b.lo_);
	if (lo >= s.order_)
		return s;
	s.lo_ = lo;
	s.coeffs_.assign(static_cast<size_t>(s.order_ - lo), 0);
	for (const ExactSeries *p : {&a, &b})
		for (size_t i = 0; i < p->coeffs_.size(); ++i) {
			long k = p->lo_ + static_cast<long>(i);
			if (k < s.order_)
				s.coeffs_[static_cast<size_t>(k - lo)] += p->coeffs_[i];
		}
	s.normalize();
	return s;
}

ExactSeries operator-(const ExactSeries &a, const ExactSeries &b) { return a + (-b); }

ExactSeries operator*(const ExactSeries &a0, const ExactSeries &b0)
{
	ExactSeries a = a0, b = b0;
	common_grid(a, b);
	// a zero series known mod q^N has valuation at least N
	const long va = a.coeffs_.empty() ? a.order_ : a.lo_;
	const long vb = b.coeffs_.empty() ? b.order_ : b.lo_;
	const long order = std::min(a.order_ + vb, b.order_ + va);
	ExactSeries s(a.denom_, order);
	if (a.coeffs_.empty() || b.coeffs_.empty())
		return s;
	const long lo = a.lo_ + b.lo_;
	if (lo >= order)
		return s;
	s.lo_ = lo;
	s.coeffs_.assign(static_cast<size_t>(order - lo), 0);
	const long na = static_cast<long>(a.coeffs_.size());
	const long nb = static_cast<long>(b.coeffs_.size());
	const long len = order - lo;
	mpq_class tmp;
	for (long i = 0; i < na && i < len; ++i) {
		const mpq_class &ai = a.coeffs_[static_cast<size_t>(i)];
		if (ai == 0)
			continue;
		const long jmax = std::min(nb, len - i);
		for (long j = 0; j < jmax; ++j) {
			const mpq_class &bj = b.coeffs_[static_cast<size_t>(j)];
			if (bj == 0)
				continue;
			mpq_mul(tmp.get_mpq_t(), ai.get_mpq_t(), bj.get_mpq_t());
			s.coeffs_[static_cast<size_t>(i + j)] += tmp;
		}
	}
	s.normalize();
	return s;
}

} // namespace qlab
