#include "qlab/qfun/qfun.hpp"

#include "qlab/errors.hpp"

#include <numeric>
#include <vector>

namespace qlab {

namespace {

mpq_class qpow(const mpq_class &c, long n)
{
	if (n < 0) {
		if (c == 0)
			throw DomainError("negative power of zero");
		return qpow(1 / c, -n);
	}
	mpz_class num, den;
	mpz_pow_ui(num.get_mpz_t(), c.get_num_mpz_t(), static_cast<unsigned long>(n));
	mpz_pow_ui(den.get_mpz_t(), c.get_den_mpz_t(), static_cast<unsigned long>(n));
	mpq_class r(num, den);
	r.canonicalize();
	return r;
}

long ceil_index(const mpq_class &x, long denom)
{
	mpq_class k = x * denom;
	mpz_class c;
	mpz_cdiv_q(c.get_mpz_t(), k.get_num_mpz_t(), k.get_den_mpz_t());
	if (!c.fits_slong_p())
		throw DomainError("series order too large");
	return c.get_si();
}

long den_of(const mpq_class &x)
{
	mpz_class d = x.get_den();
	if (!d.fits_slong_p())
		throw IncompatibleGrid("exponent denominator too large");
	return d.get_si();
}

ExactSeries unit_at(const mpq_class &order, long denom)
{
	long d = std::lcm(denom, den_of(order));
	return ExactSeries::constant(1, d, ceil_index(order, d));
}

bool identically_zero(const mpq_class &c, const mpq_class &k) { return c == 1 && k == 0; }

// prod (1 - c q^k) over ks, modulo q^order; zero series if a factor vanishes.
ExactSeries mul_factors(const mpq_class &c, const std::vector<mpq_class> &ks,
			const mpq_class &order, long denom)
{
	mpq_class w = order;
	for (const auto &k : ks) {
		if (identically_zero(c, k))
			return ExactSeries(unit_at(order, denom).grid());
		if (k < 0)
			w -= k;
	}
	ExactSeries s = unit_at(w, denom);
	if (c == 0)
		return s.truncated_q(order);
	for (const auto &k : ks)
		s = s.mul_binomial_q(c, k);
	return s.truncated_q(order);
}

// 1/prod (1 - c q^k) over ks, modulo q^order; PolePoch if a factor vanishes.
ExactSeries div_factors(const mpq_class &c, const std::vector<mpq_class> &ks,
			const mpq_class &order, long denom)
{
	for (const auto &k : ks)
		if (identically_zero(c, k))
			throw PolePoch("factor (1 - q^0) in a denominator");
	ExactSeries s = unit_at(order, denom);
	if (c == 0)
		return s;
	for (const auto &k : ks)
		s = s.div_binomial_q(c, k);
	return s.truncated_q(order);
}

// Exponents e + base*j for the finite product (x)_n (n >= 0) or the
// reciprocal product of (x)_{-m}.
std::vector<mpq_class> finite_exponents(const ExactMono &x, long n, const mpq_class &base)
{
	std::vector<mpq_class> ks;
	if (n >= 0)
		for (long j = 0; j < n; ++j)
			ks.push_back(x.e + base * j);
	else
		for (long j = 1; j <= -n; ++j)
			ks.push_back(x.e - base * j);
	return ks;
}

// Exponents of (x; q^base)_inf that can reach below `order` in a product
// whose other factors have valuation >= 0.
std::vector<mpq_class> infinite_exponents(const ExactMono &x, const mpq_class &base,
					  const mpq_class &order)
{
	if (base <= 0)
		throw DomainError("infinite product needs a positive q-base");
	std::vector<mpq_class> ks;
	if (x.c == 0)
		return ks;
	mpq_class neg = 0;
	for (long j = 0;; ++j) {
		mpq_class k = x.e + base * j;
		if (k >= 0)
			break;
		neg += k;
	}
	for (long j = 0;; ++j) {
		mpq_class k = x.e + base * j;
		if (k >= order - neg)
			break;
		ks.push_back(k);
	}
	return ks;
}

// Valuation lower bound of (x; q^base)_inf.
mpq_class pinf_valuation(const ExactMono &x, const mpq_class &base)
{
	mpq_class v = 0;
	if (x.c == 0)
		return v;
	for (long j = 0;; ++j) {
		mpq_class k = x.e + base * j;
		if (k >= 0)
			break;
		v += k;
	}
	return v;
}

bool is_one(const HPComplex &c) { return c.re == 1 && c.im.is_zero(); }

HPReal tail_threshold(const Precision &p) { return ldexp(HPReal(1, p.working()), -(p.working() + 8)); }

} // namespace

NumMono inverse(const NumMono &a)
{
	if (a.c.is_zero())
		throw DomainError("inverse of a zero monomial");
	return {HPComplex(1, a.c.prec()) / a.c, -a.e};
}

ExactMono pow(const ExactMono &a, long n) { return {qpow(a.c, n), a.e * n}; }

NumMono pow(const NumMono &a, long n)
{
	if (n < 0 && a.c.is_zero())
		throw DomainError("negative power of zero");
	return {pow(a.c, n), a.e * n};
}

Nome Nome::from_q(const HPReal &q)
{
	if (!(q > 0 && q < 1))
		throw DomainError("nome q must lie in (0, 1)");
	return {q, -log(q)};
}

Nome Nome::from_t(const HPReal &t)
{
	if (!(t > 0))
		throw DomainError("t must be positive");
	return {exp(-t), t};
}

HPReal Nome::pow(const mpq_class &e) const
{
	if (e == 0)
		return HPReal(1, prec());
	return exp(-t * HPReal(e, prec()));
}

HPComplex Nome::value(const NumMono &m) const
{
	if (m.c.is_zero())
		return HPComplex(0, std::max(prec(), m.c.prec()));
	return m.c * pow(m.e);
}

// ---- exact ------------------------------------------------------------------

ExactSeries poch_series(const ExactMono &x, const PochIndex &idx, const ExponentGrid &grid,
			const mpq_class &base)
{
	const mpq_class order(grid.order, grid.denom);
	switch (idx.kind) {
	case PochIndex::Kind::Integer:
		if (idx.n >= 0)
			return mul_factors(x.c, finite_exponents(x, idx.n, base), order, grid.denom);
		return div_factors(x.c, finite_exponents(x, idx.n, base), order, grid.denom);
	case PochIndex::Kind::Infinity: {
		ExactSeries s = pinf_series(x, base, order);
		return s.regrid(std::lcm(s.denom(), grid.denom));
	}
	case PochIndex::Kind::RealC:
		break;
	}
	throw UnsupportedMode("real index is only available in the numeric engine");
}

ExactSeries poch_inv_series(const ExactMono &x, const PochIndex &idx,
			    const ExponentGrid &grid, const mpq_class &base)
{
	const mpq_class order(grid.order, grid.denom);
	switch (idx.kind) {
	case PochIndex::Kind::Integer:
		if (idx.n >= 0)
			return div_factors(x.c, finite_exponents(x, idx.n, base), order, grid.denom);
		return mul_factors(x.c, finite_exponents(x, idx.n, base), order, grid.denom);
	case PochIndex::Kind::Infinity: {
		ExactSeries s = pinf_inv_series(x, base, order);
		return s.regrid(std::lcm(s.denom(), grid.denom));
	}
	case PochIndex::Kind::RealC:
		break;
	}
	throw UnsupportedMode("real index is only available in the numeric engine");
}

ExactSeries pinf_series(const ExactMono &x, const mpq_class &base, const mpq_class &order)
{
	return mul_factors(x.c, infinite_exponents(x, base, order), order, 1);
}

ExactSeries pinf_inv_series(const ExactMono &x, const mpq_class &base, const mpq_class &order)
{
	if (base <= 0)
		throw DomainError("infinite product needs a positive q-base");
	// 1/(1 - c q^k) has valuation max(0, -k) >= 0, so factors with k >= order
	// are 1 modulo q^order.
	std::vector<mpq_class> ks;
	if (x.c != 0)
		for (long j = 0;; ++j) {
			mpq_class k = x.e + base * j;
			if (k >= order)
				break;
			ks.push_back(k);
		}
	return div_factors(x.c, ks, order, 1);
}

ExactSeries theta_series(const ExactMono &z, const mpq_class &base, const mpq_class &order,
			 ThetaForm form)
{
	if (base <= 0)
		throw DomainError("theta needs a positive q-base");
	if (z.c == 0)
		throw DomainError("theta(0; q) is undefined");
	if (form == ThetaForm::Product) {
		ExactMono z2 = qshift(inverse(z), base);
		ExactMono qb{1, base};
		mpq_class w = order - pinf_valuation(z, base) - pinf_valuation(z2, base);
		ExactSeries s = pinf_series(z, base, w) * pinf_series(z2, base, w);
		s = s * pinf_series(qb, base, w);
		return s.truncated_q(order);
	}
	// exponent g(n) = n e + base n(n-1)/2, convex in n
	auto g = [&](long n) -> mpq_class { return z.e * n + base * mpq_class(n * (n - 1) / 2); };
	mpq_class vertex = mpq_class(1, 2) - z.e / base;
	mpz_class fl;
	mpz_fdiv_q(fl.get_mpz_t(), vertex.get_num_mpz_t(), vertex.get_den_mpz_t());
	const long n0 = fl.get_si();
	std::vector<std::pair<long, mpq_class>> terms; // (n, exponent)
	for (long n = n0; g(n) < order; ++n)
		terms.emplace_back(n, g(n));
	for (long n = n0 - 1; g(n) < order; --n)
		terms.emplace_back(n, g(n));
	long d = den_of(order);
	for (const auto &t : terms)
		d = std::lcm(d, den_of(t.second));
	const long ord = ceil_index(order, d);
	long lo = ord;
	for (const auto &t : terms)
		lo = std::min(lo, grid_index(t.second, d));
	std::vector<mpq_class> coeffs(static_cast<size_t>(ord - lo));
	const mpq_class mz = -z.c;
	for (const auto &t : terms)
		coeffs[static_cast<size_t>(grid_index(t.second, d) - lo)] += qpow(mz, t.first);
	return ExactSeries::from_coeffs(std::move(coeffs), lo, d, ord);
}

// ---- numeric ----------------------------------------------------------------

namespace {

HPComplex pinf_complex(const HPComplex &x, const HPComplex &q, const Precision &p)
{
	const mpfr_prec_t prec = p.working();
	HPComplex prod(1, prec);
	if (x.is_zero())
		return prod;
	HPReal aq = abs(q);
	HPReal eps = tail_threshold(p) * (1 - aq);
	HPComplex xj = x;
	for (long j = 0;; ++j) {
		prod *= 1 - xj;
		if (prod.is_zero() || abs(xj) < eps)
			return prod;
		if (j > 100 * static_cast<long>(prec) + 1000000)
			throw PrecisionLoss("infinite product did not converge");
		xj *= q;
	}
}

} // namespace

HPComplex poch_value(const HPComplex &x0, const PochIndex &idx, const HPComplex &q0,
		     const Precision &p)
{
	const mpfr_prec_t prec = p.working();
	HPComplex x(x0.re.with_prec(prec), x0.im.with_prec(prec));
	HPComplex q(q0.re.with_prec(prec), q0.im.with_prec(prec));
	if (!(abs(q) < 1))
		throw DomainError("|q| must be < 1");
	switch (idx.kind) {
	case PochIndex::Kind::Integer: {
		HPComplex prod(1, prec);
		if (idx.n >= 0) {
			HPComplex xj = x;
			for (long j = 0; j < idx.n; ++j, xj *= q)
				prod *= 1 - xj;
			return prod;
		}
		if (q.is_zero())
			throw DomainError("negative index needs q != 0");
		HPComplex qi = HPComplex(1, prec) / q;
		HPComplex xj = x * qi;
		for (long j = 1; j <= -idx.n; ++j, xj *= qi)
			prod *= 1 - xj;
		if (prod.is_zero())
			throw PolePoch("(x)_{-n} with a vanishing factor");
		return HPComplex(1, prec) / prod;
	}
	case PochIndex::Kind::Infinity:
		return pinf_complex(x, q, p);
	case PochIndex::Kind::RealC: {
		const HPReal c = idx.c->with_prec(prec);
		if (q.is_zero())
			return c > 0 ? 1 - x : HPComplex(1, prec);
		HPComplex qc = exp(log(q) * c);
		HPComplex den = pinf_complex(x * qc, q, p);
		if (den.is_zero())
			throw PolePoch("(x q^c)_inf vanishes");
		return pinf_complex(x, q, p) / den;
	}
	}
	throw DomainError("bad index");
}

HPComplex theta_value(const HPComplex &z0, const HPComplex &q0, const Precision &p,
		      ThetaForm form)
{
	const mpfr_prec_t prec = p.working();
	HPComplex z(z0.re.with_prec(prec), z0.im.with_prec(prec));
	HPComplex q(q0.re.with_prec(prec), q0.im.with_prec(prec));
	if (z.is_zero())
		throw DomainError("theta(0; q) is undefined");
	if (!(abs(q) < 1))
		throw DomainError("|q| must be < 1");
	if (form == ThetaForm::Product)
		return pinf_complex(z, q, p) * pinf_complex(q / z, q, p) * pinf_complex(q, q, p);
	const HPReal eps = tail_threshold(p);
	HPComplex sum(1, prec);
	// up: T(n+1) = T(n) (-z q^n); down: T(n-1) = T(n) (-q^{1-n}/z)
	for (int dir : {1, -1}) {
		HPComplex term(1, prec);
		HPComplex step = dir > 0 ? -z : -q / z; // ratio at n = 0
		int small = 0;
		for (long k = 0; k < 10000000; ++k) {
			term *= step;
			sum += term;
			step *= q;
			if (abs(term) < eps * abs(sum) && abs(step) < 1) {
				if (++small >= 2)
					break;
			} else {
				small = 0;
			}
		}
	}
	return sum;
}

std::pair<HPReal, HPReal> eta_transform_sides(const HPReal &t0, const Precision &p)
{
	const mpfr_prec_t prec = p.working();
	HPReal t = t0.with_prec(prec);
	if (!(t > 0))
		throw DomainError("t must be positive");
	HPReal q = exp(-t);
	HPComplex lhs = pinf_complex(HPComplex(q), HPComplex(q), p);
	HPReal pi = const_pi(prec);
	HPReal q2 = exp(-(pi * pi * 4) / t);
	HPComplex prod = pinf_complex(HPComplex(q2), HPComplex(q2), p);
	return {lhs.re, eta_leading(t, p) * prod.re};
}

HPReal eta_leading(const HPReal &t0, const Precision &p)
{
	const mpfr_prec_t prec = p.working();
	HPReal t = t0.with_prec(prec);
	if (!(t > 0))
		throw DomainError("t must be positive");
	HPReal pi = const_pi(prec);
	return sqrt(pi * 2 / t) * exp(t / 24 - pi * pi / (t * 6));
}

HPComplex poch_value(const NumMono &x, long n, const Nome &q, const mpq_class &base,
		     const Precision &p)
{
	const mpfr_prec_t prec = p.working();
	HPComplex prod(1, prec);
	if (x.c.is_zero())
		return prod;
	const bool one = is_one(x.c);
	if (n >= 0) {
		for (long j = 0; j < n; ++j) {
			mpq_class k = x.e + base * j;
			if (one && k == 0)
				return HPComplex(0, prec);
			prod *= 1 - x.c * q.pow(k);
		}
		return prod;
	}
	for (long j = 1; j <= -n; ++j) {
		mpq_class k = x.e - base * j;
		if (one && k == 0)
			throw PolePoch("(x)_{-n} with a vanishing factor");
		prod *= 1 - x.c * q.pow(k);
	}
	return HPComplex(1, prec) / prod;
}

HPComplex poch_inv_value(const NumMono &x, long n, const Nome &q, const mpq_class &base,
			 const Precision &p)
{
	const mpfr_prec_t prec = p.working();
	HPComplex prod(1, prec);
	if (x.c.is_zero())
		return prod;
	const bool one = is_one(x.c);
	if (n < 0) {
		for (long j = 1; j <= -n; ++j) {
			mpq_class k = x.e - base * j;
			if (one && k == 0)
				return HPComplex(0, prec);
			prod *= 1 - x.c * q.pow(k);
		}
		return prod;
	}
	for (long j = 0; j < n; ++j) {
		mpq_class k = x.e + base * j;
		if (one && k == 0)
			throw PolePoch("1/(x)_n with a vanishing factor");
		prod *= 1 - x.c * q.pow(k);
	}
	return HPComplex(1, prec) / prod;
}

HPComplex pinf_value(const NumMono &x, const Nome &q, const mpq_class &base,
		     const Precision &p)
{
	if (base <= 0)
		throw DomainError("infinite product needs a positive q-base");
	const mpfr_prec_t prec = p.working();
	HPComplex prod(1, prec);
	if (x.c.is_zero())
		return prod;
	const bool one = is_one(x.c);
	HPReal qb = q.pow(base).with_prec(prec);
	HPReal eps = tail_threshold(p) * (1 - qb);
	HPComplex xj = x.c * q.pow(x.e).with_prec(prec);
	for (long j = 0;; ++j) {
		mpq_class k = x.e + base * j;
		if (one && k == 0)
			return HPComplex(0, prec);
		prod *= 1 - xj;
		if (k > 0 && abs(xj) < eps)
			return prod;
		if (j > 100000000)
			throw PrecisionLoss("infinite product did not converge");
		xj *= qb;
	}
}

HPComplex theta_value(const NumMono &z, const Nome &q, const mpq_class &base,
		      const Precision &p, ThetaForm form)
{
	if (base <= 0)
		throw DomainError("theta needs a positive q-base");
	if (z.c.is_zero())
		throw DomainError("theta(0; q) is undefined");
	if (form == ThetaForm::Product) {
		NumMono z2 = qshift(inverse(z), base);
		NumMono qb{HPComplex(1, p.working()), base};
		return pinf_value(z, q, base, p) * pinf_value(z2, q, base, p) *
		       pinf_value(qb, q, base, p);
	}
	const mpfr_prec_t prec = p.working();
	const HPReal eps = tail_threshold(p);
	const HPReal qb = q.pow(base).with_prec(prec);
	const HPComplex zv = z.c * q.pow(z.e).with_prec(prec);
	HPComplex sum(1, prec);
	for (int dir : {1, -1}) {
		HPComplex term(1, prec);
		// up: ratio -zv qb^n; down: ratio -qb^{1-n}/zv
		HPComplex step = dir > 0 ? -zv : -(HPComplex(qb) / zv);
		int small = 0;
		for (long k = 0; k < 10000000; ++k) {
			term *= step;
			sum += term;
			step *= qb;
			if (abs(term) < eps * abs(sum) && abs(step) < 1) {
				if (++small >= 2)
					break;
			} else {
				small = 0;
			}
		}
	}
	return sum;
}

HPReal evaluate(const ExactSeries &s, const Nome &q)
{
	const mpfr_prec_t prec = q.prec();
	HPReal sum(prec);
	if (s.is_zero())
		return sum;
	auto terms = s.terms();
	HPReal step = exp(-q.t / s.denom());
	// Horner in q^{1/D} from the top index down
	long cur = terms.back().first;
	for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
		sum = sum * pow(step, cur - it->first);
		cur = it->first;
		sum += HPReal(it->second, prec);
	}
	return sum * pow(step, cur);
}

} // namespace qlab
