#include "qlab/numq/special.hpp"

#include "qlab/errors.hpp"

#include <functional>

namespace qlab {

namespace {

HPReal li2_series(const HPReal &z)
{
	const mpfr_prec_t prec = z.prec();
	const long cap = 10 * static_cast<long>(prec);
	HPReal sum(prec);
	HPReal zn = z;
	for (long n = 1; n <= cap; ++n) {
		HPReal term = zn / (n * n);
		sum += term;
		if (term.is_zero() ||
		    term.exponent2() < sum.exponent2() - static_cast<long>(prec) - 4)
			return sum;
		zn *= z;
	}
	throw PrecisionLoss("li2 series did not converge");
}

HPComplex li2_series(const HPComplex &z)
{
	const mpfr_prec_t prec = z.prec();
	const long cap = 10 * static_cast<long>(prec);
	HPComplex sum(prec);
	HPComplex zn = z;
	for (long n = 1; n <= cap; ++n) {
		HPComplex term = zn / (n * n);
		sum += term;
		HPReal m = abs(term);
		if (m.is_zero() ||
		    m.exponent2() < abs(sum).exponent2() - static_cast<long>(prec) - 4)
			return sum;
		zn *= z;
	}
	throw PrecisionLoss("li2 series did not converge");
}

// Li2(z) = sum_{n>=0} B_n u^{n+1}/(n+1)!, u = -log(1-z), |u| < 2 pi.
HPComplex li2_bernoulli(const HPComplex &z)
{
	const mpfr_prec_t prec = z.prec();
	HPComplex u = -log(1 - z);
	HPComplex sum = u - u * u / 4;
	HPReal two_pi = const_pi(prec) * 2;
	HPComplex u2 = u * u;
	HPComplex upow = u;
	HPReal scale(1, prec);
	const long cap = 10 * static_cast<long>(prec);
	for (long k = 1; k <= cap; ++k) {
		upow *= u2;
		scale = scale / (two_pi * two_pi);
		HPReal zeta(prec);
		mpfr_zeta_ui(zeta.get(), static_cast<unsigned long>(2 * k), MPFR_RNDN);
		HPReal c = zeta * scale * 2 / (2 * k + 1);
		if (k % 2 == 0)
			c = -c;
		HPComplex term = upow * c;
		sum += term;
		HPReal m = abs(term);
		if (m.is_zero() ||
		    m.exponent2() < abs(sum).exponent2() - static_cast<long>(prec) - 4)
			return sum;
	}
	throw PrecisionLoss("li2 Bernoulli series did not converge");
}

HPReal bisect_newton(const std::function<HPReal(const HPReal &)> &f,
		     const std::function<HPReal(const HPReal &)> &df,
		     const Precision &p, const char *what)
{
	const mpfr_prec_t prec = p.working();
	HPReal lo = ldexp(HPReal(1, prec), -p.bits);
	HPReal hi = 1 - lo;
	HPReal flo = f(lo);
	HPReal fhi = f(hi);
	if (!(flo.sign() < 0 && fhi.sign() > 0))
		throw NoBracket(std::string(what) + ": no sign change on (eps, 1-eps)");
	for (int i = 0; i < 64; ++i) {
		HPReal mid = (lo + hi) / 2;
		if (f(mid).sign() < 0)
			lo = mid;
		else
			hi = mid;
	}
	HPReal w = (lo + hi) / 2;
	for (int it = 0; it < 200; ++it) {
		HPReal step = f(w) / df(w);
		HPReal next = w - step;
		if (next <= 0 || next >= 1) {
			// fall back to bisection if Newton leaves the interval
			HPReal mid = (lo + hi) / 2;
			(f(mid).sign() < 0 ? lo : hi) = mid;
			w = (lo + hi) / 2;
			continue;
		}
		w = next;
		if (step.is_zero() ||
		    step.exponent2() < w.exponent2() - static_cast<long>(prec) + 2)
			break;
	}
	HPReal res = abs(f(w));
	if (!res.is_zero() && res.exponent2() > -p.bits + 8)
		throw PrecisionLoss(std::string(what) + ": residual too large");
	return w;
}

} // namespace

HPReal li2(const HPReal &z)
{
	const mpfr_prec_t prec = z.prec();
	if (z > 1 || z < -1)
		throw DomainError("li2 real argument outside [-1, 1]");
	HPReal half = HPReal(1, prec) / 2;
	if (abs(z) <= half)
		return li2_series(z);
	if (z > 0) {
		HPReal pi = const_pi(prec);
		HPReal pi2_6 = pi * pi / 6;
		if (z == 1)
			return pi2_6;
		// Li2(z) = pi^2/6 - log z log(1-z) - Li2(1-z)
		HPReal w = 1 - z;
		return pi2_6 - log(z) * log(w) - li2_series(w);
	}
	// Li2(z) = -Li2(z/(z-1)) - log^2(1-z)/2, z/(z-1) in (1/3, 1/2]
	HPReal l = log(1 - z);
	return -li2_series(z / (z - 1)) - l * l / 2;
}

HPComplex li2(const HPComplex &z)
{
	if (z.is_real() && z.re >= -1 && z.re <= 1)
		return HPComplex(li2(z.re));
	const mpfr_prec_t prec = z.prec();
	HPReal r = abs(z);
	if (r > 1)
		throw DomainError("li2 complex argument outside the unit disk");
	HPReal half = HPReal(1, prec) / 2;
	if (r <= half)
		return li2_series(z);
	HPComplex w = 1 - z;
	if (abs(w) <= half) {
		HPReal pi = const_pi(prec);
		return HPComplex(pi * pi / 6) - log(z) * log(w) - li2_series(w);
	}
	return li2_bernoulli(z);
}

HPReal solve_w(const HPReal &alpha, const HPReal &z, const HPReal &exponent,
	       const Precision &p)
{
	if (alpha < 1)
		throw DomainError("solve_w needs alpha >= 1");
	if (z <= 0)
		throw DomainError("solve_w needs z > 0");
	if (exponent <= 0 || exponent > 1)
		throw DomainError("solve_w exponent outside (0, 1]");
	const mpfr_prec_t prec = p.working();
	HPReal zz = z.with_prec(prec);
	HPReal e = exponent.with_prec(prec);
	auto f = [&](const HPReal &w) { return w + pow(w, e) / zz - 1; };
	auto df = [&](const HPReal &w) { return 1 + e * pow(w, e - 1) / zz; };
	return bisect_newton(f, df, p, "solve_w");
}

HPReal solve_macmain_z(const HPReal &a, const HPReal &b, const Precision &p)
{
	if (a <= 0 || b <= 0)
		throw DomainError("solve_macmain_z needs a, b > 0");
	const mpfr_prec_t prec = p.working();
	HPReal aa = a.with_prec(prec);
	HPReal b2 = b.with_prec(prec) * 2;
	auto f = [&](const HPReal &z) { return aa * pow(z, b2) + z - 1; };
	auto df = [&](const HPReal &z) { return aa * b2 * pow(z, b2 - 1) + 1; };
	return bisect_newton(f, df, p, "solve_macmain_z");
}

HPReal delta_alpha(const HPReal &alpha, const HPReal &z, const Precision &p)
{
	if (alpha < 1)
		throw DomainError("delta_alpha needs alpha >= 1");
	if (z <= 0)
		throw DomainError("delta_alpha needs z > 0");
	const mpfr_prec_t prec = p.working();
	HPReal a = alpha.with_prec(prec);
	HPReal zz = z.with_prec(prec);
	HPReal one(1, prec);
	HPReal wa = solve_w(a, zz, one / a, p);
	HPReal lz = log(zz);
	HPReal pi = const_pi(prec);
	HPReal lwa = log(wa);
	HPReal num = li2(wa) + lwa * lwa / (a * 2) - lz * lwa;
	if (a == 1) {
		if (zz < 1)
			throw DomainError("delta_1(z) needs z >= 1");
		if (zz > 1) {
			HPReal wb = one - one / zz;
			num += li2(wb) - lz * log(wb);
		}
	} else {
		HPReal eb = one - one / a;
		HPReal wb = solve_w(a, zz, eb, p);
		HPReal lwb = log(wb);
		num += li2(wb) + eb * lwb * lwb / 2 - lz * lwb;
	}
	return one / a - one / 6 + num / (pi * pi * 2);
}

HPReal delta_alpha_via_growth(const HPReal &alpha, const HPReal &z,
			      const Precision &p)
{
	if (alpha <= 1)
		throw DomainError("delta_alpha_via_growth needs alpha > 1");
	if (z <= 0)
		throw DomainError("delta_alpha_via_growth needs z > 0");
	const mpfr_prec_t prec = p.working();
	HPReal a = alpha.with_prec(prec);
	HPReal zz = z.with_prec(prec);
	HPReal one(1, prec);
	HPReal w1 = solve_macmain_z(pow(zz, a), a / 2, p);
	HPReal eb = one - one / a;
	HPReal w2 = solve_w(a, zz, eb, p);
	HPReal l1 = log(w1);
	HPReal l2 = log(w2);
	HPReal c = li2(one - w2) + eb * l2 * l2 / 2 - li2(one - w1) - a * l1 * l1 / 2;
	HPReal pi = const_pi(prec);
	HPReal lz = log(zz);
	return one / a - (pi * pi / 6 + c + a * lz * lz / 2) / (pi * pi * 2);
}

} // namespace qlab
