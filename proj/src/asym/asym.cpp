#include "qlab/asym/asym.hpp"

#include "qlab/bilateral/bilateral.hpp"
#include "qlab/errors.hpp"
#include "qlab/numq/special.hpp"

#include <algorithm>
#include <cmath>

namespace qlab {

namespace {

constexpr long kMaxTerms = 1000000;

NumericEngine engine_at(const HPReal &t, const Precision &p)
{
	return NumericEngine(Nome::from_t(t.with_prec(p.working())), p);
}

HPReal R(const mpq_class &v, mpfr_prec_t prec) { return HPReal(v, prec); }

NumMono mono(const HPReal &c, const mpq_class &e = 0) { return {HPComplex(c), e}; }
NumMono mono(const HPComplex &c, const mpq_class &e = 0) { return {c, e}; }

// L_beta(q; q, w) = sum_{n >= 0} w^n q^{beta binom(n,2)} / (q)_n
HPComplex Lq(const NumericEngine &e, const mpq_class &beta, const NumMono &w)
{
	return L_scalar(e, e.quad(beta), e.param(1, 1), w);
}

HPReal eps_of(mpfr_prec_t prec) { return ldexp(HPReal(1, prec), -static_cast<long>(prec)); }

// sum_n term(n) e^{2 pi i n phase - g n^2}, stopping once the Gaussian weight is
// below 2^{-bits} and the pair (n, -n) is negligible.
template <class Term>
HPComplex gaussian_sum(const HPReal &phase, const HPReal &g, long n_max, long bits, Term term)
{
	const mpfr_prec_t prec = g.prec();
	const HPReal pi = const_pi(prec);
	const HPReal eps = eps_of(prec);
	auto weighted = [&](long n) {
		HPComplex w = HPComplex::expi(pi * 2 * n * phase) * exp(-g * (n * n));
		return term(n) * w;
	};
	HPComplex sum = weighted(0);
	for (long k = 1;; ++k) {
		if (n_max >= 0 && k > n_max)
			break;
		if (k > kMaxTerms)
			throw Divergence("Gaussian dual sum did not converge");
		HPComplex a = weighted(k), b = weighted(-k);
		sum += a + b;
		if (n_max < 0 && -(g * (k * k)) < -HPReal(bits, prec) * log(HPReal(2, prec)) &&
		    abs(a) + abs(b) <= eps * abs(sum))
			break;
	}
	return sum;
}

// e^{a t/8 + a log^2 z/(2t)} sqrt(2 pi z^a/(a t))
HPReal gauss_prefactor(const HPReal &al, const HPReal &z, const HPReal &t)
{
	const HPReal pi = const_pi(t.prec());
	const HPReal lz = log(z);
	return sqrt(pi * 2 * pow(z, al) / (al * t)) * exp(al * t / 8 + al * lz * lz / (t * 2));
}

} // namespace

HPReal macmain_rate(const HPReal &a, const HPReal &b, const Precision &p)
{
	HPReal z = solve_macmain_z(a, b, p);
	HPReal lz = log(z);
	return li2(1 - z) + b * lz * lz;
}

HPReal macmain_leading(const HPReal &a, const HPReal &b, const HPReal &c, const HPReal &t,
		       const Precision &p)
{
	if (!(a > 0) || !(b > 0) || !(t > 0))
		throw DomainError("macmain_leading needs a, b, t > 0");
	const mpfr_prec_t prec = p.working();
	HPReal z = solve_macmain_z(a, b, p).with_prec(prec);
	HPReal lz = log(z);
	HPReal rate = li2(1 - z) + b * lz * lz;
	return pow(z, c) / sqrt(z + b * 2 * (1 - z)) * exp(rate / t);
}

SidePair<HPComplex> main1_sides(const mpq_class &alpha, const HPReal &x, const HPReal &z,
				const HPReal &t, const Precision &p, long n_max)
{
	if (alpha < 1 || !(z > 0) || !(t > 0))
		throw DomainError("main1 needs alpha >= 1, z > 0, t > 0");
	if (alpha == 1 && !(abs(x) < 1))
		throw DomainError("main1 at alpha = 1 needs |x| < 1");
	NumericEngine e = engine_at(t, p);
	const mpfr_prec_t prec = e.wp();
	const HPReal al = R(alpha, prec), tt = t.with_prec(prec), zz = z.with_prec(prec);
	const HPReal zx = zz * x.with_prec(prec);
	HPComplex lhs = L_scalar(e, e.quad(alpha), mono(zx), mono(pow(zz, al)));

	const mpq_class beta = 1 - 1 / alpha;
	const HPReal pi = const_pi(prec);
	HPReal phase = HPReal(mpq_class(1, 2), prec) - log(zz) / tt;
	HPReal g = pi * pi * 2 / (al * tt);
	HPComplex sum = gaussian_sum(phase, g, n_max, p.bits, [&](long n) {
		HPComplex rot = HPComplex::expi(pi * 2 * n / al);
		return Lq(e, beta, mono(-(rot * x.with_prec(prec)), beta / 2));
	});
	HPComplex rhs = sum * gauss_prefactor(al, zz, tt) * e.pinf_inv(mono(zx));
	return {lhs, rhs};
}

SidePair<HPComplex> mth1_sides(const mpq_class &alpha, const std::vector<HPReal> &x,
			       const std::vector<HPReal> &y, const HPReal &z, const HPReal &t,
			       const Precision &p, long n_max)
{
	if (x.empty() || x.size() != y.size())
		throw DomainError("mth1 needs matching non-empty parameter vectors");
	if (!(z > 0) || !(t > 0))
		throw DomainError("mth1 needs z > 0, t > 0");
	NumericEngine e = engine_at(t, p);
	const mpfr_prec_t prec = e.wp();
	const HPReal al = R(alpha, prec), tt = t.with_prec(prec), zz = z.with_prec(prec);
	std::vector<NumMono> lx, ly;
	HPComplex prod = e.one();
	for (size_t s = 0; s < x.size(); ++s) {
		lx.push_back(mono(zz * x[s]));
		ly.push_back(mono(y[s] / zz));
		prod *= e.pinf(lx.back()) * e.pinf(qshift(ly.back(), 1));
	}
	HPComplex lhs = L_vector(e, e.quad(alpha), lx, ly, mono(pow(zz, al)));

	const HPReal pi = const_pi(prec);
	HPReal phase = HPReal(mpq_class(1, 2), prec) - log(zz) / tt;
	HPReal g = pi * pi * 2 / (al * tt);
	HPComplex sum = gaussian_sum(phase, g, n_max, p.bits, [&](long n) {
		HPComplex rot = HPComplex::expi(pi * 2 * n / al);
		HPComplex inv = conj(rot);
		std::vector<NumMono> hx, hy;
		for (size_t s = 0; s < x.size(); ++s) {
			hx.push_back(mono(rot * x[s].with_prec(prec)));
			hy.push_back(mono(inv * y[s].with_prec(prec)));
		}
		return e.H(e.quad(alpha), hx, hy);
	});
	return {lhs, sum * gauss_prefactor(al, zz, tt) / prod};
}

SidePair<HPComplex> lem21_sides(const HPReal &z0, const HPReal &t0, const HPReal &mu0,
				long n_cut, const Precision &p)
{
	if (!(z0 > 0) || !(t0 > 0))
		throw DomainError("lem21 needs z > 0, t > 0");
	if (n_cut < 0)
		throw DomainError("lem21 needs n_cut >= 0");
	const mpfr_prec_t prec = p.working();
	const HPReal z = z0.with_prec(prec), t = t0.with_prec(prec), mu = mu0.with_prec(prec);
	const HPReal lz = log(z), eps = eps_of(prec);
	auto term = [&](long k) {
		HPReal n = mu + k;
		return exp(n * lz - t * n * (n - 1) / 2);
	};
	// the summand is log-concave in n with its peak near 1/2 + log z / t
	HPReal peak = HPReal(mpq_class(1, 2), prec) + lz / t - mu;
	long k0 = static_cast<long>(std::lround(peak.to_double()));
	HPReal lhs = term(k0);
	for (int dir : {1, -1}) {
		for (long k = k0 + dir;; k += dir) {
			if (std::labs(k - k0) > kMaxTerms)
				throw Divergence("lem21: term cap reached");
			HPReal v = term(k);
			lhs += v;
			if (v <= eps * lhs)
				break;
		}
	}
	const HPReal pi = const_pi(prec);
	HPReal phase = mu - HPReal(mpq_class(1, 2), prec) - lz / t;
	HPReal g = pi * pi * 2 / t;
	HPComplex dual = gaussian_sum(phase, g, n_cut, p.bits, [&](long) { return HPComplex(1, prec); });
	HPReal pref = sqrt(pi * 2 * z / t) * exp(t / 8 + lz * lz / (t * 2));
	return {HPComplex(lhs), dual * pref};
}

HPReal predicted_ratio(Predicted which, const ClaimParams &cp, const HPReal &t0, const Precision &p)
{
	const mpfr_prec_t prec = p.working();
	const HPReal t = t0.with_prec(prec), pi = const_pi(prec), pi2 = pi * pi;
	if (!(t > 0))
		throw DomainError("t must be positive");
	switch (which) {
	case Predicted::Cor2:
	case Predicted::Cor1: {
		if (cp.alpha <= 1 || cp.z <= 0)
			throw DomainError("needs alpha > 1, z > 0");
		const HPReal al = R(cp.alpha, prec), z = R(cp.z, prec), lz = log(z);
		const HPReal tail = (al * 3 - 1) * t / 24;
		if (which == Predicted::Cor2)
			return sqrt(pi * pow(z, al) / (al * t)) *
			       exp((al * 6 * lz * lz - pi2) / (t * 12) + tail);
		return pow(z, al / 2) / sqrt(al) * exp((pi2 + al * 3 * lz * lz) / (t * 6) + tail);
	}
	case Predicted::MM10: {
		if (cp.a <= 0 || cp.b <= mpq_class(1, 2))
			throw DomainError("mm10 needs a > 0, b > 1/2");
		const HPReal a = R(cp.a, prec), b = R(cp.b, prec), c = R(cp.c, prec), la = log(a);
		return pow(a, c) / sqrt(b * 2 * pow(a, c / b)) *
		       exp((pi2 + la * la * 3 / (b * 2)) / (t * 6) + (c * c / (b * 4) - HPReal(mpq_class(1, 24), prec)) * t);
	}
	case Predicted::MM20: {
		if (cp.a <= 0 || cp.b < 0)
			throw DomainError("mm20 needs a > 0, b >= 0");
		const HPReal a = R(cp.a, prec), b = R(cp.b, prec), c = R(cp.c, prec), la = log(a);
		const HPReal d = b * 2 + 1;
		return sqrt(pi * pow(a, -(c * 2 + 1) / d) / (d * t)) *
		       exp((la * la * 6 / d - pi2) / (t * 12) + (c * c * 6 + c * 6 - b + 1) / (d * 12) * t);
	}
	}
	throw DomainError("unknown prediction");
}

std::optional<HPReal> predicted_rate(Claim which, const ClaimParams &cp, const Precision &p)
{
	const mpfr_prec_t prec = p.working();
	const HPReal pi2 = const_pi(prec) * const_pi(prec);
	auto capped_delta = [&](const HPReal &al, const HPReal &z) {
		return pi2 * 2 * min(HPReal(2, prec), delta_alpha(al, z, p));
	};
	switch (which) {
	case Claim::Eta:
		return pi2 * 4;
	case Claim::Cor2:
	case Claim::Cor02:
	case Claim::CorMth1:
		return pi2 * 2 / R(cp.alpha, prec);
	case Claim::Cor1:
		return capped_delta(R(cp.alpha, prec), R(cp.z, prec));
	case Claim::MM10: {
		const HPReal b2 = R(2 * cp.b, prec);
		return capped_delta(b2, pow(R(cp.a, prec), 1 / b2));
	}
	default:
		return std::nullopt;
	}
}

SidePair<HPReal> asymm_sides(const HPReal &a0, const HPReal &c0, const HPReal &t0, const Precision &p)
{
	if (!(a0 > 0) || !(t0 > 0))
		throw DomainError("asymm needs a > 0, t > 0");
	NumericEngine e = engine_at(t0, p);
	const mpfr_prec_t prec = e.wp();
	const HPReal a = a0.with_prec(prec), c = c0.with_prec(prec), t = t0.with_prec(prec);
	const HPReal qc = exp(-t * c * 2); // q^{2c}
	auto side = [&](const HPComplex &w) {
		return unilateral_sum(
		    e,
		    [&](const NumericEngine &sub, long n) {
			    if (n == 0)
				    return sub.zero();
			    return sub.times(sub.poch_inv(sub.param(1, 1), n, 2), mono(pow(w, n), n * (n - 1)));
		    },
		    [](long) { return mpq_class(0); });
	};
	const HPComplex z(a * qc);
	HPReal lhs = (side(z) * side(HPComplex(1, prec) / z)).re;
	const HPReal pi = const_pi(prec), la = log(a);
	HPReal rhs = pi / (pow(a, c) * t * 2) *
		     exp((pi * pi / 3 + la * la) / (t * 4) + (c * c + HPReal(mpq_class(2, 3), prec)) * t);
	return {lhs, rhs};
}

namespace {

// theta(-z; q^2) / (q, -q/z; q^2)_inf, the leading term of sum_{n >= 1} z^n q^{n(n-1)} / (q; q^2)_n
HPComplex asymm_theta(const NumericEngine &e, const HPComplex &z)
{
	return e.theta(mono(-z), 2) / (e.pinf(e.param(1, 1), 2) * e.pinf(mono(-(HPComplex(1, e.wp()) / z), 1), 2));
}

// (q; q^2)_inf sum_l q^l / ((q^2; q^2)_l (1 + q^{2l+1}/z))
HPComplex asymm_correction(const NumericEngine &e, const HPComplex &z)
{
	const mpfr_prec_t prec = e.wp();
	const HPReal q = e.nome().q.with_prec(prec), q2 = q * q, eps = eps_of(prec);
	const HPComplex zi = HPComplex(1, prec) / z;
	// term_l = q^l / (q^2; q^2)_l, updated by the ratio q / (1 - q^{2l+2})
	HPReal term(1, prec), q2l(1, prec); // q^{2l}
	HPComplex s(0, prec);
	int small = 0;
	for (long l = 0;; ++l) {
		if (l > kMaxTerms)
			throw Divergence("asymm correction sum: term cap reached");
		HPComplex v = HPComplex(term) / (zi * (q2l * q) + 1L);
		s += v;
		if (abs(v) <= eps * abs(s) && ++small >= 3)
			break;
		if (abs(v) > eps * abs(s))
			small = 0;
		q2l *= q2;
		term *= q / (1 - q2l);
	}
	return e.pinf(e.param(1, 1), 2) * s;
}

} // namespace

HPReal asymm_theta_route(const HPReal &a, const HPReal &c, const HPReal &t0, const Precision &p)
{
	NumericEngine e = engine_at(t0, p);
	const HPReal t = t0.with_prec(e.wp());
	const HPComplex z(a.with_prec(e.wp()) * exp(-t * c * 2));
	return (asymm_theta(e, z) * asymm_theta(e, HPComplex(1, e.wp()) / z)).re;
}

HPReal asymm_decomposition_route(const HPReal &a, const HPReal &c, const HPReal &t0,
				 const Precision &p)
{
	NumericEngine e = engine_at(t0, p);
	const HPReal t = t0.with_prec(e.wp());
	const HPComplex z(a.with_prec(e.wp()) * exp(-t * c * 2));
	const HPComplex zi = HPComplex(1, e.wp()) / z;
	HPComplex s1 = asymm_theta(e, z) - asymm_correction(e, z);
	HPComplex s2 = asymm_theta(e, zi) - asymm_correction(e, zi);
	return (s1 * s2).re;
}

AsymSample measure(Claim which, const ClaimParams &cp, const HPReal &t0, const Precision &p)
{
	NumericEngine e = engine_at(t0, p);
	const mpfr_prec_t prec = e.wp();
	const HPReal t = t0.with_prec(prec);
	auto sample = [&](const HPReal &lhs, const HPReal &rhs) {
		return AsymSample{t, lhs, rhs, abs(lhs / rhs - 1)};
	};
	using FN = FFamily<NumericEngine>;
	const NumMono A = e.param(cp.a, 0);
	switch (which) {
	case Claim::Eta: {
		auto [lhs, full] = eta_transform_sides(t, p);
		(void)full;
		return sample(lhs, eta_leading(t, p));
	}
	case Claim::Cor2:
	case Claim::Cor1: {
		if (cp.alpha <= 1 || cp.z <= 0)
			throw DomainError("needs alpha > 1, z > 0");
		const HPReal al = R(cp.alpha, prec), z = R(cp.z, prec);
		const mpq_class beta = 1 - 1 / cp.alpha;
		const NumMono za = mono(pow(z, al));
		HPComplex num, den;
		if (which == Claim::Cor2) {
			num = L_scalar(e, e.quad(cp.alpha), e.param(-1, 0), za);
			den = Lq(e, beta, mono(1 / z, beta / 2));
		} else {
			num = Lq(e, cp.alpha, za);
			den = Lq(e, beta, mono(-(1 / z), mpq_class(3, 2) - 1 / (2 * cp.alpha)));
		}
		Predicted pw = which == Claim::Cor2 ? Predicted::Cor2 : Predicted::Cor1;
		return sample((num / den).re, predicted_ratio(pw, cp, t, p));
	}
	case Claim::Cor02: {
		if (cp.alpha <= 1 || cp.z <= 0)
			throw DomainError("cor02 needs alpha > 1, z > 0");
		const HPReal al = R(cp.alpha, prec), z = R(cp.z, prec), x = R(cp.x, prec);
		const mpq_class beta = 1 - 1 / cp.alpha;
		HPComplex L = L_scalar(e, e.quad(cp.alpha), mono(z * x), mono(pow(z, al)));
		HPReal lhs = (L * e.pinf(mono(z * x))).re / gauss_prefactor(al, z, t);
		HPReal main = Lq(e, beta, mono(-x, beta / 2)).re;
		HPReal bound = Lq(e, beta, mono(abs(x), beta / 2)).re;
		return {t, lhs, main, abs(lhs - main) / bound};
	}
	case Claim::CorMth1: {
		if (cp.xs.empty() || cp.xs.size() != cp.ys.size())
			throw DomainError("cor-mth1-asym needs matching vectors");
		if (cp.alpha <= static_cast<long>(cp.xs.size()))
			throw DomainError("cor-mth1-asym needs alpha > r");
		for (size_t s = 0; s < cp.xs.size(); ++s)
			if (cp.xs[s] > 0 || cp.ys[s] > 0)
				throw DomainError("cor-mth1-asym needs x_s, y_s <= 0");
		const HPReal al = R(cp.alpha, prec), z = R(cp.z, prec);
		std::vector<NumMono> lx, ly, hx, hy;
		HPComplex prod = e.one();
		for (size_t s = 0; s < cp.xs.size(); ++s) {
			const HPReal xs = R(cp.xs[s], prec), ys = R(cp.ys[s], prec);
			lx.push_back(mono(z * xs));
			ly.push_back(mono(ys / z));
			hx.push_back(mono(xs));
			hy.push_back(mono(ys));
			prod *= e.pinf(lx.back()) * e.pinf(qshift(ly.back(), 1));
		}
		HPComplex L = L_vector(e, e.quad(cp.alpha), lx, ly, mono(pow(z, al)));
		HPComplex H = e.H(e.quad(cp.alpha), hx, hy);
		return sample((L / H).re, (HPComplex(gauss_prefactor(al, z, t)) / prod).re);
	}
	case Claim::MM10: {
		HPComplex f = FN::f1(e, A, cp.b, cp.c), ft = FN::f1tilde(e, A, cp.b, cp.c);
		return sample((f / ft).re, predicted_ratio(Predicted::MM10, cp, t, p));
	}
	case Claim::MM20: {
		HPComplex f = FN::f2(e, A, cp.b, cp.c), ft = FN::f2tilde(e, A, cp.b, cp.c);
		return sample((f / ft).re, predicted_ratio(Predicted::MM20, cp, t, p));
	}
	case Claim::Prop10: {
		HPComplex fh = FN::f2hat(e, A, cp.b, cp.c), f = FN::f2(e, A, cp.b, cp.c);
		return sample((fh / f).re, HPReal(1, prec));
	}
	case Claim::Cor32: {
		if (cp.z <= 0 || cp.w <= 0 || cp.w >= 1)
			throw DomainError("cor32 needs z > 0 and q < y = q^w < 1");
		const HPReal z = R(cp.z, prec);
		const NumMono y = e.param(1, cp.w);
		HPComplex s = unilateral_sum(
		    e,
		    [&](const NumericEngine &sub, long n) {
			    if (n == 0)
				    return sub.zero();
			    return sub.times(sub.poch_inv(y, n), mono(pow(z, n), n * (n - 1) / 2));
		    },
		    [](long) { return mpq_class(0); });
		HPComplex th = e.theta(mono(-z)) / (e.pinf(y) * e.pinf(mono(-(1 / z), cp.w)));
		return sample(s.re, th.re);
	}
	case Claim::Asymm: {
		auto [lhs, rhs] = asymm_sides(R(cp.a, prec), R(cp.c, prec), t, p);
		return sample(lhs, rhs);
	}
	}
	throw DomainError("unknown claim");
}

RateFit rate_fit(const std::vector<HPReal> &t, const std::vector<HPReal> &residual,
		 std::optional<HPReal> c_pred)
{
	if (t.size() < 3 || t.size() != residual.size())
		throw DomainError("rate_fit needs at least 3 samples");
	for (size_t k = 0; k < t.size(); ++k) {
		if (!(residual[k] > 0))
			throw NonPositiveResidual("residual at t = " + t[k].str(6) + " is not positive");
		if (!(t[k] > 0) || (k > 0 && !(t[k] < t[k - 1])))
			throw DomainError("rate_fit needs strictly decreasing positive t");
	}
	const mpfr_prec_t prec = std::max(t[0].prec(), residual[0].prec());
	const long n = static_cast<long>(t.size());
	std::vector<HPReal> X, Y;
	HPReal mx(0, prec), my(0, prec);
	for (size_t k = 0; k < t.size(); ++k) {
		X.push_back(-(1 / t[k].with_prec(prec)));
		Y.push_back(log(residual[k].with_prec(prec)));
		mx += X.back();
		my += Y.back();
	}
	mx = mx / n;
	my = my / n;
	HPReal sxy(0, prec), sxx(0, prec);
	for (size_t k = 0; k < X.size(); ++k) {
		sxy += (X[k] - mx) * (Y[k] - my);
		sxx += (X[k] - mx) * (X[k] - mx);
	}
	RateFit f{t, residual, sxy / sxx, c_pred, std::nullopt, {}};
	if (c_pred)
		f.rel_err = abs(f.c_fit - *c_pred) / *c_pred;
	for (size_t k = 0; k + 1 < X.size(); ++k)
		f.pairwise.push_back((Y[k] - Y[k + 1]) / (X[k] - X[k + 1]));
	return f;
}

namespace {

bool strictly_decreasing(const std::vector<HPReal> &r)
{
	for (size_t k = 1; k < r.size(); ++k)
		if (!(r[k] < r[k - 1]))
			return false;
	return true;
}

} // namespace

bool decays_exponentially(const RateFit &f)
{
	if (!strictly_decreasing(f.residual) || !(f.c_fit > 0) || f.pairwise.empty())
		return false;
	for (const auto &r : f.pairwise)
		if (!(r > 0))
			return false;
	return f.pairwise.back() * 4 >= f.pairwise.front() * 3;
}

bool rate_matches(const RateFit &f, double tol)
{
	if (!f.rel_err || !strictly_decreasing(f.residual))
		return false;
	return f.rel_err->to_double() <= tol;
}

bool rate_bounds(const RateFit &f, double tol)
{
	if (!f.c_pred || !strictly_decreasing(f.residual))
		return false;
	return f.c_fit >= *f.c_pred * HPReal::from_double(1 - tol, f.c_fit.prec());
}

HPReal local_power(const HPReal &t1, const HPReal &r1, const HPReal &t2, const HPReal &r2)
{
	if (!(r1 > 0) || !(r2 > 0))
		throw NonPositiveResidual("local power needs positive residuals");
	return log(r1 / r2) / log(t1 / t2);
}

} // namespace qlab
