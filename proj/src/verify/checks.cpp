#include "identities.hpp"

#include "qlab/asym/asym.hpp"
#include "qlab/bilateral/bilateral.hpp"
#include "qlab/errors.hpp"
#include "qlab/numq/special.hpp"
#include "qlab/verify/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

namespace qlab {

using detail::Args;
using detail::Display;

namespace {

mpq_class Qr(long a, long b)
{
	mpq_class r(a, b);
	r.canonicalize();
	return r;
}

const IdentityInfo &require(const std::string &id, Mode mode)
{
	const IdentityInfo *info = find_identity(id);
	if (!info)
		throw UsageError("unknown identity id " + id);
	if (!info->supports(mode))
		throw UnsupportedMode(id + " has no " + to_string(mode) + " mode");
	return *info;
}

bool is_point_key(const std::string &k) { return k == "q" || k == "t"; }

Args resolve(const IdentityInfo &info, const Params &over, Mode mode)
{
	for (const auto &[k, v] : over) {
		(void)v;
		bool known = std::any_of(info.params.begin(), info.params.end(),
					 [&](const ParamSpec &s) { return s.name == k; });
		if (!known)
			throw UsageError("unknown parameter " + k + " for " + info.id);
	}
	Args a;
	for (const auto &s : info.params) {
		auto it = over.find(s.name);
		a.value[s.name] = it == over.end() ? s.value : it->second;
		if (mode == Mode::Exact && s.weight != 0)
			a.weight[s.name] = s.weight;
	}
	return a;
}

CheckReport base_report(const IdentityInfo &info, Mode mode, const Args &a)
{
	CheckReport r;
	r.id = info.id;
	r.mode = mode;
	for (const auto &s : info.params) {
		if (mode != Mode::Numeric && is_point_key(s.name))
			continue;
		std::string v = a.value.at(s.name).get_str();
		auto w = a.weight.find(s.name);
		if (w != a.weight.end())
			v += " q^" + w->second.get_str();
		r.params.emplace_back(s.name, v);
	}
	return r;
}

std::string fmt(const HPReal &x, int digits = 6) { return x.is_zero() ? "0" : x.str(digits); }

std::string fmt(const HPComplex &z, int digits = 20)
{
	if (z.is_real())
		return fmt(z.re, digits);
	std::string im = fmt(z.im, digits);
	return fmt(z.re, digits) + (im[0] == '-' ? "" : "+") + im + "i";
}

HPReal rel_residual(const HPComplex &lhs, const HPComplex &rhs)
{
	HPReal d = abs(lhs - rhs), s = abs(rhs);
	return s.is_zero() ? d : d / s;
}

// ---- exact -----------------------------------------------------------------

std::vector<Display<ExactEngine>> exact_sides(const std::string &id, const Args &a, long order)
{
	const mpq_class W = order;
	mpq_class we = W;
	for (int attempt = 0;; ++attempt) {
		auto ds = detail::identity_sides(id, ExactEngine(we), a);
		mpq_class got = W;
		for (const auto &d : ds)
			got = std::min({got, d.lhs.order_q(), d.rhs.order_q()});
		if (got >= W || attempt == 4)
			return ds;
		// Laurent factors lost precision; widen the working order by the shortfall
		we += W - got;
	}
}

mpq_class max_abs_coeff(const ExactSeries &s)
{
	mpq_class m = 0;
	for (const auto &[k, c] : s.terms()) {
		(void)k;
		mpq_class ac = abs(c);
		if (ac > m)
			m = ac;
	}
	return m;
}

// ---- numeric -----------------------------------------------------------------

NumericEngine engine_q(const mpq_class &q, const Precision &p)
{
	if (q <= 0 || q >= 1)
		throw DomainError("numeric nome needs 0 < q < 1");
	return NumericEngine(Nome::from_q(HPReal(q, p.working())), p);
}

struct NumDisplay {
	std::string name;
	HPComplex lhs;
	HPComplex rhs;
};

long lem21_auto_cut(const HPReal &t, long bits)
{
	const double pi = 3.14159265358979323846;
	return static_cast<long>(std::ceil(std::sqrt(bits * std::log(2.0) * t.to_double() / (2 * pi * pi)))) + 1;
}

std::vector<NumDisplay> eq21_sides(const NumericEngine &e, const Args &a)
{
	const mpq_class alpha = a.rat("alpha");
	const long r = a.integer("r");
	if (r < 1 || r > 2)
		throw DomainError("eq21 supports r in {1, 2}");
	if (alpha <= r)
		throw DomainError("eq21 needs alpha > r");
	if (a.rat("z") <= 0)
		throw DomainError("eq21 needs z > 0");
	const mpfr_prec_t wp = e.wp();
	std::vector<NumMono> x, y;
	for (long s = 1; s <= r; ++s) {
		x.push_back(e.param(a.rat("x" + std::to_string(s)), 0));
		y.push_back(e.param(a.rat("y" + std::to_string(s)), 0));
	}
	const HPReal za = pow(HPReal(a.rat("z"), wp), HPReal(alpha, wp));
	HPComplex lhs = L_vector(e, e.quad(alpha), x, y, e.param(HPComplex(za), 0));

	// single-index coefficients (-x)^i q^{binom(i,2)}/(q)_i and (-y)^j q^{binom(j+1,2)}/(q)_j
	auto coeffs = [&](const NumMono &v, long shift, long K) {
		std::vector<HPComplex> c{e.one()};
		for (long i = 0; i + 1 <= K; ++i) {
			HPComplex qi = e.mono(e.param(1, i + shift)), q1 = e.mono(e.param(1, i + 1));
			c.push_back(c.back() * (-v.c) * qi / (1L - q1));
		}
		return c;
	};
	auto convolve = [&](const std::vector<std::vector<HPComplex>> &f, long K) {
		std::vector<HPComplex> out = f[0];
		for (size_t s = 1; s < f.size(); ++s) {
			std::vector<HPComplex> nx(static_cast<size_t>(K + 1), e.zero());
			for (long i = 0; i <= K; ++i)
				for (long j = 0; i + j <= K; ++j)
					nx[static_cast<size_t>(i + j)] += out[static_cast<size_t>(i)] * f[s][static_cast<size_t>(j)];
			out = nx;
		}
		return out;
	};
	std::map<long, HPComplex> theta_cache;
	auto B = [&](long D) -> const HPComplex & {
		auto it = theta_cache.find(D);
		if (it == theta_cache.end()) {
			BilateralSpec<NumericEngine> s{e.param(HPComplex(za), D), e.quad(alpha), {}, {}};
			it = theta_cache.emplace(D, e.bilateral(s)).first;
		}
		return it->second;
	};
	auto total = [&](long K) {
		std::vector<std::vector<HPComplex>> fx, fy;
		for (long s = 0; s < r; ++s) {
			fx.push_back(coeffs(x[static_cast<size_t>(s)], 0, K));
			fy.push_back(coeffs(y[static_cast<size_t>(s)], 1, K));
		}
		std::vector<HPComplex> P = convolve(fx, K), Q = convolve(fy, K);
		HPComplex sum = e.zero();
		for (long I = 0; I <= K; ++I)
			for (long J = 0; J <= K; ++J)
				sum += P[static_cast<size_t>(I)] * Q[static_cast<size_t>(J)] * B(I - J);
		return sum;
	};
	const HPReal eps = ldexp(HPReal(1, wp), -static_cast<long>(wp));
	HPComplex prev = total(8), cur = prev;
	for (long K = 16;; K *= 2) {
		if (K > 4096)
			throw Divergence("eq21 expansion did not settle");
		cur = total(K);
		if (abs(cur - prev) <= eps * abs(cur))
			break;
		prev = cur;
	}
	HPComplex den = e.one();
	for (long s = 0; s < r; ++s)
		den = den * e.pinf(x[static_cast<size_t>(s)]) * e.pinf(qshift(y[static_cast<size_t>(s)], 1));
	return {{"expanded", lhs, cur / den}};
}

std::vector<NumDisplay> promr1_sides(const NumericEngine &e, const Args &a, const mpq_class &q)
{
	const mpq_class y = a.rat("y"), z = a.rat("z");
	if (z == 0)
		throw DomainError("promr1 needs z != 0");
	if (abs(y) <= q)
		throw DomainError("promr1 needs |y| > |q|");
	// 1/y = q^k or -z/y = q^k for some k >= 0
	mpq_class qk = 1;
	while (abs(y) * qk >= Qr(1, 2) || abs(y) * qk >= abs(z) / 2) {
		if (y * qk == 1 || y * qk == -z)
			throw DomainError("promr1 parameters lie on the excluded set");
		qk *= q;
	}
	const NumMono Y = e.param(y, 0), Z = e.param(z, 0);
	HPComplex s1 = unilateral_sum(e, [&](const NumericEngine &sub, long n) {
		const long m = n + 1;
		return sub.times(sub.poch_inv(Y, m), qshift(pow(Z, m), mpq_class(m * (m - 1) / 2)));
	}, [](long) { return mpq_class(0); });
	const NumMono qy = qshift(inverse(Y), 1);
	const mpq_class yz = y / z;
	HPComplex s2 = unilateral_sum(e, [&](const NumericEngine &sub, long l) {
		HPComplex d = sub.mono(sub.param(yz, l)) + 1L;
		return sub.poch_inv(sub.param(1, 1), l) * sub.mono(pow(qy, l)) / d;
	}, [](long) { return mpq_class(0); });
	HPComplex lhs = s1 + e.pinf(qy) * s2;
	HPComplex rhs = e.theta(-Z) / (e.pinf(Y) * e.pinf(-(Y * inverse(Z))));
	return {{"analytic-continuation", lhs, rhs}};
}

std::vector<HPReal> vec_h(const Args &a, const std::string &k, long r, mpfr_prec_t wp)
{
	std::vector<HPReal> v;
	for (long s = 1; s <= r; ++s)
		v.push_back(HPReal(a.rat(k + std::to_string(s)), wp));
	return v;
}

std::vector<NumDisplay> numeric_sides(const std::string &id, const Args &a, const Precision &p)
{
	const mpfr_prec_t wp = p.working();
	auto H = [&](const std::string &k) { return HPReal(a.rat(k), wp); };
	if (id == "eta") {
		auto [l, r] = eta_transform_sides(H("t"), p);
		return {{"transformation", HPComplex(l), HPComplex(r)}};
	}
	if (id == "lem21") {
		long n_cut = a.integer("n_cut");
		if (n_cut < 0)
			n_cut = lem21_auto_cut(H("t"), p.bits);
		auto s = lem21_sides(H("z"), H("t"), H("mu"), n_cut, p);
		return {{"gaussian-dual", s.lhs, s.rhs}};
	}
	if (id == "thm-main1") {
		auto s = main1_sides(a.rat("alpha"), H("x"), H("z"), H("t"), p);
		return {{"rotated-sums", s.lhs, s.rhs}};
	}
	if (id == "thm-mth1") {
		auto s = mth1_sides(a.rat("alpha"), vec_h(a, "x", 2, wp), vec_h(a, "y", 2, wp), H("z"), H("t"), p);
		return {{"rotated-sums", s.lhs, s.rhs}};
	}
	if (id == "eq21")
		return eq21_sides(engine_q(a.rat("q"), p), a);
	if (id == "promr1")
		return promr1_sides(engine_q(a.rat("q"), p), a, a.rat("q"));
	if (!detail::has_generic_sides(id))
		throw UnsupportedMode(id + " has no numeric sides");
	std::vector<NumDisplay> out;
	for (auto &d : detail::identity_sides(id, engine_q(a.rat("q"), p), a))
		out.push_back({d.name, d.lhs, d.rhs});
	return out;
}

// ---- asymptotic ----------------------------------------------------------------

enum class Kind { Match, Bound, Decay };

struct ClaimInfo {
	Claim claim;
	Kind kind;
	double tol;
};

ClaimInfo claim_of(const std::string &id)
{
	if (id == "eta")
		return {Claim::Eta, Kind::Match, 0.10};
	if (id == "cor2")
		return {Claim::Cor2, Kind::Match, 0.15};
	if (id == "cor1")
		return {Claim::Cor1, Kind::Match, 0.15};
	if (id == "cor02")
		return {Claim::Cor02, Kind::Bound, 0.15};
	if (id == "cor-mth1-asym")
		return {Claim::CorMth1, Kind::Bound, 0.15};
	if (id == "mm10")
		return {Claim::MM10, Kind::Decay, 0};
	if (id == "mm20")
		return {Claim::MM20, Kind::Decay, 0};
	if (id == "prop10")
		return {Claim::Prop10, Kind::Decay, 0};
	if (id == "cor32")
		return {Claim::Cor32, Kind::Decay, 0};
	if (id == "asymm")
		return {Claim::Asymm, Kind::Decay, 0};
	throw UnsupportedMode(id + " is not an asymptotic claim");
}

ClaimParams claim_params(const Args &a)
{
	ClaimParams cp;
	auto get = [&](const char *k, mpq_class &dst) {
		auto it = a.value.find(k);
		if (it != a.value.end())
			dst = it->second;
	};
	get("alpha", cp.alpha);
	get("z", cp.z);
	get("x", cp.x);
	get("a", cp.a);
	get("b", cp.b);
	get("c", cp.c);
	get("w", cp.w);
	if (a.value.count("x1")) {
		cp.xs = {a.rat("x1"), a.rat("x2")};
		cp.ys = {a.rat("y1"), a.rat("y2")};
	}
	return cp;
}

void check_grid(const std::vector<mpq_class> &t)
{
	for (size_t k = 0; k < t.size(); ++k) {
		if (t[k] <= 0)
			throw UsageError("t-grid values must be positive");
		if (k > 0 && t[k] >= t[k - 1])
			throw UsageError("t-grid must be strictly decreasing");
	}
}

} // namespace

CheckReport check_exact(const std::string &id, const Params &params, long order)
{
	const IdentityInfo &info = require(id, Mode::Exact);
	if (order < 1)
		throw UsageError("order must be at least 1");
	Args a = resolve(info, params, Mode::Exact);
	CheckReport r = base_report(info, Mode::Exact, a);
	r.order_or_bits = order;
	r.threshold = "0";
	const mpq_class W = order;
	mpq_class worst = 0;
	bool short_order = false;
	for (const auto &d : exact_sides(id, a, order)) {
		mpq_class got = std::min({W, d.lhs.order_q(), d.rhs.order_q()});
		if (got < W)
			short_order = true;
		ExactSeries diff = d.lhs - d.rhs;
		diff = diff.truncated_q(std::min(got, diff.order_q()));
		mpq_class dev = max_abs_coeff(diff);
		r.displays.push_back({d.name, dev.get_str()});
		if (dev > worst)
			worst = dev;
	}
	r.deviation = worst.get_str();
	r.verdict = worst == 0 && !short_order ? Verdict::Pass : Verdict::Fail;
	if (short_order)
		r.note = "sides known only below the requested order";
	return r;
}

CheckReport check_numeric(const std::string &id, const Params &params, long bits)
{
	const IdentityInfo &info = require(id, Mode::Numeric);
	if (bits < 16)
		throw UsageError("bits must be at least 16");
	Args a = resolve(info, params, Mode::Numeric);
	CheckReport r = base_report(info, Mode::Numeric, a);
	r.order_or_bits = bits;
	const Precision p(bits);
	const HPReal threshold = ldexp(HPReal(1, p.working()), -bits / 2);
	r.threshold = fmt(threshold);
	HPReal worst(0, p.working());
	for (const auto &d : numeric_sides(id, a, p)) {
		HPReal dev = rel_residual(d.lhs, d.rhs);
		r.displays.push_back({d.name, fmt(dev)});
		if (dev > worst)
			worst = dev;
	}
	r.deviation = fmt(worst);
	r.verdict = worst < threshold ? Verdict::Pass : Verdict::Fail;
	return r;
}

CheckReport check_asymptotic(const std::string &id, const Params &params, const std::vector<mpq_class> &t_grid,
			     long bits)
{
	const IdentityInfo &info = require(id, Mode::Asymptotic);
	check_grid(t_grid);
	if (t_grid.size() < 3)
		throw UsageError("asymptotic checks need at least three t values");
	Args a = resolve(info, params, Mode::Asymptotic);
	CheckReport r = base_report(info, Mode::Asymptotic, a);
	r.order_or_bits = bits;
	const Precision p(bits);
	const mpfr_prec_t wp = p.working();
	const ClaimInfo ci = claim_of(id);
	const ClaimParams cp = claim_params(a);

	std::vector<HPReal> ts, res;
	for (const auto &tq : t_grid) {
		HPReal t(tq, wp);
		AsymSample s = measure(ci.claim, cp, t, p);
		r.samples.push_back({tq.get_str(), fmt(s.lhs, 20), fmt(s.rhs, 20), fmt(s.residual)});
		ts.push_back(t);
		res.push_back(s.residual);
	}
	std::optional<HPReal> pred = predicted_rate(ci.claim, cp, p);
	RateFit f = rate_fit(ts, res, pred);
	r.deviation = fmt(res.back());
	r.c_fit = fmt(f.c_fit, 10);
	if (f.c_pred)
		r.c_pred = fmt(*f.c_pred, 10);
	std::string rates;
	for (const auto &pw : f.pairwise)
		rates += (rates.empty() ? "" : ", ") + fmt(pw, 6);
	r.note = "pairwise rates " + rates;

	bool ok = false;
	switch (ci.kind) {
	case Kind::Match:
		ok = rate_matches(f, ci.tol);
		r.threshold = "C_fit within " + std::to_string(static_cast<int>(std::lround(ci.tol * 100))) +
			      "% of C_pred";
		break;
	case Kind::Bound:
		ok = rate_bounds(f, ci.tol);
		r.threshold = "C_fit >= " + std::to_string(static_cast<int>(std::lround((1 - ci.tol) * 100))) +
			      "% of C_pred";
		break;
	case Kind::Decay:
		ok = decays_exponentially(f);
		r.threshold = "exponential decay";
		break;
	}
	r.verdict = ok ? Verdict::Pass : Verdict::Fail;

	if (ci.claim == Claim::Cor1) {
		HPReal d = delta_alpha(HPReal(cp.alpha, wp), HPReal(cp.z, wp), p);
		r.note += "; delta " + fmt(d, 10) + ", min(2, delta) " + fmt(min(HPReal(2, wp), d), 10);
	}
	if (ci.claim == Claim::MM10) {
		HPReal b2(2 * cp.b, wp);
		HPReal d = delta_alpha(b2, pow(HPReal(cp.a, wp), 1 / b2), p);
		r.note += "; delta " + fmt(d, 10);
		if (d <= 0) {
			r.verdict = Verdict::Informational;
			r.note += " (not positive, reported only)";
		}
	}
	if (ci.claim == Claim::Asymm) {
		// the O(t^8) comparison: local power exponent further down in t
		HPReal t1(Qr(1, 16), wp), t2(Qr(1, 32), wp);
		HPReal r1 = measure(ci.claim, cp, t1, p).residual, r2 = measure(ci.claim, cp, t2, p).residual;
		HPReal lp = local_power(t1, r1, t2, r2);
		r.note += "; local power exponent between t=1/16 and t=1/32: " + fmt(lp, 6);
		r.threshold += " and local power > 8";
		if (!(lp > HPReal(8, wp)))
			r.verdict = Verdict::Fail;
	}
	return r;
}

CheckReport run_check(const std::string &id, Mode mode, const Params &params, long order, long bits,
		      const std::vector<mpq_class> &t_grid)
{
	const IdentityInfo &info = require(id, mode);
	try {
		switch (mode) {
		case Mode::Exact:
			return check_exact(id, params, order);
		case Mode::Numeric:
			return check_numeric(id, params, bits);
		case Mode::Asymptotic:
			return check_asymptotic(id, params, t_grid, bits);
		}
	} catch (const UsageError &) {
		throw;
	} catch (const UnsupportedMode &) {
		throw;
	} catch (const Error &e) {
		Args a;
		try {
			a = resolve(info, params, mode);
		} catch (const Error &) {
		}
		CheckReport r;
		r.id = id;
		r.mode = mode;
		if (!a.value.empty())
			r = base_report(info, mode, a);
		r.order_or_bits = mode == Mode::Exact ? order : bits;
		r.deviation = "";
		r.verdict = Verdict::Fail;
		r.note = e.what();
		return r;
	}
	return {};
}

std::vector<CheckReport> run_suite(const std::vector<SuiteItem> &items, const SuiteConfig &cfg)
{
	std::vector<CheckReport> out(items.size());
	auto run_one = [&](size_t k) {
		const SuiteItem &it = items[k];
		auto t0 = std::chrono::steady_clock::now();
		long bits = it.mode == Mode::Asymptotic ? cfg.asymptotic_bits : cfg.numeric_bits;
		out[k] = run_check(it.id, it.mode, it.params, cfg.order, bits, cfg.t_grid);
		if (cfg.timing)
			out[k].elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
						.count();
	};
	const unsigned jobs = std::max(1u, cfg.jobs);
	if (jobs == 1 || items.size() < 2) {
		for (size_t k = 0; k < items.size(); ++k)
			run_one(k);
		return out;
	}
	std::atomic<size_t> next{0};
	std::exception_ptr failure;
	std::mutex mu;
	std::vector<std::thread> pool;
	for (unsigned w = 0; w < std::min<size_t>(jobs, items.size()); ++w)
		pool.emplace_back([&]() {
			for (size_t k; (k = next++) < items.size();) {
				try {
					run_one(k);
				} catch (...) {
					std::lock_guard<std::mutex> lock(mu);
					if (!failure)
						failure = std::current_exception();
				}
			}
		});
	for (auto &th : pool)
		th.join();
	if (failure)
		std::rethrow_exception(failure);
	return out;
}

double cross_engine_deviation(const SuiteItem &item, long order, const mpq_class &q, long bits)
{
	const IdentityInfo &info = require(item.id, Mode::Exact);
	Args a = resolve(info, item.params, Mode::Exact);
	const Precision p(bits);
	NumericEngine ne = engine_q(q, p);
	auto ex = exact_sides(item.id, a, order);
	auto nu = detail::identity_sides(item.id, ne, a);
	if (ex.size() != nu.size())
		throw DomainError("display count differs between engines");
	HPReal worst(0, p.working());
	for (size_t k = 0; k < ex.size(); ++k)
		for (auto [s, v] : {std::pair{&ex[k].lhs, &nu[k].lhs}, std::pair{&ex[k].rhs, &nu[k].rhs}}) {
			HPReal d = rel_residual(HPComplex(evaluate(*s, ne.nome())), *v);
			if (d > worst)
				worst = d;
		}
	return worst.to_double();
}

ExactSeries series_by_name(const std::string &name, const Params &params, long order, const std::string &display)
{
	if (order < 1)
		throw UsageError("order must be at least 1");
	const mpq_class W = order;
	if (name == "eta-product") {
		if (!params.empty())
			throw UsageError("eta-product takes no parameters");
		ExactEngine e(W);
		return e.pinf(e.param(1, 1)).truncated_q(W);
	}
	const bool lhs = name.size() > 4 && name.compare(name.size() - 4, 4, "-lhs") == 0;
	const bool rhs = name.size() > 4 && name.compare(name.size() - 4, 4, "-rhs") == 0;
	if (!lhs && !rhs)
		throw UsageError("unknown series " + name);
	const std::string id = name.substr(0, name.size() - 4);
	const IdentityInfo *info = find_identity(id);
	if (!info || !info->supports(Mode::Exact) || !detail::has_generic_sides(id))
		throw UsageError("unknown series " + name);
	Args a = resolve(*info, params, Mode::Exact);
	auto ds = exact_sides(id, a, order);
	for (const auto &d : ds) {
		if (!display.empty() && d.name != display)
			continue;
		const ExactSeries &s = lhs ? d.lhs : d.rhs;
		return s.truncated_q(std::min(W, s.order_q()));
	}
	std::string names;
	for (const auto &d : ds)
		names += (names.empty() ? "" : ", ") + d.name;
	throw UsageError("no display '" + display + "' for " + id + " (have: " + names + ")");
}

std::vector<std::string> series_names()
{
	std::vector<std::string> out{"eta-product"};
	for (const auto &info : registry())
		if (info.supports(Mode::Exact) && detail::has_generic_sides(info.id)) {
			out.push_back(info.id + "-lhs");
			out.push_back(info.id + "-rhs");
		}
	return out;
}

std::vector<std::string> sweep_ids()
{
	std::vector<std::string> out;
	for (const auto &info : registry())
		if (info.supports(Mode::Asymptotic) || info.id == "lem21" || info.id == "thm-main1" ||
		    info.id == "thm-mth1")
			out.push_back(info.id);
	return out;
}

std::vector<SampleRow> sweep(const std::string &id, const Params &params, const std::vector<mpq_class> &t,
			     long bits)
{
	auto ids = sweep_ids();
	if (std::find(ids.begin(), ids.end(), id) == ids.end())
		throw UsageError("sweep does not support " + id);
	if (t.empty())
		throw UsageError("empty t-grid");
	check_grid(t);
	const IdentityInfo &info = *find_identity(id);
	const Precision p(bits);
	std::vector<SampleRow> rows;
	if (info.supports(Mode::Asymptotic)) {
		Args a = resolve(info, params, Mode::Asymptotic);
		const ClaimInfo ci = claim_of(id);
		const ClaimParams cp = claim_params(a);
		for (const auto &tq : t) {
			AsymSample s = measure(ci.claim, cp, HPReal(tq, p.working()), p);
			rows.push_back({tq.get_str(), fmt(s.lhs, 20), fmt(s.rhs, 20), fmt(s.residual)});
		}
		return rows;
	}
	if (params.count("t"))
		throw UsageError("sweep takes t from --t");
	for (const auto &tq : t) {
		Params pt = params;
		pt["t"] = tq;
		Args a = resolve(info, pt, Mode::Numeric);
		for (const auto &d : numeric_sides(id, a, p))
			rows.push_back({tq.get_str(), fmt(d.lhs, 20), fmt(d.rhs, 20), fmt(rel_residual(d.lhs, d.rhs))});
	}
	return rows;
}

} // namespace qlab
