#include "identities.hpp"

#include "qlab/bilateral/bilateral.hpp"
#include "qlab/errors.hpp"

#include <algorithm>
#include <numeric>

namespace qlab::detail {

const mpq_class &Args::rat(const std::string &k) const
{
	auto it = value.find(k);
	if (it == value.end())
		throw UsageError("missing parameter " + k);
	return it->second;
}

long Args::integer(const std::string &k) const
{
	const mpq_class &v = rat(k);
	if (v.get_den() != 1 || !v.get_num().fits_slong_p())
		throw UsageError("parameter " + k + " must be an integer");
	return v.get_num().get_si();
}

namespace {

mpq_class Qr(long a, long b)
{
	mpq_class r(a, b);
	r.canonicalize();
	return r;
}

mpq_class binom2(long n) { return mpq_class(n * (n - 1) / 2); }

const std::vector<std::string> kGeneric{
    "euler",	"jtp",	 "watson",	       "pentagonal", "mci",   "rama-1psi1",
    "cor-corm1", "thm-mth", "lebesgue-bilateral", "cormm-2",	   "corm2", "ramanujan-1.16",
    "mcor",	"pro22-1", "pro22-2",	       "mm10",	     "mm20",  "lem22"};

template <class E> struct Ids {
	using V = typename E::Value;
	using P = typename E::Param;
	const E &e;
	const Args &a;

	P p(const mpq_class &c, const mpq_class &x = 0) const { return e.param(c, x); }
	P m(const std::string &k) const { return a.template mono<E>(e, k); }
	V half(const V &v) const { return e.times(v, p(Qr(1, 2))); }

	// sum_{n >= 0} w^n q^{quad binom(n,2)} / (q^base; q^base)_n
	V eulerian(const P &w, const mpq_class &quad, const mpq_class &base = 1) const
	{
		return unilateral_sum(
		    e,
		    [&](const E &sub, long n) {
			    return sub.times(sub.poch_inv(sub.param(1, base), n, base),
					     qshift(pow(w, n), quad * binom2(n)));
		    },
		    [&](long n) -> mpq_class { return w.e * n + quad * binom2(n); });
	}

	V bilateral(const P &z, const mpq_class &quad, std::vector<PochFactor<P>> num,
		    std::vector<PochFactor<P>> den) const
	{
		BilateralSpec<E> s{z, e.quad(quad), std::move(num), std::move(den)};
		return e.bilateral(s);
	}

	// 1 / prod_s (x_s, q y_s)_inf
	V pair_den(const std::vector<P> &x, const std::vector<P> &y) const
	{
		V d = e.one();
		for (size_t s = 0; s < x.size(); ++s)
			d = d * e.pinf_inv(x[s]) * e.pinf_inv(qshift(y[s], 1));
		return d;
	}

	std::vector<P> vec(const std::string &k, long r) const
	{
		std::vector<P> v;
		for (long s = 1; s <= r; ++s)
			v.push_back(m(k + std::to_string(s)));
		return v;
	}

	std::vector<P> scale(const std::vector<P> &v, const P &f) const
	{
		std::vector<P> out;
		for (const auto &x : v)
			out.push_back(x * f);
		return out;
	}

	std::vector<P> shift(const std::vector<P> &v, const mpq_class &s) const
	{
		std::vector<P> out;
		for (const auto &x : v)
			out.push_back(qshift(x, s));
		return out;
	}

	// (theta(-z q^{-1/4}; q^{1/2}) H_2(x; y) + theta(z q^{-1/4}; q^{1/2}) H_2(-x; -y)) / 2
	V two_term(const P &z, const std::vector<P> &x, const std::vector<P> &y) const
	{
		const P neg = p(-1);
		V h1 = e.H(e.quad(2), x, y), h2 = e.H(e.quad(2), scale(x, neg), scale(y, neg));
		return half(e.theta(qshift(-z, Qr(-1, 4)), Qr(1, 2)) * h1 +
			    e.theta(qshift(z, Qr(-1, 4)), Qr(1, 2)) * h2);
	}

	std::vector<Display<E>> run(const std::string &id) const
	{
		if (id == "euler") {
			P z = m("z");
			return {{"euler", eulerian(z, 1), e.pinf(-z)}};
		}
		if (id == "jtp") {
			P z = m("z");
			return {{"triple-product", e.theta(z), e.theta_product(z)}};
		}
		if (id == "watson") {
			V lhs = unilateral_sum(
			    e,
			    [&](const E &sub, long n) {
				    V inv = sub.poch_inv(sub.param(1, 1), n);
				    return sub.times(inv * inv, sub.param(1, mpq_class(n * (n + 1) / 2)));
			    },
			    [](long n) -> mpq_class { return mpq_class(n * (n + 1) / 2); });
			return {{"watson", lhs, e.pinf_inv(p(1, 1)) * eulerian(p(1, 3), 4, 2)}};
		}
		if (id == "pentagonal")
			return {{"pentagonal", e.pinf(p(1, 1)), bilateral(p(-1, 1), 3, {}, {})}};
		if (id == "mci") {
			long mm = a.integer("m");
			V lhs = e.times(eulerian(p(1, 2 * mm + 3), 4, 2), p(1, mpq_class(mm * (mm + 1) / 2)));
			V rhs = e.pinf(p(-1, 1)) * eulerian(p(-1, 1 - mm), 1, 2);
			return {{"mcintosh", lhs, rhs}};
		}
		if (id == "rama-1psi1") {
			P x = m("x"), y = m("y"), z = m("z");
			V lhs = L_vector(e, e.quad(1), {z * x}, {y * inverse(z)}, z);
			V rhs = e.theta(-z) * e.pinf(x * y) * e.pinf_inv(z * x) *
				e.pinf_inv(qshift(y * inverse(z), 1)) * e.pinf_inv(-x) * e.pinf_inv(-y);
			return {{"one-psi-one", lhs, rhs}};
		}
		if (id == "cor-corm1") {
			P x = m("x"), y = m("y"), z = m("z");
			std::vector<P> lx{z * x}, ly{y * inverse(z)};
			V den = pair_den(lx, ly);
			V h1 = e.H(e.quad(1), {x}, {y});
			V r1 = e.theta(-z) * h1 * den;
			V l1 = L_vector(e, e.quad(1), lx, ly, z);
			V l2 = L_vector(e, e.quad(2), lx, ly, z * z);
			V r2 = two_term(z, {x}, {y}) * den;
			V prod = e.theta(-z) * e.pinf(x * y) * den * e.pinf_inv(-x) * e.pinf_inv(-y);
			return {{"alpha=1", l1, r1}, {"alpha=2", l2, r2}, {"alpha=1 product", r1, prod}};
		}
		if (id == "thm-mth") {
			const long A = a.integer("a"), B = a.integer("b"), r = a.integer("r");
			if (A <= 0 || B <= 0 || std::gcd(A, B) != 1)
				throw DomainError("a and b must be coprime positive integers");
			if (r < 1 || r > 2 || A < B * r)
				throw DomainError("needs r in {1, 2} and a >= b r");
			const mpq_class alpha = Qr(A, B);
			P z = m("z");
			std::vector<P> x = vec("x", r), y = vec("y", r);
			P zb = pow(z, B);
			std::vector<P> lx = scale(x, zb), ly = scale(y, inverse(zb));
			V lhs = L_vector(e, e.quad(alpha), lx, ly, pow(z, A));
			V sum = e.zero();
			for (long u = 0; u < A; ++u) {
				P zu = e.root_of_unity(A, u), zi = e.root_of_unity(A, -u);
				V h = e.H(e.quad(alpha), scale(x, zu), scale(y, zi));
				sum = sum + h * e.theta(qshift(-(zi * z), Qr(1 - A, 2 * A * B)), Qr(1, A * B));
			}
			V rhs = e.times(sum, p(Qr(1, A))) * pair_den(lx, ly);
			return {{"theta-sum", lhs, rhs}};
		}
		if (id == "lebesgue-bilateral") {
			P x = m("x"), z = m("z"), A = m("a"), B = m("b");
			V l1 = bilateral(x * z, 1, {{-(z * inverse(x)), 1}}, {{z * x, 1}});
			V r1 = e.pinf(qshift(-(x * x), 1), 2) * e.theta(-(z * z), 2) * e.pinf_inv(z * x) *
			       e.pinf_inv(qshift(-(x * inverse(z)), 1));
			P Bq = qshift(B, 1);
			V l2 = bilateral(Bq, 1, {{A, 1}}, {{Bq, 1}});
			V r2 = e.pinf(p(1, 2), 2) * e.pinf(qshift(A * B, 1), 2) *
			       e.pinf(qshift(inverse(A * B), 1), 2) * e.pinf(qshift(B * inverse(A), 2), 2) *
			       e.pinf_inv(Bq) * e.pinf_inv(qshift(inverse(A), 1));
			return {{"theta-form", l1, r1}, {"lebesgue-extension", l2, r2}};
		}
		if (id == "cormm-2") {
			P x = m("x"), z = m("z");
			V lhs = bilateral(qshift(-(x * z), 2), 2, {{z * inverse(x), 2}}, {{qshift(z * x, 1), 2}});
			const mpq_class h = Qr(1, 2);
			V rhs = half(e.theta(qshift(-z, h)) * e.pinf(qshift(x, h)) +
				     e.theta(qshift(z, h)) * e.pinf(qshift(-x, h))) *
				e.pinf_inv(qshift(z * x, 1), 2) * e.pinf_inv(qshift(x * inverse(z), 2), 2);
			return {{"second", lhs, rhs}};
		}
		if (id == "corm2" || id == "ramanujan-1.16") {
			P z = m("z");
			// sum_n w^n q^{(n^2 + 2n)/4} / (q)_n
			auto S = [&](const P &w) { return eulerian(qshift(w, Qr(3, 4)), Qr(1, 2)); };
			auto theta_pair = [&](const P &x) {
				return half(e.theta(qshift(-z, Qr(1, 4)), Qr(1, 2)) * S(-x) +
					    e.theta(qshift(z, Qr(1, 4)), Qr(1, 2)) * S(x));
			};
			if (id == "ramanujan-1.16")
				return {{"x=1/z", eulerian(qshift(z * z, 1), 2),
					 theta_pair(inverse(z)) * e.pinf_inv(p(1, 1))}};
			P x = m("x");
			V lhs = bilateral(qshift(z * z, 1), 2, {}, {{qshift(x * z, 1), 1}});
			return {{"in-particular", lhs, theta_pair(x) * e.pinf_inv(qshift(x * z, 1))}};
		}
		if (id == "mcor") {
			P z = m("z");
			std::vector<P> x = vec("x", 2), y = vec("y", 2);
			std::vector<Display<E>> out;
			{
				std::vector<P> b{z * inverse(y[0]), z * inverse(y[1])}, ax = scale(x, z);
				V lhs = psi_r(e, b, ax, y[0] * y[1]);
				V rhs = two_term(z, x, y) * pair_den(ax, scale(y, inverse(z)));
				out.push_back({"main", lhs, rhs});
			}
			for (long l : {0L, 1L}) {
				std::vector<P> b{inverse(y[0]), inverse(y[1])};
				V lhs = psi_r(e, b, x, qshift(y[0] * y[1], Qr(1, 2) + l));
				V h = e.H(e.quad(2), shift(x, Qr(-1, 4) - Qr(l, 2)), shift(y, Qr(1, 4) + Qr(l, 2)));
				V rhs = half(e.theta(p(-1, Qr(l, 2)), Qr(1, 2)) * h) * pair_den(x, y);
				out.push_back({"l=" + std::to_string(l), lhs, rhs});
			}
			return out;
		}
		if (id == "pro22-1") {
			P x = m("x");
			return {{"square", e.H(e.quad(2), {x}, {-x}), e.pinf(qshift(-(x * x), 1), 2)}};
		}
		if (id == "pro22-2") {
			P x = m("x");
			return {{"half-power", e.H(e.quad(2), {x}, {qshift(x, 1)}, 2), e.pinf(qshift(x, Qr(1, 2)))}};
		}
		if (id == "mm10") {
			using F = FFamily<E>;
			P A = m("a");
			const mpq_class &b = a.rat("b"), &c = a.rat("c");
			return {{"f1hat", F::f1hat(e, A, b, c), F::f1(e, A, b, c)}};
		}
		if (id == "mm20") {
			using F = FFamily<E>;
			P A = m("a");
			const mpq_class &b = a.rat("b"), &c = a.rat("c");
			V direct = bilateral(qshift(A, c + b), 2 * b, {{p(-1, 1), 1}}, {});
			V hat = F::f2hat(e, A, b, c);
			return {{"f2hat two forms", direct, hat},
				{"f2hat tail", hat - F::f2(e, A, b, c), F::f2_tail(e, A, b, c)}};
		}
		if (id == "lem22") {
			const long A = a.integer("a"), B = a.integer("b"), u = a.integer("u");
			if (A <= 0 || B <= 0 || std::gcd(A, B) != 1)
				throw DomainError("a and b must be coprime positive integers");
			P z = m("z");
			V lhs = e.zero();
			for (long v = 0; v < A; ++v) {
				// n = mu + k with mu = b v / a
				const mpq_class mu = Qr(B * v, A);
				V inner = bilateral(qshift(pow(z, A), B * v), A, {}, {});
				P pre = qshift(pow(z, B * v), A * mu * (mu - 1) / 2) * e.root_of_unity(A, -u * B * v);
				lhs = lhs + e.times(inner, pre);
			}
			V rhs = e.theta(qshift(-(z * e.root_of_unity(A, -u)), Qr(1 - A, 2 * A)), Qr(1, A));
			return {{"residue-sum", lhs, rhs}};
		}
		throw UsageError("no engine-generic sides for " + id);
	}
};

} // namespace

bool has_generic_sides(const std::string &id)
{
	return std::find(kGeneric.begin(), kGeneric.end(), id) != kGeneric.end();
}

template <class E> std::vector<Display<E>> identity_sides(const std::string &id, const E &e, const Args &a)
{
	return Ids<E>{e, a}.run(id);
}

template std::vector<Display<ExactEngine>> identity_sides(const std::string &, const ExactEngine &,
							  const Args &);
template std::vector<Display<NumericEngine>> identity_sides(const std::string &, const NumericEngine &,
							    const Args &);

} // namespace qlab::detail
