#include "qlab/errors.hpp"
#include "qlab/verify/verify.hpp"

#include <algorithm>
#include <cctype>

namespace qlab {

namespace {

mpq_class Qr(long a, long b)
{
	mpq_class r(a, b);
	r.canonicalize();
	return r;
}

constexpr Mode E = Mode::Exact, N = Mode::Numeric, A = Mode::Asymptotic;

std::vector<IdentityInfo> build()
{
	return {
	    {"euler", "One of Euler's well-known identities", {E, N}, {{"z", 1}, {"q", Qr(1, 2)}}},
	    {"eta", "it satisfies the following transformation formula", {N, A}, {{"t", Qr(1, 2)}}},
	    {"jtp", "follows from the Jacobi triple product", {E, N}, {{"z", Qr(2, 3)}, {"q", Qr(1, 2)}}},
	    {"watson", "Watson proved that", {E, N}, {{"q", Qr(1, 2)}}},
	    {"pentagonal", "By Euler's pentagonal number theorem", {E, N}, {{"q", Qr(1, 2)}}},
	    {"thm-main1",
	     "For any alpha>1 and x",
	     {N},
	     {{"alpha", 2}, {"x", -1}, {"z", 1}, {"t", Qr(7, 10)}}},
	    {"cor-mth1-asym",
	     "Let x_s,y_s<=0 for all",
	     {A},
	     {{"alpha", 3},
	      {"z", 1},
	      {"x1", Qr(-1, 2)},
	      {"x2", Qr(-1, 3)},
	      {"y1", Qr(-1, 4)},
	      {"y2", Qr(-1, 5)}}},
	    {"thm-mth1",
	     "For any real number alpha>r",
	     {N},
	     {{"alpha", 3},
	      {"z", 1},
	      {"x1", Qr(-1, 2)},
	      {"x2", Qr(-1, 3)},
	      {"y1", Qr(-1, 4)},
	      {"y2", Qr(-1, 5)},
	      {"t", Qr(7, 10)}}},
	    {"thm-mth",
	     "coprime positive integers a and b",
	     {E, N},
	     {{"a", 2},
	      {"b", 1},
	      {"r", 1},
	      {"x1", Qr(-1, 3), 1},
	      {"x2", Qr(-1, 2), 1},
	      {"y1", Qr(-1, 5), 1},
	      {"y2", Qr(-1, 4), 1},
	      {"z", Qr(3, 2)},
	      {"q", Qr(1, 2)}}},
	    {"cor-corm1",
	     "For any coprime positive integers a and b such that a>=b",
	     {E, N},
	     {{"x", Qr(1, 3), 1}, {"y", Qr(1, 5), 1}, {"z", 2}, {"q", Qr(1, 3)}}},
	    {"lebesgue-bilateral",
	     "the following bilateral extension of the Lebesgue identity",
	     {E, N},
	     {{"x", Qr(1, 3)}, {"z", 2}, {"a", 2}, {"b", Qr(1, 3)}, {"q", Qr(1, 3)}}},
	    {"cormm-2", "We have", {E, N}, {{"x", Qr(1, 3)}, {"z", 2}, {"q", Qr(1, 3)}}},
	    {"corm2",
	     "Letting y=0 in the main identity",
	     {E, N},
	     {{"x", Qr(1, 3)}, {"z", 2}, {"q", Qr(1, 3)}}},
	    {"ramanujan-1.16", "an identity claimed by Ramanujan", {E, N}, {{"z", 2}, {"q", Qr(1, 3)}}},
	    {"mcor",
	     "We have",
	     {E, N},
	     {{"x1", Qr(1, 2), 1},
	      {"x2", Qr(-1, 3), 1},
	      {"y1", Qr(1, 5), 1},
	      {"y2", Qr(-1, 4), 1},
	      {"z", Qr(3, 2)},
	      {"q", Qr(1, 3)}}},
	    {"mci", "identity of McIntosh", {E, N}, {{"m", 1}, {"q", Qr(1, 2)}}},
	    {"lem21", "For any mu in R", {N}, {{"z", 2}, {"mu", Qr(1, 3)}, {"t", 1}, {"n_cut", -1}}},
	    {"lem22",
	     "complete residue system modulo a",
	     {E, N},
	     {{"a", 3}, {"b", 2}, {"u", 1}, {"z", Qr(7, 10)}, {"q", Qr(2, 5)}}},
	    {"eq21",
	     "Expanding the products in the summand",
	     {N},
	     {{"alpha", 3},
	      {"r", 2},
	      {"z", Qr(6, 5)},
	      {"x1", Qr(-1, 2)},
	      {"x2", Qr(-1, 3)},
	      {"y1", Qr(-1, 4)},
	      {"y2", Qr(-1, 5)},
	      {"q", Qr(3, 10)}}},
	    {"rama-1psi1",
	     "the famous Ramanujan",
	     {E, N},
	     {{"x", Qr(1, 3), 1}, {"y", Qr(1, 5), 1}, {"z", 2}, {"q", Qr(1, 3)}}},
	    {"promr1",
	     "For all y,z in C with |y|>|q|",
	     {N},
	     {{"y", Qr(3, 5)}, {"z", 2}, {"q", Qr(3, 10)}}},
	    {"cor32", "there exists a constant kappa_z>0", {A}, {{"z", 1}, {"w", Qr(1, 2)}}},
	    {"asymm", "explains the following asymptotic formula of McIntosh", {A}, {{"a", 1}, {"c", 0}}},
	    {"pro22-1", "We summarize the above identities", {E, N}, {{"x", Qr(1, 3)}, {"q", Qr(1, 2)}}},
	    {"pro22-2", "We summarize the above identities", {E, N}, {{"x", Qr(1, 3)}, {"q", Qr(1, 2)}}},
	    {"prop10", "where delta>0 is a constant", {A}, {{"a", 1}, {"b", 1}, {"c", 0}}},
	    {"cor02", "the implied constant depends only", {A}, {{"alpha", 2}, {"z", 1}, {"x", Qr(-1, 2)}}},
	    {"cor2", "McIntosh's conjecture", {A}, {{"alpha", 2}, {"z", 1}}},
	    {"cor1", "the implied constant depends only on alpha and z", {A}, {{"alpha", 2}, {"z", 1}}},
	    {"mm10",
	     "McIntosh's conjectured formulas",
	     {E, N, A},
	     {{"a", 1}, {"b", 1}, {"c", 0}, {"q", Qr(1, 2)}}},
	    {"mm20",
	     "McIntosh's conjectured formulas",
	     {E, N, A},
	     {{"a", 1}, {"b", 1}, {"c", 0}, {"q", Qr(1, 2)}}},
	};
}

} // namespace

std::string to_string(Mode m)
{
	switch (m) {
	case Mode::Exact:
		return "exact";
	case Mode::Numeric:
		return "numeric";
	case Mode::Asymptotic:
		return "asymptotic";
	}
	return "";
}

std::string to_string(Verdict v)
{
	switch (v) {
	case Verdict::Pass:
		return "pass";
	case Verdict::Fail:
		return "fail";
	case Verdict::Informational:
		return "informational";
	}
	return "";
}

std::optional<Mode> parse_mode(const std::string &s)
{
	for (Mode m : {Mode::Exact, Mode::Numeric, Mode::Asymptotic})
		if (to_string(m) == s)
			return m;
	return std::nullopt;
}

bool IdentityInfo::supports(Mode m) const
{
	return std::find(modes.begin(), modes.end(), m) != modes.end();
}

const std::vector<IdentityInfo> &registry()
{
	static const std::vector<IdentityInfo> r = build();
	return r;
}

const IdentityInfo *find_identity(const std::string &id)
{
	for (const auto &info : registry())
		if (info.id == id)
			return &info;
	return nullptr;
}

std::vector<std::string> identity_ids()
{
	std::vector<std::string> out;
	for (const auto &info : registry())
		out.push_back(info.id);
	return out;
}

std::vector<SuiteItem> suite_items(std::optional<Mode> selection)
{
	auto want = [&](Mode m) { return !selection || *selection == m; };
	std::vector<SuiteItem> out;
	if (want(Mode::Exact)) {
		auto add = [&](const std::string &id, Params p = {}) { out.push_back({id, Mode::Exact, std::move(p)}); };
		add("euler");
		add("euler", {{"z", Qr(-2, 3)}});
		add("jtp");
		add("watson");
		add("pentagonal");
		add("rama-1psi1");
		add("rama-1psi1", {{"x", Qr(-1, 2)}, {"y", Qr(2, 3)}, {"z", Qr(3, 2)}});
		add("rama-1psi1", {{"x", 2}, {"y", Qr(-1, 3)}, {"z", Qr(-1, 2)}});
		add("cor-corm1");
		add("lebesgue-bilateral");
		add("cormm-2");
		add("corm2");
		add("ramanujan-1.16");
		add("mcor");
		for (long m = -2; m <= 2; ++m)
			add("mci", {{"m", m}});
		add("pro22-1");
		add("pro22-2");
		add("thm-mth", {{"a", 1}, {"b", 1}, {"r", 1}});
		add("thm-mth");
		add("thm-mth", {{"a", 2}, {"b", 1}, {"r", 2}});
		add("mm10");
		add("mm10", {{"a", Qr(1, 2)}, {"b", Qr(3, 2)}, {"c", Qr(1, 3)}});
		add("mm20");
		add("mm20", {{"a", 2}, {"b", 1}, {"c", 1}});
	}
	if (want(Mode::Numeric)) {
		auto add = [&](const std::string &id, Params p = {}) { out.push_back({id, Mode::Numeric, std::move(p)}); };
		add("lem21");
		add("lem22");
		add("eq21");
		add("thm-main1");
		add("thm-main1", {{"alpha", Qr(5, 2)}, {"x", Qr(1, 3)}, {"z", Qr(4, 5)}});
		add("thm-mth1");
		add("thm-mth", {{"a", 3}, {"b", 1}, {"r", 1}, {"x1", Qr(-3, 10)}, {"y1", Qr(-1, 5)}, {"z", Qr(11, 10)}});
		add("thm-mth", {{"a", 4},
				{"b", 1},
				{"r", 2},
				{"x1", Qr(-3, 10)},
				{"x2", Qr(-1, 4)},
				{"y1", Qr(-1, 5)},
				{"y2", Qr(-1, 6)},
				{"z", Qr(11, 10)}});
		add("promr1");
	}
	if (want(Mode::Asymptotic)) {
		for (const char *id : {"eta", "cor2", "cor1", "cor02", "cor-mth1-asym", "mm10", "mm20", "prop10",
				       "cor32", "asymm"})
			out.push_back({id, Mode::Asymptotic, {}});
	}
	return out;
}

mpq_class parse_rational(const std::string &s)
{
	auto bad = [&]() { return UsageError("not a rational number: '" + s + "'"); };
	if (s.empty())
		throw bad();
	const auto dot = s.find('.');
	if (dot == std::string::npos) {
		mpq_class r;
		if (r.set_str(s, 10) != 0 || s.find_first_of("+ ") != std::string::npos)
			throw bad();
		if (r.get_den() == 0)
			throw bad();
		r.canonicalize();
		return r;
	}
	// finite decimal, converted exactly
	std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
	bool neg = !ip.empty() && ip[0] == '-';
	if (neg)
		ip = ip.substr(1);
	if ((ip.empty() && fp.empty()) || fp.find_first_not_of("0123456789") != std::string::npos ||
	    ip.find_first_not_of("0123456789") != std::string::npos)
		throw bad();
	mpz_class num(ip.empty() ? std::string("0") : ip), den = 1;
	for (char ch : fp) {
		num = num * 10 + (ch - '0');
		den *= 10;
	}
	mpq_class r(neg ? mpz_class(-num) : num, den);
	r.canonicalize();
	return r;
}

} // namespace qlab
