#include "qlab/errors.hpp"
#include "qlab/verify/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace qlab;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

std::vector<std::string> split(const std::string &s, char sep)
{
	std::vector<std::string> out;
	std::stringstream ss(s);
	for (std::string item; std::getline(ss, item, sep);)
		out.push_back(item);
	if (!s.empty() && s.back() == sep)
		out.emplace_back();
	return out;
}

std::string trim(const std::string &s)
{
	const auto a = s.find_first_not_of(" \t\r");
	if (a == std::string::npos)
		return "";
	return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

Params parse_params(const std::vector<std::string> &kv)
{
	Params p;
	for (const auto &s : kv) {
		const auto eq = s.find('=');
		if (eq == std::string::npos || eq == 0)
			throw UsageError("--param expects k=v, got '" + s + "'");
		p[s.substr(0, eq)] = parse_rational(s.substr(eq + 1));
	}
	return p;
}

std::vector<mpq_class> parse_list(const std::string &s)
{
	std::vector<mpq_class> out;
	for (const auto &item : split(s, ','))
		out.push_back(parse_rational(trim(item)));
	return out;
}

// start,stop,count with linear spacing
std::vector<mpq_class> parse_range(const std::string &s)
{
	auto parts = split(s, ',');
	if (parts.size() != 3)
		throw UsageError("--t expects start,stop,count");
	mpq_class a = parse_rational(trim(parts[0])), b = parse_rational(trim(parts[1]));
	mpq_class n = parse_rational(trim(parts[2]));
	if (n.get_den() != 1 || n < 1)
		throw UsageError("count must be a positive integer");
	const long count = n.get_num().get_si();
	std::vector<mpq_class> out;
	for (long k = 0; k < count; ++k) {
		mpq_class t = count == 1 ? a : mpq_class(a + (b - a) * k / (count - 1));
		t.canonicalize();
		out.push_back(t);
	}
	return out;
}

void emit(const std::string &text, const std::string &path)
{
	if (path.empty()) {
		std::cout << text;
		return;
	}
	std::ofstream f(path, std::ios::binary);
	if (!f)
		throw UsageError("cannot write " + path);
	f << text;
}

std::string ids_message()
{
	std::string s = "valid ids:";
	for (const auto &id : identity_ids())
		s += " " + id;
	return s;
}

struct VerifyArgs {
	std::string id;
	std::vector<std::string> params;
	long order = 0;
	long bits = 0;
	std::string t;
	std::string mode;
	std::string out;
	std::string format = "json";
	bool timing = false;
};

int cmd_verify(const VerifyArgs &v)
{
	const IdentityInfo *info = find_identity(v.id);
	if (!info)
		throw UsageError("unknown identity id '" + v.id + "'; " + ids_message());
	Params params = parse_params(v.params);
	std::vector<mpq_class> grid{mpq_class(1, 2), mpq_class(1, 4), mpq_class(1, 8)};

	std::optional<Mode> mode;
	if (!v.mode.empty()) {
		mode = parse_mode(v.mode);
		if (!mode)
			throw UsageError("unknown mode " + v.mode);
	} else if (v.order > 0) {
		mode = Mode::Exact;
	} else if (!v.t.empty()) {
		mode = info->supports(Mode::Asymptotic) ? Mode::Asymptotic : Mode::Numeric;
	} else if (v.bits > 0) {
		mode = info->supports(Mode::Numeric) ? Mode::Numeric : Mode::Asymptotic;
	} else {
		mode = info->modes.front();
	}
	if (!info->supports(*mode))
		throw UsageError(v.id + " has no " + to_string(*mode) + " mode");
	if (!v.t.empty()) {
		auto ts = parse_list(v.t);
		if (*mode == Mode::Asymptotic)
			grid = ts;
		else if (ts.size() == 1 && *mode == Mode::Numeric)
			params["t"] = ts[0];
		else
			throw UsageError("--t takes a single value in numeric mode");
	}
	const long order = v.order > 0 ? v.order : 40;
	const long bits = v.bits > 0 ? v.bits : (*mode == Mode::Asymptotic ? 512 : 256);

	auto t0 = std::chrono::steady_clock::now();
	CheckReport r = run_check(v.id, *mode, params, order, bits, grid);
	if (v.timing)
		r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
	std::cout << summary_line(r) << "\n";
	if (!v.out.empty())
		emit(v.format == "csv" ? reports_csv({r}) : report_json(r), v.out);
	return r.verdict == Verdict::Fail ? kFail : kPass;
}

struct SuiteArgs {
	std::string select;
	std::string config;
	std::string out;
	std::string format;
	long order = 0;
	long bits = 0;
	long asymptotic_bits = 0;
	std::string t;
	unsigned jobs = 0;
	bool timing = false;
};

int cmd_suite(SuiteArgs s)
{
	SuiteConfig cfg;
	std::string select = "all", format = "json", out;
	if (!s.config.empty()) {
		std::ifstream f(s.config);
		if (!f)
			throw UsageError("cannot read config " + s.config);
		int lineno = 0;
		for (std::string line; std::getline(f, line);) {
			++lineno;
			line = trim(line.substr(0, line.find('#')));
			if (line.empty())
				continue;
			const auto eq = line.find('=');
			if (eq == std::string::npos)
				throw UsageError(s.config + ":" + std::to_string(lineno) + ": expected key = value");
			const std::string k = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
			auto integer = [&]() {
				mpq_class q = parse_rational(val);
				if (q.get_den() != 1 || q < 0)
					throw UsageError(s.config + ": " + k + " must be a non-negative integer");
				return q.get_num().get_si();
			};
			if (k == "select")
				select = val;
			else if (k == "order")
				cfg.order = integer();
			else if (k == "bits")
				cfg.numeric_bits = integer();
			else if (k == "asymptotic-bits")
				cfg.asymptotic_bits = integer();
			else if (k == "t")
				cfg.t_grid = parse_list(val);
			else if (k == "jobs")
				cfg.jobs = static_cast<unsigned>(integer());
			else if (k == "timing")
				cfg.timing = val == "true" || val == "1";
			else if (k == "out")
				out = val;
			else if (k == "format")
				format = val;
			else
				throw UsageError(s.config + ": unknown key " + k);
		}
	}
	if (!s.select.empty())
		select = s.select;
	if (!s.format.empty())
		format = s.format;
	if (!s.out.empty())
		out = s.out;
	if (s.order > 0)
		cfg.order = s.order;
	if (s.bits > 0)
		cfg.numeric_bits = s.bits;
	if (s.asymptotic_bits > 0)
		cfg.asymptotic_bits = s.asymptotic_bits;
	if (!s.t.empty())
		cfg.t_grid = parse_list(s.t);
	if (s.jobs > 0)
		cfg.jobs = s.jobs;
	if (s.timing)
		cfg.timing = true;
	if (format != "json" && format != "csv")
		throw UsageError("format must be json or csv");

	std::optional<Mode> mode;
	if (select != "all") {
		mode = parse_mode(select);
		if (!mode)
			throw UsageError("--select must be exact, numeric, asymptotic or all");
	}
	auto reports = run_suite(suite_items(mode), cfg);
	// summaries go to stderr when the report itself goes to stdout
	std::ostream &log = out.empty() ? std::cerr : std::cout;
	bool failed = false;
	for (const auto &r : reports) {
		log << summary_line(r) << "\n";
		failed = failed || r.verdict == Verdict::Fail;
	}
	emit(format == "csv" ? reports_csv(reports) : reports_json(reports), out);
	return failed ? kFail : kPass;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"q-series identity and asymptotics verifier"};
	app.require_subcommand(1);

	VerifyArgs va;
	auto *verify = app.add_subcommand("verify", "run one check");
	verify->add_option("id", va.id, "identity id")->required();
	verify->add_option("--param", va.params, "parameter k=v (p/q or decimal)");
	verify->add_option("--order", va.order, "exact mode to q^N");
	verify->add_option("--bits", va.bits, "numeric precision in bits");
	verify->add_option("--t", va.t, "t-grid, comma separated (single t in numeric mode)");
	verify->add_option("--mode", va.mode, "exact|numeric|asymptotic");
	verify->add_option("--out", va.out, "write the report to FILE");
	verify->add_option("--format", va.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
	verify->add_flag("--timing", va.timing, "record elapsed_ms");

	SuiteArgs sa;
	auto *suite = app.add_subcommand("suite", "run the bundled checks");
	suite->add_option("--select", sa.select, "exact|numeric|asymptotic|all");
	suite->add_option("--config", sa.config, "key = value file");
	suite->add_option("--out", sa.out, "write the JSON array to FILE");
	suite->add_option("--format", sa.format, "json|csv");
	suite->add_option("--order", sa.order, "exact order");
	suite->add_option("--bits", sa.bits, "numeric bits");
	suite->add_option("--asymptotic-bits", sa.asymptotic_bits, "asymptotic bits");
	suite->add_option("--t", sa.t, "asymptotic t-grid");
	suite->add_option("--jobs", sa.jobs, "parallel workers");
	suite->add_flag("--timing", sa.timing, "record elapsed_ms");

	std::string series, display, cout_path;
	std::vector<std::string> cparams;
	long corder = 0;
	auto *coeffs = app.add_subcommand("coeffs", "dump series coefficients as CSV");
	coeffs->add_option("series", series, "<id>-lhs, <id>-rhs or eta-product")->required();
	coeffs->add_option("--param", cparams, "parameter k=v");
	coeffs->add_option("--order", corder, "truncation order")->required();
	coeffs->add_option("--display", display, "display name when an id has several");
	coeffs->add_option("--out", cout_path, "write CSV to FILE");

	std::string sid, srange, sout;
	std::vector<std::string> sparams;
	long sbits = 512;
	auto *sweep_cmd = app.add_subcommand("sweep", "tabulate t, lhs, rhs, residual");
	sweep_cmd->add_option("id", sid, "asymptotic id, lem21, thm-main1 or thm-mth1")->required();
	sweep_cmd->add_option("--t", srange, "start,stop,count")->required();
	sweep_cmd->add_option("--param", sparams, "parameter k=v");
	sweep_cmd->add_option("--bits", sbits, "precision in bits");
	sweep_cmd->add_option("--out", sout, "write CSV to FILE");

	app.add_subcommand("ids", "list identity ids");

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp &e) {
		return app.exit(e);
	} catch (const CLI::CallForAllHelp &e) {
		return app.exit(e);
	} catch (const CLI::ParseError &e) {
		app.exit(e);
		return kUsage;
	}

	try {
		if (*verify)
			return cmd_verify(va);
		if (*suite)
			return cmd_suite(sa);
		if (*coeffs) {
			ExactSeries s = series_by_name(series, parse_params(cparams), corder, display);
			emit(s.to_csv(), cout_path);
			return kPass;
		}
		if (*sweep_cmd) {
			auto rows = sweep(sid, parse_params(sparams), parse_range(srange), sbits);
			std::string csv = "t,lhs,rhs,residual\n";
			for (const auto &r : rows)
				csv += r.t + "," + r.lhs + "," + r.rhs + "," + r.residual + "\n";
			emit(csv, sout);
			return kPass;
		}
		for (const auto &id : identity_ids())
			std::cout << id << "\n";
		return kPass;
	} catch (const UsageError &e) {
		std::cerr << e.what() << "\n";
		return kUsage;
	} catch (const UnsupportedMode &e) {
		std::cerr << e.what() << "\n";
		return kUsage;
	} catch (const Error &e) {
		std::cerr << e.what() << "\n";
		return kFail;
	}
}
