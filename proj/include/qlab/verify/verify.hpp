#pragma once

#include "qlab/exactq/exact_series.hpp"

#include <gmpxx.h>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qlab {

enum class Mode { Exact, Numeric, Asymptotic };
enum class Verdict { Pass, Fail, Informational };

std::string to_string(Mode m);
std::string to_string(Verdict v);
std::optional<Mode> parse_mode(const std::string &s);

/// Default value of one parameter. In exact mode a parameter stands for
/// value * q^weight.
struct ParamSpec {
	std::string name;
	mpq_class value;
	mpq_class weight = 0;
};

struct IdentityInfo {
	std::string id;
	std::string anchor;
	std::vector<Mode> modes;
	std::vector<ParamSpec> params;
	bool supports(Mode m) const;
};

/// All ids in registry order.
const std::vector<IdentityInfo> &registry();
const IdentityInfo *find_identity(const std::string &id);
std::vector<std::string> identity_ids();

/// Parameter overrides by name.
using Params = std::map<std::string, mpq_class>;

struct DisplayResult {
	std::string name;
	std::string deviation;
};

struct SampleRow {
	std::string t;
	std::string lhs;
	std::string rhs;
	std::string residual;
};

struct CheckReport {
	std::string id;
	Mode mode = Mode::Exact;
	/// Parameter name and printed value, in registry order.
	std::vector<std::pair<std::string, std::string>> params;
	long order_or_bits = 0;
	std::string deviation;
	std::string threshold;
	std::optional<std::string> c_fit;
	std::optional<std::string> c_pred;
	Verdict verdict = Verdict::Fail;
	std::optional<double> elapsed_ms;
	std::string note;
	std::vector<DisplayResult> displays;
	std::vector<SampleRow> samples;
};

/// Both sides expanded independently to q^order; pass iff every display has
/// zero difference.
CheckReport check_exact(const std::string &id, const Params &params, long order);
/// Both sides at the numeric point given by the parameters (q or t); pass iff
/// the largest relative residual is below 2^{-bits/2}.
CheckReport check_numeric(const std::string &id, const Params &params, long bits);
/// Measured quotient against its prediction on a strictly decreasing t-grid,
/// with a rate fit of the residual.
CheckReport check_asymptotic(const std::string &id, const Params &params,
			     const std::vector<mpq_class> &t_grid, long bits);

/// Dispatch on mode. Errors raised by a check are turned into a failed
/// report carrying the message.
CheckReport run_check(const std::string &id, Mode mode, const Params &params, long order,
		      long bits, const std::vector<mpq_class> &t_grid);

struct SuiteItem {
	std::string id;
	Mode mode;
	Params params;
};

struct SuiteConfig {
	long order = 40;
	long numeric_bits = 256;
	long asymptotic_bits = 512;
	std::vector<mpq_class> t_grid{mpq_class(1, 2), mpq_class(1, 4), mpq_class(1, 8)};
	unsigned jobs = 1;
	bool timing = false;
};

/// The bundled items of one mode (or all modes), in registry order.
std::vector<SuiteItem> suite_items(std::optional<Mode> selection);
/// Runs the items; reports come back in item order whatever `jobs` is.
std::vector<CheckReport> run_suite(const std::vector<SuiteItem> &items, const SuiteConfig &cfg);

/// Largest relative difference between every exact side of an exact item,
/// evaluated at q, and the same side computed by the numeric engine.
double cross_engine_deviation(const SuiteItem &item, long order, const mpq_class &q, long bits);

std::string report_json(const CheckReport &r);
/// JSON array, two-space indented, one trailing newline.
std::string reports_json(const std::vector<CheckReport> &rs);
/// Header plus one row per report.
std::string reports_csv(const std::vector<CheckReport> &rs);
/// One line: "<verdict> <id> [<mode>] deviation=... ".
std::string summary_line(const CheckReport &r);

/// Named series for coefficient dumps: "<id>-lhs", "<id>-rhs" and
/// "eta-product". `display` picks among the displays of the id.
ExactSeries series_by_name(const std::string &name, const Params &params, long order,
			   const std::string &display = "");
std::vector<std::string> series_names();

/// Ids accepted by sweep.
std::vector<std::string> sweep_ids();
/// t, lhs, rhs, residual for each t (numeric values at `bits`).
std::vector<SampleRow> sweep(const std::string &id, const Params &params,
			     const std::vector<mpq_class> &t, long bits);

/// "p/q", integer or finite decimal, converted exactly.
mpq_class parse_rational(const std::string &s);

} // namespace qlab
