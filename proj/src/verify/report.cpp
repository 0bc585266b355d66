#include "qlab/verify/verify.hpp"

#include <json.hpp>

#include <sstream>

namespace qlab {

namespace {

using Json = nlohmann::ordered_json;

Json opt(const std::optional<std::string> &s) { return s ? Json(*s) : Json(nullptr); }

Json to_json(const CheckReport &r)
{
	Json params = Json::object();
	for (const auto &[k, v] : r.params)
		params[k] = v;
	Json j;
	j["id"] = r.id;
	j["mode"] = to_string(r.mode);
	j["params"] = params;
	j["order_or_bits"] = r.order_or_bits;
	j["deviation"] = r.deviation;
	j["threshold"] = r.threshold;
	j["c_fit"] = opt(r.c_fit);
	j["c_pred"] = opt(r.c_pred);
	j["verdict"] = to_string(r.verdict);
	j["elapsed_ms"] = r.elapsed_ms ? Json(*r.elapsed_ms) : Json(nullptr);
	j["note"] = r.note;
	Json displays = Json::array();
	for (const auto &d : r.displays)
		displays.push_back({{"name", d.name}, {"deviation", d.deviation}});
	j["displays"] = displays;
	Json samples = Json::array();
	for (const auto &s : r.samples)
		samples.push_back({{"t", s.t}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"residual", s.residual}});
	j["samples"] = samples;
	return j;
}

std::string csv_field(const std::string &s)
{
	if (s.find_first_of(",\"\n") == std::string::npos)
		return s;
	std::string out = "\"";
	for (char c : s) {
		if (c == '"')
			out += '"';
		out += c;
	}
	return out + "\"";
}

} // namespace

std::string report_json(const CheckReport &r) { return to_json(r).dump(2) + "\n"; }

std::string reports_json(const std::vector<CheckReport> &rs)
{
	Json a = Json::array();
	for (const auto &r : rs)
		a.push_back(to_json(r));
	return a.dump(2) + "\n";
}

std::string reports_csv(const std::vector<CheckReport> &rs)
{
	std::ostringstream os;
	os << "id,mode,params,order_or_bits,deviation,threshold,c_fit,c_pred,verdict,elapsed_ms,note\n";
	for (const auto &r : rs) {
		std::string params;
		for (const auto &[k, v] : r.params)
			params += (params.empty() ? "" : ";") + k + "=" + v;
		os << csv_field(r.id) << ',' << to_string(r.mode) << ',' << csv_field(params) << ','
		   << r.order_or_bits << ',' << csv_field(r.deviation) << ',' << csv_field(r.threshold) << ','
		   << csv_field(r.c_fit.value_or("")) << ',' << csv_field(r.c_pred.value_or("")) << ','
		   << to_string(r.verdict) << ',' << (r.elapsed_ms ? Json(*r.elapsed_ms).dump() : "") << ','
		   << csv_field(r.note) << '\n';
	}
	return os.str();
}

std::string summary_line(const CheckReport &r)
{
	std::ostringstream os;
	os << to_string(r.verdict) << ' ' << r.id << " [" << to_string(r.mode);
	if (r.mode == Mode::Exact)
		os << ", order " << r.order_or_bits;
	else
		os << ", " << r.order_or_bits << " bits";
	os << ']';
	for (const auto &[k, v] : r.params)
		os << ' ' << k << '=' << v;
	os << " deviation=" << (r.deviation.empty() ? "-" : r.deviation);
	if (r.c_fit)
		os << " c_fit=" << *r.c_fit;
	if (r.c_pred)
		os << " c_pred=" << *r.c_pred;
	if (!r.note.empty())
		os << " (" << r.note << ')';
	return os.str();
}

} // namespace qlab
