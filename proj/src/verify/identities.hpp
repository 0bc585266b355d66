#pragma once

#include "qlab/bilateral/engine.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace qlab::detail {

/// Resolved parameters of one check: value and q-weight per name, so that a
/// parameter p stands for value * q^weight.
struct Args {
	std::map<std::string, mpq_class> value;
	std::map<std::string, mpq_class> weight;

	const mpq_class &rat(const std::string &k) const;
	long integer(const std::string &k) const;
	template <class E> typename E::Param mono(const E &e, const std::string &k) const
	{
		auto w = weight.find(k);
		return e.param(rat(k), w == weight.end() ? mpq_class(0) : w->second);
	}
};

template <class E> struct Display {
	std::string name;
	typename E::Value lhs;
	typename E::Value rhs;
};

/// Both sides of every display of an identity, in either engine.
template <class E> std::vector<Display<E>> identity_sides(const std::string &id, const E &e, const Args &a);

/// True if the id has engine-generic sides.
bool has_generic_sides(const std::string &id);

} // namespace qlab::detail
