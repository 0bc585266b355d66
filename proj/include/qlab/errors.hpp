#pragma once

#include <stdexcept>
#include <string>

namespace qlab {

class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

#define QLAB_ERROR(Name)                                                       \
	class Name : public Error {                                            \
	public:                                                                \
		explicit Name(const std::string &what)                         \
		    : Error(std::string(#Name ": ") + what)                    \
		{}                                                             \
	};

QLAB_ERROR(ZeroConstantTerm)
QLAB_ERROR(IncompatibleGrid)
QLAB_ERROR(PolePoch)
QLAB_ERROR(DomainError)
QLAB_ERROR(PrecisionLoss)
QLAB_ERROR(NoBracket)
QLAB_ERROR(Divergence)
QLAB_ERROR(NonPositiveResidual)
QLAB_ERROR(UnsupportedMode)
QLAB_ERROR(UsageError)

#undef QLAB_ERROR

} // namespace qlab
