#pragma once

#include <compare>
#include <gmpxx.h>
#include <mpfr.h>
#include <string>

namespace qlab {

/// Significand budget for a numeric computation. `bits` is the claimed
/// accuracy, `guard` extra bits carried internally.
struct Precision {
	long bits = 256;
	long guard = 32;

	Precision() = default;
	explicit Precision(long bits, long guard = 32);

	mpfr_prec_t working() const { return bits + guard; }
};

/// MPFR real with its own precision. Binary operations produce a value at
/// the larger of the operand precisions, so precision never drops silently.
class HPReal {
public:
	explicit HPReal(mpfr_prec_t prec = 64);
	HPReal(long v, mpfr_prec_t prec);
	HPReal(const mpq_class &v, mpfr_prec_t prec);
	HPReal(const HPReal &o);
	HPReal(HPReal &&o) noexcept;
	HPReal &operator=(const HPReal &o);
	HPReal &operator=(HPReal &&o) noexcept;
	~HPReal();

	static HPReal from_double(double v, mpfr_prec_t prec);
	static HPReal from_string(const std::string &s, mpfr_prec_t prec);

	mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
	mpfr_ptr get() { return v_; }
	mpfr_srcptr get() const { return v_; }

	/// Same value rounded to `prec` bits (may raise or lower precision).
	HPReal with_prec(mpfr_prec_t prec) const;

	bool is_zero() const { return mpfr_zero_p(v_) != 0; }
	bool is_finite() const { return mpfr_number_p(v_) != 0; }
	int sign() const { return mpfr_sgn(v_); }
	double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
	/// Binary exponent e with 2^(e-1) <= |x| < 2^e; very negative for 0.
	long exponent2() const;
	/// Decimal scientific representation with `digits` significant digits.
	std::string str(int digits = 20) const;

	HPReal &operator+=(const HPReal &o);
	HPReal &operator-=(const HPReal &o);
	HPReal &operator*=(const HPReal &o);
	HPReal &operator/=(const HPReal &o);
	HPReal operator-() const;

private:
	mpfr_t v_;
};

HPReal operator+(const HPReal &a, const HPReal &b);
HPReal operator-(const HPReal &a, const HPReal &b);
HPReal operator*(const HPReal &a, const HPReal &b);
HPReal operator/(const HPReal &a, const HPReal &b);
HPReal operator+(const HPReal &a, long b);
HPReal operator-(const HPReal &a, long b);
HPReal operator-(long a, const HPReal &b);
HPReal operator*(const HPReal &a, long b);
HPReal operator*(long a, const HPReal &b);
HPReal operator/(const HPReal &a, long b);
HPReal operator/(long a, const HPReal &b);
inline HPReal operator+(long a, const HPReal &b) { return b + a; }

std::partial_ordering operator<=>(const HPReal &a, const HPReal &b);
std::partial_ordering operator<=>(const HPReal &a, long b);
bool operator==(const HPReal &a, const HPReal &b);
bool operator==(const HPReal &a, long b);

HPReal abs(const HPReal &x);
HPReal exp(const HPReal &x);
/// Natural log; DomainError for x <= 0.
HPReal log(const HPReal &x);
HPReal sqrt(const HPReal &x);
/// x^y for x > 0 (DomainError otherwise, including 0^0).
HPReal pow(const HPReal &x, const HPReal &y);
HPReal pow(const HPReal &x, long n);
HPReal sin(const HPReal &x);
HPReal cos(const HPReal &x);
HPReal atan2(const HPReal &y, const HPReal &x);
HPReal floor(const HPReal &x);
HPReal ldexp(const HPReal &x, long e);
HPReal max(const HPReal &a, const HPReal &b);
HPReal min(const HPReal &a, const HPReal &b);
HPReal const_pi(mpfr_prec_t prec);

/// Arbitrary precision complex number as a pair of HPReal.
class HPComplex {
public:
	HPReal re;
	HPReal im;

	explicit HPComplex(mpfr_prec_t prec = 64);
	HPComplex(long v, mpfr_prec_t prec);
	HPComplex(const mpq_class &v, mpfr_prec_t prec);
	explicit HPComplex(const HPReal &r);
	HPComplex(const HPReal &r, const HPReal &i);

	/// e^{i*phi}
	static HPComplex expi(const HPReal &phi);

	mpfr_prec_t prec() const;
	bool is_zero() const { return re.is_zero() && im.is_zero(); }
	bool is_real() const { return im.is_zero(); }
	std::string str(int digits = 20) const;

	HPComplex &operator+=(const HPComplex &o);
	HPComplex &operator-=(const HPComplex &o);
	HPComplex &operator*=(const HPComplex &o);
	HPComplex &operator/=(const HPComplex &o);
	HPComplex &operator*=(const HPReal &o);
	HPComplex operator-() const;
};

HPComplex operator+(const HPComplex &a, const HPComplex &b);
HPComplex operator-(const HPComplex &a, const HPComplex &b);
HPComplex operator*(const HPComplex &a, const HPComplex &b);
HPComplex operator/(const HPComplex &a, const HPComplex &b);
HPComplex operator*(const HPComplex &a, const HPReal &b);
HPComplex operator*(const HPReal &a, const HPComplex &b);
HPComplex operator/(const HPComplex &a, const HPReal &b);
HPComplex operator+(const HPComplex &a, long b);
HPComplex operator-(long a, const HPComplex &b);
HPComplex operator*(const HPComplex &a, long b);
HPComplex operator/(const HPComplex &a, long b);
bool operator==(const HPComplex &a, const HPComplex &b);

HPComplex conj(const HPComplex &z);
HPReal abs(const HPComplex &z);
HPReal norm(const HPComplex &z);
HPReal arg(const HPComplex &z);
HPComplex exp(const HPComplex &z);
/// Principal branch; DomainError at 0.
HPComplex log(const HPComplex &z);
HPComplex pow(const HPComplex &z, long n);
/// Principal branch z^y = exp(y log z).
HPComplex pow(const HPComplex &z, const HPReal &y);
HPComplex sqrt(const HPComplex &z);

} // namespace qlab
