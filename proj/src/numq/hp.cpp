#include "qlab/numq/hp.hpp"

#include "qlab/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>

namespace qlab {

namespace {

constexpr mpfr_rnd_t RND = MPFR_RNDN;

mpfr_prec_t maxp(const HPReal &a, const HPReal &b)
{
	return std::max(a.prec(), b.prec());
}

} // namespace

Precision::Precision(long bits_, long guard_) : bits(bits_), guard(guard_)
{
	if (bits < 64)
		throw DomainError("precision below 64 bits");
	if (guard < 0)
		throw DomainError("negative guard bits");
}

HPReal::HPReal(mpfr_prec_t prec)
{
	mpfr_init2(v_, prec);
	mpfr_set_zero(v_, 1);
}

HPReal::HPReal(long v, mpfr_prec_t prec)
{
	mpfr_init2(v_, prec);
	mpfr_set_si(v_, v, RND);
}

HPReal::HPReal(const mpq_class &v, mpfr_prec_t prec)
{
	mpfr_init2(v_, prec);
	mpfr_set_q(v_, v.get_mpq_t(), RND);
}

HPReal::HPReal(const HPReal &o)
{
	mpfr_init2(v_, o.prec());
	mpfr_set(v_, o.v_, RND);
}

HPReal::HPReal(HPReal &&o) noexcept
{
	mpfr_init2(v_, MPFR_PREC_MIN);
	mpfr_swap(v_, o.v_);
}

HPReal &HPReal::operator=(const HPReal &o)
{
	if (this != &o) {
		mpfr_set_prec(v_, o.prec());
		mpfr_set(v_, o.v_, RND);
	}
	return *this;
}

HPReal &HPReal::operator=(HPReal &&o) noexcept
{
	mpfr_swap(v_, o.v_);
	return *this;
}

HPReal::~HPReal() { mpfr_clear(v_); }

HPReal HPReal::from_double(double v, mpfr_prec_t prec)
{
	HPReal r(prec);
	mpfr_set_d(r.v_, v, RND);
	return r;
}

HPReal HPReal::from_string(const std::string &s, mpfr_prec_t prec)
{
	HPReal r(prec);
	if (mpfr_set_str(r.v_, s.c_str(), 10, RND) != 0)
		throw DomainError("not a number: " + s);
	return r;
}

HPReal HPReal::with_prec(mpfr_prec_t prec) const
{
	HPReal r(prec);
	mpfr_set(r.v_, v_, RND);
	return r;
}

long HPReal::exponent2() const
{
	if (mpfr_zero_p(v_))
		return -(1L << 40);
	return mpfr_get_exp(v_);
}

std::string HPReal::str(int digits) const
{
	if (mpfr_nan_p(v_))
		return "nan";
	if (mpfr_inf_p(v_))
		return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
	char *buf = nullptr;
	mpfr_asprintf(&buf, "%.*Re", std::max(digits - 1, 0), v_);
	std::string out(buf);
	mpfr_free_str(buf);
	return out;
}

HPReal &HPReal::operator+=(const HPReal &o) { return *this = *this + o; }
HPReal &HPReal::operator-=(const HPReal &o) { return *this = *this - o; }
HPReal &HPReal::operator*=(const HPReal &o) { return *this = *this * o; }
HPReal &HPReal::operator/=(const HPReal &o) { return *this = *this / o; }

HPReal HPReal::operator-() const
{
	HPReal r(prec());
	mpfr_neg(r.v_, v_, RND);
	return r;
}

#define QLAB_BINOP(op, fn)                                                     \
	HPReal operator op(const HPReal &a, const HPReal &b)                   \
	{                                                                      \
		HPReal r(maxp(a, b));                                          \
		fn(r.get(), a.get(), b.get(), RND);                            \
		return r;                                                      \
	}
QLAB_BINOP(+, mpfr_add)
QLAB_BINOP(-, mpfr_sub)
QLAB_BINOP(*, mpfr_mul)
QLAB_BINOP(/, mpfr_div)
#undef QLAB_BINOP

HPReal operator+(const HPReal &a, long b)
{
	HPReal r(a.prec());
	mpfr_add_si(r.get(), a.get(), b, RND);
	return r;
}

HPReal operator-(const HPReal &a, long b)
{
	HPReal r(a.prec());
	mpfr_sub_si(r.get(), a.get(), b, RND);
	return r;
}

HPReal operator-(long a, const HPReal &b)
{
	HPReal r(b.prec());
	mpfr_si_sub(r.get(), a, b.get(), RND);
	return r;
}

HPReal operator*(const HPReal &a, long b)
{
	HPReal r(a.prec());
	mpfr_mul_si(r.get(), a.get(), b, RND);
	return r;
}

HPReal operator*(long a, const HPReal &b) { return b * a; }

HPReal operator/(const HPReal &a, long b)
{
	HPReal r(a.prec());
	mpfr_div_si(r.get(), a.get(), b, RND);
	return r;
}

HPReal operator/(long a, const HPReal &b)
{
	HPReal r(b.prec());
	mpfr_si_div(r.get(), a, b.get(), RND);
	return r;
}

std::partial_ordering operator<=>(const HPReal &a, const HPReal &b)
{
	if (mpfr_unordered_p(a.get(), b.get()))
		return std::partial_ordering::unordered;
	int c = mpfr_cmp(a.get(), b.get());
	return c < 0 ? std::partial_ordering::less
	       : c > 0 ? std::partial_ordering::greater
		       : std::partial_ordering::equivalent;
}

std::partial_ordering operator<=>(const HPReal &a, long b)
{
	if (mpfr_nan_p(a.get()))
		return std::partial_ordering::unordered;
	int c = mpfr_cmp_si(a.get(), b);
	return c < 0 ? std::partial_ordering::less
	       : c > 0 ? std::partial_ordering::greater
		       : std::partial_ordering::equivalent;
}

bool operator==(const HPReal &a, const HPReal &b)
{
	return mpfr_equal_p(a.get(), b.get()) != 0;
}

bool operator==(const HPReal &a, long b)
{
	return !mpfr_nan_p(a.get()) && mpfr_cmp_si(a.get(), b) == 0;
}

#define QLAB_UNARY(name, fn)                                                   \
	HPReal name(const HPReal &x)                                           \
	{                                                                      \
		HPReal r(x.prec());                                            \
		fn(r.get(), x.get(), RND);                                     \
		return r;                                                      \
	}
QLAB_UNARY(abs, mpfr_abs)
QLAB_UNARY(exp, mpfr_exp)
QLAB_UNARY(sin, mpfr_sin)
QLAB_UNARY(cos, mpfr_cos)
#undef QLAB_UNARY

HPReal log(const HPReal &x)
{
	if (x.sign() <= 0)
		throw DomainError("log of non-positive real");
	HPReal r(x.prec());
	mpfr_log(r.get(), x.get(), RND);
	return r;
}

HPReal sqrt(const HPReal &x)
{
	if (x.sign() < 0)
		throw DomainError("sqrt of negative real");
	HPReal r(x.prec());
	mpfr_sqrt(r.get(), x.get(), RND);
	return r;
}

HPReal pow(const HPReal &x, const HPReal &y)
{
	if (x.sign() < 0 || (x.is_zero() && y.sign() <= 0))
		throw DomainError("pow outside x > 0");
	HPReal r(maxp(x, y));
	mpfr_pow(r.get(), x.get(), y.get(), RND);
	return r;
}

HPReal pow(const HPReal &x, long n)
{
	if (x.is_zero() && n <= 0)
		throw DomainError("0 to a non-positive power");
	HPReal r(x.prec());
	mpfr_pow_si(r.get(), x.get(), n, RND);
	return r;
}

HPReal atan2(const HPReal &y, const HPReal &x)
{
	HPReal r(maxp(x, y));
	mpfr_atan2(r.get(), y.get(), x.get(), RND);
	return r;
}

HPReal floor(const HPReal &x)
{
	HPReal r(x.prec());
	mpfr_floor(r.get(), x.get());
	return r;
}

HPReal ldexp(const HPReal &x, long e)
{
	HPReal r(x.prec());
	mpfr_mul_2si(r.get(), x.get(), e, RND);
	return r;
}

HPReal max(const HPReal &a, const HPReal &b) { return a < b ? b : a; }
HPReal min(const HPReal &a, const HPReal &b) { return b < a ? b : a; }

HPReal const_pi(mpfr_prec_t prec)
{
	HPReal r(prec);
	mpfr_const_pi(r.get(), RND);
	return r;
}

// ---------------------------------------------------------------------------

HPComplex::HPComplex(mpfr_prec_t prec) : re(prec), im(prec) {}
HPComplex::HPComplex(long v, mpfr_prec_t prec) : re(v, prec), im(prec) {}
HPComplex::HPComplex(const mpq_class &v, mpfr_prec_t prec)
    : re(v, prec), im(prec)
{}
HPComplex::HPComplex(const HPReal &r) : re(r), im(r.prec()) {}
HPComplex::HPComplex(const HPReal &r, const HPReal &i) : re(r), im(i) {}

HPComplex HPComplex::expi(const HPReal &phi)
{
	HPComplex z(phi.prec());
	mpfr_sin_cos(z.im.get(), z.re.get(), phi.get(), RND);
	return z;
}

mpfr_prec_t HPComplex::prec() const { return std::max(re.prec(), im.prec()); }

std::string HPComplex::str(int digits) const
{
	if (im.is_zero())
		return re.str(digits);
	std::string s = re.str(digits);
	std::string i = im.str(digits);
	if (i[0] != '-')
		i = "+" + i;
	return s + i + "i";
}

HPComplex &HPComplex::operator+=(const HPComplex &o) { return *this = *this + o; }
HPComplex &HPComplex::operator-=(const HPComplex &o) { return *this = *this - o; }
HPComplex &HPComplex::operator*=(const HPComplex &o) { return *this = *this * o; }
HPComplex &HPComplex::operator/=(const HPComplex &o) { return *this = *this / o; }
HPComplex &HPComplex::operator*=(const HPReal &o) { return *this = *this * o; }
HPComplex HPComplex::operator-() const { return HPComplex(-re, -im); }

HPComplex operator+(const HPComplex &a, const HPComplex &b)
{
	return HPComplex(a.re + b.re, a.im + b.im);
}

HPComplex operator-(const HPComplex &a, const HPComplex &b)
{
	return HPComplex(a.re - b.re, a.im - b.im);
}

HPComplex operator*(const HPComplex &a, const HPComplex &b)
{
	if (a.im.is_zero() && b.im.is_zero())
		return HPComplex(a.re * b.re, HPReal(std::max(a.prec(), b.prec())));
	return HPComplex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

HPComplex operator/(const HPComplex &a, const HPComplex &b)
{
	if (b.is_zero())
		throw DomainError("complex division by zero");
	if (b.im.is_zero())
		return HPComplex(a.re / b.re, a.im / b.re);
	HPReal d = b.re * b.re + b.im * b.im;
	return HPComplex((a.re * b.re + a.im * b.im) / d,
			 (a.im * b.re - a.re * b.im) / d);
}

HPComplex operator*(const HPComplex &a, const HPReal &b)
{
	return HPComplex(a.re * b, a.im * b);
}

HPComplex operator*(const HPReal &a, const HPComplex &b) { return b * a; }

HPComplex operator/(const HPComplex &a, const HPReal &b)
{
	return HPComplex(a.re / b, a.im / b);
}

HPComplex operator+(const HPComplex &a, long b)
{
	return HPComplex(a.re + b, a.im);
}

HPComplex operator-(long a, const HPComplex &b)
{
	return HPComplex(a - b.re, -b.im);
}

HPComplex operator*(const HPComplex &a, long b)
{
	return HPComplex(a.re * b, a.im * b);
}

HPComplex operator/(const HPComplex &a, long b)
{
	return HPComplex(a.re / b, a.im / b);
}

bool operator==(const HPComplex &a, const HPComplex &b)
{
	return a.re == b.re && a.im == b.im;
}

HPComplex conj(const HPComplex &z) { return HPComplex(z.re, -z.im); }

HPReal abs(const HPComplex &z)
{
	if (z.im.is_zero())
		return abs(z.re);
	HPReal r(z.prec());
	mpfr_hypot(r.get(), z.re.get(), z.im.get(), RND);
	return r;
}

HPReal norm(const HPComplex &z) { return z.re * z.re + z.im * z.im; }

HPReal arg(const HPComplex &z) { return atan2(z.im, z.re); }

HPComplex exp(const HPComplex &z)
{
	if (z.im.is_zero())
		return HPComplex(exp(z.re));
	return HPComplex::expi(z.im) * exp(z.re);
}

HPComplex log(const HPComplex &z)
{
	if (z.is_zero())
		throw DomainError("log of zero");
	if (z.im.is_zero() && z.re.sign() > 0)
		return HPComplex(log(z.re));
	return HPComplex(log(abs(z)), arg(z));
}

HPComplex pow(const HPComplex &z, long n)
{
	if (n < 0)
		return HPComplex(1, z.prec()) / pow(z, -n);
	if (z.im.is_zero())
		return n == 0 ? HPComplex(1, z.prec()) : HPComplex(pow(z.re, n));
	HPComplex r(1, z.prec());
	HPComplex b = z;
	unsigned long e = static_cast<unsigned long>(n);
	while (e) {
		if (e & 1)
			r *= b;
		e >>= 1;
		if (e)
			b *= b;
	}
	return r;
}

HPComplex pow(const HPComplex &z, const HPReal &y)
{
	if (z.im.is_zero() && z.re.sign() > 0)
		return HPComplex(pow(z.re, y));
	if (z.is_zero()) {
		if (y.sign() <= 0)
			throw DomainError("0 to a non-positive power");
		return HPComplex(std::max(z.prec(), y.prec()));
	}
	return exp(log(z) * y);
}

HPComplex sqrt(const HPComplex &z)
{
	if (z.im.is_zero() && z.re.sign() >= 0)
		return HPComplex(sqrt(z.re));
	HPReal r = abs(z);
	HPReal a = sqrt((r + z.re) / 2);
	HPReal b = sqrt((r - z.re) / 2);
	if (z.im.sign() < 0)
		b = -b;
	return HPComplex(a, b);
}

} // namespace qlab
