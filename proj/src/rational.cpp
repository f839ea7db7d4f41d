#include "carnot/rational.hpp"

#include <charconv>
#include <limits>
#include <ostream>

namespace carnot {

namespace {

using i128 = __int128;

i128 gcd_wide(i128 a, i128 b)
{
	if (a < 0)
		a = -a;
	if (b < 0)
		b = -b;
	while (b != 0)
	{
		i128 t = a % b;
		a = b;
		b = t;
	}
	return a;
}

bool fits(i128 x)
{
	return x >= std::numeric_limits<std::int64_t>::min() &&
	       x <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t parse_int(std::string_view s)
{
	std::int64_t v = 0;
	auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec == std::errc::result_out_of_range)
		throw OverflowError("integer literal out of range: " + std::string(s));
	if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
		throw std::invalid_argument("not a rational: '" + std::string(s) + "'");
	return v;
}

} // namespace

Rational::Rational(std::int64_t n, std::int64_t d)
{
	if (d == 0)
		throw std::domain_error("rational with zero denominator");
	*this = from_wide(n, d);
}

Rational Rational::from_wide(i128 n, i128 d)
{
	if (d < 0)
	{
		n = -n;
		d = -d;
	}
	i128 g = gcd_wide(n, d);
	if (g > 1)
	{
		n /= g;
		d /= g;
	}
	if (n == 0)
		d = 1;
	if (!fits(n) || !fits(d))
		throw OverflowError("rational arithmetic overflow");
	Rational r;
	r.num_ = static_cast<std::int64_t>(n);
	r.den_ = static_cast<std::int64_t>(d);
	return r;
}

Rational Rational::operator-() const
{
	if (num_ == std::numeric_limits<std::int64_t>::min())
		throw OverflowError("rational negation overflow");
	Rational r = *this;
	r.num_ = -num_;
	return r;
}

Rational &Rational::operator+=(Rational const &o)
{
	if (den_ == 1 && o.den_ == 1)
	{
		std::int64_t s;
		if (__builtin_add_overflow(num_, o.num_, &s))
			throw OverflowError("rational addition overflow");
		num_ = s;
		return *this;
	}
	*this = from_wide(i128(num_) * o.den_ + i128(o.num_) * den_,
	                  i128(den_) * o.den_);
	return *this;
}

Rational &Rational::operator-=(Rational const &o) { return *this += -o; }

Rational &Rational::operator*=(Rational const &o)
{
	if (den_ == 1 && o.den_ == 1)
	{
		std::int64_t p;
		if (__builtin_mul_overflow(num_, o.num_, &p))
			throw OverflowError("rational multiplication overflow");
		num_ = p;
		return *this;
	}
	*this = from_wide(i128(num_) * o.num_, i128(den_) * o.den_);
	return *this;
}

Rational &Rational::operator/=(Rational const &o)
{
	if (o.num_ == 0)
		throw std::domain_error("rational division by zero");
	*this = from_wide(i128(num_) * o.den_, i128(den_) * o.num_);
	return *this;
}

std::strong_ordering operator<=>(Rational const &a, Rational const &b)
{
	return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
}

std::string Rational::str() const
{
	if (den_ == 1)
		return std::to_string(num_);
	return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text)
{
	while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
		text.remove_prefix(1);
	while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
	                         text.back() == '\r'))
		text.remove_suffix(1);
	if (auto slash = text.find('/'); slash != std::string_view::npos)
		return Rational(parse_int(text.substr(0, slash)),
		                parse_int(text.substr(slash + 1)));
	if (auto dot = text.find('.'); dot != std::string_view::npos)
	{
		std::string digits(text.substr(0, dot));
		auto frac = text.substr(dot + 1);
		if (frac.size() > 18)
			throw OverflowError("decimal has too many digits: " +
			                    std::string(text));
		digits += frac;
		if (digits == "-" || digits == "+" || digits.empty())
			throw std::invalid_argument("not a rational: '" +
			                            std::string(text) + "'");
		std::int64_t den = 1;
		for (std::size_t i = 0; i < frac.size(); ++i)
			den *= 10;
		if (digits.front() == '+')
			digits.erase(0, 1);
		return Rational(parse_int(digits), den);
	}
	if (!text.empty() && text.front() == '+')
		text.remove_prefix(1);
	return Rational(parse_int(text));
}

Rational abs(Rational const &x) { return x.sign() < 0 ? -x : x; }

Rational factorial(int n)
{
	Rational r(1);
	for (int i = 2; i <= n; ++i)
		r *= Rational(i);
	return r;
}

std::ostream &operator<<(std::ostream &os, Rational const &x)
{
	return os << x.str();
}

} // namespace carnot
