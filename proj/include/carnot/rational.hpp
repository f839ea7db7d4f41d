#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace carnot {

/// Thrown when an exact computation leaves the 64-bit range.
class OverflowError : public std::overflow_error
{
public:
	using std::overflow_error::overflow_error;
};

/**
 * Exact rational number with 64-bit numerator and denominator.
 *
 * Always kept in lowest terms with a positive denominator. Every
 * operation is checked: intermediate products are formed in 128 bits and
 * an OverflowError is thrown if the reduced result does not fit.
 */
class Rational
{
public:
	constexpr Rational() = default;
	constexpr Rational(std::int64_t n) : num_(n) {}
	Rational(std::int64_t n, std::int64_t d);

	std::int64_t num() const { return num_; }
	std::int64_t den() const { return den_; }

	bool is_zero() const { return num_ == 0; }
	bool is_integer() const { return den_ == 1; }
	int sign() const { return (num_ > 0) - (num_ < 0); }

	double to_double() const
	{
		return static_cast<double>(num_) / static_cast<double>(den_);
	}

	Rational operator-() const;
	Rational &operator+=(Rational const &o);
	Rational &operator-=(Rational const &o);
	Rational &operator*=(Rational const &o);
	Rational &operator/=(Rational const &o);

	friend Rational operator+(Rational a, Rational const &b) { return a += b; }
	friend Rational operator-(Rational a, Rational const &b) { return a -= b; }
	friend Rational operator*(Rational a, Rational const &b) { return a *= b; }
	friend Rational operator/(Rational a, Rational const &b) { return a /= b; }

	friend bool operator==(Rational const &, Rational const &) = default;
	friend std::strong_ordering operator<=>(Rational const &a,
	                                        Rational const &b);

	/// "p/q", or "p" when the denominator is 1.
	std::string str() const;

	/// Parses "p", "p/q", or a plain decimal such as "-0.125".
	static Rational parse(std::string_view text);

private:
	static Rational from_wide(__int128 n, __int128 d);

	std::int64_t num_ = 0;
	std::int64_t den_ = 1;
};

Rational abs(Rational const &x);
Rational factorial(int n);

std::ostream &operator<<(std::ostream &os, Rational const &x);

} // namespace carnot
