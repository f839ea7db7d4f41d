#pragma once

#include "carnot/algebra.hpp"
#include "carnot/rational.hpp"

#include <climits>
#include <iosfwd>
#include <map>
#include <optional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace carnot {

/// Variable weights d(1)..d(n), shared between polynomials of one ring.
using Weights = std::shared_ptr<const std::vector<int>>;

Weights make_weights(std::vector<int> w);

/// Sentinel weighted degree of the zero polynomial.
inline constexpr int zero_degree = INT_MIN;

/// x^alpha stored sparsely as (variable, exponent) pairs with increasing
/// 1-based variables and positive exponents, plus its weighted degree.
struct Monomial
{
	int wdeg = 0;
	std::vector<std::pair<int, int>> powers;

	int exponent(int var) const;
	bool operator==(Monomial const &o) const { return powers == o.powers; }
};

/// Canonical order: weighted degree ascending, then lexicographic with
/// x1 > x2 > ... (higher power of the earlier variable first).
struct MonomialOrder
{
	bool operator()(Monomial const &a, Monomial const &b) const;
};

/**
 * Sparse multivariate polynomial with exact rational coefficients.
 *
 * No zero coefficient is ever stored. A default-constructed Poly is the
 * zero polynomial of an unspecified ring and combines with any ring.
 */
class Poly
{
public:
	using Terms = std::map<Monomial, Rational, MonomialOrder>;

	Poly() = default;
	explicit Poly(Weights w) : weights_(std::move(w)) {}

	static Poly constant(Weights w, Rational c);
	static Poly variable(Weights w, int var);
	/// c * x^alpha, alpha indexed 1..n.
	static Poly monomial(Weights w, MultiIndex const &alpha, Rational c);

	int nvars() const { return weights_ ? static_cast<int>(weights_->size()) : 0; }
	Weights const &weights() const { return weights_; }
	Terms const &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }

	Monomial make_monomial(MultiIndex const &alpha) const;
	Rational coefficient(Monomial const &m) const;
	Rational coefficient(MultiIndex const &alpha) const;
	/// Adds c * m in place.
	void add_term(Monomial const &m, Rational const &c);

	Poly operator-() const;
	Poly &operator+=(Poly const &o);
	Poly &operator-=(Poly const &o);
	Poly &operator*=(Rational const &c);
	friend Poly operator+(Poly a, Poly const &b) { return a += b; }
	friend Poly operator-(Poly a, Poly const &b) { return a -= b; }
	friend Poly operator*(Poly const &a, Poly const &b);
	friend Poly operator*(Poly a, Rational const &c) { return a *= c; }
	friend Poly operator*(Rational const &c, Poly a) { return a *= c; }
	friend bool operator==(Poly const &a, Poly const &b)
	{
		return a.terms_ == b.terms_;
	}

	/// Partial derivative with respect to x_var.
	Poly derivative(int var) const;
	/// x_var-antiderivative vanishing on {x_var = 0}.
	Poly antiderivative(int var) const;
	/// Sets x_var = value.
	Poly substitute(int var, Rational const &value) const;

	/// Exact quotient; throws std::domain_error if `q` does not divide.
	Poly divide_exact(Poly const &q) const;

	Rational evaluate(std::span<const Rational> x) const;
	double evaluate(std::span<const double> x) const;

	/// Max weighted degree over terms, or zero_degree for 0.
	int weighted_degree() const;
	bool is_homogeneous() const;
	/// Variables that occur, ascending.
	std::vector<int> variables() const;

	/// Canonical text, e.g. "-x1 + 1/2*x2^2"; "0" for zero.
	std::string str(std::string_view var = "x") const;

private:
	void check_ring(Poly const &o);

	Weights weights_;
	Terms terms_;
};

std::string monomial_str(Monomial const &m, std::string_view var = "x");

std::ostream &operator<<(std::ostream &os, Poly const &p);

/**
 * Parses text such as "v4*(x3*x2 + x5) - 1/6*v5*x2^3".
 *
 * Supports +, -, *, ^ with nonnegative integer exponents, parentheses,
 * rational literals and variables "<prefix><index>". With m prefixes the
 * ring is split into m equal blocks, prefixes[p] + "i" naming variable
 * p * (nvars / m) + i. Throws std::invalid_argument with the offending
 * position.
 */
Poly parse_poly(std::string_view text, Weights w,
                std::vector<std::string> const &prefixes = {"x"});

/// Coefficients V_1..V_n of a vector field sum V_l d/dx_l.
struct PolyVectorField
{
	std::vector<Poly> coeffs;

	/// Textual form, e.g. "d2 - x1*d3".
	std::string str() const;
};

/// sum_l V_l * dp/dx_l
Poly apply_field(PolyVectorField const &v, Poly const &p);

/// Polynomial in flat form for fast floating-point evaluation.
class CompiledPoly
{
public:
	CompiledPoly() = default;
	explicit CompiledPoly(Poly const &p);

	double operator()(std::span<const double> x) const;
	bool is_zero() const { return coeffs_.empty(); }

private:
	std::vector<double> coeffs_;
	std::vector<int> offsets_; ///< size = terms + 1
	std::vector<std::pair<int, int>> powers_;
};

} // namespace carnot
