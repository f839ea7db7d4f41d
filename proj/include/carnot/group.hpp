#pragma once

#include "carnot/algebra.hpp"
#include "carnot/poly.hpp"

#include <vector>

namespace carnot {

/// Coefficient-ring helpers used by the templated group law.
inline Rational scale(Rational const &x, Rational const &c) { return x * c; }
inline double scale(double x, Rational const &c) { return x * c.to_double(); }
template <class R> R scale(R const &x, Rational const &c) { return x * c; }

inline bool is_zero(Rational const &x) { return x.is_zero(); }
inline bool is_zero(double x) { return x == 0.0; }
template <class R> bool is_zero(R const &x) { return x == R{}; }

/**
 * Model of the simply connected group G with Lie algebra g, identified
 * with R^n through exponential coordinates of the second kind,
 * x = exp(x_n X_n) ... exp(x_1 X_1).
 *
 * Vectors are 0-based: entry l-1 holds the coefficient of X_l. Only the
 * positive part of the algebra is used; prolongation indices are ignored.
 * Templates accept any commutative ring R with +, -, * and a scale()
 * overload (Rational, double and dual numbers in the tests).
 */
class GroupModel
{
public:
	explicit GroupModel(GradedLieAlgebra const &a);

	int dim() const { return n_; }
	int step() const { return step_; }
	std::vector<int> const &degrees() const { return degrees_; }
	Weights const &weights() const { return weights_; }

	template <class R>
	std::vector<R> bracket(std::vector<R> const &u, std::vector<R> const &w) const;

	/// log(exp(u) exp(w)), exact up to the nilpotency step.
	template <class R>
	std::vector<R> bch(std::vector<R> const &u, std::vector<R> const &w) const;

	template <class R> std::vector<R> to_second_kind(std::vector<R> u) const;
	template <class R>
	std::vector<R> from_second_kind(std::vector<R> const &x) const;

	template <class R>
	std::vector<R> group_mul(std::vector<R> const &x, std::vector<R> const &y) const;
	template <class R> std::vector<R> inverse(std::vector<R> const &x) const;
	/// x * exp(t X_i), i in 1..n.
	template <class R>
	std::vector<R> flow(int i, R const &t, std::vector<R> const &x) const;

	/// X_1..X_n as polynomial vector fields, X_i(x) = d/dt x exp(t X_i).
	std::vector<PolyVectorField> left_invariant_fields() const;

	/// Lie-form BCH coefficients: log(e^a e^b) = sum c_w [w], where [w] is
	/// the left-normed bracket of the word w over {a = 0, b = 1}.
	struct BchTerm
	{
		std::vector<int> word;
		Rational c;
	};
	std::vector<BchTerm> const &bch_terms() const { return bch_terms_; }

private:
	template <class R> std::vector<R> zero() const
	{
		return std::vector<R>(n_, R{});
	}

	int n_ = 0;
	int step_ = 0;
	std::vector<int> degrees_;
	Weights weights_;
	/// table_[i*n + j] = nonzero (k, c^k_ij), 0-based.
	std::vector<std::vector<std::pair<int, Rational>>> table_;
	std::vector<BchTerm> bch_terms_;
};

template <class R>
std::vector<R> GroupModel::bracket(std::vector<R> const &u,
                                   std::vector<R> const &w) const
{
	auto out = zero<R>();
	for (int i = 0; i < n_; ++i)
	{
		if (is_zero(u[i]))
			continue;
		for (int j = 0; j < n_; ++j)
		{
			auto const &row = table_[static_cast<std::size_t>(i) * n_ + j];
			if (row.empty() || is_zero(w[j]))
				continue;
			R f = u[i] * w[j];
			for (auto const &[k, c] : row)
				out[k] = out[k] + scale(f, c);
		}
	}
	return out;
}

template <class R>
std::vector<R> GroupModel::bch(std::vector<R> const &u,
                               std::vector<R> const &w) const
{
	auto out = zero<R>();
	// Terms are sorted by word, so consecutive words share prefixes.
	std::vector<std::vector<R>> prefix;
	std::vector<int> current;
	for (auto const &term : bch_terms_)
	{
		std::size_t common = 0;
		while (common < current.size() && common < term.word.size() &&
		       current[common] == term.word[common])
			++common;
		current.resize(common);
		prefix.resize(common);
		for (std::size_t p = common; p < term.word.size(); ++p)
		{
			auto const &letter = term.word[p] == 0 ? u : w;
			prefix.push_back(p == 0 ? letter : bracket(prefix.back(), letter));
			current.push_back(term.word[p]);
		}
		auto const &value = prefix.back();
		for (int k = 0; k < n_; ++k)
			if (!is_zero(value[k]))
				out[k] = out[k] + scale(value[k], term.c);
	}
	return out;
}

template <class R>
std::vector<R> GroupModel::to_second_kind(std::vector<R> u) const
{
	std::vector<R> x = zero<R>();
	for (int l = 0; l < n_; ++l)
	{
		x[l] = u[l];
		if (is_zero(x[l]))
			continue;
		auto peel = zero<R>();
		peel[l] = scale(x[l], Rational(-1));
		u = bch(u, peel);
	}
	return x;
}

template <class R>
std::vector<R> GroupModel::from_second_kind(std::vector<R> const &x) const
{
	auto u = zero<R>();
	for (int l = n_ - 1; l >= 0; --l)
	{
		if (is_zero(x[l]))
			continue;
		auto f = zero<R>();
		f[l] = x[l];
		u = bch(u, f);
	}
	return u;
}

template <class R>
std::vector<R> GroupModel::group_mul(std::vector<R> const &x,
                                     std::vector<R> const &y) const
{
	return to_second_kind(bch(from_second_kind(x), from_second_kind(y)));
}

template <class R>
std::vector<R> GroupModel::inverse(std::vector<R> const &x) const
{
	auto u = from_second_kind(x);
	for (auto &c : u)
		c = scale(c, Rational(-1));
	return to_second_kind(u);
}

template <class R>
std::vector<R> GroupModel::flow(int i, R const &t, std::vector<R> const &x) const
{
	auto y = zero<R>();
	y.at(i - 1) = t;
	return group_mul(x, y);
}

} // namespace carnot
