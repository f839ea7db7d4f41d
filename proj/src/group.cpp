#include "carnot/group.hpp"

#include <algorithm>
#include <map>

namespace carnot {

namespace {

using Word = std::vector<int>;
using Assoc = std::map<Word, Rational>;

Assoc multiply(Assoc const &x, Assoc const &y, std::size_t max_len)
{
	Assoc out;
	for (auto const &[wx, cx] : x)
		for (auto const &[wy, cy] : y)
		{
			if (wx.size() + wy.size() > max_len)
				continue;
			Word w = wx;
			w.insert(w.end(), wy.begin(), wy.end());
			out[w] += cx * cy;
		}
	std::erase_if(out, [](auto const &kv) { return kv.second.is_zero(); });
	return out;
}

/// log(e^a e^b) in the free associative algebra on {0, 1}, truncated at
/// word length s, converted to Lie form by Dynkin-Specht-Wever.
std::vector<GroupModel::BchTerm> compute_bch_terms(int s)
{
	std::size_t len = static_cast<std::size_t>(s);
	Assoc z; // e^a e^b - 1
	for (int p = 0; p <= s; ++p)
		for (int q = 0; p + q <= s; ++q)
		{
			if (p + q == 0)
				continue;
			Word w(p, 0);
			w.insert(w.end(), q, 1);
			z[w] += Rational(1) / (factorial(p) * factorial(q));
		}
	Assoc log;
	Assoc power = z;
	for (int k = 1; k <= s; ++k)
	{
		Rational c = Rational(k % 2 == 1 ? 1 : -1, k);
		for (auto const &[w, v] : power)
			log[w] += c * v;
		power = multiply(power, z, len);
	}
	std::vector<GroupModel::BchTerm> terms;
	for (auto const &[w, c] : log)
		if (!c.is_zero())
			terms.push_back({w, c / Rational(static_cast<std::int64_t>(w.size()))});
	return terms;
}

} // namespace

GroupModel::GroupModel(GradedLieAlgebra const &a)
    : n_(a.dim()), step_(a.step())
{
	auto pd = a.positive_degrees();
	degrees_.assign(pd.begin(), pd.end());
	weights_ = make_weights(degrees_);
	table_.resize(static_cast<std::size_t>(n_) * n_);
	for (int i = 1; i <= n_; ++i)
		for (int j = 1; j <= n_; ++j)
			for (auto const &t : a.row(a.slot(i), a.slot(j)))
			{
				int k = a.index_at(t.slot);
				if (k < 1)
					throw StructureError("positive brackets must stay positive");
				table_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)]
				    .emplace_back(k - 1, t.c);
			}
	bch_terms_ = compute_bch_terms(std::max(step_, 1));
}

std::vector<PolyVectorField> GroupModel::left_invariant_fields() const
{
	// Maurer-Cartan form: x^{-1} d_l x = Ad(exp(-x_1 X_1) ... exp(-x_{l-1}
	// X_{l-1})) X_l =: W_l. X_i = sum_l f_l d_l with sum_l f_l W_l = X_i.
	using PVec = std::vector<Poly>;
	auto ad_left = [&](int j, PVec const &v) { // [X_j, v]
		PVec out(n_, Poly(weights_));
		for (int i = 0; i < n_; ++i)
		{
			if (v[i].is_zero())
				continue;
			for (auto const &[k, c] : table_[static_cast<std::size_t>(j) * n_ + i])
				out[k] += v[i] * c;
		}
		return out;
	};
	auto all_zero = [](PVec const &v) {
		return std::all_of(v.begin(), v.end(),
		                   [](Poly const &p) { return p.is_zero(); });
	};

	std::vector<PVec> w(n_);
	for (int l = 0; l < n_; ++l)
	{
		PVec v(n_, Poly(weights_));
		v[l] = Poly::constant(weights_, Rational(1));
		for (int j = l - 1; j >= 0; --j)
		{
			// v <- sum_m (-x_j)^m / m! ad_{X_j}^m v
			Poly mx = -Poly::variable(weights_, j + 1);
			PVec term = v;
			Poly coeff = Poly::constant(weights_, Rational(1));
			for (int m = 1;; ++m)
			{
				term = ad_left(j, term);
				if (all_zero(term))
					break;
				coeff = coeff * mx * Rational(1, m);
				for (int k = 0; k < n_; ++k)
					if (!term[k].is_zero())
						v[k] += coeff * term[k];
			}
		}
		w[l] = std::move(v);
	}

	std::vector<PolyVectorField> fields(n_);
	for (int i = 0; i < n_; ++i)
	{
		// Unit lower-triangular forward substitution: row k of sum_l f_l W_l.
		PVec f(n_, Poly(weights_));
		for (int k = 0; k < n_; ++k)
		{
			Poly acc = Poly::constant(weights_, Rational(k == i ? 1 : 0));
			for (int l = 0; l < k; ++l)
				if (!f[l].is_zero() && !w[l][k].is_zero())
					acc -= f[l] * w[l][k];
			f[k] = std::move(acc);
		}
		fields[i].coeffs = std::move(f);
	}
	return fields;
}

} // namespace carnot
