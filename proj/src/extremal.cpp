#include "carnot/extremal.hpp"
#include "carnot/group.hpp"
#include "carnot/linalg.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace carnot {

ExtremalFamily::ExtremalFamily(GradedLieAlgebra a,
                               std::vector<std::vector<Poly>> q)
    : algebra_(std::move(a)), q_(std::move(q))
{
	auto d = algebra_.positive_degrees();
	std::vector<int> w(d.begin(), d.end());
	weights_ = make_weights(w);
	w.resize(2 * w.size(), 0);
	lifted_weights_ = make_weights(w);
}

Poly const &ExtremalFamily::q(int j, int k) const
{
	if (k < 1 || k > dim())
		throw std::out_of_range(fmt::format("column {} out of range", k));
	return q_[algebra_.slot(j)][k - 1];
}

Poly ExtremalFamily::P(int j, std::vector<Rational> const &v) const
{
	if (static_cast<int>(v.size()) != dim())
		throw std::invalid_argument("covector has wrong length");
	Poly p(weights_);
	for (int k = 1; k <= dim(); ++k)
		if (!v[k - 1].is_zero())
			p += q(j, k) * v[k - 1];
	return p;
}

Rational ExtremalFamily::eval_P(int j, std::vector<Rational> const &v,
                                std::vector<Rational> const &x) const
{
	Rational s;
	for (int k = 1; k <= dim(); ++k)
		if (!v[k - 1].is_zero())
			s += v[k - 1] * q(j, k).evaluate(x);
	return s;
}

double ExtremalFamily::eval_P(int j, std::vector<double> const &v,
                              std::vector<double> const &x) const
{
	double s = 0.0;
	for (int k = 1; k <= dim(); ++k)
		if (v[k - 1] != 0.0)
			s += v[k - 1] * q(j, k).evaluate(x);
	return s;
}

std::string ExtremalFamily::format_P(int j) const
{
	struct Term
	{
		Monomial m;
		int k;
		Rational c;
	};
	std::vector<Term> terms;
	for (int k = 1; k <= dim(); ++k)
		for (auto const &[m, c] : q(j, k).terms())
			terms.push_back({m, k, c});
	MonomialOrder order;
	std::stable_sort(terms.begin(), terms.end(), [&](auto const &a, auto const &b) {
		if (a.k != b.k)
			return a.k < b.k;
		return order(a.m, b.m);
	});
	std::string s;
	for (auto const &t : terms)
	{
		if (s.empty())
			s += t.c.sign() < 0 ? "-" : "";
		else
			s += t.c.sign() < 0 ? " - " : " + ";
		Rational mag = abs(t.c);
		if (mag != Rational(1))
			s += mag.str() + "*";
		s += fmt::format("v{}", t.k);
		if (!t.m.powers.empty())
			s += "*" + monomial_str(t.m);
	}
	return s.empty() ? "0" : s;
}

Poly ExtremalFamily::lifted(int j) const
{
	Poly out(lifted_weights_);
	for (int k = 1; k <= dim(); ++k)
		for (auto const &[m, c] : q(j, k).terms())
		{
			Monomial lm = m;
			lm.powers.emplace_back(dim() + k, 1);
			out.add_term(lm, c);
		}
	return out;
}

ExtremalFamily build_family(GradedLieAlgebra const &a)
{
	auto d = a.positive_degrees();
	Weights w = make_weights({d.begin(), d.end()});
	int n = a.dim();
	std::vector<std::vector<Poly>> q(a.size(), std::vector<Poly>(n, Poly(w)));
	for (int slot = 0; slot < a.size(); ++slot)
	{
		int j = a.index_at(slot);
		for_each_iterated_commutator(
		    a, j,
		    [&](std::span<const int> seq, GradedLieAlgebra::Dense const &value) {
			    MultiIndex alpha(n);
			    for (int g : seq)
				    ++alpha.alpha[g - 1];
			    Rational factor =
			        Rational(seq.size() % 2 == 0 ? 1 : -1) / alpha.factorial();
			    Monomial m = Poly(w).make_monomial(alpha);
			    for (int s = 0; s < a.size(); ++s)
			    {
				    int k = a.index_at(s);
				    if (k >= 1 && !value[s].is_zero())
					    q[slot][k - 1].add_term(m, factor * value[s]);
			    }
		    });
	}
	return ExtremalFamily(a, std::move(q));
}

std::vector<StructureResidual>
verify_structure(ExtremalFamily const &f,
                 std::vector<PolyVectorField> const &fields)
{
	GradedLieAlgebra const &a = f.algebra();
	int n = a.dim();
	std::vector<StructureResidual> out;
	for (int i = 1; i <= n; ++i)
		for (int j = a.min_index(); j <= n; ++j)
		{
			auto row = a.row(a.slot(i), a.slot(j));
			for (int k = 1; k <= n; ++k)
			{
				Poly r = apply_field(fields[i - 1], f.q(j, k));
				for (auto const &t : row)
					r -= f.q(a.index_at(t.slot), k) * t.c;
				if (!r.is_zero())
					out.push_back({i, j, k, std::move(r)});
			}
		}
	return out;
}

std::vector<StructureResidual> verify_structure(ExtremalFamily const &f)
{
	return verify_structure(f, GroupModel(f.algebra()).left_invariant_fields());
}

ExtremalFamily reconstruct_by_recursion(GradedLieAlgebra const &a)
{
	GroupModel g(a);
	auto fields = g.left_invariant_fields();
	Weights w = g.weights();
	int n = a.dim(), r = a.rank();

	// X_l = sum d_ab [X_a, X_b] with d(a) = d(l) - 1 and X_b in g_1.
	struct Commutator
	{
		int a, b;
		Rational c;
	};
	std::vector<std::vector<Commutator>> expansion(n + 1);
	for (int l = r + 1; l <= n; ++l)
	{
		auto layer = a.indices_of_degree(a.degree(l));
		std::vector<std::pair<int, int>> pairs;
		std::vector<std::vector<Rational>> columns;
		for (int x : a.indices_of_degree(a.degree(l) - 1))
		{
			if (x < 1)
				continue;
			for (int y = 1; y <= r; ++y)
			{
				std::vector<Rational> col(layer.size());
				for (std::size_t m = 0; m < layer.size(); ++m)
					col[m] = a.structure_constant(x, y, layer[m]);
				pairs.emplace_back(x, y);
				columns.push_back(std::move(col));
			}
		}
		std::vector<Rational> target(layer.size());
		target[std::find(layer.begin(), layer.end(), l) - layer.begin()] =
		    Rational(1);
		auto sol = solve_columns(columns, target);
		if (!sol)
			throw StructureError(
			    fmt::format("X{} is not generated by lower brackets", l));
		for (std::size_t p = 0; p < pairs.size(); ++p)
			if (!(*sol)[p].is_zero())
				expansion[l].push_back({pairs[p].first, pairs[p].second, (*sol)[p]});
	}

	std::vector<int> order;
	for (int j = a.min_index(); j <= n; ++j)
		order.push_back(j);
	std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
		return a.degree(x) > a.degree(y);
	});

	std::vector<std::vector<Poly>> q(a.size(), std::vector<Poly>(n, Poly(w)));
	for (int j : order)
	{
		auto row_of = [&](int i) { return a.row(a.slot(i), a.slot(j)); };
		for (int k = 1; k <= n; ++k)
		{
			// Derivatives X_l Q_jk, l = 1..n.
			std::vector<Poly> d(n + 1, Poly(w));
			for (int i = 1; i <= r; ++i)
				for (auto const &t : row_of(i))
					d[i] += q[t.slot][k - 1] * t.c;
			for (int l = r + 1; l <= n; ++l)
				for (auto const &[x, y, c] : expansion[l])
					d[l] += (apply_field(fields[x - 1], d[y]) -
					         apply_field(fields[y - 1], d[x])) *
					        c;
			// X_l = d/dx_l on {x_1 = ... = x_{l-1} = 0}.
			Poly value = Poly::constant(w, Rational(j == k ? 1 : 0));
			for (int l = n; l >= 1; --l)
			{
				Poly restricted = d[l];
				for (int v = 1; v < l; ++v)
					restricted = restricted.substitute(v, Rational(0));
				value += restricted.antiderivative(l);
			}
			for (int i = 1; i <= r; ++i)
				if (apply_field(fields[i - 1], value) != d[i])
					throw StructureError(fmt::format(
					    "structure identities are not integrable at j={}, k={}",
					    j, k));
			q[a.slot(j)][k - 1] = std::move(value);
		}
	}
	return ExtremalFamily(a, std::move(q));
}

} // namespace carnot
