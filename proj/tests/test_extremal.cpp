#include "carnot/linalg.hpp"
#include "carnot/extremal.hpp"
#include "carnot/free_lie.hpp"
#include "carnot/group.hpp"
#include "carnot/prolongation.hpp"
#include "gtest/gtest.h"

#include <random>
using namespace carnot;

namespace {

Element X(int i, Rational c = Rational(1)) { return {{i, c}}; }

/// E12, E22, E11, E21 on g_1 scaled by `sign`, E_ij sending X_j to X_i.
std::map<int, std::vector<LinearMap>> g0_basis(Rational sign)
{
	return {{0,
	         {{{2, X(1, sign)}},
	          {{2, X(2, sign)}},
	          {{1, X(1, sign)}},
	          {{1, X(2, sign)}}}}};
}

/// P_j^v lifted to the (x, v) ring with v_k = 0 for k < first.
Poly lifted_from(ExtremalFamily const &f, int j, int first)
{
	Poly p(f.lifted_weights());
	for (int k = first; k <= f.dim(); ++k)
		for (auto const &[m, c] : f.q(j, k).terms())
		{
			Monomial lm = m;
			lm.powers.emplace_back(f.dim() + k, 1);
			p.add_term(lm, c);
		}
	return p;
}

void expect_P(ExtremalFamily const &f, int j, std::string const &text,
              int first = 1)
{
	Poly expected = parse_poly(text, f.lifted_weights(), {"x", "v"});
	EXPECT_EQ(lifted_from(f, j, first), expected)
	    << "P_" << j << " = " << f.format_P(j);
}

std::vector<Rational> unit(int n, int k)
{
	std::vector<Rational> v(n);
	v[k - 1] = Rational(1);
	return v;
}

} // namespace

TEST(Extremal, Heisenberg)
{
	auto f = build_family(heisenberg());
	expect_P(f, 1, "v1 + v3*x2");
	expect_P(f, 2, "v2 - v3*x1");
	expect_P(f, 3, "v3");
	EXPECT_TRUE(verify_structure(f).empty());
	EXPECT_EQ(reconstruct_by_recursion(heisenberg()), f);
}

TEST(Extremal, FreeRank2Step4PositiveRows)
{
	auto f = build_family(build_free(2, 4).algebra);
	// These rows are stated for v_1 = v_2 = v_3 = 0.
	expect_P(f, 1, "v4*x3 - v5*x2^2/2 + v6*x4 + v7*x5 + v8*x2^3/6", 4);
	expect_P(f, 2, "v4*x1^2/2 + (x3 + x1*x2)*v5 - x1^3/6*v6 + (x4 - x1^2*x2/2)*v7 "
	               "+ (x5 - x1*x2^2/2)*v8", 4);
	expect_P(f, 3, "-v4*x1 - v5*x2 + v6*x1^2/2 + v7*x1*x2 + v8*x2^2/2", 4);
	EXPECT_EQ(f.format_P(3), "v3 - v4*x1 - v5*x2 + 1/2*v6*x1^2 + v7*x1*x2 + "
	                         "1/2*v8*x2^2");
	EXPECT_EQ(f.P(3, unit(8, 4)).evaluate(std::vector<Rational>{1, 0, 0, 0, 0, 0, 0, 0}),
	          Rational(-1));
}

TEST(Extremal, DegreeZeroTable)
{
	auto base = build_free(2, 4).algebra;
	auto p = prolong(base, 3, g0_basis(Rational(-1)));
	auto f = build_family(p.algebra);
	expect_P(f, -3, "v4*(x3*x2 + x5) - v5*x2^3/6 + v6*(x4*x2 + x7) + "
	                "v7*(x5*x2 + 2*x8) + v8*x2^4/24", 4);
	expect_P(f, -2, "v4*x4 + v5*(x2*x3 + 2*x5) + v6*x6 + v7*(x2*x4 + 2*x7) + "
	                "v8*(x2*x5 + 3*x8)", 4);
	expect_P(f, -1, "v4*(x1*x3 + 2*x4) + v5*(x5 - x1*x2^2/2) + v6*(x1*x4 + 3*x6) "
	                "+ v7*(x1*x5 + 2*x7) + v8*(x1*x2^3/6 + x8)", 4);
	expect_P(f, 0, "v4*x1^3/6 + v5*(x1^2*x2/2 + x1*x3 + x4) - v6*x1^4/24 "
	               "+ v7*(-x1^3*x2/6 + x1*x4 + 2*x6) "
	               "+ v8*(-x1^2*x2^2/4 + x1*x5 + x7)", 4);
	EXPECT_TRUE(verify_structure(f).empty());
}

TEST(Extremal, ElementaryMatricesGiveNegatedTable)
{
	auto base = build_free(2, 4).algebra;
	auto plus = build_family(prolong(base, 3, g0_basis(Rational(1))).algebra);
	auto minus = build_family(prolong(base, 3, g0_basis(Rational(-1))).algebra);
	for (int j = -3; j <= 0; ++j)
		EXPECT_EQ(plus.lifted(j), -minus.lifted(j));
	EXPECT_TRUE(verify_structure(plus).empty());
}

TEST(Extremal, StructureIdentitiesOfTheTable)
{
	auto base = build_free(2, 4).algebra;
	auto f = build_family(prolong(base, 3, g0_basis(Rational(-1))).algebra);
	auto fields = GroupModel(base).left_invariant_fields();
	auto XP = [&](int i, int j) {
		Poly out(f.lifted_weights());
		Poly lp = f.lifted(j);
		// Fields only involve x; apply them in the lifted ring.
		for (int l = 1; l <= 8; ++l)
		{
			Poly coeff(f.lifted_weights());
			for (auto const &[m, c] : fields[i - 1].coeffs[l - 1].terms())
				coeff.add_term(m, c);
			out += coeff * lp.derivative(l);
		}
		return out;
	};
	Poly zero(f.lifted_weights());
	EXPECT_EQ(XP(1, -3), zero);
	EXPECT_EQ(XP(1, -2), zero);
	EXPECT_EQ(XP(1, -1), f.lifted(1));
	EXPECT_EQ(XP(1, 0), f.lifted(2));
	EXPECT_EQ(XP(2, -3), f.lifted(1));
	EXPECT_EQ(XP(2, -2), f.lifted(2));
	EXPECT_EQ(XP(2, -1), zero);
	EXPECT_EQ(XP(2, 0), zero);
}

TEST(Extremal, VerifyAndReconstructAcrossAlgebras)
{
	std::vector<GradedLieAlgebra> algebras = {
	    heisenberg(), abelian(3), build_free(2, 3).algebra,
	    prolong(build_free(2, 3).algebra, 8).algebra,
	    prolong(build_free(2, 4).algebra, 3).algebra,
	    prolong(heisenberg(), 2).algebra};
	for (auto const &a : algebras)
	{
		auto f = build_family(a);
		EXPECT_TRUE(verify_structure(f).empty());
		EXPECT_EQ(reconstruct_by_recursion(a), f);
	}
}

TEST(Extremal, FamilyProperties)
{
	auto a = prolong(build_free(2, 4).algebra, 3).algebra;
	auto f = build_family(a);
	int n = a.dim(), s = a.step();
	std::vector<Rational> origin(n);
	std::mt19937 rng(3);
	std::uniform_int_distribution<int> d(-4, 4);
	for (int trial = 0; trial < 20; ++trial)
	{
		std::vector<Rational> v(n), w(n);
		for (int k = 0; k < n; ++k)
		{
			v[k] = Rational(d(rng), 3);
			w[k] = Rational(d(rng), 2);
		}
		Rational alpha(2, 7), beta(-3);
		std::vector<Rational> comb(n);
		for (int k = 0; k < n; ++k)
			comb[k] = alpha * v[k] + beta * w[k];
		for (int j = a.min_index(); j <= n; ++j)
		{
			EXPECT_EQ(f.eval_P(j, v, origin), j >= 1 ? v[j - 1] : Rational());
			EXPECT_EQ(f.P(j, comb), f.P(j, v) * alpha + f.P(j, w) * beta);
			EXPECT_LE(f.P(j, v).weighted_degree(), s - a.degree(j));
		}
	}
	for (int j = a.min_index(); j <= n; ++j)
		for (int k = 1; k <= n; ++k)
		{
			Poly const &q = f.q(j, k);
			EXPECT_TRUE(q.is_zero() ||
			            (q.is_homogeneous() &&
			             q.weighted_degree() == a.degree(k) - a.degree(j)));
		}
}

TEST(Extremal, FirstLayerDeterminesCovector)
{
	// If P_i^v = 0 for every i of degree 1 then v = 0: the Q columns of the
	// degree-1 rows are linearly independent.
	auto f = build_family(build_free(2, 4).algebra);
	std::map<Monomial, std::vector<Rational>, MonomialOrder> rows;
	for (int i = 1; i <= 2; ++i)
		for (int k = 1; k <= 8; ++k)
			for (auto const &[m, c] : f.q(i, k).terms())
			{
				Monomial key = m;
				key.powers.emplace_back(100 + i, 1);
				auto &row = rows[key];
				row.resize(8);
				row[k - 1] = c;
			}
	std::vector<std::vector<Rational>> matrix;
	for (auto &[m, row] : rows)
		matrix.push_back(row);
	EXPECT_TRUE(nullspace(matrix, 8).empty());
}

namespace {

/// g / span(w) for w in the top stratum, with X_p (w_p != 0) eliminated.
GradedLieAlgebra quotient_by_top(GradedLieAlgebra const &a, std::vector<Rational> const &w)
{
	int n = a.dim();
	int p = n;
	while (w[p - 1].is_zero())
		--p;
	auto reduce = [&](Element const &e) {
		Element out;
		for (auto const &[k, c] : e)
		{
			if (k != p)
			{
				out[k] += c;
				continue;
			}
			for (int q = 1; q <= n; ++q)
				if (q != p && !w[q - 1].is_zero())
					out[q] -= c * w[q - 1] / w[p - 1];
		}
		Element clean;
		for (auto const &[k, c] : out)
			if (!c.is_zero())
				clean[k < p ? k : k - 1] = c;
		return clean;
	};
	std::vector<int> degrees;
	for (int k = 1; k <= n; ++k)
		if (k != p)
			degrees.push_back(a.degree(k));
	GradedLieAlgebra::Builder b(degrees);
	for (auto const &e : a.entries())
	{
		if (e.i == p || e.j == p)
			continue;
		auto v = reduce(Element(e.terms.begin(), e.terms.end()));
		if (!v.empty())
			b.set(e.i < p ? e.i : e.i - 1, e.j < p ? e.j : e.j - 1, v);
	}
	return b.build();
}

} // namespace

TEST(Extremal, VerifyFreeRank3Step4WithDegreeZero)
{
	auto p = prolong(build_free(3, 4).algebra, 2);
	ASSERT_EQ(p.dimensions(), (std::vector<int>{9, 0}));
	auto f = build_family(p.algebra);
	EXPECT_TRUE(verify_structure(f).empty());
}

TEST(Extremal, VerifyOnRandomQuotients)
{
	std::mt19937 rng(17);
	std::uniform_int_distribution<int> d(-3, 3);
	for (auto [r, s] : {std::pair{2, 4}, {3, 3}, {2, 5}})
	{
		auto a = build_free(r, s).algebra;
		auto top = a.indices_of_degree(s);
		for (int trial = 0; trial < 3; ++trial)
		{
			std::vector<Rational> w(a.dim());
			for (int k : top)
				w[k - 1] = Rational(d(rng), 1 + trial);
			if (std::all_of(w.begin(), w.end(), [](Rational const &x) { return x.is_zero(); }))
				w[top.front() - 1] = Rational(1);
			auto q = quotient_by_top(a, w);
			ASSERT_TRUE(validate(q).empty());
			auto prolonged = prolong(q, 2).algebra;
			auto f = build_family(prolonged);
			EXPECT_TRUE(verify_structure(f).empty()) << r << "," << s << " trial " << trial;
			EXPECT_EQ(reconstruct_by_recursion(prolonged), f);
		}
	}
}
