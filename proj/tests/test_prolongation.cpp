#include "carnot/free_lie.hpp"
#include "carnot/linalg.hpp"
#include "carnot/prolongation.hpp"
#include "gtest/gtest.h"
using namespace carnot;

namespace {

Element X(int i, Rational c = Rational(1)) { return {{i, c}}; }

/// The four elementary endomorphisms of g_1 = span{X1, X2}, listed as
/// E12, E22, E11, E21 (column convention: E_ij sends X_j to X_i).
std::vector<LinearMap> elementary_basis(Rational sign)
{
	return {{{2, X(1, sign)}}, {{2, X(2, sign)}}, {{1, X(1, sign)}},
	        {{1, X(2, sign)}}};
}

/// phi[X,Y] = [phi X, Y] + [X, phi Y] checked directly on all pairs.
bool is_derivation(GradedLieAlgebra const &a, LinearMap const &phi)
{
	auto apply = [&](Element const &e) {
		Element out;
		for (auto const &[i, c] : e)
			if (auto it = phi.find(i); it != phi.end())
				for (auto const &[t, v] : it->second)
					out[t] += c * v;
		std::erase_if(out, [](auto const &kv) { return kv.second.is_zero(); });
		return out;
	};
	for (int x = 1; x <= a.dim(); ++x)
		for (int y = 1; y <= a.dim(); ++y)
		{
			Element lhs = apply(bracket(a, X(x), X(y)));
			Element rhs = bracket(a, apply(X(x)), X(y));
			for (auto const &[t, c] : bracket(a, X(x), apply(X(y))))
				rhs[t] += c;
			std::erase_if(rhs, [](auto const &kv) { return kv.second.is_zero(); });
			if (lhs != rhs)
				return false;
		}
	return true;
}

} // namespace

TEST(Prolongation, FreeRank2Step4)
{
	auto f = build_free(2, 4);
	auto p = prolong(f.algebra, 3);
	EXPECT_EQ(p.dimensions(), (std::vector<int>{4, 0}));
	EXPECT_TRUE(p.terminated);
	EXPECT_FALSE(p.algebra.truncated());
	EXPECT_EQ(p.algebra.min_index(), -3);
	EXPECT_TRUE(validate(p.algebra).empty());
	for (auto const &phi : p.strata[0].basis)
		EXPECT_TRUE(is_derivation(f.algebra, phi));
}

TEST(Prolongation, StratumDeterminedByFirstLayer)
{
	auto f = build_free(3, 3);
	auto p = prolong(f.algebra, 1);
	ASSERT_FALSE(p.strata.empty());
	std::vector<std::vector<Rational>> rows;
	for (auto const &phi : p.strata[0].basis)
	{
		std::vector<Rational> r;
		for (int i = 1; i <= 3; ++i)
			for (int t = 1; t <= 3; ++t)
			{
				auto it = phi.find(i);
				Rational c;
				if (it != phi.end() && it->second.count(t))
					c = it->second.at(t);
				r.push_back(c);
			}
		rows.push_back(r);
	}
	EXPECT_EQ(rank(rows, 9), p.strata[0].dim());
}

TEST(Prolongation, ElementaryBasisStructureConstants)
{
	auto f = build_free(2, 4);
	auto p = prolong(f.algebra, 3, {{0, elementary_basis(Rational(1))}});
	auto const &a = p.algebra;
	auto delta = [&](int j, int i, int k) {
		for (int m = 1; m <= 2; ++m)
			EXPECT_EQ(a.structure_constant(j, i, m), Rational(m == k ? 1 : 0))
			    << "c_{" << j << "," << i << "}^" << m;
	};
	delta(-3, 2, 1);
	delta(-1, 1, 1);
	delta(-2, 2, 2);
	delta(0, 1, 2);
	delta(-3, 1, 0);
	delta(-2, 1, 0);
	delta(-1, 2, 0);
	delta(0, 2, 0);
	EXPECT_TRUE(validate(a).empty());
	// [X0, X-3] matches the matrix commutator E21 E12 - E12 E21 = E22 - E11.
	EXPECT_EQ(bracket(a, X(0), X(-3)), (Element{{-2, Rational(1)}, {-1, Rational(-1)}}));
}

TEST(Prolongation, InvalidOverrideRejected)
{
	auto f = build_free(2, 4);
	auto basis = elementary_basis(Rational(1));
	basis[3] = basis[2];
	EXPECT_THROW(prolong(f.algebra, 3, {{0, basis}}), StructureError);
	basis.pop_back();
	EXPECT_THROW(prolong(f.algebra, 3, {{0, basis}}), StructureError);
}

TEST(Prolongation, HeisenbergAndAbelian)
{
	auto h = prolong(heisenberg(), 0);
	EXPECT_EQ(h.dimensions(), (std::vector<int>{4}));
	EXPECT_TRUE(h.possibly_infinite());
	EXPECT_TRUE(h.algebra.truncated());
	EXPECT_TRUE(validate(h.algebra).empty());
	auto h3 = prolong(heisenberg(), 2);
	EXPECT_TRUE(h3.possibly_infinite());
	EXPECT_TRUE(validate(h3.algebra).empty());

	auto ab = prolong(abelian(2), 0);
	EXPECT_EQ(ab.dimensions(), (std::vector<int>{4}));
}

TEST(Prolongation, FreeRank3Step4)
{
	auto f = build_free(3, 4);
	auto p = prolong(f.algebra, 2);
	EXPECT_EQ(p.dimensions(), (std::vector<int>{9, 0}));
	EXPECT_TRUE(validate(p.algebra).empty());
}

TEST(Prolongation, FreeRank2Step3IsExceptional)
{
	// The prolongation of free(2,3) is the 14-dimensional exceptional
	// algebra with grading 2 + 1 + 2 + 4 + 2 + 1 + 2.
	auto f = build_free(2, 3);
	auto p = prolong(f.algebra, 8);
	EXPECT_EQ(p.dimensions(), (std::vector<int>{4, 2, 1, 2, 0}));
	EXPECT_TRUE(p.terminated);
	EXPECT_EQ(p.algebra.size(), 14);
	EXPECT_TRUE(validate(p.algebra).empty());
}

TEST(Prolongation, OutOfOrderRequests)
{
	auto p = start_prolongation(heisenberg());
	EXPECT_THROW(compute_stratum(p, -1), StructureError);
	EXPECT_THROW(prolong(heisenberg(), -1), StructureError);
}
