#include "carnot/free_lie.hpp"
#include "gtest/gtest.h"
using namespace carnot;

namespace {

Element X(int i, Rational c = Rational(1)) { return {{i, c}}; }

auto leaf(int g) { return BracketTree::leaf(g); }
auto node(std::shared_ptr<const BracketTree> a,
          std::shared_ptr<const BracketTree> b)
{
	return BracketTree::node(std::move(a), std::move(b));
}

} // namespace

TEST(FreeLie, Rank2Step4Relations)
{
	auto f = build_free(2, 4);
	EXPECT_EQ(f.algebra.dim(), 8);
	EXPECT_EQ(f.relation(3), "X3 = [X2,X1]");
	EXPECT_EQ(f.relation(4), "X4 = [X3,X1]");
	EXPECT_EQ(f.relation(5), "X5 = [X3,X2]");
	EXPECT_EQ(f.relation(6), "X6 = [X4,X1]");
	EXPECT_EQ(f.relation(7), "X7 = [X4,X2]");
	EXPECT_EQ(f.relation(8), "X8 = [X5,X2]");
	auto const &a = f.algebra;
	EXPECT_EQ(bracket(a, X(2), X(1)), X(3));
	EXPECT_EQ(bracket(a, X(4), X(2)), X(7));
	EXPECT_EQ(iterated_commutator(a, 3, MultiIndex::unit(8, 1)), X(4));
	MultiIndex two(8);
	two.alpha[0] = 2;
	EXPECT_EQ(iterated_commutator(a, 2, two),
	          bracket(a, bracket(a, X(2), X(1)), X(1)));
	EXPECT_EQ(iterated_commutator(a, 2, two), X(4));
	EXPECT_TRUE(validate(a).empty());
}

TEST(FreeLie, NonHallBracketIsRewritten)
{
	auto f = build_free(2, 4);
	// [X5, X1] = [[X3,X2],X1] = [[X3,X1],X2] + [X3,[X2,X1]] = X7
	EXPECT_EQ(bracket(f.algebra, X(5), X(1)), X(7));
}

TEST(FreeLie, AbelianAndRank3)
{
	auto ab = build_free(2, 1);
	EXPECT_EQ(ab.algebra.dim(), 2);
	EXPECT_TRUE(ab.algebra.entries().empty());
	auto f = build_free(3, 4);
	EXPECT_EQ(f.algebra.dim(), 32);
	EXPECT_EQ(f.algebra.rank(), 3);
	EXPECT_EQ(f.algebra.step(), 4);
	EXPECT_EQ(f.relation(4), "X4 = [X2,X1]");
	EXPECT_EQ(f.relation(5), "X5 = [X3,X1]");
	EXPECT_EQ(f.relation(6), "X6 = [X3,X2]");
	EXPECT_TRUE(validate(f.algebra).empty());
}

TEST(FreeLie, WittDimensions)
{
	for (int r = 2; r <= 4; ++r)
		for (int s = 1; s <= 6; ++s)
		{
			long long n = 0;
			for (int m = 1; m <= s; ++m)
				n += witt_dimension(r, m);
			if (n > 200)
				continue;
			auto f = build_free(r, s);
			ASSERT_EQ(f.algebra.dim(), n);
			for (int m = 1; m <= s; ++m)
				EXPECT_EQ(static_cast<long long>(
				              f.algebra.indices_of_degree(m).size()),
				          witt_dimension(r, m))
				    << "r=" << r << " s=" << s << " m=" << m;
		}
	EXPECT_EQ(witt_dimension(2, 4), 3);
	EXPECT_EQ(witt_dimension(3, 4), 18);
}

TEST(FreeLie, ValidOverSeveralShapes)
{
	for (auto [r, s] : {std::pair{2, 5}, {3, 3}, {4, 3}, {2, 6}})
		EXPECT_TRUE(validate(build_free(r, s).algebra).empty())
		    << "r=" << r << " s=" << s;
}

TEST(FreeLie, CapIsEnforced)
{
	EXPECT_THROW(build_free(3, 4, 20), ResourceError);
	EXPECT_THROW(build_free(1, 4), StructureError);
}

TEST(FreeLie, ReduceToHall)
{
	auto f = build_free(2, 4);
	EXPECT_EQ(reduce_to_hall(f, *node(leaf(1), leaf(2))), X(3, Rational(-1)));
	EXPECT_TRUE(reduce_to_hall(f, *node(leaf(1), leaf(1))).empty());
	auto x3 = node(leaf(2), leaf(1));
	EXPECT_TRUE(reduce_to_hall(f, *node(x3, x3)).empty());
	// Idempotent on Hall words.
	EXPECT_EQ(reduce_to_hall(f, *node(node(x3, leaf(1)), leaf(2))), X(7));
	// Degree above the step vanishes.
	auto deep = node(node(node(node(x3, leaf(1)), leaf(1)), leaf(1)), leaf(2));
	EXPECT_TRUE(reduce_to_hall(f, *deep).empty());
}

TEST(FreeLie, ReduceIsLinearInJacobiSense)
{
	auto f = build_free(3, 4);
	// [[a,b],c] + [[b,c],a] + [[c,a],b] = 0 for generators and X4.
	auto t = [&](auto a, auto b, auto c) {
		return reduce_to_hall(f, *node(node(a, b), c));
	};
	auto a = leaf(1), b = leaf(3), c = node(leaf(2), leaf(1));
	Element sum;
	for (auto const &e : {t(a, b, c), t(b, c, a), t(c, a, b)})
		for (auto const &[k, v] : e)
			sum[k] += v;
	std::erase_if(sum, [](auto const &kv) { return kv.second.is_zero(); });
	EXPECT_TRUE(sum.empty());
}
