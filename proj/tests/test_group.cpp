#include "carnot/free_lie.hpp"
#include "carnot/group.hpp"
#include "gtest/gtest.h"

#include <random>
using namespace carnot;

namespace {

using Vec = std::vector<Rational>;

/// First-order dual numbers a + b*eps over the rationals.
struct Dual
{
	Rational a, b;
	friend Dual operator+(Dual const &x, Dual const &y)
	{
		return {x.a + y.a, x.b + y.b};
	}
	friend Dual operator*(Dual const &x, Dual const &y)
	{
		return {x.a * y.a, x.a * y.b + x.b * y.a};
	}
	friend Dual operator*(Dual const &x, Rational const &c)
	{
		return {x.a * c, x.b * c};
	}
	friend bool operator==(Dual const &, Dual const &) = default;
};

Vec random_point(int n, std::mt19937 &rng)
{
	std::uniform_int_distribution<int> d(-5, 5);
	Vec x(n);
	for (auto &c : x)
		c = Rational(d(rng), 1 + (d(rng) + 5) % 4);
	return x;
}

/// Heisenberg as 3x3 unipotent matrices: X1 = E12, X2 = E23, X3 = -E13, so
/// exp(x3 X3) exp(x2 X2) exp(x1 X1) = I + x1 E12 + x2 E23 - x3 E13.
struct Unipotent
{
	Rational m12, m13, m23;
	static Unipotent of(Vec const &x) { return {x[0], -x[2], x[1]}; }
	Vec coords() const { return {m12, m23, -m13}; }
	Unipotent operator*(Unipotent const &o) const
	{
		return {m12 + o.m12, m13 + o.m13 + m12 * o.m23, m23 + o.m23};
	}
};

} // namespace

TEST(Group, HeisenbergBch)
{
	GroupModel g(heisenberg());
	Rational a(2, 3), b(-5, 4);
	Vec u{a, 0, 0}, w{0, b, 0};
	EXPECT_EQ(g.bch(u, w), (Vec{a, b, -(a * b) / Rational(2)}));
	Vec z{Rational(1, 2), 3, 7};
	EXPECT_EQ(g.bch(z, Vec(3)), z);
	EXPECT_EQ(g.bch(z, Vec{Rational(-1, 2), -3, -7}), Vec(3));
}

TEST(Group, HeisenbergCoordinates)
{
	GroupModel g(heisenberg());
	EXPECT_EQ(g.to_second_kind(Vec{1, 1, 0}), (Vec{1, 1, Rational(-1, 2)}));
	EXPECT_EQ(g.to_second_kind(Vec{0, 4, 0}), (Vec{0, 4, 0}));
	EXPECT_EQ(g.group_mul(Vec{1, 0, 0}, Vec{0, 1, 0}), (Vec{1, 1, -1}));
}

TEST(Group, HeisenbergMatchesMatrixModel)
{
	GroupModel g(heisenberg());
	std::mt19937 rng(1);
	for (int trial = 0; trial < 100; ++trial)
	{
		Vec x = random_point(3, rng), y = random_point(3, rng);
		EXPECT_EQ(g.group_mul(x, y),
		          (Unipotent::of(x) * Unipotent::of(y)).coords());
	}
}

TEST(Group, RoundTripAndAssociativity)
{
	auto f = build_free(2, 4);
	GroupModel g(f.algebra);
	std::mt19937 rng(2);
	for (int trial = 0; trial < 100; ++trial)
	{
		Vec x = random_point(8, rng);
		EXPECT_EQ(g.to_second_kind(g.from_second_kind(x)), x);
		EXPECT_EQ(g.from_second_kind(g.to_second_kind(x)), x);
	}
	for (int trial = 0; trial < 20; ++trial)
	{
		Vec x = random_point(8, rng), y = random_point(8, rng),
		    z = random_point(8, rng);
		EXPECT_EQ(g.group_mul(g.group_mul(x, y), z),
		          g.group_mul(x, g.group_mul(y, z)));
		EXPECT_EQ(g.group_mul(x, g.inverse(x)), Vec(8));
		EXPECT_EQ(g.group_mul(x, Vec(8)), x);
	}
}

TEST(Group, Flows)
{
	auto f = build_free(2, 4);
	GroupModel g(f.algebra);
	Vec origin(8);
	Rational t(3, 5);
	Vec line(8);
	line[1] = t;
	EXPECT_EQ(g.flow(2, t, origin), line);
	std::mt19937 rng(4);
	Vec x = random_point(8, rng);
	EXPECT_EQ(g.flow(1, Rational(0), x), x);
	EXPECT_EQ(g.flow(1, Rational(1, 3), g.flow(1, Rational(1, 2), x)),
	          g.flow(1, Rational(5, 6), x));
}

TEST(Group, HeisenbergFields)
{
	GroupModel g(heisenberg());
	auto fields = g.left_invariant_fields();
	EXPECT_EQ(fields[0].str(), "d1");
	EXPECT_EQ(fields[1].str(), "d2 - x1*d3");
	EXPECT_EQ(fields[2].str(), "d3");
}

TEST(Group, FreeRank2Step4Fields)
{
	auto f = build_free(2, 4);
	GroupModel g(f.algebra);
	auto fields = g.left_invariant_fields();
	EXPECT_EQ(fields[0].str(), "d1");
	EXPECT_EQ(fields[1].str(),
	          "d2 - x1*d3 + 1/2*x1^2*d4 + x1*x2*d5 - 1/6*x1^3*d6 - "
	          "1/2*x1^2*x2*d7 - 1/2*x1*x2^2*d8");
}

namespace {

void check_fields_against_dual_oracle(GradedLieAlgebra const &a, int points,
                                      unsigned seed)
{
	GroupModel g(a);
	auto fields = g.left_invariant_fields();
	int n = g.dim();
	std::mt19937 rng(seed);
	for (int trial = 0; trial < points; ++trial)
	{
		Vec x = random_point(n, rng);
		std::vector<Dual> xd(n);
		for (int l = 0; l < n; ++l)
			xd[l] = {x[l], 0};
		for (int i = 1; i <= n; ++i)
		{
			auto moved = g.flow(i, Dual{0, 1}, xd);
			for (int l = 0; l < n; ++l)
				ASSERT_EQ(moved[l].b, fields[i - 1].coeffs[l].evaluate(x))
				    << "X" << i << " coefficient " << l + 1;
		}
	}
}

} // namespace

TEST(Group, FieldsMatchDifferentiatedGroupLaw)
{
	check_fields_against_dual_oracle(heisenberg(), 10, 8);
	check_fields_against_dual_oracle(build_free(2, 4).algebra, 10, 9);
	check_fields_against_dual_oracle(build_free(3, 3).algebra, 3, 10);
}

TEST(Group, FieldShape)
{
	auto f = build_free(3, 4);
	GroupModel g(f.algebra);
	auto fields = g.left_invariant_fields();
	auto const &d = g.degrees();
	for (int i = 0; i < g.dim(); ++i)
		for (int l = 0; l < g.dim(); ++l)
		{
			Poly const &c = fields[i].coeffs[l];
			if (l == i)
				EXPECT_EQ(c.str(), "1");
			else if (d[l] <= d[i])
				EXPECT_TRUE(c.is_zero());
			else if (!c.is_zero())
			{
				EXPECT_TRUE(c.is_homogeneous());
				EXPECT_EQ(c.weighted_degree(), d[l] - d[i]);
				// Vanishes on G_i = {x_1 = ... = x_{i-1} = 0}.
				Poly r = c;
				for (int v = 1; v <= i; ++v)
					r = r.substitute(v, Rational(0));
				EXPECT_TRUE(r.is_zero());
			}
		}
}

TEST(Group, LeftInvariance)
{
	// X_i at x*y equals the push-forward of X_i(y) under left translation
	// by x: d/dt (x * (y exp tX_i)) = d/dt ((x*y) exp tX_i).
	auto f = build_free(2, 4);
	GroupModel g(f.algebra);
	auto fields = g.left_invariant_fields();
	std::mt19937 rng(12);
	for (int trial = 0; trial < 5; ++trial)
	{
		Vec x = random_point(8, rng), y = random_point(8, rng);
		std::vector<Dual> xd(8), yd(8);
		for (int l = 0; l < 8; ++l)
		{
			xd[l] = {x[l], 0};
			yd[l] = {y[l], 0};
		}
		Vec xy = g.group_mul(x, y);
		for (int i = 1; i <= 8; ++i)
		{
			auto path = g.group_mul(xd, g.flow(i, Dual{0, 1}, yd));
			for (int l = 0; l < 8; ++l)
				EXPECT_EQ(path[l].b, fields[i - 1].coeffs[l].evaluate(xy));
		}
	}
}
