#include "carnot/dynamics.hpp"
#include "carnot/free_lie.hpp"
#include "carnot/group.hpp"
#include "carnot/prolongation.hpp"
#include "gtest/gtest.h"

#include <cmath>
#include <sstream>

using namespace carnot;

namespace {

Element X(int i, Rational c = Rational(1)) { return {{i, c}}; }

ExtremalFamily free24_g0()
{
	Rational s(-1);
	std::map<int, std::vector<LinearMap>> o{
	    {0, {{{2, X(1, s)}}, {{2, X(2, s)}}, {{1, X(1, s)}}, {{1, X(2, s)}}}}};
	return build_family(prolong(build_free(2, 4).algebra, 8, o).algebra);
}

Control constant(std::vector<double> h)
{
	return [h](double) { return h; };
}

Control circle()
{
	return [](double t) { return std::vector<double>{std::cos(t), std::sin(t)}; };
}

double max_of(std::vector<double> const &v)
{
	return *std::max_element(v.begin(), v.end());
}

} // namespace

TEST(Dynamics, GridSteps)
{
	Grid g{0.0, 1.0, 1e-3};
	EXPECT_EQ(g.steps(), 1000);
	EXPECT_EQ(g.time(1000), 1.0);
	Grid back{0.0, -1.0, 0.25};
	EXPECT_EQ(back.steps(), 4);
	EXPECT_DOUBLE_EQ(back.time(1), -0.25);
	EXPECT_THROW((Grid{0.0, 1.0, 0.0}.steps()), std::invalid_argument);
}

TEST(Dynamics, ZeroControlIsConstant)
{
	auto a = build_free(2, 4).algebra;
	std::vector<double> x0{1, 2, 3, 4, 5, 6, 7, 8};
	auto c = integrate_horizontal(a, constant({0, 0}), x0, {0, 1, 0.1});
	for (auto const &g : c.gamma)
		EXPECT_EQ(g, x0);
}

TEST(Dynamics, SecondGeneratorLine)
{
	auto a = build_free(2, 4).algebra;
	auto c = integrate_horizontal(a, constant({0, 1}), std::vector<double>(8), {0, 1, 1e-2});
	for (std::size_t i = 0; i < c.times.size(); ++i)
		for (int k = 0; k < 8; ++k)
			EXPECT_NEAR(c.gamma[i][k], k == 1 ? c.times[i] : 0.0, 1e-14);
}

TEST(Dynamics, ConstantControlMatchesGroupExponential)
{
	auto a = build_free(2, 4).algebra;
	GroupModel g(a);
	auto c = integrate_horizontal(a, constant({1, 1}), std::vector<double>(8), {0, 1, 1e-3});
	std::vector<Rational> u(8);
	u[0] = u[1] = Rational(1);
	auto exact = g.to_second_kind(u);
	for (int k = 0; k < 8; ++k)
		EXPECT_NEAR(c.gamma.back()[k], exact[k].to_double(), 1e-10);
}

TEST(Dynamics, HorizontalConsistency)
{
	auto a = build_free(2, 4).algebra;
	auto c = integrate_horizontal(a, circle(), std::vector<double>(8), {0, 1, 1e-3});
	for (std::size_t i = 0; i < c.times.size(); ++i)
	{
		EXPECT_NEAR(c.gamma[i][0], std::sin(c.times[i]), 1e-12);
		EXPECT_NEAR(c.gamma[i][1], 1 - std::cos(c.times[i]), 1e-12);
	}
}

TEST(Dynamics, AdjointConstantCurve)
{
	auto a = build_free(2, 4).algebra;
	auto c = integrate_horizontal(a, constant({0, 0}), std::vector<double>(8), {0, 1, 0.1});
	std::vector<double> l0{0, 0, 1, -2, 3, 0.5, 0, 1};
	auto d = integrate_adjoint(a, c, l0);
	for (auto const &l : d.lambda)
		EXPECT_EQ(l, l0);
}

TEST(Dynamics, HeisenbergAdjoint)
{
	auto a = heisenberg();
	auto c = integrate_horizontal(a, constant({1, 0}), {0, 0, 0}, {0, 1, 1e-3});
	auto d = integrate_adjoint(a, c, {0, 0, 1});
	for (std::size_t i = 0; i < d.times.size(); ++i)
	{
		EXPECT_NEAR(d.lambda[i][0], 0.0, 1e-14);
		EXPECT_NEAR(d.lambda[i][1], -d.times[i], 1e-12);
		EXPECT_NEAR(d.lambda[i][2], 1.0, 1e-14);
	}
}

TEST(Dynamics, AdjointSolutionsAreExtremalPolynomials)
{
	auto f = free24_g0();
	auto c = integrate_horizontal(f.algebra(), circle(), std::vector<double>(8), {0, 1, 1e-3});
	auto d = integrate_adjoint(f.algebra(), c, {0.5, -1, 0.25, 1, -2, 0.75, 1.5, -0.5});
	EXPECT_LE(max_of(duality_check(f, d)), 1e-8);
}

TEST(Dynamics, AdjointIsLinear)
{
	auto a = build_free(2, 4).algebra;
	auto c = integrate_horizontal(a, circle(), std::vector<double>(8), {0, 1, 1e-2});
	std::vector<double> p{1, 0, -1, 2, 0, 1, -1, 0.5}, q{0, 2, 1, -1, 3, 0, 1, 1};
	std::vector<double> s(8);
	for (int k = 0; k < 8; ++k)
		s[k] = 2 * p[k] - 3 * q[k];
	auto lp = integrate_adjoint(a, c, p).lambda;
	auto lq = integrate_adjoint(a, c, q).lambda;
	auto ls = integrate_adjoint(a, c, s).lambda;
	for (std::size_t i = 0; i < ls.size(); ++i)
		for (int k = 0; k < 8; ++k)
			EXPECT_NEAR(ls[i][k], 2 * lp[i][k] - 3 * lq[i][k], 1e-12);
}

TEST(Dynamics, AdjointFromSamples)
{
	auto f = free24_g0();
	auto c = integrate_horizontal(f.algebra(), circle(), std::vector<double>(8), {0, 1, 1e-3});
	CurvePath sampled = c;
	sampled.control = nullptr;
	std::vector<double> l0{0, 0, 0, 1, 0, 0, 0, 0};
	auto exact = integrate_adjoint(f.algebra(), c, l0);
	auto approx = integrate_adjoint(f.algebra(), sampled, l0);
	for (int k = 0; k < 8; ++k)
		EXPECT_NEAR(approx.lambda.back()[k], exact.lambda.back()[k], 1e-5);
}

TEST(Dynamics, NormalWithZeroCovectorIsConstant)
{
	auto a = build_free(2, 4).algebra;
	auto c = integrate_normal(a, std::vector<double>(8), std::vector<double>(8), {0, 1, 0.1});
	for (auto const &g : c.gamma)
		EXPECT_EQ(g, std::vector<double>(8));
}

TEST(Dynamics, HeisenbergNormalLine)
{
	auto c = integrate_normal(heisenberg(), {0, -1, 0}, {0, 0, 0}, {0, 1, 1e-3});
	for (std::size_t i = 0; i < c.times.size(); ++i)
	{
		EXPECT_NEAR(c.gamma[i][0], 0.0, 1e-14);
		EXPECT_NEAR(c.gamma[i][1], c.times[i], 1e-12);
		EXPECT_NEAR(c.gamma[i][2], 0.0, 1e-14);
		EXPECT_EQ(c.lambda[i], (std::vector<double>{0, -1, 0}));
	}
}

TEST(Dynamics, PrimeIntegrals)
{
	auto f = free24_g0();
	for (auto const &l0 : {std::vector<double>{-1, 0, 1, 0, 0, 0, 0, 0},
	                       std::vector<double>{-1, 0.5, 1, 0.3, -0.7, 1, 0.5, -1}})
	{
		auto c = integrate_normal(f.algebra(), l0, std::vector<double>(8), {0, 1, 1e-3});
		EXPECT_LE(max_of(duality_check(f, c)), 1e-8);
	}
}

TEST(Dynamics, PrimeIntegralDriftIsFourthOrder)
{
	auto f = free24_g0();
	auto c = drift_convergence(f, {-1, 0.5, 1, 0.3, -0.7, 1, 0.5, -1}, {0.2, 0.1, 0.05, 0.025});
	ASSERT_EQ(c.orders.size(), 3u);
	for (double o : c.orders)
		EXPECT_GE(o, 3.5);
}

TEST(Dynamics, ExactDualityOnAbnormalLine)
{
	auto f = free24_g0();
	std::vector<Rational> e4(8);
	e4[3] = Rational(1);
	std::vector<std::vector<Rational>> gamma, lambda;
	for (int i = 0; i <= 6; ++i)
	{
		std::vector<Rational> x(8);
		x[1] = Rational(i, 6);
		std::vector<Rational> l;
		for (int k = 1; k <= 8; ++k)
			l.push_back(f.eval_P(k, e4, x));
		EXPECT_TRUE(l[0].is_zero() && l[1].is_zero() && l[2].is_zero());
		gamma.push_back(x);
		lambda.push_back(l);
	}
	for (auto const &d : duality_check(f, gamma, lambda))
		EXPECT_TRUE(d.is_zero());
}

TEST(Dynamics, IteratedIntegralPairings)
{
	auto f = free24_g0();
	auto c = integrate_horizontal(f.algebra(), circle(), std::vector<double>(8), {0, 1, 1e-3});
	auto it = iterated_integrals(f, c, {0, 0, 0, 1, 2, -1, 3, 0.5});
	ASSERT_EQ(it.pairings.size(), 4u);
	std::vector<std::string> names;
	for (auto const &p : it.pairings)
	{
		names.push_back(p.str());
		EXPECT_LE(p.drift, 1e-7) << p.str();
	}
	EXPECT_EQ(names, (std::vector<std::string>{"B12 = P-3", "B22 = P-2", "B11 = P-1",
	                                           "B21 = P0"}));
}

TEST(Dynamics, IteratedIntegralOnStraightLine)
{
	auto f = free24_g0();
	auto c = integrate_horizontal(f.algebra(), constant({0, 1}), std::vector<double>(8), {0, 1, 1e-3});
	std::vector<double> e8(8, 0.0);
	e8[7] = 1.0;
	auto it = iterated_integrals(f, c, e8);
	EXPECT_NEAR(it.at(it.times.size() - 1, 1, 2), 1.0 / 24, 1e-12);
	EXPECT_NEAR(f.eval_P(-3, e8, c.gamma.back()), 1.0 / 24, 1e-12);
}

TEST(Dynamics, IteratedIntegralsVanishOnConstantCurve)
{
	auto f = free24_g0();
	auto c = integrate_horizontal(f.algebra(), constant({0, 0}), std::vector<double>(8), {0, 1, 0.1});
	auto it = iterated_integrals(f, c, {0, 0, 0, 1, 1, 1, 1, 1});
	for (auto const &row : it.B)
		for (double b : row)
			EXPECT_EQ(b, 0.0);
}

TEST(Dynamics, CsvHeader)
{
	auto c = integrate_normal(heisenberg(), {0, -1, 0}, {0, 0, 0}, {0, 1, 0.5});
	std::ostringstream os;
	write_csv(os, c);
	std::istringstream is(os.str());
	std::string line;
	std::getline(is, line);
	EXPECT_EQ(line, "t,x1,x2,x3,l1,l2,l3");
	std::getline(is, line);
	EXPECT_EQ(line, "0,0,0,0,0,-1,0");
	int rows = 1;
	while (std::getline(is, line))
		++rows;
	EXPECT_EQ(rows, 3);
}

TEST(Dynamics, SpiralControls)
{
	auto phi = [](double t) { return t * std::cos(std::log(1 - std::log(std::abs(t)))); };
	auto psi = [](double t) { return t * std::sin(std::log(1 - std::log(std::abs(t)))); };
	for (double t : {-0.9, -0.3, -1e-3, 2e-4, 0.1, 0.7})
	{
		double h = 1e-6 * std::abs(t);
		EXPECT_NEAR(spiral_phi_dot(t), (phi(t + h) - phi(t - h)) / (2 * h), 1e-6);
		EXPECT_NEAR(spiral_psi_dot(t), (psi(t + h) - psi(t - h)) / (2 * h), 1e-6);
		EXPECT_LE(std::abs(spiral_phi_dot(t)), 2.0);
		EXPECT_LE(std::abs(spiral_psi_dot(t)), 2.0);
	}
	EXPECT_EQ(spiral_phi_dot(0.0), 0.0);
	EXPECT_EQ(spiral_psi_dot(0.0), 0.0);
}

TEST(Dynamics, SpiralCovector)
{
	auto f = build_family(build_free(3, 4).algebra);
	auto v = spiral_covector(f);
	ASSERT_TRUE(v);
	for (int k = 1; k <= 3; ++k)
		EXPECT_TRUE((*v)[k - 1].is_zero());
	EXPECT_EQ(f.P(4, *v), parse_poly("x2^2 - x1", f.weights()));
	EXPECT_TRUE(f.P(5, *v).is_zero());
	EXPECT_TRUE(f.P(6, *v).is_zero());
	std::vector<int> support;
	for (int k = 1; k <= 32; ++k)
		if (!(*v)[k - 1].is_zero())
			support.push_back(k);
	EXPECT_EQ(support, (std::vector<int>{7, 18}));
	EXPECT_EQ((*v)[6], Rational(1));
	EXPECT_EQ((*v)[17], Rational(2));
}

TEST(Dynamics, SpiralIsGoh)
{
	auto r = spiral_example();
	EXPECT_EQ(r.product_dim, 64);
	EXPECT_EQ(r.product_rank, 6);
	EXPECT_EQ(r.product_step, 4);
	EXPECT_EQ(r.samples, 2000);
	EXPECT_LE(r.goh_residual, 1e-8);
	EXPECT_EQ(r.origin_residual, 0.0);
	EXPECT_LE(r.max_control, 2.0);
	EXPECT_GT(r.e7_residual, 1e-8);
	EXPECT_TRUE(r.pass);
}
