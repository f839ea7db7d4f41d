#include "carnot/dynamics.hpp"
#include "carnot/free_lie.hpp"
#include "carnot/group.hpp"
#include "carnot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <ostream>
#include <stdexcept>

namespace carnot {

namespace {

using State = std::vector<double>;

/// One classical RK4 step of y' = rhs(t, y).
template <class Rhs> void rk4_step(State &y, double t, double h, Rhs const &rhs)
{
	std::size_t n = y.size();
	State k1(n), k2(n), k3(n), k4(n), tmp(n);
	rhs(t, y, k1);
	for (std::size_t i = 0; i < n; ++i)
		tmp[i] = y[i] + 0.5 * h * k1[i];
	rhs(t + 0.5 * h, tmp, k2);
	for (std::size_t i = 0; i < n; ++i)
		tmp[i] = y[i] + 0.5 * h * k2[i];
	rhs(t + 0.5 * h, tmp, k3);
	for (std::size_t i = 0; i < n; ++i)
		tmp[i] = y[i] + h * k3[i];
	rhs(t + h, tmp, k4);
	for (std::size_t i = 0; i < n; ++i)
		y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

/// Horizontal fields X_1..X_r in compiled form.
struct Fields
{
	int n = 0;
	int r = 0;
	/// (component l, polynomial) per generator.
	std::vector<std::vector<std::pair<int, CompiledPoly>>> x;

	explicit Fields(GradedLieAlgebra const &a) : n(a.dim()), r(a.rank())
	{
		auto fields = GroupModel(a).left_invariant_fields();
		x.resize(r);
		for (int j = 0; j < r; ++j)
			for (int l = 0; l < n; ++l)
				if (!fields[j].coeffs[l].is_zero())
					x[j].emplace_back(l, CompiledPoly(fields[j].coeffs[l]));
	}

	void velocity(std::span<const double> h, std::span<const double> g,
	              std::span<double> out) const
	{
		std::fill(out.begin(), out.end(), 0.0);
		for (int j = 0; j < r; ++j)
		{
			if (h[j] == 0.0)
				continue;
			for (auto const &[l, p] : x[j])
				out[l] += h[j] * p(g);
		}
	}
};

/// Entries (i, k, c_ij^k) for each generator j, positive indices, 0-based.
struct Adjoint
{
	std::vector<std::vector<std::tuple<int, int, double>>> terms;

	explicit Adjoint(GradedLieAlgebra const &a)
	{
		int n = a.dim();
		terms.resize(a.rank());
		for (int j = 1; j <= a.rank(); ++j)
			for (int i = 1; i <= n; ++i)
				for (auto const &[k, c] : a.bracket_basis(i, j))
					if (k >= 1)
						terms[j - 1].emplace_back(i - 1, k - 1, c.to_double());
	}

	void rate(std::span<const double> h, std::span<const double> lambda,
	          std::span<double> out) const
	{
		std::fill(out.begin(), out.end(), 0.0);
		for (std::size_t j = 0; j < terms.size(); ++j)
		{
			if (h[j] == 0.0)
				continue;
			for (auto const &[i, k, c] : terms[j])
				out[i] -= c * h[j] * lambda[k];
		}
	}
};

/// P_i^v for fixed double v, compiled.
struct CompiledFamily
{
	std::vector<std::vector<std::pair<double, CompiledPoly>>> rows;
	int min_index = 1;

	CompiledFamily(ExtremalFamily const &f, std::vector<double> const &v,
	               std::vector<int> const &indices)
	    : min_index(f.min_index())
	{
		rows.resize(f.dim() - f.min_index() + 1);
		for (int i : indices)
			for (int k = 1; k <= f.dim(); ++k)
				if (v[k - 1] != 0.0 && !f.q(i, k).is_zero())
					rows[i - min_index].emplace_back(v[k - 1], CompiledPoly(f.q(i, k)));
	}

	double operator()(int i, std::span<const double> x) const
	{
		double s = 0.0;
		for (auto const &[c, p] : rows[i - min_index])
			s += c * p(x);
		return s;
	}
};

std::vector<int> positive_indices(int n)
{
	std::vector<int> out(n);
	for (int i = 0; i < n; ++i)
		out[i] = i + 1;
	return out;
}

void require_size(std::vector<double> const &v, int n, char const *what)
{
	if (static_cast<int>(v.size()) != n)
		throw std::invalid_argument(fmt::format("{} has size {}, expected {}", what,
		                                        v.size(), n));
}

} // namespace

int Grid::steps() const
{
	if (step <= 0.0)
		throw std::invalid_argument("grid step must be positive");
	return std::max(1, static_cast<int>(std::lround(std::abs(t1 - t0) / step)));
}

double Grid::time(int i) const
{
	int n = steps();
	return i == n ? t1 : t0 + (t1 - t0) * i / n;
}

Control control_from_samples(CurvePath const &c, int rank)
{
	auto const &t = c.times;
	if (t.size() < 2)
		return [rank](double) { return std::vector<double>(rank, 0.0); };
	std::vector<std::vector<double>> rate(t.size(), std::vector<double>(rank));
	for (std::size_t m = 0; m < t.size(); ++m)
	{
		std::size_t lo = m == 0 ? 0 : m - 1;
		std::size_t hi = m + 1 == t.size() ? m : m + 1;
		for (int j = 0; j < rank; ++j)
			rate[m][j] = (c.gamma[hi][j] - c.gamma[lo][j]) / (t[hi] - t[lo]);
	}
	bool ascending = t.back() > t.front();
	return [t, rate, rank, ascending](double s) {
		auto it = ascending ? std::upper_bound(t.begin(), t.end(), s)
		                    : std::upper_bound(t.begin(), t.end(), s, std::greater<>());
		std::size_t hi = std::clamp<std::size_t>(it - t.begin(), 1, t.size() - 1);
		std::size_t lo = hi - 1;
		double w = (s - t[lo]) / (t[hi] - t[lo]);
		std::vector<double> h(rank);
		for (int j = 0; j < rank; ++j)
			h[j] = (1 - w) * rate[lo][j] + w * rate[hi][j];
		return h;
	};
}

CurvePath integrate_horizontal(GradedLieAlgebra const &a, Control const &h,
                               std::vector<double> const &x0, Grid const &grid)
{
	Fields fields(a);
	require_size(x0, fields.n, "initial point");
	CurvePath c;
	c.control = h;
	State y = x0;
	int steps = grid.steps();
	double dt = (grid.t1 - grid.t0) / steps;
	c.times.push_back(grid.t0);
	c.gamma.push_back(y);
	auto rhs = [&](double t, State const &s, State &out) {
		fields.velocity(h(t), s, out);
	};
	for (int i = 0; i < steps; ++i)
	{
		rk4_step(y, grid.time(i), dt, rhs);
		c.times.push_back(grid.time(i + 1));
		c.gamma.push_back(y);
	}
	return c;
}

CurvePath integrate_adjoint(GradedLieAlgebra const &a, CurvePath curve,
                            std::vector<double> const &lambda0)
{
	Adjoint adj(a);
	require_size(lambda0, a.dim(), "initial covector");
	Control h = curve.control ? curve.control : control_from_samples(curve, a.rank());
	State y = lambda0;
	curve.lambda.assign(1, y);
	auto rhs = [&](double t, State const &s, State &out) { adj.rate(h(t), s, out); };
	for (std::size_t i = 0; i + 1 < curve.times.size(); ++i)
	{
		rk4_step(y, curve.times[i], curve.times[i + 1] - curve.times[i], rhs);
		curve.lambda.push_back(y);
	}
	return curve;
}

CurvePath integrate_normal(GradedLieAlgebra const &a,
                           std::vector<double> const &lambda0,
                           std::vector<double> const &x0, Grid const &grid)
{
	Fields fields(a);
	Adjoint adj(a);
	int n = fields.n;
	int r = fields.r;
	require_size(x0, n, "initial point");
	require_size(lambda0, n, "initial covector");
	State y(2 * n);
	std::copy(x0.begin(), x0.end(), y.begin());
	std::copy(lambda0.begin(), lambda0.end(), y.begin() + n);
	CurvePath c;
	auto record = [&](double t) {
		c.times.push_back(t);
		c.gamma.emplace_back(y.begin(), y.begin() + n);
		c.lambda.emplace_back(y.begin() + n, y.end());
	};
	std::vector<double> h(r);
	auto rhs = [&](double, State const &s, State &out) {
		std::span<const double> all(s);
		for (int j = 0; j < r; ++j)
			h[j] = -s[n + j];
		fields.velocity(h, all.first(n), std::span(out).first(n));
		adj.rate(h, all.subspan(n), std::span(out).subspan(n));
	};
	int steps = grid.steps();
	double dt = (grid.t1 - grid.t0) / steps;
	record(grid.t0);
	for (int i = 0; i < steps; ++i)
	{
		rk4_step(y, grid.time(i), dt, rhs);
		record(grid.time(i + 1));
	}
	return c;
}

std::vector<double> duality_check(ExtremalFamily const &f, CurvePath const &c)
{
	int n = f.dim();
	if (c.lambda.empty())
		throw std::invalid_argument("curve carries no covector samples");
	CompiledFamily p(f, c.lambda.front(), positive_indices(n));
	std::vector<double> drift(n, 0.0);
	for (std::size_t t = 0; t < c.times.size(); ++t)
		for (int i = 1; i <= n; ++i)
			drift[i - 1] =
			    std::max(drift[i - 1], std::abs(c.lambda[t][i - 1] - p(i, c.gamma[t])));
	return drift;
}

std::vector<Rational> duality_check(ExtremalFamily const &f,
                                    std::vector<std::vector<Rational>> const &gamma,
                                    std::vector<std::vector<Rational>> const &lambda)
{
	int n = f.dim();
	if (gamma.size() != lambda.size() || lambda.empty())
		throw std::invalid_argument("mismatched curve and covector samples");
	std::vector<Rational> drift(n);
	for (std::size_t t = 0; t < gamma.size(); ++t)
		for (int i = 1; i <= n; ++i)
			drift[i - 1] = std::max(
			    drift[i - 1], abs(lambda[t][i - 1] - f.eval_P(i, lambda.front(), gamma[t])));
	return drift;
}

std::string IteratedIntegrals::Pairing::str() const
{
	std::string rhs;
	for (auto const &[i, j, c] : terms)
	{
		std::string name = fmt::format("B{}{}", i, j);
		bool neg = c.sign() < 0;
		Rational mag = neg ? -c : c;
		std::string body = mag == Rational(1) ? name : mag.str() + "*" + name;
		if (rhs.empty())
			rhs = neg ? "-" + body : body;
		else
			rhs += (neg ? " - " : " + ") + body;
	}
	if (terms.size() == 1)
	{
		auto const &[i, j, c] = terms.front();
		if (c == Rational(1))
			return fmt::format("B{}{} = P{}", i, j, m);
		if (c == Rational(-1))
			return fmt::format("B{}{} = -P{}", i, j, m);
	}
	return fmt::format("P{} = {}", m, rhs.empty() ? "0" : rhs);
}

IteratedIntegrals iterated_integrals(ExtremalFamily const &f, CurvePath const &curve,
                                     std::vector<double> const &v)
{
	auto const &a = f.algebra();
	int n = a.dim();
	int r = a.rank();
	require_size(v, n, "covector");
	Control h = curve.control ? curve.control : control_from_samples(curve, r);
	Fields fields(a);
	auto gens = a.indices_of_degree(0);
	std::vector<int> rows = positive_indices(r);
	rows.insert(rows.end(), gens.begin(), gens.end());
	CompiledFamily p(f, v, rows);

	IteratedIntegrals out;
	out.rank = r;
	State y(n + r * r, 0.0);
	std::copy(curve.gamma.front().begin(), curve.gamma.front().end(), y.begin());
	auto rhs = [&](double t, State const &s, State &ds) {
		auto hv = h(t);
		std::span<const double> g(s.data(), n);
		fields.velocity(hv, g, std::span(ds).first(n));
		for (int i = 1; i <= r; ++i)
		{
			double pi = p(i, g);
			for (int j = 1; j <= r; ++j)
				ds[n + (i - 1) * r + (j - 1)] = pi * hv[j - 1];
		}
	};
	std::vector<State> states{y};
	out.times.push_back(curve.times.front());
	for (std::size_t k = 0; k + 1 < curve.times.size(); ++k)
	{
		rk4_step(y, curve.times[k], curve.times[k + 1] - curve.times[k], rhs);
		states.push_back(y);
		out.times.push_back(curve.times[k + 1]);
	}
	for (auto const &s : states)
		out.B.emplace_back(s.begin() + n, s.end());

	for (int m : gens)
	{
		IteratedIntegrals::Pairing pr{m, {}, 0.0};
		// d/dt P_m = sum_j h_j X_j P_m = sum_j h_j sum_i c_jm^i P_i.
		for (int j = 1; j <= r; ++j)
			for (auto const &[i, c] : a.bracket_basis(j, m))
				if (i >= 1 && i <= r)
					pr.terms.emplace_back(i, j, c);
		std::sort(pr.terms.begin(), pr.terms.end());
		for (std::size_t t = 0; t < states.size(); ++t)
		{
			double s = 0.0;
			for (auto const &[i, j, c] : pr.terms)
				s += c.to_double() * out.at(t, i, j);
			std::span<const double> g(states[t].data(), n);
			pr.drift = std::max(pr.drift, std::abs(p(m, g) - s));
		}
		out.pairings.push_back(std::move(pr));
	}
	return out;
}

Convergence drift_convergence(ExtremalFamily const &f,
                              std::vector<double> const &lambda0,
                              std::vector<double> const &steps, double t1)
{
	Convergence c;
	std::vector<double> origin(f.dim(), 0.0);
	for (double s : steps)
	{
		auto curve = integrate_normal(f.algebra(), lambda0, origin, {0.0, t1, s});
		auto d = duality_check(f, curve);
		c.steps.push_back(s);
		c.drifts.push_back(*std::max_element(d.begin(), d.end()));
	}
	for (std::size_t i = 0; i + 1 < c.steps.size(); ++i)
		c.orders.push_back(std::log(c.drifts[i] / c.drifts[i + 1]) /
		                   std::log(c.steps[i] / c.steps[i + 1]));
	return c;
}

void write_csv(std::ostream &os, CurvePath const &c)
{
	std::size_t n = c.gamma.empty() ? 0 : c.gamma.front().size();
	os << "t";
	for (std::size_t i = 1; i <= n; ++i)
		os << ",x" << i;
	if (!c.lambda.empty())
		for (std::size_t i = 1; i <= n; ++i)
			os << ",l" << i;
	os << '\n';
	for (std::size_t t = 0; t < c.times.size(); ++t)
	{
		os << fmt::format("{:.17g}", c.times[t]);
		for (double x : c.gamma[t])
			os << fmt::format(",{:.17g}", x);
		if (!c.lambda.empty())
			for (double x : c.lambda[t])
				os << fmt::format(",{:.17g}", x);
		os << '\n';
	}
}

double spiral_phi_dot(double t)
{
	if (t == 0.0)
		return 0.0;
	double u = 1.0 - std::log(std::abs(t));
	double l = std::log(u);
	return std::cos(l) + std::sin(l) / u;
}

double spiral_psi_dot(double t)
{
	if (t == 0.0)
		return 0.0;
	double u = 1.0 - std::log(std::abs(t));
	double l = std::log(u);
	return std::sin(l) - std::cos(l) / u;
}

std::optional<std::vector<Rational>> spiral_covector(ExtremalFamily const &f)
{
	auto const &a = f.algebra();
	int n = a.dim();
	auto w = f.weights();
	std::vector<int> unknowns;
	for (int k = 1; k <= n; ++k)
		if (a.degree(k) >= 2)
			unknowns.push_back(k);
	// One equation per (j, monomial) coefficient.
	auto before = [](std::pair<int, Monomial> const &x, std::pair<int, Monomial> const &y) {
		if (x.first != y.first)
			return x.first < y.first;
		return MonomialOrder()(x.second, y.second);
	};
	std::map<std::pair<int, Monomial>, int, decltype(before)> row_of(before);
	auto row = [&](int j, Monomial const &m) {
		auto [it, fresh] = row_of.try_emplace({j, m}, static_cast<int>(row_of.size()));
		return it->second;
	};
	Poly target = parse_poly("x2^2 - x1", w);
	std::vector<std::vector<std::pair<int, Rational>>> entries(unknowns.size());
	for (std::size_t u = 0; u < unknowns.size(); ++u)
		for (int j : {4, 5, 6})
			for (auto const &[m, c] : f.q(j, unknowns[u]).terms())
				entries[u].emplace_back(row(j, m), c);
	std::vector<std::pair<int, Rational>> rhs;
	for (auto const &[m, c] : target.terms())
		rhs.emplace_back(row(4, m), c);
	std::size_t rows = row_of.size();
	std::vector<std::vector<Rational>> columns(unknowns.size(), std::vector<Rational>(rows));
	for (std::size_t u = 0; u < unknowns.size(); ++u)
		for (auto const &[r, c] : entries[u])
			columns[u][r] += c;
	std::vector<Rational> b(rows);
	for (auto const &[r, c] : rhs)
		b[r] = c;
	auto x = solve_columns(columns, b);
	if (!x)
		return std::nullopt;
	std::vector<Rational> v(n);
	for (std::size_t u = 0; u < unknowns.size(); ++u)
		v[unknowns[u] - 1] = (*x)[u];
	return v;
}

SpiralReport spiral_example(SpiralOptions const &opts)
{
	auto factor = build_free(3, 4).algebra;
	auto product = product_group(factor, factor);
	auto const &g = product.algebra;
	SpiralReport rep;
	rep.factor_dim = factor.dim();
	rep.product_dim = g.dim();
	rep.product_rank = g.rank();
	rep.product_step = g.step();

	auto ff = build_family(factor);
	auto v = spiral_covector(ff);
	if (!v)
		return rep;
	rep.covector = *v;
	for (int j : {4, 5, 6})
		rep.q.push_back(ff.P(j, *v).str());

	int n = g.dim();
	std::vector<double> vp(n, 0.0), e7(n, 0.0);
	for (int k = 1; k <= factor.dim(); ++k)
	{
		vp[product.from_first.at(k) - 1] = (*v)[k - 1].to_double();
		vp[product.from_second.at(k) - 1] = (*v)[k - 1].to_double();
	}
	e7[product.from_first.at(7) - 1] = 1.0;
	e7[product.from_second.at(7) - 1] = 1.0;

	std::vector<int> y(3), z(3);
	for (int j = 1; j <= 3; ++j)
	{
		y[j - 1] = product.from_first.at(j) - 1;
		z[j - 1] = product.from_second.at(j) - 1;
	}
	Control h = [&](double t) {
		std::vector<double> c(6);
		c[y[0]] = 2 * t;
		c[y[1]] = 1.0;
		c[y[2]] = spiral_phi_dot(t);
		c[z[0]] = 2 * t;
		c[z[1]] = 1.0;
		c[z[2]] = spiral_psi_dot(t);
		return c;
	};
	std::vector<double> origin(n, 0.0);
	auto fwd = integrate_horizontal(g, h, origin, {0.0, 1.0, opts.step});
	auto bwd = integrate_horizontal(g, h, origin, {0.0, -1.0, opts.step});

	std::vector<std::vector<double>> samples;
	for (auto const *c : {&fwd, &bwd})
		for (std::size_t i = 0; i < c->times.size(); ++i)
		{
			double t = c->times[i];
			rep.max_control = std::max(
			    {rep.max_control, std::abs(spiral_phi_dot(t)), std::abs(spiral_psi_dot(t))});
			if (std::abs(t) >= opts.puncture)
				samples.push_back(c->gamma[i]);
		}
	rep.samples = static_cast<int>(samples.size());

	auto f = build_family(g);
	rep.goh_residual = goh_check(f, vp, samples, opts.tol).max_residual;
	rep.origin_residual = goh_check(f, vp, {origin}, 0.0).max_residual;
	rep.e7_residual = goh_check(f, e7, samples, opts.tol).max_residual;
	rep.pass = rep.goh_residual <= opts.tol && rep.origin_residual == 0.0 &&
	           rep.max_control <= 2.0 && rep.e7_residual > opts.tol;
	return rep;
}

} // namespace carnot
