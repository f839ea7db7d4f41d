#include "carnot/abnormal.hpp"
#include "carnot/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <set>

namespace carnot {

namespace {

std::vector<int> generator_indices(GradedLieAlgebra const &a)
{
	std::vector<int> out;
	for (int j = a.min_index(); j <= a.dim(); ++j)
		if (a.degree(j) <= 1)
			out.push_back(j);
	return out;
}

/// Highest weighted degree among the generator columns.
int generator_degree(ExtremalFamily const &f)
{
	int top = 0;
	for (int j : generator_indices(f.algebra()))
		for (int k = 1; k <= f.dim(); ++k)
			top = std::max(top, f.q(j, k).weighted_degree());
	return top;
}

template <class T> std::size_t distinct_count(std::vector<std::vector<T>> const &s)
{
	std::set<std::vector<T>> seen(s.begin(), s.end());
	return seen.size();
}

} // namespace

std::vector<Generator> variety_generators(ExtremalFamily const &f,
                                          std::vector<Rational> const &v)
{
	if (std::all_of(v.begin(), v.end(), [](Rational const &x) { return x.is_zero(); }))
		throw std::invalid_argument("covector must be nonzero");
	std::vector<Generator> out;
	for (int j : generator_indices(f.algebra()))
		out.push_back({j, f.P(j, v)});
	return out;
}

Membership membership(ExtremalFamily const &f, std::vector<Rational> const &v,
                      std::vector<std::vector<Rational>> const &samples)
{
	Membership m{true, 0.0};
	for (auto const &g : variety_generators(f, v))
		for (auto const &x : samples)
		{
			Rational r = g.p.evaluate(x);
			m.max_residual = std::max(m.max_residual, std::abs(r.to_double()));
			if (!r.is_zero())
				m.member = false;
		}
	return m;
}

Membership membership(ExtremalFamily const &f, std::vector<double> const &v,
                      std::vector<std::vector<double>> const &samples, double tol)
{
	Membership m{true, 0.0};
	for (int j : generator_indices(f.algebra()))
		for (auto const &x : samples)
			m.max_residual = std::max(m.max_residual, std::abs(f.eval_P(j, v, x)));
	m.member = m.max_residual <= tol;
	return m;
}

Detection detect_abnormal(ExtremalFamily const &f,
                          std::vector<std::vector<Rational>> const &samples)
{
	int n = f.dim();
	RowEchelon e(n);
	for (int j : generator_indices(f.algebra()))
		for (auto const &x : samples)
		{
			std::vector<Rational> row(n);
			for (int k = 1; k <= n; ++k)
				row[k - 1] = f.q(j, k).evaluate(x);
			e.add_dense(row);
		}
	Detection d;
	d.basis = e.nullspace();
	d.corank_lower_bound = static_cast<int>(d.basis.size());
	d.too_few_samples =
	    static_cast<int>(distinct_count(samples)) <= generator_degree(f);
	return d;
}

NumericDetection detect_abnormal(ExtremalFamily const &f,
                                 std::vector<std::vector<double>> const &samples,
                                 double tol)
{
	int n = f.dim();
	auto gens = generator_indices(f.algebra());
	Eigen::MatrixXd m(static_cast<Eigen::Index>(gens.size() * samples.size()), n);
	m.setZero();
	Eigen::Index r = 0;
	for (int j : gens)
		for (auto const &x : samples)
		{
			for (int k = 1; k <= n; ++k)
				m(r, k - 1) = f.q(j, k).evaluate(x);
			++r;
		}
	NumericDetection d;
	d.too_few_samples =
	    static_cast<int>(distinct_count(samples)) <= generator_degree(f);
	if (m.rows() == 0)
	{
		for (int k = 0; k < n; ++k)
		{
			std::vector<double> e(n, 0.0);
			e[k] = 1.0;
			d.basis.push_back(e);
		}
		d.corank_lower_bound = n;
		return d;
	}
	Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
	auto const &s = svd.singularValues();
	for (Eigen::Index i = 0; i < s.size(); ++i)
		d.singular_values.push_back(s(i));
	double threshold = tol * std::max(1.0, s.size() ? s(0) : 0.0);
	int rank = 0;
	for (Eigen::Index i = 0; i < s.size(); ++i)
		rank += s(i) > threshold;
	auto const &v = svd.matrixV();
	for (int c = rank; c < n; ++c)
	{
		std::vector<double> b(n);
		for (int k = 0; k < n; ++k)
			b[k] = v(k, c);
		d.basis.push_back(b);
	}
	d.corank_lower_bound = n - rank;
	return d;
}

Membership goh_check(ExtremalFamily const &f, std::vector<double> const &v,
                     std::vector<std::vector<double>> const &samples, double tol)
{
	Membership m{true, 0.0};
	auto const &a = f.algebra();
	for (int i = 1; i <= a.dim(); ++i)
	{
		if (a.degree(i) > 2)
			continue;
		std::vector<CompiledPoly> q;
		std::vector<double> coeff;
		for (int k = 1; k <= f.dim(); ++k)
			if (v[k - 1] != 0.0 && !f.q(i, k).is_zero())
			{
				q.emplace_back(f.q(i, k));
				coeff.push_back(v[k - 1]);
			}
		for (auto const &x : samples)
		{
			double s = 0.0;
			for (std::size_t t = 0; t < q.size(); ++t)
				s += coeff[t] * q[t](x);
			m.max_residual = std::max(m.max_residual, std::abs(s));
		}
	}
	m.member = m.max_residual <= tol;
	return m;
}

std::string Minor::label() const
{
	bool contiguous = true;
	for (std::size_t i = 1; i < rows.size(); ++i)
		contiguous &= rows[i] == rows[i - 1] + 1;
	if (contiguous && rows.size() > 2)
		return fmt::format("rows({}..{})", rows.front(), rows.back());
	return fmt::format("rows({})", fmt::join(rows, ","));
}

Poly determinant(std::vector<std::vector<Poly>> m)
{
	std::size_t n = m.size();
	if (n == 0)
		return Poly::constant(nullptr, Rational(1));
	for (auto const &row : m)
		if (row.size() != n)
			throw std::invalid_argument("determinant of a non-square matrix");
	Weights w;
	for (auto const &row : m)
		for (auto const &p : row)
			if (p.weights())
				w = p.weights();
	bool negate = false;
	Poly prev = Poly::constant(w, Rational(1));
	for (std::size_t p = 0; p + 1 < n; ++p)
	{
		// Sparsest nonzero pivot in column p.
		std::size_t best = n;
		for (std::size_t r = p; r < n; ++r)
			if (!m[r][p].is_zero() &&
			    (best == n || m[r][p].terms().size() < m[best][p].terms().size()))
				best = r;
		if (best == n)
			return Poly(w);
		if (best != p)
		{
			std::swap(m[best], m[p]);
			negate = !negate;
		}
		for (std::size_t i = p + 1; i < n; ++i)
		{
			for (std::size_t j = p + 1; j < n; ++j)
			{
				Poly v = m[i][j] * m[p][p] - m[i][p] * m[p][j];
				m[i][j] = v.is_zero() ? Poly(w) : v.divide_exact(prev);
			}
			m[i][p] = Poly(w);
		}
		prev = m[p][p];
	}
	Poly det = m[n - 1][n - 1];
	return negate ? -det : det;
}

MinorSystem minor_system(ExtremalFamily const &f, MinorOptions const &opts)
{
	auto const &a = f.algebra();
	MinorSystem ms;
	bool reduce = opts.rank2_reduction && a.rank() == 2;
	if (!opts.rows.empty())
		ms.rows = opts.rows;
	else
		for (int j = a.min_index(); j <= a.dim(); ++j)
			if (a.degree(j) <= 1 || (reduce && a.degree(j) == 2))
				ms.rows.push_back(j);
	if (!opts.cols.empty())
		ms.cols = opts.cols;
	else
		for (int k = 1; k <= a.dim(); ++k)
			if (a.degree(k) >= (reduce ? 3 : 2))
				ms.cols.push_back(k);
	for (int j : ms.rows)
	{
		std::vector<Poly> row;
		for (int k : ms.cols)
			row.push_back(f.q(j, k));
		ms.matrix.push_back(std::move(row));
	}
	std::size_t size = std::min(ms.rows.size(), ms.cols.size());
	bool tall = ms.rows.size() >= ms.cols.size();
	std::size_t pool = tall ? ms.rows.size() : ms.cols.size();
	// Enumerate size-element subsets of the longer side in lexicographic order.
	std::vector<bool> pick(pool, false);
	std::fill(pick.begin(), pick.begin() + static_cast<long>(size), true);
	do
	{
		std::vector<std::size_t> chosen;
		for (std::size_t i = 0; i < pool; ++i)
			if (pick[i])
				chosen.push_back(i);
		std::vector<std::vector<Poly>> sub;
		Minor minor;
		if (tall)
		{
			for (auto r : chosen)
			{
				sub.push_back(ms.matrix[r]);
				minor.rows.push_back(ms.rows[r]);
			}
		}
		else
		{
			for (std::size_t r = 0; r < ms.rows.size(); ++r)
			{
				std::vector<Poly> row;
				for (auto c : chosen)
					row.push_back(ms.matrix[r][c]);
				sub.push_back(std::move(row));
			}
			minor.rows = ms.rows;
		}
		minor.det = determinant(std::move(sub));
		ms.minors.push_back(std::move(minor));
	} while (std::prev_permutation(pick.begin(), pick.end()));
	return ms;
}

std::optional<Certificate> nonvanishing_certificate(Minor const &m)
{
	if (m.det.is_zero())
		return std::nullopt;
	auto key = [](Monomial const &x) {
		int top = 0;
		for (auto const &[v, e] : x.powers)
			top = std::max(top, e);
		return std::pair(top, x.powers.size());
	};
	auto best = m.det.terms().begin();
	for (auto it = best; it != m.det.terms().end(); ++it)
		if (key(it->first) < key(best->first))
			best = it;
	return Certificate{best->first, best->second};
}

ProductAlgebra product_group(GradedLieAlgebra const &a, GradedLieAlgebra const &b)
{
	ProductAlgebra out;
	int low = std::min(a.size() ? a.degree_at(0) : 1, b.size() ? b.degree_at(0) : 1);
	int high = std::max(a.step(), b.step());
	// Prolongation part: ids ... -1, 0 in ascending degree.
	std::vector<std::pair<int, int>> prol, pos; // (summand, index)
	for (int d = low; d <= high; ++d)
		for (int which = 0; which < 2; ++which)
		{
			auto const &x = which == 0 ? a : b;
			for (int i : x.indices_of_degree(d))
				(i >= 1 ? pos : prol).emplace_back(which, i);
		}
	std::vector<int> degrees;
	for (auto [which, i] : pos)
		degrees.push_back((which == 0 ? a : b).degree(i));
	GradedLieAlgebra::Builder builder(degrees);
	// Prolongation ids are prepended per degree, highest degree first.
	std::map<int, std::vector<std::pair<int, int>>> prol_by_degree;
	for (auto [which, i] : prol)
		prol_by_degree[(which == 0 ? a : b).degree(i)].emplace_back(which, i);
	for (auto it = prol_by_degree.rbegin(); it != prol_by_degree.rend(); ++it)
	{
		auto ids = builder.add_prolongation(it->first,
		                                    static_cast<int>(it->second.size()));
		for (std::size_t m = 0; m < ids.size(); ++m)
		{
			auto [which, i] = it->second[m];
			(which == 0 ? out.from_first : out.from_second)[i] = ids[m];
		}
	}
	for (std::size_t m = 0; m < pos.size(); ++m)
	{
		auto [which, i] = pos[m];
		(which == 0 ? out.from_first : out.from_second)[i] = static_cast<int>(m) + 1;
	}
	for (int which = 0; which < 2; ++which)
	{
		auto const &x = which == 0 ? a : b;
		auto const &map = which == 0 ? out.from_first : out.from_second;
		for (auto const &e : x.entries())
		{
			Element v;
			for (auto const &[k, c] : e.terms)
				v[map.at(k)] = c;
			builder.set(map.at(e.i), map.at(e.j), v);
		}
	}
	builder.set_truncated(a.truncated() || b.truncated());
	out.algebra = builder.build();
	return out;
}

} // namespace carnot
