#include "carnot/linalg.hpp"

#include <numeric>
#include <stdexcept>

namespace carnot {

namespace {

std::int64_t lcm_checked(std::int64_t a, std::int64_t b)
{
	std::int64_t g = std::gcd(a, b);
	std::int64_t r;
	if (__builtin_mul_overflow(a / g, b, &r))
		throw OverflowError("lcm overflow in row normalization");
	return r;
}

/// Primitive integer scaling with a positive leading entry.
void make_primitive(SparseRow &row)
{
	if (row.empty())
		return;
	std::int64_t l = 1;
	for (auto const &[c, v] : row)
		l = lcm_checked(l, v.den());
	std::int64_t g = 0;
	for (auto &[c, v] : row)
	{
		v *= Rational(l);
		g = std::gcd(g, v.num() < 0 ? -v.num() : v.num());
	}
	if (row.front().second.sign() < 0)
		g = -g;
	if (g != 1)
		for (auto &[c, v] : row)
			v /= Rational(g);
}

/// a*x - b*y, merged by column.
SparseRow combine(Rational const &a, SparseRow const &x, Rational const &b,
                  SparseRow const &y)
{
	SparseRow out;
	out.reserve(x.size() + y.size());
	std::size_t i = 0, j = 0;
	while (i < x.size() || j < y.size())
	{
		if (j == y.size() || (i < x.size() && x[i].first < y[j].first))
		{
			out.emplace_back(x[i].first, a * x[i].second);
			++i;
		}
		else if (i == x.size() || y[j].first < x[i].first)
		{
			out.emplace_back(y[j].first, -(b * y[j].second));
			++j;
		}
		else
		{
			Rational v = a * x[i].second - b * y[j].second;
			if (!v.is_zero())
				out.emplace_back(x[i].first, v);
			++i;
			++j;
		}
	}
	return out;
}

} // namespace

SparseRow to_sparse(std::vector<Rational> const &dense)
{
	SparseRow r;
	for (int c = 0; c < static_cast<int>(dense.size()); ++c)
		if (!dense[c].is_zero())
			r.emplace_back(c, dense[c]);
	return r;
}

SparseRow RowEchelon::reduce(SparseRow row) const
{
	make_primitive(row);
	// Pivot rows only have entries at or after their leading column, so
	// eliminating left to right never reintroduces an earlier pivot entry.
	std::size_t pos = 0;
	while (pos < row.size())
	{
		auto it = pivots_.find(row[pos].first);
		if (it == pivots_.end())
		{
			++pos;
			continue;
		}
		int column = row[pos].first;
		SparseRow const &p = it->second;
		row = combine(p.front().second, row, row[pos].second, p);
		make_primitive(row);
		pos = 0;
		while (pos < row.size() && row[pos].first <= column)
			++pos;
	}
	return row;
}

bool RowEchelon::add(SparseRow row)
{
	for (auto const &[c, v] : row)
		if (c < 0 || c >= columns_)
			throw std::out_of_range("row column out of range");
	row = reduce(std::move(row));
	// The row now has no entry in any pivot column; its first entry becomes
	// a new pivot only if it is the leading one.
	if (row.empty())
		return false;
	int lead = row.front().first;
	// Existing pivot rows with later leading columns may reference `lead`;
	// they stay in echelon form because leading columns remain distinct.
	pivots_.emplace(lead, std::move(row));
	return true;
}

std::vector<std::vector<Rational>> RowEchelon::nullspace() const
{
	std::vector<std::vector<Rational>> basis;
	for (int f = 0; f < columns_; ++f)
	{
		if (pivots_.count(f))
			continue;
		std::vector<Rational> x(columns_);
		x[f] = Rational(1);
		for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it)
		{
			SparseRow const &r = it->second;
			Rational acc;
			for (std::size_t k = 1; k < r.size(); ++k)
				if (!x[r[k].first].is_zero())
					acc += r[k].second * x[r[k].first];
			x[it->first] = -(acc / r.front().second);
		}
		basis.push_back(normalize_primitive(std::move(x)));
	}
	return basis;
}

std::vector<std::vector<Rational>>
nullspace(std::vector<std::vector<Rational>> const &rows, int columns)
{
	RowEchelon e(columns);
	for (auto const &r : rows)
		e.add_dense(r);
	return e.nullspace();
}

int rank(std::vector<std::vector<Rational>> const &rows, int columns)
{
	RowEchelon e(columns);
	for (auto const &r : rows)
		e.add_dense(r);
	return e.rank();
}

std::optional<std::vector<Rational>>
solve_columns(std::vector<std::vector<Rational>> const &columns,
              std::vector<Rational> const &target)
{
	int unknowns = static_cast<int>(columns.size());
	int rows = static_cast<int>(target.size());
	// Unknowns first, right-hand side in the last column.
	RowEchelon e(unknowns + 1);
	for (int r = 0; r < rows; ++r)
	{
		SparseRow row;
		for (int c = 0; c < unknowns; ++c)
		{
			if (static_cast<int>(columns[c].size()) != rows)
				throw std::invalid_argument("solve_columns: ragged columns");
			if (!columns[c][r].is_zero())
				row.emplace_back(c, columns[c][r]);
		}
		if (!target[r].is_zero())
			row.emplace_back(unknowns, target[r]);
		e.add(std::move(row));
	}
	if (e.is_pivot(unknowns))
		return std::nullopt;
	// Particular solution: the kernel vector of [A | b] whose last entry is
	// nonzero, with every other free column set to zero.
	auto kernel = e.nullspace();
	for (auto const &k : kernel)
	{
		if (k[unknowns].is_zero())
			continue;
		std::vector<Rational> x(unknowns);
		for (int c = 0; c < unknowns; ++c)
			x[c] = -(k[c] / k[unknowns]);
		return x;
	}
	return std::vector<Rational>(unknowns);
}

std::vector<Rational> normalize_primitive(std::vector<Rational> v)
{
	SparseRow s = to_sparse(v);
	make_primitive(s);
	std::fill(v.begin(), v.end(), Rational());
	for (auto const &[c, x] : s)
		v[c] = x;
	return v;
}

} // namespace carnot
