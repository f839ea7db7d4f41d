#include "carnot/prolongation.hpp"
#include "carnot/linalg.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace carnot {

namespace {

/// Column layout of the unknown blocks phi: g_i -> g_{i+k}.
struct Layout
{
	std::map<std::pair<int, int>, int> column; ///< (source, target) -> col
	std::vector<std::pair<int, int>> entry;    ///< col -> (source, target)

	Layout(GradedLieAlgebra const &a, int k)
	{
		std::vector<int> sources;
		for (int i = 1; i <= a.dim(); ++i)
			if (a.degree(i) >= 2)
				sources.push_back(i);
		for (int i = 1; i <= a.dim(); ++i)
			if (a.degree(i) == 1)
				sources.push_back(i);
		for (int i : sources)
			for (int t : a.indices_of_degree(a.degree(i) + k))
			{
				column[{i, t}] = static_cast<int>(entry.size());
				entry.emplace_back(i, t);
			}
	}

	int size() const { return static_cast<int>(entry.size()); }

	LinearMap to_map(std::vector<Rational> const &v) const
	{
		LinearMap m;
		for (int c = 0; c < size(); ++c)
			if (!v[c].is_zero())
				m[entry[c].first][entry[c].second] = v[c];
		return m;
	}

	std::vector<Rational> to_vector(LinearMap const &m) const
	{
		std::vector<Rational> v(size());
		for (auto const &[i, image] : m)
			for (auto const &[t, c] : image)
			{
				auto it = column.find({i, t});
				if (it == column.end())
				{
					if (!c.is_zero())
						throw StructureError(fmt::format(
						    "map sends X{} to X{} outside the expected degree", i, t));
					continue;
				}
				v[it->second] = c;
			}
		return v;
	}
};

int lowest_degree(ProlongedAlgebra const &p)
{
	return p.strata.empty() ? 1 : p.strata.back().degree;
}

/// Coefficients of the unique combination of `basis` reproducing `target`.
/// With `partial`, only g_1 sources and sources listed in `target` are
/// compared.
std::optional<std::vector<Rational>>
decompose(GradedLieAlgebra const &a, Layout const &layout,
          std::vector<LinearMap> const &basis, LinearMap const &target,
          bool partial)
{
	std::vector<int> rows;
	for (int c = 0; c < layout.size(); ++c)
	{
		int source = layout.entry[c].first;
		if (!partial || a.degree(source) == 1 || target.count(source))
			rows.push_back(c);
	}
	std::vector<std::vector<Rational>> columns;
	for (auto const &b : basis)
	{
		auto v = layout.to_vector(b);
		std::vector<Rational> col;
		for (int r : rows)
			col.push_back(v[r]);
		columns.push_back(std::move(col));
	}
	auto tv = layout.to_vector(target);
	std::vector<Rational> rhs;
	for (int r : rows)
		rhs.push_back(tv[r]);
	if (rank(columns, static_cast<int>(rows.size())) !=
	    static_cast<int>(basis.size()))
		return std::nullopt;
	return solve_columns(columns, rhs);
}

} // namespace

std::vector<int> ProlongedAlgebra::dimensions() const
{
	std::vector<int> d;
	for (auto const &s : strata)
		d.push_back(s.dim());
	return d;
}

ProlongedAlgebra start_prolongation(GradedLieAlgebra const &a)
{
	if (a.min_index() < 1)
		throw StructureError("algebra already carries prolongation indices");
	ProlongedAlgebra p;
	p.algebra = a;
	return p;
}

ProlongationStratum compute_stratum(ProlongedAlgebra const &p, int k)
{
	GradedLieAlgebra const &a = p.algebra;
	if (k > 0 || k != lowest_degree(p) - 1 ||
	    (!p.strata.empty() && p.strata.back().dim() == 0))
		throw StructureError(
		    fmt::format("stratum {} requested out of order", k));
	Layout layout(a, k);
	RowEchelon echelon(layout.size());
	int n = a.dim(), s = a.step();
	for (int x = 1; x <= n; ++x)
		for (int y = x + 1; y <= n; ++y)
		{
			int target_degree = a.degree(x) + a.degree(y) + k;
			if (target_degree > s)
				continue;
			// phi[X,Y] - [phi X, Y] - [X, phi Y] = 0, one row per target.
			std::map<int, std::map<int, Rational>> rows;
			for (auto const &t : a.row(a.slot(x), a.slot(y)))
			{
				int c = a.index_at(t.slot);
				for (int u : a.indices_of_degree(target_degree))
					rows[u][layout.column.at({c, u})] += t.c;
			}
			for (int u : a.indices_of_degree(a.degree(x) + k))
				for (auto const &t : a.row(a.slot(u), a.slot(y)))
					rows[a.index_at(t.slot)][layout.column.at({x, u})] -= t.c;
			for (int u : a.indices_of_degree(a.degree(y) + k))
				for (auto const &t : a.row(a.slot(x), a.slot(u)))
					rows[a.index_at(t.slot)][layout.column.at({y, u})] -= t.c;
			for (auto const &[target, entries] : rows)
			{
				SparseRow r;
				for (auto const &[col, c] : entries)
					if (!c.is_zero())
						r.emplace_back(col, c);
				if (!r.empty())
					echelon.add(std::move(r));
			}
		}
	ProlongationStratum stratum;
	stratum.degree = k;
	for (auto const &v : echelon.nullspace())
		stratum.basis.push_back(layout.to_map(v));
	return stratum;
}

ProlongedAlgebra
extend_structure_constants(ProlongedAlgebra p, ProlongationStratum stratum,
                           std::optional<std::vector<LinearMap>> chosen)
{
	int k = stratum.degree;
	if (k != lowest_degree(p) - 1)
		throw StructureError(fmt::format("stratum {} attached out of order", k));
	if (stratum.dim() == 0)
	{
		if (chosen && !chosen->empty())
			throw StructureError("chosen basis given for a zero stratum");
		GradedLieAlgebra::Builder b(p.algebra);
		b.set_truncated(false);
		p.algebra = b.build();
		p.strata.push_back(std::move(stratum));
		p.terminated = true;
		return p;
	}
	Layout layout(p.algebra, k);
	if (chosen)
	{
		if (static_cast<int>(chosen->size()) != stratum.dim())
			throw StructureError(fmt::format(
			    "chosen basis has {} elements but g_{} has dimension {}",
			    chosen->size(), k, stratum.dim()));
		std::vector<LinearMap> full;
		for (auto const &c : *chosen)
		{
			auto mu = decompose(p.algebra, layout, stratum.basis, c, true);
			if (!mu)
				throw StructureError(fmt::format(
				    "chosen element of g_{} is not a derivation or does not "
				    "determine one",
				    k));
			std::vector<Rational> v(layout.size());
			for (int m = 0; m < stratum.dim(); ++m)
			{
				auto bv = layout.to_vector(stratum.basis[m]);
				for (int col = 0; col < layout.size(); ++col)
					v[col] += (*mu)[m] * bv[col];
			}
			full.push_back(layout.to_map(v));
		}
		std::vector<std::vector<Rational>> rows;
		for (auto const &f : full)
			rows.push_back(layout.to_vector(f));
		if (rank(rows, layout.size()) != stratum.dim())
			throw StructureError(
			    fmt::format("chosen basis does not span g_{}", k));
		stratum.basis = std::move(full);
	}

	GradedLieAlgebra::Builder b(p.algebra);
	stratum.ids = b.add_prolongation(k, stratum.dim());
	b.set_truncated(true);
	for (int m = 0; m < stratum.dim(); ++m)
		for (auto const &[i, image] : stratum.basis[m])
			b.set_antisymmetric(stratum.ids[m], i, image);
	GradedLieAlgebra current = b.build();

	// [phi, psi](X) = [[phi, X], psi] + [phi, [psi, X]] for pairs of
	// prolongation elements whose degrees add up to k.
	std::vector<int> prol;
	for (int id = current.min_index(); id <= 0; ++id)
		prol.push_back(id);
	for (std::size_t x = 0; x < prol.size(); ++x)
		for (std::size_t y = x + 1; y < prol.size(); ++y)
		{
			int phi = prol[x], psi = prol[y];
			if (current.degree(phi) + current.degree(psi) != k)
				continue;
			LinearMap image;
			Element ephi{{phi, Rational(1)}}, epsi{{psi, Rational(1)}};
			for (int i = 1; i <= current.dim(); ++i)
			{
				Element ex{{i, Rational(1)}};
				Element v = bracket(current, bracket(current, ephi, ex), epsi);
				for (auto const &[t, c] :
				     bracket(current, ephi, bracket(current, epsi, ex)))
					v[t] += c;
				std::erase_if(v, [](auto const &kv) { return kv.second.is_zero(); });
				if (!v.empty())
					image[i] = std::move(v);
			}
			auto mu = decompose(current, layout, stratum.basis, image, false);
			if (!mu)
				throw StructureError(fmt::format(
				    "[X{}, X{}] does not lie in g_{}", phi, psi, k));
			Element value;
			for (int m = 0; m < stratum.dim(); ++m)
				if (!(*mu)[m].is_zero())
					value[stratum.ids[m]] = (*mu)[m];
			b.set_antisymmetric(phi, psi, value);
		}
	p.algebra = b.build();
	p.strata.push_back(std::move(stratum));
	return p;
}

ProlongedAlgebra prolong(GradedLieAlgebra const &a, int max_depth,
                         std::map<int, std::vector<LinearMap>> const &overrides)
{
	if (max_depth < 0)
		throw StructureError("max depth must be nonnegative");
	for (auto const &[degree, basis] : overrides)
		if (degree > 0 || degree < -max_depth)
			throw StructureError(
			    fmt::format("override for degree {} is out of range", degree));
	ProlongedAlgebra p = start_prolongation(a);
	for (int k = 0; k >= -max_depth; --k)
	{
		ProlongationStratum s = compute_stratum(p, k);
		std::optional<std::vector<LinearMap>> chosen;
		if (auto it = overrides.find(k); it != overrides.end())
			chosen = it->second;
		bool zero = s.dim() == 0;
		p = extend_structure_constants(std::move(p), std::move(s), chosen);
		if (zero)
			break;
	}
	return p;
}

} // namespace carnot
