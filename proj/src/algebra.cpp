#include "carnot/algebra.hpp"
#include "carnot/linalg.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace carnot {

// ---------------------------------------------------------------- MultiIndex

int MultiIndex::length() const
{
	int s = 0;
	for (int a : alpha)
		s += a;
	return s;
}

Rational MultiIndex::factorial() const
{
	Rational f(1);
	for (int a : alpha)
		f *= carnot::factorial(a);
	return f;
}

int MultiIndex::weighted_degree(std::span<const int> weights) const
{
	if (weights.size() != alpha.size())
		throw StructureError("multi-index length does not match weights");
	int d = 0;
	for (std::size_t j = 0; j < alpha.size(); ++j)
		d += alpha[j] * weights[j];
	return d;
}

MultiIndex MultiIndex::unit(int n, int index)
{
	MultiIndex m(n);
	m.alpha.at(index - 1) = 1;
	return m;
}

// ---------------------------------------------------------- GradedLieAlgebra

int GradedLieAlgebra::slot(int index) const
{
	if (!contains(index))
		throw StructureError(fmt::format("unknown basis index {}", index));
	return index - min_index();
}

std::vector<int> GradedLieAlgebra::indices_of_degree(int d) const
{
	std::vector<int> out;
	for (int s = 0; s < size(); ++s)
		if (degrees_[s] == d)
			out.push_back(ids_[s]);
	return out;
}

Rational GradedLieAlgebra::structure_constant(int i, int j, int k) const
{
	int sk = slot(k);
	for (auto const &t : row(slot(i), slot(j)))
		if (t.slot == sk)
			return t.c;
	return Rational();
}

Element GradedLieAlgebra::bracket_basis(int i, int j) const
{
	Element e;
	for (auto const &t : row(slot(i), slot(j)))
		e[ids_[t.slot]] = t.c;
	return e;
}

GradedLieAlgebra::Dense GradedLieAlgebra::bracket_dense(Dense const &u,
                                                        Dense const &w) const
{
	Dense out(size());
	for (int a = 0; a < size(); ++a)
	{
		if (u[a].is_zero())
			continue;
		for (int b = 0; b < size(); ++b)
		{
			if (w[b].is_zero())
				continue;
			auto r = row(a, b);
			if (r.empty())
				continue;
			Rational f = u[a] * w[b];
			for (auto const &t : r)
				out[t.slot] += f * t.c;
		}
	}
	return out;
}

GradedLieAlgebra::Dense GradedLieAlgebra::bracket_with_basis(Dense const &u,
                                                             int slot_j) const
{
	Dense out(size());
	for (int a = 0; a < size(); ++a)
	{
		if (u[a].is_zero())
			continue;
		for (auto const &t : row(a, slot_j))
			out[t.slot] += u[a] * t.c;
	}
	return out;
}

GradedLieAlgebra::Dense GradedLieAlgebra::to_dense(Element const &e) const
{
	Dense d(size());
	for (auto const &[k, c] : e)
		d[slot(k)] = c;
	return d;
}

Element GradedLieAlgebra::from_dense(Dense const &v) const
{
	Element e;
	for (int s = 0; s < size(); ++s)
		if (!v[s].is_zero())
			e[ids_[s]] = v[s];
	return e;
}

std::vector<GradedLieAlgebra::BracketEntry> GradedLieAlgebra::entries() const
{
	std::vector<BracketEntry> out;
	for (int a = 0; a < size(); ++a)
		for (int b = 0; b < size(); ++b)
		{
			auto r = row(a, b);
			if (r.empty())
				continue;
			BracketEntry e{ids_[a], ids_[b], {}};
			for (auto const &t : r)
				e.terms.emplace_back(ids_[t.slot], t.c);
			out.push_back(std::move(e));
		}
	return out;
}

// ------------------------------------------------------------------- Builder

GradedLieAlgebra::Builder::Builder(std::vector<int> positive_degrees)
    : degrees_(std::move(positive_degrees))
{
	for (int i = 1; i <= static_cast<int>(degrees_.size()); ++i)
		ids_.push_back(i);
}

GradedLieAlgebra::Builder::Builder(GradedLieAlgebra const &base)
    : ids_(base.ids_), degrees_(base.degrees_), truncated_(base.truncated_)
{
	for (auto const &e : base.entries())
	{
		Element v;
		for (auto const &[k, c] : e.terms)
			v[k] = c;
		table_[{e.i, e.j}] = std::move(v);
	}
}

std::vector<int> GradedLieAlgebra::Builder::add_prolongation(int degree,
                                                             int count)
{
	if (degree > 0)
		throw StructureError("prolongation strata have nonpositive degree");
	int low = ids_.empty() ? 1 : std::min(ids_.front(), 1);
	std::vector<int> fresh;
	for (int c = count; c >= 1; --c)
		fresh.push_back(low - c);
	ids_.insert(ids_.begin(), fresh.begin(), fresh.end());
	degrees_.insert(degrees_.begin(), static_cast<std::size_t>(count), degree);
	return fresh;
}

bool GradedLieAlgebra::Builder::contains(int index) const
{
	return std::find(ids_.begin(), ids_.end(), index) != ids_.end();
}

GradedLieAlgebra::Builder &
GradedLieAlgebra::Builder::set(int i, int j, Element const &value)
{
	if (!contains(i) || !contains(j))
		throw StructureError(fmt::format("bracket of unknown indices ({}, {})",
		                                 i, j));
	Element clean;
	for (auto const &[k, c] : value)
	{
		if (!contains(k))
			throw StructureError(
			    fmt::format("bracket [X{}, X{}] has unknown term X{}", i, j, k));
		if (!c.is_zero())
			clean[k] = c;
	}
	if (clean.empty())
		table_.erase({i, j});
	else
		table_[{i, j}] = std::move(clean);
	return *this;
}

GradedLieAlgebra::Builder &
GradedLieAlgebra::Builder::set_antisymmetric(int i, int j, Element const &value)
{
	set(i, j, value);
	Element neg;
	for (auto const &[k, c] : value)
		neg[k] = -c;
	return set(j, i, neg);
}

GradedLieAlgebra::Builder &GradedLieAlgebra::Builder::set_truncated(bool t)
{
	truncated_ = t;
	return *this;
}

GradedLieAlgebra GradedLieAlgebra::Builder::build() const
{
	GradedLieAlgebra a;
	a.ids_ = ids_;
	a.degrees_ = degrees_;
	a.truncated_ = truncated_;
	for (std::size_t s = 1; s < ids_.size(); ++s)
		if (ids_[s] != ids_[s - 1] + 1)
			throw StructureError("basis indices must be contiguous");
	if (!ids_.empty() && ids_.back() < 1)
		throw StructureError("algebra has no positive part");
	a.n_ = ids_.empty() ? 0 : ids_.back();
	for (int s = 0; s < a.size(); ++s)
	{
		if (ids_[s] >= 1)
		{
			if (degrees_[s] < 1)
				throw StructureError(fmt::format(
				    "basis vector X{} of g must have positive degree", ids_[s]));
			a.rank_ += degrees_[s] == 1;
			a.step_ = std::max(a.step_, degrees_[s]);
		}
		else if (degrees_[s] > 0)
			throw StructureError(fmt::format(
			    "prolongation vector X{} must have nonpositive degree", ids_[s]));
	}
	std::size_t N = ids_.size();
	a.table_.assign(N * N, {});
	int low = a.min_index();
	for (auto const &[key, value] : table_)
	{
		auto &cell = a.table_[static_cast<std::size_t>(key.first - low) * N +
		                      (key.second - low)];
		for (auto const &[k, c] : value)
			cell.push_back({k - low, c});
	}
	return a;
}

// ---------------------------------------------------------------- operations

Element bracket(GradedLieAlgebra const &a, Element const &u, Element const &w)
{
	Element out;
	for (auto const &[i, ci] : u)
	{
		int si = a.slot(i);
		for (auto const &[j, cj] : w)
		{
			int sj = a.slot(j);
			for (auto const &t : a.row(si, sj))
				out[a.index_at(t.slot)] += ci * cj * t.c;
		}
	}
	std::erase_if(out, [](auto const &kv) { return kv.second.is_zero(); });
	return out;
}

Element iterated_commutator(GradedLieAlgebra const &a, int i,
                            MultiIndex const &alpha)
{
	if (alpha.size() != a.dim())
		throw StructureError("multi-index length must equal dim(g)");
	auto cur = a.to_dense(Element{{i, Rational(1)}});
	for (int j = 1; j <= a.dim(); ++j)
		for (int rep = 0; rep < alpha[j]; ++rep)
			cur = a.bracket_with_basis(cur, a.slot(j));
	return a.from_dense(cur);
}

namespace {

bool all_zero(GradedLieAlgebra::Dense const &v)
{
	return std::all_of(v.begin(), v.end(),
	                   [](Rational const &x) { return x.is_zero(); });
}

int dense_degree(GradedLieAlgebra const &a, GradedLieAlgebra::Dense const &v)
{
	for (int s = 0; s < a.size(); ++s)
		if (!v[s].is_zero())
			return a.degree_at(s);
	return 0;
}

void visit_rec(
    GradedLieAlgebra const &a, GradedLieAlgebra::Dense const &cur, int degree,
    int first, std::vector<int> &seq,
    std::function<void(std::span<const int>, GradedLieAlgebra::Dense const &)>
        const &visit)
{
	visit(seq, cur);
	for (int j = first; j <= a.dim(); ++j)
	{
		if (degree + a.degree(j) > a.step())
			continue;
		auto next = a.bracket_with_basis(cur, a.slot(j));
		if (all_zero(next))
			continue;
		seq.push_back(j);
		visit_rec(a, next, degree + a.degree(j), j, seq, visit);
		seq.pop_back();
	}
}

} // namespace

void for_each_iterated_commutator(
    GradedLieAlgebra const &a, int i,
    std::function<void(std::span<const int>, GradedLieAlgebra::Dense const &)>
        const &visit)
{
	auto start = a.to_dense(Element{{i, Rational(1)}});
	std::vector<int> seq;
	visit_rec(a, start, dense_degree(a, start), 1, seq, visit);
}

std::vector<GeneralizedConstant>
generalized_structure_constants(GradedLieAlgebra const &a, int i)
{
	std::vector<GeneralizedConstant> out;
	for_each_iterated_commutator(
	    a, i, [&](std::span<const int> seq, GradedLieAlgebra::Dense const &v) {
		    MultiIndex alpha(a.dim());
		    for (int j : seq)
			    ++alpha.alpha[j - 1];
		    for (int s = 0; s < a.size(); ++s)
			    if (!v[s].is_zero())
				    out.push_back({alpha, a.index_at(s), v[s]});
	    });
	std::sort(out.begin(), out.end(), [](auto const &x, auto const &y) {
		if (x.alpha != y.alpha)
			return x.alpha < y.alpha;
		return x.k < y.k;
	});
	return out;
}

// ---------------------------------------------------------------- validation

std::string to_string(Violation::Kind kind)
{
	switch (kind)
	{
	case Violation::Kind::Ordering:
		return "ordering";
	case Violation::Kind::Antisymmetry:
		return "antisymmetry";
	case Violation::Kind::Grading:
		return "grading";
	case Violation::Kind::Jacobi:
		return "jacobi";
	case Violation::Kind::Generation:
		return "generation";
	}
	return "unknown";
}

std::vector<Violation> validate(GradedLieAlgebra const &a)
{
	using K = Violation::Kind;
	std::vector<Violation> out;
	int N = a.size();

	for (int s = 1; s < N; ++s)
	{
		bool same_range = (a.index_at(s) >= 1) == (a.index_at(s - 1) >= 1);
		if (same_range && a.degree_at(s) < a.degree_at(s - 1))
			out.push_back({K::Ordering,
			               fmt::format("X{} has degree {} below X{} of degree {}",
			                           a.index_at(s), a.degree_at(s),
			                           a.index_at(s - 1), a.degree_at(s - 1))});
	}

	for (int x = 0; x < N; ++x)
		for (int y = x; y < N; ++y)
		{
			auto pos = a.row(x, y);
			auto neg = a.row(y, x);
			GradedLieAlgebra::Dense sum(N);
			for (auto const &t : pos)
				sum[t.slot] += t.c;
			for (auto const &t : neg)
				sum[t.slot] += t.c;
			for (int k = 0; k < N; ++k)
				if (!sum[k].is_zero())
					out.push_back(
					    {K::Antisymmetry,
					     fmt::format("c[{},{}]^{} + c[{},{}]^{} = {} != 0",
					                 a.index_at(x), a.index_at(y), a.index_at(k),
					                 a.index_at(y), a.index_at(x), a.index_at(k),
					                 sum[k].str())});
			for (auto const &t : pos)
				if (a.degree_at(t.slot) != a.degree_at(x) + a.degree_at(y))
					out.push_back(
					    {K::Grading,
					     fmt::format("c[{},{}]^{} != 0 but d({}) != d({}) + d({})",
					                 a.index_at(x), a.index_at(y),
					                 a.index_at(t.slot), a.index_at(t.slot),
					                 a.index_at(x), a.index_at(y))});
		}

	// Jacobi: [[x,y],z] + [[y,z],x] + [[z,x],y] = 0 over all triples.
	int min_degree = N ? a.degree_at(0) : 0;
	auto unknown_below = [&](int d) { return a.truncated() && d < min_degree; };
	auto unit = [&](int s) {
		GradedLieAlgebra::Dense v(N);
		v[s] = Rational(1);
		return v;
	};
	for (int x = 0; x < N; ++x)
		for (int y = x + 1; y < N; ++y)
			for (int z = y + 1; z < N; ++z)
			{
				int dx = a.degree_at(x), dy = a.degree_at(y), dz = a.degree_at(z);
				if (unknown_below(dx + dy) || unknown_below(dy + dz) ||
				    unknown_below(dz + dx) || unknown_below(dx + dy + dz))
					continue;
				auto t1 = a.bracket_with_basis(a.bracket_with_basis(unit(x), y), z);
				auto t2 = a.bracket_with_basis(a.bracket_with_basis(unit(y), z), x);
				auto t3 = a.bracket_with_basis(a.bracket_with_basis(unit(z), x), y);
				for (int k = 0; k < N; ++k)
				{
					Rational v = t1[k] + t2[k] + t3[k];
					if (!v.is_zero())
					{
						out.push_back({K::Jacobi,
						               fmt::format("triple (X{}, X{}, X{}) fails at "
						                           "X{}: {}",
						                           a.index_at(x), a.index_at(y),
						                           a.index_at(z), a.index_at(k),
						                           v.str())});
						break;
					}
				}
			}

	// g_m = [g_{m-1}, g_1] for 2 <= m <= s.
	for (int m = 1; m <= a.step(); ++m)
	{
		auto layer = a.indices_of_degree(m);
		std::erase_if(layer, [](int i) { return i < 1; });
		if (layer.empty())
		{
			out.push_back({K::Generation, fmt::format("stratum g_{} is empty", m)});
			continue;
		}
		if (m == 1)
			continue;
		std::vector<std::vector<Rational>> rows;
		for (int i : a.indices_of_degree(m - 1))
		{
			if (i < 1)
				continue;
			for (int j : a.indices_of_degree(1))
			{
				if (j < 1)
					continue;
				std::vector<Rational> r(layer.size());
				for (auto const &t : a.row(a.slot(i), a.slot(j)))
				{
					int k = a.index_at(t.slot);
					auto it = std::find(layer.begin(), layer.end(), k);
					if (it != layer.end())
						r[it - layer.begin()] = t.c;
				}
				rows.push_back(std::move(r));
			}
		}
		int rk = rank(rows, static_cast<int>(layer.size()));
		if (rk != static_cast<int>(layer.size()))
			out.push_back({K::Generation,
			               fmt::format("[g_{}, g_1] spans {} of {} dimensions of g_{}",
			                           m - 1, rk, layer.size(), m)});
	}
	return out;
}

GradedLieAlgebra heisenberg()
{
	GradedLieAlgebra::Builder b({1, 1, 2});
	b.set_antisymmetric(2, 1, {{3, Rational(1)}});
	return b.build();
}

GradedLieAlgebra abelian(int r)
{
	return GradedLieAlgebra::Builder(std::vector<int>(r, 1)).build();
}

std::string to_string(Element const &e)
{
	std::string s;
	for (auto const &[k, c] : e)
	{
		if (c.is_zero())
			continue;
		Rational mag = abs(c);
		if (s.empty())
			s += c.sign() < 0 ? "-" : "";
		else
			s += c.sign() < 0 ? " - " : " + ";
		if (mag != Rational(1))
			s += mag.str() + "*";
		s += fmt::format("X{}", k);
	}
	return s.empty() ? "0" : s;
}

} // namespace carnot
