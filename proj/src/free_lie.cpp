#include "carnot/free_lie.hpp"

#include <algorithm>
#include <cstdlib>
#include <fmt/format.h>
#include <map>

namespace carnot {

int default_max_dim()
{
	if (char const *env = std::getenv("CARNOT_MAX_DIM"))
	{
		int v = std::atoi(env);
		if (v > 0)
			return v;
	}
	return 256;
}

namespace {

int mobius(int n)
{
	int result = 1;
	for (int p = 2; p * p <= n; ++p)
	{
		if (n % p != 0)
			continue;
		n /= p;
		if (n % p == 0)
			return 0;
		result = -result;
	}
	if (n > 1)
		result = -result;
	return result;
}

long long ipow(long long b, int e)
{
	long long r = 1;
	while (e-- > 0)
		r *= b;
	return r;
}

/// Reduction of brackets of Hall words, memoized on serial pairs.
class HallReducer
{
public:
	HallReducer(std::vector<HallWord> const &words, int step)
	    : words_(words), step_(step)
	{
		for (auto const &w : words_)
			if (!w.is_generator())
				lookup_[{w.left, w.right}] = w.serial;
	}

	Element const &bracket(int a, int b)
	{
		auto key = std::make_pair(a, b);
		if (auto it = memo_.find(key); it != memo_.end())
			return it->second;
		Element result = compute(a, b);
		return memo_.emplace(key, std::move(result)).first->second;
	}

	Element bracket(Element const &x, Element const &y)
	{
		Element out;
		for (auto const &[a, ca] : x)
			for (auto const &[b, cb] : y)
				for (auto const &[k, c] : bracket(a, b))
					out[k] += ca * cb * c;
		std::erase_if(out, [](auto const &kv) { return kv.second.is_zero(); });
		return out;
	}

private:
	HallWord const &word(int serial) const { return words_[serial - 1]; }

	Element compute(int a, int b)
	{
		if (a == b || word(a).degree + word(b).degree > step_)
			return {};
		if (a < b)
		{
			Element r = bracket(b, a);
			for (auto &[k, c] : r)
				c = -c;
			return r;
		}
		HallWord const &wa = word(a);
		if (wa.is_generator() || wa.right <= b)
		{
			auto it = lookup_.find({a, b});
			if (it == lookup_.end())
				throw StructureError(
				    fmt::format("missing Hall word [{}, {}]", a, b));
			return {{it->second, Rational(1)}};
		}
		// [[a', a''], b] = [[a', b], a''] + [a', [a'', b]]
		Element first = bracket(bracket(Element{{wa.left, Rational(1)}},
		                                Element{{b, Rational(1)}}),
		                        Element{{wa.right, Rational(1)}});
		Element second = bracket(Element{{wa.left, Rational(1)}},
		                         bracket(wa.right, b));
		for (auto const &[k, c] : second)
			first[k] += c;
		std::erase_if(first, [](auto const &kv) { return kv.second.is_zero(); });
		return first;
	}

	std::vector<HallWord> const &words_;
	int step_;
	std::map<std::pair<int, int>, int> lookup_;
	std::map<std::pair<int, int>, Element> memo_;
};

std::vector<HallWord> hall_words(int r, int s, int max_dim)
{
	long long total = 0;
	for (int m = 1; m <= s; ++m)
	{
		total += witt_dimension(r, m);
		if (total > max_dim)
			throw ResourceError(fmt::format(
			    "free({}, {}) has dimension above the cap {}", r, s, max_dim));
	}
	std::vector<HallWord> words;
	for (int g = 1; g <= r; ++g)
		words.push_back({g, 1, 0, 0});
	std::vector<std::vector<int>> by_degree(s + 1);
	for (int g = 1; g <= r; ++g)
		by_degree[1].push_back(g);
	for (int m = 2; m <= s; ++m)
	{
		// Right factor degree ascending, then (u, v) lexicographically.
		for (int dv = 1; dv < m; ++dv)
		{
			int du = m - dv;
			std::vector<std::pair<int, int>> found;
			for (int u : by_degree[du])
				for (int v : by_degree[dv])
				{
					if (u <= v)
						continue;
					HallWord const &wu = words[u - 1];
					if (!wu.is_generator() && wu.right > v)
						continue;
					found.emplace_back(u, v);
				}
			std::sort(found.begin(), found.end());
			for (auto [u, v] : found)
			{
				int serial = static_cast<int>(words.size()) + 1;
				words.push_back({serial, m, u, v});
				by_degree[m].push_back(serial);
			}
		}
	}
	return words;
}

} // namespace

long long witt_dimension(int r, int m)
{
	long long sum = 0;
	for (int d = 1; d <= m; ++d)
		if (m % d == 0)
			sum += mobius(d) * ipow(r, m / d);
	return sum / m;
}

FreeLieAlgebra build_free(int r, int s, int max_dim)
{
	if (r < 2)
		throw StructureError("free Lie algebra needs rank >= 2");
	if (s < 1)
		throw StructureError("free Lie algebra needs step >= 1");
	FreeLieAlgebra f;
	f.words = hall_words(r, s, max_dim);
	std::vector<int> degrees;
	for (auto const &w : f.words)
		degrees.push_back(w.degree);
	GradedLieAlgebra::Builder b(degrees);
	HallReducer red(f.words, s);
	int n = static_cast<int>(f.words.size());
	for (int i = 1; i <= n; ++i)
		for (int j = 1; j <= n; ++j)
		{
			Element const &e = red.bracket(i, j);
			if (!e.empty())
				b.set(i, j, e);
		}
	f.algebra = b.build();
	return f;
}

std::string FreeLieAlgebra::expand(int k) const
{
	HallWord const &w = words.at(k - 1);
	if (w.is_generator())
		return fmt::format("X{}", k);
	return fmt::format("[{},{}]", expand(w.left), expand(w.right));
}

std::string FreeLieAlgebra::relation(int k) const
{
	HallWord const &w = words.at(k - 1);
	if (w.is_generator())
		return fmt::format("X{}", k);
	return fmt::format("X{} = [X{},X{}]", k, w.left, w.right);
}

std::shared_ptr<const BracketTree> BracketTree::leaf(int g)
{
	auto t = std::make_shared<BracketTree>();
	t->generator = g;
	return t;
}

std::shared_ptr<const BracketTree>
BracketTree::node(std::shared_ptr<const BracketTree> l,
                  std::shared_ptr<const BracketTree> r)
{
	auto t = std::make_shared<BracketTree>();
	t->left = std::move(l);
	t->right = std::move(r);
	return t;
}

int BracketTree::degree() const
{
	return generator ? 1 : left->degree() + right->degree();
}

Element reduce_to_hall(FreeLieAlgebra const &f, BracketTree const &tree)
{
	if (tree.generator)
	{
		if (tree.generator < 1 || tree.generator > f.algebra.rank())
			throw StructureError(
			    fmt::format("generator {} out of range", tree.generator));
		return {{tree.generator, Rational(1)}};
	}
	return bracket(f.algebra, reduce_to_hall(f, *tree.left),
	               reduce_to_hall(f, *tree.right));
}

} // namespace carnot
