#include "carnot/io.hpp"

#include "json.hpp"

#include <charconv>
#include <fmt/format.h>
#include <set>

namespace carnot {

using nlohmann::ordered_json;
using json = nlohmann::json;

ParseError::ParseError(std::string const &what, int line, int column)
    : std::runtime_error(line > 0 ? fmt::format("{}:{}: {}", line, column, what) : what),
      line_(line), column_(column)
{
}

namespace {

std::pair<int, int> line_column(std::string_view text, std::size_t offset)
{
	int line = 1, column = 1;
	for (std::size_t i = 0; i < offset && i < text.size(); ++i)
	{
		if (text[i] == '\n')
		{
			++line;
			column = 1;
		}
		else
			++column;
	}
	return {line, column};
}

Rational rational_field(json const &j, char const *where)
{
	try
	{
		if (j.is_string())
			return Rational::parse(j.get<std::string>());
		if (j.is_number_integer())
			return Rational(j.get<std::int64_t>());
	}
	catch (std::invalid_argument const &e)
	{
		throw ParseError(fmt::format("{}: {}", where, e.what()));
	}
	throw ParseError(fmt::format("{}: expected a rational string \"p/q\"", where));
}

json const &field(json const &obj, char const *key, char const *where)
{
	if (!obj.is_object() || !obj.contains(key))
		throw ParseError(fmt::format("{}: missing \"{}\"", where, key));
	return obj.at(key);
}

int int_field(json const &obj, char const *key, char const *where)
{
	auto const &v = field(obj, key, where);
	if (!v.is_number_integer())
		throw ParseError(fmt::format("{}: \"{}\" must be an integer", where, key));
	return v.get<int>();
}

Element parse_terms(json const &terms, std::string const &where)
{
	if (!terms.is_array())
		throw ParseError(where + ": \"terms\" must be an array");
	Element e;
	for (std::size_t t = 0; t < terms.size(); ++t)
	{
		auto w = fmt::format("{}.terms[{}]", where, t);
		int k = int_field(terms[t], "k", w.c_str());
		e[k] += rational_field(field(terms[t], "c", w.c_str()), w.c_str());
		if (e[k].is_zero())
			e.erase(k);
	}
	return e;
}

ordered_json dump_terms(Element const &e)
{
	ordered_json terms = ordered_json::array();
	for (auto const &[k, c] : e)
	{
		ordered_json t;
		t["k"] = k;
		t["c"] = c.str();
		terms.push_back(t);
	}
	return terms;
}

} // namespace

AlgebraFile parse_algebra(std::string_view text)
{
	json doc;
	try
	{
		doc = json::parse(text.begin(), text.end());
	}
	catch (json::parse_error const &e)
	{
		auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
		std::string msg = e.what();
		if (auto p = msg.find(": ", msg.find("column")); p != std::string::npos)
			msg = msg.substr(p + 2);
		throw ParseError(msg, line, column);
	}
	if (!doc.is_object())
		throw ParseError("algebra document must be a JSON object", 1, 1);

	int n = int_field(doc, "dim", "algebra");
	auto const &deg = field(doc, "degrees", "algebra");
	if (!deg.is_array() || static_cast<int>(deg.size()) != n)
		throw ParseError(fmt::format("algebra: \"degrees\" must list {} entries", n));
	std::vector<int> degrees;
	for (auto const &d : deg)
	{
		if (!d.is_number_integer())
			throw ParseError("algebra: degrees must be integers");
		degrees.push_back(d.get<int>());
	}

	AlgebraFile out;
	auto const &brackets = field(doc, "brackets", "algebra");
	if (!brackets.is_array())
		throw ParseError("algebra: \"brackets\" must be an array");
	std::map<std::pair<int, int>, Element> table;
	for (std::size_t b = 0; b < brackets.size(); ++b)
	{
		auto w = fmt::format("brackets[{}]", b);
		int i = int_field(brackets[b], "i", w.c_str());
		int j = int_field(brackets[b], "j", w.c_str());
		if (!table.emplace(std::pair(i, j), parse_terms(field(brackets[b], "terms", w.c_str()), w))
		         .second)
			throw ParseError(fmt::format("{}: duplicate bracket [X{},X{}]", w, i, j));
	}

	std::vector<std::pair<int, int>> strata; // (degree, count)
	if (doc.contains("prolongation_basis"))
	{
		auto const &pb = doc.at("prolongation_basis");
		if (!pb.is_array())
			throw ParseError("prolongation_basis must be an array");
		for (std::size_t s = 0; s < pb.size(); ++s)
		{
			auto w = fmt::format("prolongation_basis[{}]", s);
			int k = int_field(pb[s], "degree", w.c_str());
			auto const &maps = field(pb[s], "maps", w.c_str());
			if (!maps.is_array())
				throw ParseError(w + ": \"maps\" must be an array");
			auto &list = out.prolongation_basis[k];
			for (std::size_t m = 0; m < maps.size(); ++m)
			{
				auto wm = fmt::format("{}.maps[{}]", w, m);
				if (!maps[m].is_array())
					throw ParseError(wm + ": a map is an array of images");
				LinearMap phi;
				for (std::size_t e = 0; e < maps[m].size(); ++e)
				{
					auto we = fmt::format("{}[{}]", wm, e);
					int src = int_field(maps[m][e], "source", we.c_str());
					phi[src] = parse_terms(field(maps[m][e], "terms", we.c_str()), we);
				}
				list.push_back(std::move(phi));
			}
		}
	}

	try
	{
		GradedLieAlgebra::Builder builder(degrees);
		for (auto const &[key, v] : table)
		{
			builder.set(key.first, key.second, v);
			if (!table.count({key.second, key.first}) && key.first != key.second)
			{
				Element neg;
				for (auto const &[k, c] : v)
					neg[k] = -c;
				builder.set(key.second, key.first, neg);
			}
		}
		out.algebra = builder.build();
	}
	catch (StructureError const &e)
	{
		throw ParseError(std::string("algebra: ") + e.what());
	}
	if (doc.contains("rank") && int_field(doc, "rank", "algebra") != out.algebra.rank())
		throw ParseError(fmt::format("algebra: \"rank\" is {} but the degrees give {}",
		                             doc.at("rank").get<int>(), out.algebra.rank()));
	if (doc.contains("step") && int_field(doc, "step", "algebra") != out.algebra.step())
		throw ParseError(fmt::format("algebra: \"step\" is {} but the degrees give {}",
		                             doc.at("step").get<int>(), out.algebra.step()));
	return out;
}

std::string dump_algebra(GradedLieAlgebra const &a,
                         std::map<int, std::vector<LinearMap>> const &basis)
{
	ordered_json doc;
	doc["dim"] = a.dim();
	doc["rank"] = a.rank();
	doc["step"] = a.step();
	auto d = a.positive_degrees();
	doc["degrees"] = std::vector<int>(d.begin(), d.end());
	ordered_json brackets = ordered_json::array();
	for (auto const &e : a.entries())
	{
		// Positive part only, each pair once with i > j.
		if (e.i < 1 || e.j < 1 || e.i <= e.j)
			continue;
		Element v(e.terms.begin(), e.terms.end());
		ordered_json b;
		b["i"] = e.i;
		b["j"] = e.j;
		b["terms"] = dump_terms(v);
		brackets.push_back(b);
	}
	doc["brackets"] = brackets;
	if (!basis.empty())
	{
		ordered_json pb = ordered_json::array();
		for (auto it = basis.rbegin(); it != basis.rend(); ++it)
		{
			ordered_json maps = ordered_json::array();
			for (auto const &phi : it->second)
			{
				ordered_json images = ordered_json::array();
				for (auto const &[src, img] : phi)
					if (!img.empty())
					{
						ordered_json im;
						im["source"] = src;
						im["terms"] = dump_terms(img);
						images.push_back(im);
					}
				maps.push_back(images);
			}
			ordered_json s;
			s["degree"] = it->first;
			s["maps"] = maps;
			pb.push_back(s);
		}
		doc["prolongation_basis"] = pb;
	}
	return doc.dump(2) + "\n";
}

GradedLieAlgebra load_algebra(AlgebraFile const &file, bool prolong_anyway, int max_depth)
{
	if (file.prolongation_basis.empty() && !prolong_anyway)
		return file.algebra;
	return prolong(file.algebra, max_depth, file.prolongation_basis).algebra;
}

std::map<int, std::vector<LinearMap>> strata_basis(ProlongedAlgebra const &p)
{
	std::map<int, std::vector<LinearMap>> out;
	for (auto const &s : p.strata)
		if (s.dim() > 0)
			out[s.degree] = s.basis;
	return out;
}

CurveFile parse_curve_csv(std::string_view text, int n)
{
	CurveFile out;
	std::vector<std::vector<Rational>> exact;
	bool all_exact = true;
	int line_no = 0;
	bool header_seen = false;
	std::size_t columns = 0;
	std::size_t pos = 0;
	while (pos < text.size())
	{
		std::size_t end = text.find('\n', pos);
		if (end == std::string_view::npos)
			end = text.size();
		std::string_view line = text.substr(pos, end - pos);
		pos = end + 1;
		++line_no;
		if (!line.empty() && line.back() == '\r')
			line.remove_suffix(1);
		if (line.empty())
			continue;
		std::vector<std::pair<std::string_view, int>> cells; // (text, column)
		std::size_t c = 0;
		while (true)
		{
			std::size_t comma = line.find(',', c);
			cells.emplace_back(line.substr(c, comma == std::string_view::npos ? line.size() - c
			                                                                   : comma - c),
			                   static_cast<int>(c) + 1);
			if (comma == std::string_view::npos)
				break;
			c = comma + 1;
		}
		if (!header_seen)
		{
			header_seen = true;
			columns = cells.size();
			if (cells.front().first != "t")
				throw ParseError("header must start with \"t\"", line_no, 1);
			if (columns != static_cast<std::size_t>(n) + 1 &&
			    columns != 2 * static_cast<std::size_t>(n) + 1)
				throw ParseError(fmt::format("expected {} or {} columns, found {}", n + 1,
				                             2 * n + 1, columns),
				                 line_no, 1);
			continue;
		}
		if (cells.size() != columns)
			throw ParseError(fmt::format("expected {} columns, found {}", columns, cells.size()),
			                 line_no, cells.back().second);
		std::vector<double> row;
		std::vector<Rational> rrow;
		for (auto [cell, col] : cells)
		{
			std::string s(cell);
			while (!s.empty() && s.front() == ' ')
				s.erase(0, 1);
			// Rationals such as 1/4 are accepted alongside decimals.
			std::optional<Rational> exact_value;
			try
			{
				exact_value = Rational::parse(s);
			}
			catch (std::exception const &)
			{
			}
			double v = 0.0;
			if (exact_value)
				v = exact_value->to_double();
			else
			{
				auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
				if (ec != std::errc() || ptr != s.data() + s.size())
					throw ParseError(fmt::format("not a number: '{}'", cell), line_no, col);
				all_exact = false;
			}
			row.push_back(v);
			if (all_exact)
				rrow.push_back(*exact_value);
		}
		if (!out.curve.times.empty() && row[0] <= out.curve.times.back())
			throw ParseError("times must be strictly increasing", line_no, 1);
		out.curve.times.push_back(row[0]);
		out.curve.gamma.emplace_back(row.begin() + 1, row.begin() + 1 + n);
		if (columns > static_cast<std::size_t>(n) + 1)
			out.curve.lambda.emplace_back(row.begin() + 1 + n, row.end());
		if (all_exact)
			exact.emplace_back(rrow.begin() + 1, rrow.begin() + 1 + n);
	}
	if (!header_seen)
		throw ParseError("empty curve file", 1, 1);
	if (all_exact)
		out.exact = std::move(exact);
	return out;
}

std::string fnv1a64(std::string_view bytes)
{
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for (unsigned char c : bytes)
	{
		h ^= c;
		h *= 0x100000001b3ULL;
	}
	return fmt::format("{:016x}", h);
}

} // namespace carnot
