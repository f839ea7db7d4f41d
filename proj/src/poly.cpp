#include "carnot/poly.hpp"

#include <algorithm>
#include <cctype>
#include <fmt/format.h>
#include <ostream>
#include <set>
#include <stdexcept>

namespace carnot {

Weights make_weights(std::vector<int> w)
{
	return std::make_shared<const std::vector<int>>(std::move(w));
}

int Monomial::exponent(int var) const
{
	for (auto const &[v, e] : powers)
		if (v == var)
			return e;
	return 0;
}

bool MonomialOrder::operator()(Monomial const &a, Monomial const &b) const
{
	if (a.wdeg != b.wdeg)
		return a.wdeg < b.wdeg;
	std::size_t n = std::min(a.powers.size(), b.powers.size());
	for (std::size_t i = 0; i < n; ++i)
	{
		auto [va, ea] = a.powers[i];
		auto [vb, eb] = b.powers[i];
		if (va != vb)
			return va < vb;
		if (ea != eb)
			return ea > eb;
	}
	return a.powers.size() > b.powers.size();
}

namespace {

Monomial multiply(Monomial const &a, Monomial const &b)
{
	Monomial m;
	m.wdeg = a.wdeg + b.wdeg;
	m.powers.reserve(a.powers.size() + b.powers.size());
	std::size_t i = 0, j = 0;
	while (i < a.powers.size() || j < b.powers.size())
	{
		if (j == b.powers.size() ||
		    (i < a.powers.size() && a.powers[i].first < b.powers[j].first))
			m.powers.push_back(a.powers[i++]);
		else if (i == a.powers.size() || b.powers[j].first < a.powers[i].first)
			m.powers.push_back(b.powers[j++]);
		else
		{
			m.powers.emplace_back(a.powers[i].first,
			                      a.powers[i].second + b.powers[j].second);
			++i;
			++j;
		}
	}
	return m;
}

/// a / b when b divides a.
std::optional<Monomial> divide(Monomial const &a, Monomial const &b)
{
	Monomial m;
	m.wdeg = a.wdeg - b.wdeg;
	std::size_t j = 0;
	for (auto const &[v, e] : a.powers)
	{
		int sub = 0;
		if (j < b.powers.size() && b.powers[j].first == v)
			sub = b.powers[j++].second;
		else if (j < b.powers.size() && b.powers[j].first < v)
			return std::nullopt;
		if (sub > e)
			return std::nullopt;
		if (e > sub)
			m.powers.emplace_back(v, e - sub);
	}
	if (j != b.powers.size())
		return std::nullopt;
	return m;
}

Rational rational_pow(Rational const &x, int e)
{
	Rational r(1);
	for (int i = 0; i < e; ++i)
		r *= x;
	return r;
}

double int_pow(double x, int e)
{
	double r = 1.0;
	for (int i = 0; i < e; ++i)
		r *= x;
	return r;
}

} // namespace

Poly Poly::constant(Weights w, Rational c)
{
	Poly p(std::move(w));
	if (!c.is_zero())
		p.terms_.emplace(Monomial{}, c);
	return p;
}

Poly Poly::variable(Weights w, int var)
{
	Poly p(std::move(w));
	if (var < 1 || var > p.nvars())
		throw std::out_of_range(fmt::format("variable x{} out of range", var));
	p.terms_.emplace(Monomial{(*p.weights_)[var - 1], {{var, 1}}}, Rational(1));
	return p;
}

Poly Poly::monomial(Weights w, MultiIndex const &alpha, Rational c)
{
	Poly p(std::move(w));
	if (!c.is_zero())
		p.terms_.emplace(p.make_monomial(alpha), c);
	return p;
}

Monomial Poly::make_monomial(MultiIndex const &alpha) const
{
	if (alpha.size() != nvars())
		throw std::invalid_argument("multi-index length differs from ring size");
	Monomial m;
	for (int v = 1; v <= nvars(); ++v)
		if (alpha[v] > 0)
		{
			m.powers.emplace_back(v, alpha[v]);
			m.wdeg += alpha[v] * (*weights_)[v - 1];
		}
	return m;
}

Rational Poly::coefficient(Monomial const &m) const
{
	auto it = terms_.find(m);
	return it == terms_.end() ? Rational() : it->second;
}

Rational Poly::coefficient(MultiIndex const &alpha) const
{
	return coefficient(make_monomial(alpha));
}

void Poly::add_term(Monomial const &m, Rational const &c)
{
	if (c.is_zero())
		return;
	auto [it, inserted] = terms_.emplace(m, c);
	if (!inserted)
	{
		it->second += c;
		if (it->second.is_zero())
			terms_.erase(it);
	}
}

void Poly::check_ring(Poly const &o)
{
	if (!o.weights_)
		return;
	if (!weights_)
	{
		weights_ = o.weights_;
		return;
	}
	if (weights_ != o.weights_ && *weights_ != *o.weights_)
		throw std::invalid_argument("polynomials from different rings");
}

Poly Poly::operator-() const
{
	Poly r = *this;
	for (auto &[m, c] : r.terms_)
		c = -c;
	return r;
}

Poly &Poly::operator+=(Poly const &o)
{
	check_ring(o);
	for (auto const &[m, c] : o.terms_)
		add_term(m, c);
	return *this;
}

Poly &Poly::operator-=(Poly const &o)
{
	check_ring(o);
	for (auto const &[m, c] : o.terms_)
		add_term(m, -c);
	return *this;
}

Poly &Poly::operator*=(Rational const &c)
{
	if (c.is_zero())
		terms_.clear();
	else
		for (auto &[m, x] : terms_)
			x *= c;
	return *this;
}

Poly operator*(Poly const &a, Poly const &b)
{
	Poly r(a.weights_);
	r.check_ring(b);
	for (auto const &[ma, ca] : a.terms_)
		for (auto const &[mb, cb] : b.terms_)
			r.add_term(multiply(ma, mb), ca * cb);
	return r;
}

Poly Poly::derivative(int var) const
{
	Poly r(weights_);
	for (auto const &[m, c] : terms_)
	{
		int e = m.exponent(var);
		if (e == 0)
			continue;
		Monomial d = m;
		d.wdeg -= (*weights_)[var - 1];
		for (auto it = d.powers.begin(); it != d.powers.end(); ++it)
			if (it->first == var)
			{
				if (--it->second == 0)
					d.powers.erase(it);
				break;
			}
		r.add_term(d, c * Rational(e));
	}
	return r;
}

Poly Poly::antiderivative(int var) const
{
	Poly r(weights_);
	for (auto const &[m, c] : terms_)
	{
		Monomial d = m;
		d.wdeg += (*weights_)[var - 1];
		int e = 0;
		auto it = std::lower_bound(
		    d.powers.begin(), d.powers.end(), var,
		    [](auto const &p, int v) { return p.first < v; });
		if (it != d.powers.end() && it->first == var)
			e = ++it->second;
		else
		{
			d.powers.insert(it, {var, 1});
			e = 1;
		}
		r.add_term(d, c / Rational(e));
	}
	return r;
}

Poly Poly::substitute(int var, Rational const &value) const
{
	Poly r(weights_);
	for (auto const &[m, c] : terms_)
	{
		int e = m.exponent(var);
		if (e == 0)
		{
			r.add_term(m, c);
			continue;
		}
		Monomial d = m;
		d.wdeg -= e * (*weights_)[var - 1];
		std::erase_if(d.powers, [var](auto const &p) { return p.first == var; });
		r.add_term(d, c * rational_pow(value, e));
	}
	return r;
}

Poly Poly::divide_exact(Poly const &q) const
{
	if (q.is_zero())
		throw std::domain_error("polynomial division by zero");
	Poly rem = *this;
	Poly quot(weights_);
	quot.check_ring(q);
	auto const &[lq, cq] = *q.terms_.rbegin();
	while (!rem.is_zero())
	{
		auto const &[lr, cr] = *rem.terms_.rbegin();
		auto m = divide(lr, lq);
		if (!m)
			throw std::domain_error("polynomial division is not exact");
		Rational c = cr / cq;
		Monomial mono = *m;
		quot.add_term(mono, c);
		for (auto const &[mq, cqq] : q.terms_)
			rem.add_term(multiply(mono, mq), -(c * cqq));
	}
	return quot;
}

Rational Poly::evaluate(std::span<const Rational> x) const
{
	if (static_cast<int>(x.size()) != nvars() && !terms_.empty())
		throw std::invalid_argument("evaluation point has wrong dimension");
	Rational s;
	for (auto const &[m, c] : terms_)
	{
		Rational t = c;
		for (auto const &[v, e] : m.powers)
			t *= rational_pow(x[v - 1], e);
		s += t;
	}
	return s;
}

double Poly::evaluate(std::span<const double> x) const
{
	if (static_cast<int>(x.size()) != nvars() && !terms_.empty())
		throw std::invalid_argument("evaluation point has wrong dimension");
	double s = 0.0;
	for (auto const &[m, c] : terms_)
	{
		double t = c.to_double();
		for (auto const &[v, e] : m.powers)
			t *= int_pow(x[v - 1], e);
		s += t;
	}
	return s;
}

int Poly::weighted_degree() const
{
	return terms_.empty() ? zero_degree : terms_.rbegin()->first.wdeg;
}

bool Poly::is_homogeneous() const
{
	return terms_.empty() ||
	       terms_.begin()->first.wdeg == terms_.rbegin()->first.wdeg;
}

std::vector<int> Poly::variables() const
{
	std::set<int> vars;
	for (auto const &[m, c] : terms_)
		for (auto const &[v, e] : m.powers)
			vars.insert(v);
	return {vars.begin(), vars.end()};
}

std::string monomial_str(Monomial const &m, std::string_view var)
{
	std::string s;
	for (auto const &[v, e] : m.powers)
	{
		if (!s.empty())
			s += '*';
		s += fmt::format("{}{}", var, v);
		if (e > 1)
			s += fmt::format("^{}", e);
	}
	return s;
}

std::string Poly::str(std::string_view var) const
{
	if (terms_.empty())
		return "0";
	std::string s;
	for (auto const &[m, c] : terms_)
	{
		if (s.empty())
			s += c.sign() < 0 ? "-" : "";
		else
			s += c.sign() < 0 ? " - " : " + ";
		Rational mag = abs(c);
		if (m.powers.empty())
			s += mag.str();
		else if (mag == Rational(1))
			s += monomial_str(m, var);
		else
			s += mag.str() + "*" + monomial_str(m, var);
	}
	return s;
}

std::ostream &operator<<(std::ostream &os, Poly const &p)
{
	return os << p.str();
}

std::string PolyVectorField::str() const
{
	std::string s;
	for (std::size_t l = 0; l < coeffs.size(); ++l)
	{
		Poly const &p = coeffs[l];
		if (p.is_zero())
			continue;
		std::string body = p.str();
		bool single = p.terms().size() == 1;
		bool negative = single && p.terms().begin()->second.sign() < 0;
		if (single && negative)
			body = (-p).str();
		std::string term;
		if (body == "1")
			term = fmt::format("d{}", l + 1);
		else if (single)
			term = fmt::format("{}*d{}", body, l + 1);
		else
			term = fmt::format("({})*d{}", body, l + 1);
		if (s.empty())
			s = (negative ? "-" : "") + term;
		else
			s += (negative ? " - " : " + ") + term;
	}
	return s.empty() ? "0" : s;
}

Poly apply_field(PolyVectorField const &v, Poly const &p)
{
	Poly r(p.weights());
	for (std::size_t l = 0; l < v.coeffs.size(); ++l)
	{
		if (v.coeffs[l].is_zero())
			continue;
		Poly d = p.derivative(static_cast<int>(l) + 1);
		if (!d.is_zero())
			r += v.coeffs[l] * d;
	}
	return r;
}

CompiledPoly::CompiledPoly(Poly const &p)
{
	offsets_.push_back(0);
	for (auto const &[m, c] : p.terms())
	{
		coeffs_.push_back(c.to_double());
		for (auto const &[v, e] : m.powers)
			powers_.emplace_back(v - 1, e);
		offsets_.push_back(static_cast<int>(powers_.size()));
	}
}

double CompiledPoly::operator()(std::span<const double> x) const
{
	double s = 0.0;
	for (std::size_t t = 0; t < coeffs_.size(); ++t)
	{
		double v = coeffs_[t];
		for (int k = offsets_[t]; k < offsets_[t + 1]; ++k)
			v *= int_pow(x[powers_[k].first], powers_[k].second);
		s += v;
	}
	return s;
}

} // namespace carnot

namespace carnot {

namespace {

class PolyParser
{
public:
	PolyParser(std::string_view text, Weights w,
	           std::vector<std::string> const &prefixes)
	    : text_(text), w_(std::move(w)), prefixes_(prefixes)
	{
		int n = w_ ? static_cast<int>(w_->size()) : 0;
		if (prefixes_.empty() || n % static_cast<int>(prefixes_.size()) != 0)
			throw std::invalid_argument("ring size is not a multiple of the "
			                            "number of variable prefixes");
		block_ = n / static_cast<int>(prefixes_.size());
	}

	Poly parse()
	{
		Poly p = sum();
		skip();
		if (pos_ != text_.size())
			fail("unexpected character");
		return p;
	}

private:
	[[noreturn]] void fail(std::string const &what) const
	{
		throw std::invalid_argument(
		    fmt::format("{} at position {} in '{}'", what, pos_ + 1, text_));
	}

	void skip()
	{
		while (pos_ < text_.size() && std::isspace(
		                                  static_cast<unsigned char>(text_[pos_])))
			++pos_;
	}

	bool accept(char c)
	{
		skip();
		if (pos_ < text_.size() && text_[pos_] == c)
		{
			++pos_;
			return true;
		}
		return false;
	}

	Poly sum()
	{
		skip();
		bool negate = false;
		if (accept('-'))
			negate = true;
		else
			accept('+');
		Poly p = product();
		if (negate)
			p = -p;
		for (;;)
		{
			if (accept('+'))
				p += product();
			else if (accept('-'))
				p -= product();
			else
				return p;
		}
	}

	Poly product()
	{
		Poly p = power();
		for (;;)
		{
			skip();
			if (accept('*'))
				p = p * power();
			else if (pos_ < text_.size() && text_[pos_] == '/')
			{
				++pos_;
				Rational d = integer();
				if (d.is_zero())
					fail("division by zero");
				p *= Rational(1) / d;
			}
			else
				return p;
		}
	}

	Poly power()
	{
		Poly base = atom();
		if (accept('^'))
		{
			Rational e = integer();
			if (e.sign() < 0 || e > Rational(64))
				fail("bad exponent");
			Poly r = Poly::constant(w_, Rational(1));
			for (std::int64_t i = 0; i < e.num(); ++i)
				r = r * base;
			return r;
		}
		return base;
	}

	Rational integer()
	{
		skip();
		std::size_t start = pos_;
		while (pos_ < text_.size() && std::isdigit(
		                                  static_cast<unsigned char>(text_[pos_])))
			++pos_;
		if (start == pos_)
			fail("expected an integer");
		return Rational::parse(text_.substr(start, pos_ - start));
	}

	Poly atom()
	{
		skip();
		if (accept('('))
		{
			Poly p = sum();
			if (!accept(')'))
				fail("expected ')'");
			return p;
		}
		if (pos_ < text_.size() &&
		    std::isdigit(static_cast<unsigned char>(text_[pos_])))
			return Poly::constant(w_, integer());
		for (std::size_t p = 0; p < prefixes_.size(); ++p)
		{
			auto const &pre = prefixes_[p];
			if (text_.substr(pos_, pre.size()) == pre && pos_ + pre.size() < text_.size() &&
			    std::isdigit(static_cast<unsigned char>(text_[pos_ + pre.size()])))
			{
				pos_ += pre.size();
				Rational idx = integer();
				if (idx < Rational(1) || idx > Rational(block_))
					fail("variable index out of range");
				return Poly::variable(
				    w_, static_cast<int>(p) * block_ + static_cast<int>(idx.num()));
			}
		}
		fail("expected a term");
	}

	std::string_view text_;
	std::size_t pos_ = 0;
	Weights w_;
	std::vector<std::string> const &prefixes_;
	int block_ = 0;
};

} // namespace

Poly parse_poly(std::string_view text, Weights w,
                std::vector<std::string> const &prefixes)
{
	return PolyParser(text, std::move(w), prefixes).parse();
}

} // namespace carnot
