#include "carnot/abnormal.hpp"
#include "carnot/dynamics.hpp"
#include "carnot/free_lie.hpp"
#include "carnot/io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace carnot;
using json = nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_input = 2;

struct Report
{
	json inputs = json::array();
	json results = json::object();
	std::vector<std::string> lines;
	int status = exit_ok;

	template <class... Args> void say(fmt::format_string<Args...> f, Args &&...args)
	{
		lines.push_back(fmt::format(f, std::forward<Args>(args)...));
	}
};

std::string read_file(std::string const &path, Report &rep)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw std::invalid_argument("cannot read " + path);
	std::stringstream ss;
	ss << in.rdbuf();
	std::string text = ss.str();
	rep.inputs.push_back({{"path", path}, {"fnv1a64", fnv1a64(text)}});
	return text;
}

void write_file(std::string const &path, std::string const &text)
{
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw std::invalid_argument("cannot write " + path);
	out << text;
}

std::vector<double> parse_list(std::string const &text, int n, char const *what)
{
	std::vector<double> out;
	std::stringstream ss(text);
	std::string item;
	while (std::getline(ss, item, ','))
	{
		try
		{
			out.push_back(Rational::parse(item).to_double());
		}
		catch (std::exception const &)
		{
			try
			{
				std::size_t used = 0;
				out.push_back(std::stod(item, &used));
				if (used != item.size())
					throw std::invalid_argument(item);
			}
			catch (std::exception const &)
			{
				throw std::invalid_argument(fmt::format("{}: not a number: '{}'", what, item));
			}
		}
	}
	if (n >= 0 && static_cast<int>(out.size()) != n)
		throw std::invalid_argument(
		    fmt::format("{} needs {} entries, got {}", what, n, out.size()));
	return out;
}

std::string vector_str(std::vector<Rational> const &v)
{
	std::vector<std::string> parts;
	for (auto const &x : v)
		parts.push_back(x.str());
	return fmt::format("({})", fmt::join(parts, ", "));
}

struct AlgebraArgs
{
	std::string path;
	bool prolong = false;
	int max_depth = 8;

	void add(CLI::App *app)
	{
		app->add_option("algebra", path, "algebra JSON file")->required();
		app->add_flag("--prolong", prolong, "compute prolongation strata not listed in the file");
		app->add_option("--max-depth", max_depth, "deepest prolongation degree to try")
		    ->check(CLI::Range(0, 64));
	}

	GradedLieAlgebra load(Report &rep) const
	{
		auto file = parse_algebra(read_file(path, rep));
		return load_algebra(file, prolong, max_depth);
	}
};

Report cmd_free(int rank, int step, std::string const &emit)
{
	Report rep;
	auto f = build_free(rank, step);
	auto const &a = f.algebra;
	rep.results["dim"] = a.dim();
	rep.results["rank"] = a.rank();
	rep.results["step"] = a.step();
	rep.say("free({},{}): dim {}, rank {}, step {}", rank, step, a.dim(), a.rank(), a.step());
	json rel = json::array();
	for (int k = a.rank() + 1; k <= a.dim(); ++k)
	{
		rel.push_back(f.relation(k));
		rep.say("  {}", f.relation(k));
	}
	rep.results["relations"] = rel;
	std::string doc = dump_algebra(a);
	rep.results["algebra_fnv1a64"] = fnv1a64(doc);
	if (!emit.empty())
	{
		write_file(emit, doc);
		rep.say("wrote {}", emit);
	}
	return rep;
}

Report cmd_prolong(std::string const &path, int max_depth, std::string const &emit)
{
	Report rep;
	auto file = parse_algebra(read_file(path, rep));
	auto p = prolong(file.algebra, max_depth, file.prolongation_basis);
	json strata = json::array();
	for (auto const &s : p.strata)
	{
		strata.push_back({{"degree", s.degree}, {"dim", s.dim()}});
		rep.say("g_{}: dim {}", s.degree, s.dim());
	}
	rep.results["strata"] = strata;
	rep.results["terminated"] = p.terminated;
	rep.results["possibly_infinite"] = p.possibly_infinite();
	if (p.terminated)
		rep.say("prolongation terminates; total dim {}", p.algebra.size());
	else
		rep.say("prolongation not terminated within depth; stored dim {}", p.algebra.size());
	auto violations = validate(p.algebra);
	rep.results["violations"] = violations.size();
	for (auto const &v : violations)
		rep.say("violation ({}): {}", to_string(v.kind), v.message);
	if (!violations.empty())
		rep.status = exit_failed;
	if (!emit.empty())
	{
		std::string doc = dump_algebra(file.algebra, strata_basis(p));
		write_file(emit, doc);
		rep.results["algebra_fnv1a64"] = fnv1a64(doc);
		rep.say("wrote {}", emit);
	}
	return rep;
}

Report cmd_polys(AlgebraArgs const &args, std::vector<int> indices)
{
	Report rep;
	auto a = args.load(rep);
	auto f = build_family(a);
	if (indices.empty())
		for (int j = a.min_index(); j <= a.dim(); ++j)
			indices.push_back(j);
	json polys = json::object();
	for (int j : indices)
	{
		if (!a.contains(j))
			throw std::invalid_argument(fmt::format("index {} is not stored", j));
		polys[fmt::format("P{}", j)] = f.format_P(j);
		rep.say("P{} = {}", j, f.format_P(j));
	}
	rep.results["polynomials"] = polys;
	return rep;
}

Report cmd_verify(AlgebraArgs const &args)
{
	Report rep;
	auto a = args.load(rep);
	auto violations = validate(a);
	json vs = json::array();
	for (auto const &v : violations)
	{
		vs.push_back({{"kind", to_string(v.kind)}, {"message", v.message}});
		rep.say("violation ({}): {}", to_string(v.kind), v.message);
	}
	rep.results["violations"] = vs;
	rep.say("{} violations", violations.size());
	if (!violations.empty())
	{
		rep.status = exit_failed;
		return rep;
	}
	auto residuals = verify_structure(build_family(a));
	json rs = json::array();
	for (auto const &r : residuals)
	{
		rs.push_back({{"i", r.i}, {"j", r.j}, {"k", r.k}, {"value", r.value.str()}});
		rep.say("residual X{} Q({},{}) = {}", r.i, r.j, r.k, r.value.str());
	}
	rep.results["residuals"] = rs;
	rep.say("{} residuals", residuals.size());
	if (!residuals.empty())
		rep.status = exit_failed;
	return rep;
}

Report cmd_minors(AlgebraArgs const &args, bool no_reduction)
{
	Report rep;
	auto a = args.load(rep);
	MinorOptions opts;
	opts.rank2_reduction = !no_reduction;
	auto ms = minor_system(build_family(a), opts);
	rep.results["rows"] = ms.rows;
	rep.results["cols"] = ms.cols;
	rep.say("rows {} x cols {}", fmt::join(ms.rows, ","), fmt::join(ms.cols, ","));
	json minors = json::array();
	for (auto const &m : ms.minors)
	{
		json e{{"rows", m.rows}, {"label", m.label()}};
		auto cert = nonvanishing_certificate(m);
		if (cert)
		{
			e["degree"] = m.det.weighted_degree();
			e["terms"] = m.det.terms().size();
			e["certificate"] = {{"monomial", monomial_str(cert->monomial)},
			                    {"coeff", cert->coeff.str()}};
			rep.say("{}: degree {}, {} terms, certificate {} coeff {}", m.label(),
			        m.det.weighted_degree(), m.det.terms().size(),
			        monomial_str(cert->monomial), cert->coeff.str());
		}
		else
		{
			e["zero"] = true;
			rep.say("{}: zero", m.label());
		}
		minors.push_back(e);
	}
	rep.results["minors"] = minors;
	// Summary on the minor built from the highest rows.
	if (!ms.minors.empty())
	{
		auto const &q = ms.minors.back();
		auto cert = nonvanishing_certificate(q);
		if (cert)
			rep.say("{} minors, certificate: monomial {} coeff {} in minor {}", ms.minors.size(),
			        monomial_str(cert->monomial), cert->coeff.str(), q.label());
		else
			rep.say("{} minors, minor {} vanishes", ms.minors.size(), q.label());
	}
	else
		rep.say("0 minors");
	return rep;
}

Report cmd_detect(AlgebraArgs const &args, std::string const &curve_path, double tol)
{
	Report rep;
	auto a = args.load(rep);
	auto f = build_family(a);
	auto cf = parse_curve_csv(read_file(curve_path, rep), a.dim());
	std::optional<Detection> exact;
	if (cf.exact)
	{
		try
		{
			exact = detect_abnormal(f, *cf.exact);
		}
		catch (OverflowError const &)
		{
			rep.say("note: exact elimination overflowed; using floating samples");
		}
	}
	if (exact)
	{
		auto const &d = *exact;
		json basis = json::array();
		for (auto const &v : d.basis)
		{
			std::vector<std::string> s;
			for (auto const &x : v)
				s.push_back(x.str());
			basis.push_back(s);
			rep.say("v = {}", vector_str(v));
		}
		rep.results["exact"] = true;
		rep.results["basis"] = basis;
		rep.results["corank_lower_bound"] = d.corank_lower_bound;
		rep.results["too_few_samples"] = d.too_few_samples;
		rep.say("corank >= {}", d.corank_lower_bound);
		if (d.too_few_samples)
			rep.say("warning: too few distinct samples; the null space may be too large");
	}
	else
	{
		auto d = detect_abnormal(f, cf.curve.gamma, tol);
		rep.results["exact"] = false;
		rep.results["basis"] = d.basis;
		rep.results["singular_values"] = d.singular_values;
		rep.results["corank_lower_bound"] = d.corank_lower_bound;
		rep.results["too_few_samples"] = d.too_few_samples;
		rep.say("singular values {:.3e}", fmt::join(d.singular_values, ", "));
		rep.say("corank >= {} (tol {})", d.corank_lower_bound, tol);
		if (d.too_few_samples)
			rep.say("warning: too few distinct samples; the null space may be too large");
	}
	return rep;
}

struct IntegrateArgs
{
	AlgebraArgs alg;
	std::string mode = "normal";
	std::string lambda;
	std::string control;
	std::string x0;
	std::string curve;
	std::string out;
	double t1 = 1.0;
	double step = 1e-3;
	double tol = 1e-8;
};

Report cmd_integrate(IntegrateArgs const &args)
{
	Report rep;
	auto a = args.alg.load(rep);
	int n = a.dim();
	int r = a.rank();
	std::vector<double> x0 =
	    args.x0.empty() ? std::vector<double>(n, 0.0) : parse_list(args.x0, n, "--x0");
	Grid grid{0.0, args.t1, args.step};
	CurvePath c;
	if (args.mode == "horizontal")
	{
		if (args.control.empty())
			throw std::invalid_argument("--control is required in horizontal mode");
		auto h = parse_list(args.control, r, "--control");
		c = integrate_horizontal(a, [h](double) { return h; }, x0, grid);
	}
	else if (args.mode == "adjoint" || args.mode == "normal")
	{
		if (args.lambda.empty())
			throw std::invalid_argument("--lambda is required in " + args.mode + " mode");
		auto l0 = parse_list(args.lambda, n, "--lambda");
		if (args.mode == "normal")
			c = integrate_normal(a, l0, x0, grid);
		else
		{
			CurvePath base;
			if (!args.curve.empty())
				base = parse_curve_csv(read_file(args.curve, rep), n).curve;
			else if (!args.control.empty())
			{
				auto h = parse_list(args.control, r, "--control");
				base = integrate_horizontal(a, [h](double) { return h; }, x0, grid);
			}
			else
				throw std::invalid_argument("adjoint mode needs --curve or --control");
			c = integrate_adjoint(a, base, l0);
		}
		auto drift = duality_check(build_family(a), c);
		double worst = *std::max_element(drift.begin(), drift.end());
		rep.results["duality_drift"] = drift;
		rep.results["max_drift"] = worst;
		rep.say("max |lambda_i - P_i(gamma)| = {:.3e} (tol {:.1e})", worst, args.tol);
		if (worst > args.tol)
			rep.status = exit_failed;
	}
	else
		throw std::invalid_argument("unknown mode '" + args.mode + "'");

	rep.results["mode"] = args.mode;
	rep.results["samples"] = c.times.size();
	rep.results["endpoint"] = c.gamma.back();
	rep.say("{} samples, endpoint ({:.12g})", c.times.size(), fmt::join(c.gamma.back(), ", "));
	std::ostringstream csv;
	write_csv(csv, c);
	rep.results["csv_fnv1a64"] = fnv1a64(csv.str());
	if (!args.out.empty())
	{
		write_file(args.out, csv.str());
		rep.say("wrote {}", args.out);
	}
	return rep;
}

Report cmd_spiral(SpiralOptions const &opts)
{
	Report rep;
	auto s = spiral_example(opts);
	rep.results["product_dim"] = s.product_dim;
	rep.results["product_rank"] = s.product_rank;
	rep.results["product_step"] = s.product_step;
	json v = json::object();
	for (std::size_t k = 0; k < s.covector.size(); ++k)
		if (!s.covector[k].is_zero())
			v[fmt::format("v{}", k + 1)] = s.covector[k].str();
	rep.results["covector"] = v;
	rep.results["q"] = s.q;
	rep.results["samples"] = s.samples;
	rep.results["goh_residual"] = s.goh_residual;
	rep.results["origin_residual"] = s.origin_residual;
	rep.results["max_control"] = s.max_control;
	rep.results["e7_residual"] = s.e7_residual;
	rep.results["pass"] = s.pass;
	rep.say("product of two free(3,4): dim {}, rank {}, step {}", s.product_dim,
	        s.product_rank, s.product_step);
	if (s.covector.empty())
	{
		rep.say("no covector solves Q4 = y2^2 - y1, Q5 = Q6 = 0");
		rep.status = exit_failed;
		return rep;
	}
	std::vector<std::string> support;
	for (auto const &[k, c] : v.items())
		support.push_back(fmt::format("{} = {}", k, c.get<std::string>()));
	rep.say("covector per factor: {}", fmt::join(support, ", "));
	rep.say("Q4 = {}, Q5 = {}, Q6 = {}", s.q[0], s.q[1], s.q[2]);
	rep.say("goh residual {:.3e} over {} samples, at origin {}", s.goh_residual, s.samples,
	        s.origin_residual);
	rep.say("max control {:.6f} (bound 2); e7 residual {:.3e}", s.max_control, s.e7_residual);
	rep.say("{}", s.pass ? "spiral is a Goh curve" : "spiral check failed");
	if (!s.pass)
		rep.status = exit_failed;
	return rep;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"Extremal polynomials and abnormal curves in Carnot groups"};
	app.require_subcommand(1);
	bool as_json = false;
	app.add_flag("--json", as_json, "print the report as JSON");

	int rank = 2, step = 4;
	std::string emit;
	auto *free = app.add_subcommand("free", "free nilpotent Lie algebra in a Hall basis");
	free->add_option("--rank", rank)->required()->check(CLI::Range(1, 64));
	free->add_option("--step", step)->required()->check(CLI::Range(1, 64));
	free->add_option("--emit", emit, "write the algebra JSON here");

	std::string prol_path;
	int prol_depth = 8;
	auto *prol = app.add_subcommand("prolong", "Tanaka prolongation strata");
	prol->add_option("algebra", prol_path)->required();
	prol->add_option("--max-depth", prol_depth)->check(CLI::Range(0, 64));
	prol->add_option("--emit", emit, "write the algebra with its strata here");

	AlgebraArgs polys_args, verify_args, minors_args, detect_args;
	std::vector<int> indices;
	auto *polys = app.add_subcommand("polys", "extremal polynomials P_j^v");
	polys_args.add(polys);
	polys->add_option("--index", indices, "only these indices");

	auto *verify = app.add_subcommand("verify", "validate the algebra and X_i P_j = sum c P_k");
	verify_args.add(verify);

	bool no_reduction = false;
	auto *minors = app.add_subcommand("minors", "maximal minors of the Q matrix");
	minors_args.add(minors);
	minors->add_flag("--no-rank2-reduction", no_reduction, "keep the degree-2 column");

	std::string curve_path;
	double tol = 1e-9;
	auto *detect = app.add_subcommand("detect", "abnormal covectors along sampled curve");
	detect_args.add(detect);
	detect->add_option("curve", curve_path, "CSV t,x1..xn")->required();
	detect->add_option("--tol", tol, "singular value threshold for float samples");

	IntegrateArgs ia;
	auto *integ = app.add_subcommand("integrate", "RK4 integration of curves and covectors");
	ia.alg.add(integ);
	integ->add_option("--mode", ia.mode)->check(CLI::IsMember({"normal", "horizontal", "adjoint"}));
	integ->add_option("--lambda", ia.lambda, "initial covector, comma separated");
	integ->add_option("--control", ia.control, "constant controls, comma separated");
	integ->add_option("--x0", ia.x0, "initial point");
	integ->add_option("--curve", ia.curve, "curve CSV for adjoint mode");
	integ->add_option("--t1", ia.t1, "final time");
	integ->add_option("--step", ia.step, "RK4 step")->check(CLI::PositiveNumber);
	integ->add_option("--tol", ia.tol, "allowed duality drift");
	integ->add_option("--out", ia.out, "write the trajectory CSV here");

	SpiralOptions so;
	auto *spiral = app.add_subcommand("spiral", "Goh spiral in the product of two free(3,4)");
	spiral->add_option("--step", so.step)->check(CLI::PositiveNumber);
	spiral->add_option("--puncture", so.puncture)->check(CLI::NonNegativeNumber);
	spiral->add_option("--tol", so.tol)->check(CLI::NonNegativeNumber);

	try
	{
		app.parse(argc, argv);
	}
	catch (CLI::CallForHelp const &e)
	{
		return app.exit(e);
	}
	catch (CLI::ParseError const &e)
	{
		app.exit(e);
		return exit_input;
	}

	Report rep;
	try
	{
		if (*free)
			rep = cmd_free(rank, step, emit);
		else if (*prol)
			rep = cmd_prolong(prol_path, prol_depth, emit);
		else if (*polys)
			rep = cmd_polys(polys_args, indices);
		else if (*verify)
			rep = cmd_verify(verify_args);
		else if (*minors)
			rep = cmd_minors(minors_args, no_reduction);
		else if (*detect)
			rep = cmd_detect(detect_args, curve_path, tol);
		else if (*integ)
			rep = cmd_integrate(ia);
		else if (*spiral)
			rep = cmd_spiral(so);
	}
	catch (std::exception const &e)
	{
		std::cerr << "error: " << e.what() << "\n";
		return exit_input;
	}

	if (as_json)
	{
		std::vector<std::string> args(argv + 1, argv + argc);
		json out;
		out["command"] = args;
		out["inputs"] = rep.inputs;
		out["results"] = rep.results;
		out["status"] = rep.status;
		std::cout << out.dump(2) << "\n";
	}
	else
		for (auto const &l : rep.lines)
			std::cout << l << "\n";
	return rep.status;
}
