#pragma once

#include "carnot/dynamics.hpp"
#include "carnot/prolongation.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace carnot {

/// Malformed input; line and column are 1-based, 0 when unknown.
class ParseError : public std::runtime_error
{
public:
	ParseError(std::string const &what, int line = 0, int column = 0);
	int line() const { return line_; }
	int column() const { return column_; }

private:
	int line_;
	int column_;
};

/**
 * JSON algebra document:
 *
 *   {"dim": n, "rank": r, "step": s, "degrees": [...],
 *    "brackets": [{"i": 2, "j": 1, "terms": [{"k": 3, "c": "1"}]}, ...],
 *    "prolongation_basis": [{"degree": 0, "maps": [[{"source": 2,
 *        "terms": [{"k": 1, "c": "-1"}]}], ...]}]}
 *
 * A bracket listed for (i, j) but not for (j, i) is extended
 * antisymmetrically. Rationals are strings "p/q".
 */
struct AlgebraFile
{
	GradedLieAlgebra algebra;
	std::map<int, std::vector<LinearMap>> prolongation_basis;
};

AlgebraFile parse_algebra(std::string_view text);
std::string dump_algebra(GradedLieAlgebra const &a,
                         std::map<int, std::vector<LinearMap>> const &basis = {});

/// Positive part with the listed prolongation strata (others computed),
/// or the positive part alone when `prolong_anyway` is false and no basis
/// is listed.
GradedLieAlgebra load_algebra(AlgebraFile const &file, bool prolong_anyway,
                              int max_depth = 8);

/// The strata of a prolonged algebra as a prolongation_basis value.
std::map<int, std::vector<LinearMap>> strata_basis(ProlongedAlgebra const &p);

/// Curve samples "t,x1..xn[,l1..ln]" with a header line.
struct CurveFile
{
	CurvePath curve;
	/// Exact samples when every coordinate parses as a rational.
	std::optional<std::vector<std::vector<Rational>>> exact;
};

CurveFile parse_curve_csv(std::string_view text, int n);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a64(std::string_view bytes);

} // namespace carnot
