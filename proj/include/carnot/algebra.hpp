#pragma once

#include "carnot/rational.hpp"

#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace carnot {

/// Raised for malformed algebras, unknown basis indices and similar misuse.
class StructureError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Linear combination of basis vectors, keyed by (signed) basis index.
using Element = std::map<int, Rational>;

/// One entry of a structure-constant row, in internal slot numbering.
struct SlotTerm
{
	int slot;
	Rational c;
};

/// Exponent vector over the basis X_1..X_n of the positive part.
struct MultiIndex
{
	std::vector<int> alpha;

	MultiIndex() = default;
	explicit MultiIndex(int n) : alpha(n, 0) {}
	explicit MultiIndex(std::vector<int> a) : alpha(std::move(a)) {}

	int size() const { return static_cast<int>(alpha.size()); }
	int operator[](int index) const { return alpha[index - 1]; }

	/// |alpha|
	int length() const;
	/// alpha! = prod alpha_j!
	Rational factorial() const;
	/// sum alpha_j * weights[j]
	int weighted_degree(std::span<const int> weights) const;

	static MultiIndex unit(int n, int index);

	friend auto operator<=>(MultiIndex const &, MultiIndex const &) = default;
};

/**
 * Graded Lie algebra given by exact structure constants.
 *
 * Basis vectors carry signed indices m..n: indices 1..n span the stratified
 * algebra g = g_1 + ... + g_s, indices <= 0 span prolongation strata of
 * nonpositive degree. Internally the basis is stored in contiguous slots
 * 0..size()-1 in increasing index order; all public functions taking an
 * `int index` use the signed indices.
 *
 * Instances are immutable; use Builder.
 */
class GradedLieAlgebra
{
public:
	class Builder;

	GradedLieAlgebra() = default;

	/// Number of basis vectors with positive index.
	int dim() const { return n_; }
	int rank() const { return rank_; }
	int step() const { return step_; }
	/// Total number of stored basis vectors (prolongation included).
	int size() const { return static_cast<int>(ids_.size()); }
	int min_index() const { return ids_.empty() ? 1 : ids_.front(); }
	int max_index() const { return n_; }

	bool contains(int index) const
	{
		return index >= min_index() && index <= n_;
	}
	int slot(int index) const;
	int index_at(int slot) const { return ids_[slot]; }
	int degree(int index) const { return degrees_[slot(index)]; }
	int degree_at(int slot) const { return degrees_[slot]; }

	/// Degrees d(1)..d(n) of the positive part.
	std::span<const int> positive_degrees() const
	{
		return {degrees_.data() + (size() - n_), static_cast<std::size_t>(n_)};
	}
	/// Indices of all stored basis vectors of the given degree.
	std::vector<int> indices_of_degree(int d) const;

	/// Lowest prolongation degree that may have been cut off, or none.
	/// When set, brackets landing strictly below min degree are unknown.
	bool truncated() const { return truncated_; }

	/// [X_i, X_j] in slot numbering.
	std::span<const SlotTerm> row(int slot_i, int slot_j) const
	{
		return table_[static_cast<std::size_t>(slot_i) * size() + slot_j];
	}
	/// c_{ij}^k
	Rational structure_constant(int i, int j, int k) const;
	/// [X_i, X_j] as an Element.
	Element bracket_basis(int i, int j) const;

	/// Dense vector over all slots.
	using Dense = std::vector<Rational>;
	Dense bracket_dense(Dense const &u, Dense const &w) const;
	/// [u, X_j] for a dense u; cheaper than the general bracket.
	Dense bracket_with_basis(Dense const &u, int slot_j) const;

	Dense to_dense(Element const &e) const;
	Element from_dense(Dense const &v) const;

	/// Every stored (i, j) pair with a nonzero bracket, in signed indices.
	struct BracketEntry
	{
		int i;
		int j;
		std::vector<std::pair<int, Rational>> terms;
	};
	std::vector<BracketEntry> entries() const;

private:
	friend class Builder;

	std::vector<int> ids_;
	std::vector<int> degrees_;
	std::vector<std::vector<SlotTerm>> table_;
	int n_ = 0;
	int rank_ = 0;
	int step_ = 0;
	bool truncated_ = false;
};

class GradedLieAlgebra::Builder
{
public:
	/// Positive part with degrees d(1)..d(n).
	explicit Builder(std::vector<int> positive_degrees);
	/// Starts from an existing algebra, keeping its table.
	explicit Builder(GradedLieAlgebra const &base);

	/// Prepends prolongation basis vectors of the given degree; returns
	/// their indices in increasing order.
	std::vector<int> add_prolongation(int degree, int count);

	/// Stores [X_i, X_j] exactly as given (no antisymmetric fill).
	Builder &set(int i, int j, Element const &value);
	/// Stores [X_i, X_j] = value and [X_j, X_i] = -value.
	Builder &set_antisymmetric(int i, int j, Element const &value);
	Builder &set_truncated(bool t);

	int size() const { return static_cast<int>(ids_.size()); }
	bool contains(int index) const;

	GradedLieAlgebra build() const;

private:
	std::vector<int> ids_;
	std::vector<int> degrees_;
	std::map<std::pair<int, int>, Element> table_;
	bool truncated_ = false;
};

/// Bilinear bracket of two coefficient maps.
Element bracket(GradedLieAlgebra const &a, Element const &u, Element const &w);

/// [X_i, X_alpha] with X_1 applied alpha_1 times first, then X_2, ...
Element iterated_commutator(GradedLieAlgebra const &a, int i,
                            MultiIndex const &alpha);

/// One nonzero generalized structure constant c^k_{i alpha}.
struct GeneralizedConstant
{
	MultiIndex alpha;
	int k;
	Rational c;
};

/**
 * Calls `visit(alpha, value)` for every alpha with [X_i, X_alpha] != 0,
 * alpha = 0 included. `alpha` lists generator indices in the order they
 * were applied (non-decreasing); `value` is the dense commutator.
 */
void for_each_iterated_commutator(
    GradedLieAlgebra const &a, int i,
    std::function<void(std::span<const int>, GradedLieAlgebra::Dense const &)>
        const &visit);

/// All nonzero c^k_{i alpha}, sorted by (alpha, k).
std::vector<GeneralizedConstant>
generalized_structure_constants(GradedLieAlgebra const &a, int i);

struct Violation
{
	enum class Kind
	{
		Ordering,
		Antisymmetry,
		Grading,
		Jacobi,
		Generation
	};
	Kind kind;
	std::string message;
};

std::string to_string(Violation::Kind kind);

/// Checks ordering, antisymmetry, grading, Jacobi over all triples and
/// stratification generativity. Empty result means valid.
std::vector<Violation> validate(GradedLieAlgebra const &a);

/// Heisenberg algebra with [X_2, X_1] = X_3.
GradedLieAlgebra heisenberg();
/// Abelian algebra of dimension r (rank r, step 1).
GradedLieAlgebra abelian(int r);

/// Textual form of a coefficient map, e.g. "X3 - 1/2*X4".
std::string to_string(Element const &e);

} // namespace carnot
