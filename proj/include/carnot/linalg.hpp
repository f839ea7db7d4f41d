#pragma once

#include "carnot/rational.hpp"

#include <map>
#include <optional>
#include <vector>

namespace carnot {

/// Sparse row: (column, value) pairs with strictly increasing columns and no
/// zero values.
using SparseRow = std::vector<std::pair<int, Rational>>;

SparseRow to_sparse(std::vector<Rational> const &dense);

/**
 * Incremental fraction-free row echelon form over the rationals.
 *
 * Stored rows are scaled to primitive integer vectors with a positive
 * leading entry; elimination uses cross multiplication followed by
 * content removal, so no fractions are ever formed.
 */
class RowEchelon
{
public:
	explicit RowEchelon(int columns) : columns_(columns) {}

	/// Reduces `row` against the stored pivots; stores it if it is
	/// independent. Returns true when the rank grew.
	bool add(SparseRow row);
	bool add_dense(std::vector<Rational> const &row) { return add(to_sparse(row)); }

	/// Reduces `row` without storing it.
	SparseRow reduce(SparseRow row) const;

	int rank() const { return static_cast<int>(pivots_.size()); }
	int columns() const { return columns_; }
	bool is_pivot(int column) const { return pivots_.count(column) != 0; }

	/// Basis of the kernel, one vector per free column in increasing order,
	/// each primitive integer with first nonzero entry positive.
	std::vector<std::vector<Rational>> nullspace() const;

private:
	int columns_;
	std::map<int, SparseRow> pivots_;
};

/// Kernel of the matrix with the given rows.
std::vector<std::vector<Rational>>
nullspace(std::vector<std::vector<Rational>> const &rows, int columns);

int rank(std::vector<std::vector<Rational>> const &rows, int columns);

/// Solves sum_j x_j * columns[j] = target. Returns the solution with all
/// free variables set to zero, or nullopt if inconsistent.
std::optional<std::vector<Rational>>
solve_columns(std::vector<std::vector<Rational>> const &columns,
              std::vector<Rational> const &target);

/// Scales to a primitive integer vector with first nonzero entry positive.
std::vector<Rational> normalize_primitive(std::vector<Rational> v);

} // namespace carnot
