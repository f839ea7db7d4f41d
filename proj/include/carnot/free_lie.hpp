#pragma once

#include "carnot/algebra.hpp"

#include <memory>
#include <string>
#include <vector>

namespace carnot {

/// Thrown when a generated algebra would exceed the dimension cap.
class ResourceError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/**
 * Element of the Hall basis, identified by its serial (1-based position in
 * the Hall order). Generators have left = right = 0.
 *
 * Convention: generators are ordered X_1 < X_2 < ... < X_r and a word of
 * higher degree is larger than any word of lower degree. A bracket [u, v]
 * of Hall words is a Hall word iff u > v and, when u = [u', u''], u'' <= v.
 * Words of equal degree are ordered by the degree of their right factor,
 * then by the serials of (u, v). For rank 2 this reproduces
 * X_3 = [X_2,X_1], X_4 = [X_3,X_1], X_5 = [X_3,X_2], X_6 = [X_4,X_1],
 * X_7 = [X_4,X_2], X_8 = [X_5,X_2].
 */
struct HallWord
{
	int serial = 0;
	int degree = 1;
	int left = 0;
	int right = 0;

	bool is_generator() const { return left == 0; }
};

/// Default cap on generated dimensions (overridable via CARNOT_MAX_DIM).
int default_max_dim();

/// Dimension of the degree-m stratum of the free Lie algebra on r
/// generators (Witt's formula).
long long witt_dimension(int r, int m);

struct FreeLieAlgebra
{
	GradedLieAlgebra algebra;
	std::vector<HallWord> words; ///< words[k-1] has serial k

	/// Bracket form of X_k, e.g. "[[X2,X1],X1]".
	std::string expand(int k) const;
	/// Defining relation of X_k, e.g. "X4 = [X3,X1]"; generators give "X1".
	std::string relation(int k) const;
};

/// Free nilpotent Lie algebra of rank r and step s in the Hall basis.
FreeLieAlgebra build_free(int r, int s, int max_dim = default_max_dim());

/// Binary bracket tree over generators 1..r.
struct BracketTree
{
	int generator = 0; ///< nonzero for leaves
	std::shared_ptr<const BracketTree> left, right;

	static std::shared_ptr<const BracketTree> leaf(int g);
	static std::shared_ptr<const BracketTree>
	node(std::shared_ptr<const BracketTree> l,
	     std::shared_ptr<const BracketTree> r);

	int degree() const;
};

/// Expresses a bracket tree in the Hall basis of `f`; trees of degree
/// greater than the step reduce to 0.
Element reduce_to_hall(FreeLieAlgebra const &f, BracketTree const &tree);

} // namespace carnot
