#pragma once

#include "carnot/algebra.hpp"
#include "carnot/poly.hpp"

#include <string>
#include <vector>

namespace carnot {

/**
 * The polynomials Q_jk(x) = sum_alpha (-1)^|alpha| / alpha! c^k_{j alpha}
 * x^alpha for every stored index j <= n and k = 1..n, so that the
 * extremal polynomial of a covector v is P_j^v = sum_k v_k Q_jk.
 *
 * Coordinates x_1..x_n carry the weights d(1)..d(n).
 */
class ExtremalFamily
{
public:
	ExtremalFamily() = default;
	ExtremalFamily(GradedLieAlgebra a, std::vector<std::vector<Poly>> q);

	GradedLieAlgebra const &algebra() const { return algebra_; }
	Weights const &weights() const { return weights_; }
	int dim() const { return algebra_.dim(); }
	int min_index() const { return algebra_.min_index(); }

	Poly const &q(int j, int k) const;

	/// P_j^v as a polynomial in x.
	Poly P(int j, std::vector<Rational> const &v) const;
	Rational eval_P(int j, std::vector<Rational> const &v,
	                std::vector<Rational> const &x) const;
	double eval_P(int j, std::vector<double> const &v,
	              std::vector<double> const &x) const;

	/// P_j^v with v symbolic, e.g. "-v4*x1 - v5*x2 + 1/2*v6*x1^2".
	std::string format_P(int j) const;
	/// P_j^v as one polynomial in x_1..x_n, v_1..v_n (v of weight 0).
	Poly lifted(int j) const;
	Weights const &lifted_weights() const { return lifted_weights_; }

	friend bool operator==(ExtremalFamily const &a, ExtremalFamily const &b)
	{
		return a.q_ == b.q_;
	}

private:
	GradedLieAlgebra algebra_;
	Weights weights_;
	Weights lifted_weights_;
	std::vector<std::vector<Poly>> q_; ///< q_[slot j][k-1]
};

/// Expands the generalized structure constants of every stored index.
ExtremalFamily build_family(GradedLieAlgebra const &a);

/// One nonzero entry of X_i Q_{jk} - sum_m c^m_{ij} Q_{mk}.
struct StructureResidual
{
	int i, j, k;
	Poly value;
};

/// All nonzero residuals of the structure formulas X_i P_j = sum c_ij^m P_m
/// for i = 1..n and every stored j; empty means verified exactly.
std::vector<StructureResidual>
verify_structure(ExtremalFamily const &f,
                 std::vector<PolyVectorField> const &fields);
std::vector<StructureResidual> verify_structure(ExtremalFamily const &f);

/**
 * Rebuilds the family top-down in d(j) from the generator identities
 * X_i P_j = sum c_ij^m P_m (i = 1..r) and P_j(0) = v_j, by expressing
 * higher fields as commutators of generators and antidifferentiating
 * along x_n, ..., x_1. Throws StructureError on inconsistency.
 */
ExtremalFamily reconstruct_by_recursion(GradedLieAlgebra const &a);

} // namespace carnot
