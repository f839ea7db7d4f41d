#pragma once

#include "carnot/extremal.hpp"

#include <optional>
#include <string>
#include <vector>

namespace carnot {

/// P_j^v for one stored index j.
struct Generator
{
	int j;
	Poly p;
};

/// The polynomials P_j^v for every stored j with d(j) <= 1. Rejects v = 0.
std::vector<Generator> variety_generators(ExtremalFamily const &f,
                                          std::vector<Rational> const &v);

struct Membership
{
	bool member = false;
	double max_residual = 0.0;
};

/// Exact test on rational samples (tolerance 0).
Membership membership(ExtremalFamily const &f, std::vector<Rational> const &v,
                      std::vector<std::vector<Rational>> const &samples);
Membership membership(ExtremalFamily const &f, std::vector<double> const &v,
                      std::vector<std::vector<double>> const &samples,
                      double tol);

/// Covectors v with sum_k v_k Q_jk(x_m) = 0 for all generators j and
/// samples x_m. The dimension is a lower bound for the corank.
struct Detection
{
	std::vector<std::vector<Rational>> basis;
	int corank_lower_bound = 0;
	/// Fewer distinct samples than the generators' top degree + 1; the
	/// null space may then be larger than for the whole curve.
	bool too_few_samples = false;
};

Detection detect_abnormal(ExtremalFamily const &f,
                          std::vector<std::vector<Rational>> const &samples);

struct NumericDetection
{
	std::vector<std::vector<double>> basis;
	std::vector<double> singular_values; ///< descending
	int corank_lower_bound = 0;
	bool too_few_samples = false;
};

/// Null space by singular-value thresholding: singular values at most
/// tol * max(1, sigma_max) count as zero.
NumericDetection detect_abnormal(ExtremalFamily const &f,
                                 std::vector<std::vector<double>> const &samples,
                                 double tol = 1e-9);

/// True iff every P_i^v with d(i) in {1, 2} vanishes on all samples.
Membership goh_check(ExtremalFamily const &f, std::vector<double> const &v,
                     std::vector<std::vector<double>> const &samples, double tol);

struct MinorOptions
{
	/// For rank 2, add the degree-2 row and drop the degree-2 column
	/// (lambda_3 vanishes along abnormal curves through the origin).
	bool rank2_reduction = true;
	std::vector<int> rows; ///< explicit rows; empty means default
	std::vector<int> cols; ///< explicit columns; empty means default
};

struct Minor
{
	std::vector<int> rows;
	Poly det;

	/// e.g. "rows(-1..3)" or "rows(-3,-1,0,2,3)".
	std::string label() const;
};

struct MinorSystem
{
	std::vector<int> rows;
	std::vector<int> cols;
	std::vector<std::vector<Poly>> matrix; ///< matrix[row][col] = Q_{jk}
	std::vector<Minor> minors;             ///< maximal square minors
};

MinorSystem minor_system(ExtremalFamily const &f, MinorOptions const &opts = {});

/// Fraction-free determinant over the polynomial ring.
Poly determinant(std::vector<std::vector<Poly>> m);

struct Certificate
{
	Monomial monomial;
	Rational coeff;
};

/// Witness that a minor is nonzero: the term minimizing (largest exponent,
/// number of variables), ties going to the first in canonical order.
/// None for zero minors.
std::optional<Certificate> nonvanishing_certificate(Minor const &m);

/// Direct sum g + h with indices merged by degree (g's first within each
/// degree), and the index maps of the two summands.
struct ProductAlgebra
{
	GradedLieAlgebra algebra;
	std::map<int, int> from_first;
	std::map<int, int> from_second;
};

ProductAlgebra product_group(GradedLieAlgebra const &a, GradedLieAlgebra const &b);

} // namespace carnot
