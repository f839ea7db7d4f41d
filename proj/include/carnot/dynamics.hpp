#pragma once

#include "carnot/abnormal.hpp"
#include "carnot/extremal.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace carnot {

/// Controls h_1..h_r as a function of time.
using Control = std::function<std::vector<double>(double)>;

/// Uniform grid from t0 to t1 (either direction) with step close to `step`.
struct Grid
{
	double t0 = 0.0;
	double t1 = 1.0;
	double step = 1e-3;

	int steps() const;
	double time(int i) const;
};

struct CurvePath
{
	std::vector<double> times;
	std::vector<std::vector<double>> gamma;
	/// Dual coordinates lambda_1..lambda_n; empty when absent.
	std::vector<std::vector<double>> lambda;
	/// Empty for curves given only by samples.
	Control control;
};

/// Controls recovered from samples: finite differences of the first r
/// coordinates, linearly interpolated.
Control control_from_samples(CurvePath const &c, int rank);

/// RK4 for gamma' = sum_j h_j X_j(gamma).
CurvePath integrate_horizontal(GradedLieAlgebra const &a, Control const &h,
                               std::vector<double> const &x0, Grid const &grid);

/// RK4 for lambda_i' = -sum_k sum_{j <= r} c_ij^k h_j lambda_k along the curve.
CurvePath integrate_adjoint(GradedLieAlgebra const &a, CurvePath curve,
                            std::vector<double> const &lambda0);

/// Normal extremal: h_j = -lambda_j, integrated jointly with the adjoint system.
CurvePath integrate_normal(GradedLieAlgebra const &a,
                           std::vector<double> const &lambda0,
                           std::vector<double> const &x0, Grid const &grid);

/// max_t |lambda_i(t) - P_i^v(gamma(t))| for i = 1..n, v = lambda(0).
std::vector<double> duality_check(ExtremalFamily const &f, CurvePath const &c);

/// Exact variant for rational samples.
std::vector<Rational> duality_check(ExtremalFamily const &f,
                                    std::vector<std::vector<Rational>> const &gamma,
                                    std::vector<std::vector<Rational>> const &lambda);

struct IteratedIntegrals
{
	int rank = 0;
	std::vector<double> times;
	/// B[t][(i-1)*r + (j-1)] = int_0^t P_i^v(gamma) h_j ds
	std::vector<std::vector<double>> B;

	/// P_m^v(gamma(t)) = sum c * B_ij(t) for a degree-0 index m.
	struct Pairing
	{
		int m;
		std::vector<std::tuple<int, int, Rational>> terms; ///< (i, j, c)
		double drift;
		std::string str() const; ///< e.g. "B12 = P-3"
	};
	std::vector<Pairing> pairings;

	double at(std::size_t t, int i, int j) const { return B[t][(i - 1) * rank + (j - 1)]; }
};

/// B_ij along the horizontal curve of `curve.control` from the origin.
/// Each degree-0 index m yields P_m = sum_{i,j} c_{jm}^i B_ij.
IteratedIntegrals iterated_integrals(ExtremalFamily const &f, CurvePath const &curve,
                                     std::vector<double> const &v);

/// Prime-integral drift of a normal extremal at several step sizes, and
/// the observed order between consecutive steps.
struct Convergence
{
	std::vector<double> steps;
	std::vector<double> drifts;
	std::vector<double> orders;
};

Convergence drift_convergence(ExtremalFamily const &f,
                              std::vector<double> const &lambda0,
                              std::vector<double> const &steps, double t1 = 1.0);

/// Writes "t,x1..xn[,l1..ln]" rows.
void write_csv(std::ostream &os, CurvePath const &c);

struct SpiralOptions
{
	double step = 1e-3;
	double puncture = 1e-6;
	double tol = 1e-8;
};

struct SpiralReport
{
	int factor_dim = 0;
	int product_dim = 0;
	int product_rank = 0;
	int product_step = 0;
	/// Covector on one factor, supported on degrees >= 2.
	std::vector<Rational> covector;
	std::vector<std::string> q; ///< Q_4^v, Q_5^v, Q_6^v of one factor
	int samples = 0;
	double goh_residual = 0.0;
	double origin_residual = 0.0;
	double max_control = 0.0;
	/// Goh residual of the same curve with v = e_7 on each factor.
	double e7_residual = 0.0;
	bool pass = false;
};

/// phi'(t), psi'(t) for phi = t cos L, psi = t sin L, L = log(1 - log|t|);
/// both are 0 at t = 0.
double spiral_phi_dot(double t);
double spiral_psi_dot(double t);

/// v with v_1 = v_2 = v_3 = 0, Q_4^v = y2^2 - y1, Q_5^v = Q_6^v = 0, or none.
std::optional<std::vector<Rational>> spiral_covector(ExtremalFamily const &f);

SpiralReport spiral_example(SpiralOptions const &opts = {});

} // namespace carnot
