#pragma once

#include "carnot/algebra.hpp"

#include <map>
#include <optional>
#include <vector>

namespace carnot {

/// Linear map on g given by the images of (some or all) positive basis
/// vectors: image[i] = phi(X_i). Missing entries are zero.
using LinearMap = std::map<int, Element>;

/**
 * One stratum g_k, k <= 0, of the Tanaka prolongation: derivations of g
 * mapping each g_i into g_{i+k}. Basis element m has index ids[m] in the
 * extended algebra (empty until the stratum is attached).
 */
struct ProlongationStratum
{
	int degree = 0;
	std::vector<LinearMap> basis;
	std::vector<int> ids;

	int dim() const { return static_cast<int>(basis.size()); }
};

struct ProlongedAlgebra
{
	GradedLieAlgebra algebra;
	std::vector<ProlongationStratum> strata; ///< degrees 0, -1, ...
	bool terminated = false; ///< a zero stratum was reached

	/// The cutoff was reached with a nonzero last stratum.
	bool possibly_infinite() const { return !terminated; }
	std::vector<int> dimensions() const;
};

/// Starts a prolongation with no strata computed.
ProlongedAlgebra start_prolongation(GradedLieAlgebra const &a);

/**
 * Basis of g_k as the exact null space of the derivation identity over
 * all basis pairs of g. Requires every stratum of degree > k to be
 * attached. Basis vectors are primitive integer with first nonzero entry
 * positive, with blocks ordered by source index d(i) >= 2 first and the
 * g_1 block last.
 */
ProlongationStratum compute_stratum(ProlongedAlgebra const &p, int k);

/**
 * Attaches `stratum` to `p`: assigns indices below the current minimum,
 * adds [phi, X] = phi(X) and all brackets between prolongation elements
 * landing in degree k. `chosen`, if given, replaces the basis; it must
 * span the same space and may list images of generators only.
 */
ProlongedAlgebra
extend_structure_constants(ProlongedAlgebra p, ProlongationStratum stratum,
                           std::optional<std::vector<LinearMap>> chosen = {});

/// Computes strata k = 0, -1, ..., -max_depth, stopping at the first zero
/// stratum. `overrides` maps a degree to a replacement basis.
ProlongedAlgebra prolong(GradedLieAlgebra const &a, int max_depth = 8,
                         std::map<int, std::vector<LinearMap>> const &overrides = {});

} // namespace carnot
