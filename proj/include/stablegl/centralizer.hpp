#pragma once

#include <optional>
#include <vector>

#include "stablegl/dense.hpp"
#include "stablegl/stable_matrix.hpp"

namespace stablegl {

// Coefficient matrix of {M : M C = C M for every generator C} in the m*m
// unknowns M(i,j), unknown index i*m + j. One row per (generator, i, j).
Dense commutation_system(const Field& f, const std::vector<StableMatrix>& generators, int m);

// Basis (m x m matrices, not necessarily invertible) of the commutant of the
// generators at support m. Throws SupportTooSmall if a generator does not fit.
std::vector<Dense> centralizer_basis(const Field& f, const std::vector<StableMatrix>& generators,
                                     int m);

// Stable elements X of support <= s (identity outside the leading s x s block)
// commuting with each generator, where generators may reach beyond s. The
// solutions form the affine set particular + span(directions).
struct AffineCentralizer {
  Dense particular;
  std::vector<Dense> directions;
};
std::optional<AffineCentralizer> stable_centralizer(const Field& f,
                                                    const std::vector<StableMatrix>& generators,
                                                    int s);

// Enumerates the span of `basis` in lexicographic coefficient order; element
// `index` uses the base-q digits of index as coefficients.
Dense span_element(const std::vector<Dense>& basis, const Dense& offset, unsigned long long index);

}  // namespace stablegl
