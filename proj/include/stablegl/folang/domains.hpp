#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stablegl/stable_matrix.hpp"

namespace stablegl::fol {

// Conjugacy-class key with a rank-based shortcut for elements of order 3;
// keys of similar elements are equal and keys of non-similar elements differ.
std::string fast_class_key(const StableMatrix& a);

// Adjacent transvections I + c E_ij, |i - j| = 1, c over the additive basis,
// and diag(g, 1, ..., 1) for a generator g of the multiplicative group.
std::vector<StableMatrix> gl_generators(const Field& f, int n);

// Number of elements of a span of `dim` vectors over f, or nullopt when it
// exceeds budget.
std::optional<std::uint64_t> span_size(const FieldSpec& f, std::size_t dim, std::uint64_t budget);

// GL_n by scanning all n x n matrices; throws BudgetExceeded.
std::vector<StableMatrix> general_linear_group(const Field& f, int n, std::uint64_t budget);
// One element per conjugacy class of GL_n, from invariant-factor chains.
std::vector<StableMatrix> class_representatives(const Field& f, int n);
// Conjugates of a with support <= n, by breadth-first search under
// gl_generators(f, n); empty when a is not conjugate to anything of support n.
std::vector<StableMatrix> conjugacy_orbit(const StableMatrix& a, int n, std::uint64_t budget);
// x of support <= n with x ~ of and x * with = with * x.
std::vector<StableMatrix> commuting_conjugates(const StableMatrix& of, const StableMatrix& with, int n,
                                               std::uint64_t budget);
// A conjugate of a with minimal support.
StableMatrix minimal_representative(const StableMatrix& a);

}  // namespace stablegl::fol
