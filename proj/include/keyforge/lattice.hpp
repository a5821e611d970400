#ifndef KEYFORGE_LATTICE_HPP
#define KEYFORGE_LATTICE_HPP

#include <optional>
#include <vector>

#include "keyforge/rational.hpp"

namespace keyforge {

// Order of gamma modulo the ZZ-span of gens inside QQ^r:
//   the least e >= 1 with e*gamma in <gens>_ZZ, together with integer
//   coefficients c such that e*gamma = sum c[i]*gens[i].
// Returns nullopt when gamma is not in the QQ-span of gens (infinite order).
// gens may be linearly dependent; an empty generator list spans {0}.
struct LatticeOrder {
    long order;
    std::vector<Int> coeffs; // one per generator
};
std::optional<LatticeOrder> lattice_order(const std::vector<std::vector<Rat>>& gens,
                                          const std::vector<Rat>& gamma);

// Rank of the ZZ-span (= QQ-span dimension).
int lattice_rank(const std::vector<std::vector<Rat>>& gens);

} // namespace keyforge

#endif
