#pragma once

#include "latticefm/discform.hpp"

namespace latfm {

// The computable genus invariants: signature plus discriminant form.
struct GenusSymbol {
    Signature sig;
    FiniteQuadraticForm disc;
};

GenusSymbol genus_symbol(const Lattice& l);

// Equal signatures and isomorphic discriminant forms.
bool same_genus(const Lattice& l1, const Lattice& l2, long limit = kDefaultGroupLimit);

enum class GenusUniqueness { Yes, Unknown };

// Yes iff indefinite and rk >= 2 + l(D); the criterion is sufficient only,
// so the negative answer is Unknown, never No.
GenusUniqueness nikulin_unique_in_genus(const Lattice& l);

// Isometry between definite lattices of rank <= 8, as S with S^t G1 S = G2, or nullopt.
std::optional<IntMat> is_isomorphic_definite(const Lattice& l1, const Lattice& l2);

} // namespace latfm
