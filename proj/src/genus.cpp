#include "latticefm/genus.hpp"

namespace latfm {

GenusSymbol genus_symbol(const Lattice& l) {
    return GenusSymbol{signature(l), discriminant_form(l).form};
}

bool same_genus(const Lattice& l1, const Lattice& l2, long limit) {
    if (signature(l1) != signature(l2)) return false;
    GenusSymbol a = genus_symbol(l1);
    GenusSymbol b = genus_symbol(l2);
    return fqf_isomorphic(a.disc, b.disc, limit).has_value();
}

GenusUniqueness nikulin_unique_in_genus(const Lattice& l) {
    Signature sig = signature(l);
    if (!sig.is_indefinite()) return GenusUniqueness::Unknown;
    std::size_t length = discriminant_form(l).form.gens();
    return l.rank() >= 2 + length ? GenusUniqueness::Yes : GenusUniqueness::Unknown;
}

std::optional<IntMat> is_isomorphic_definite(const Lattice& l1, const Lattice& l2) {
    Signature s1 = signature(l1), s2 = signature(l2);
    if (!s1.is_definite() || !s2.is_definite() || l1.rank() == 0 || l2.rank() == 0)
        throw PreconditionError("MixedDefiniteness: both lattices must be definite");
    if (l1.rank() > kDefiniteRankLimit || l2.rank() > kDefiniteRankLimit)
        throw LimitError("RankLimitExceeded: isomorphism testing is limited to rank <= 8");
    if (s1 != s2) return std::nullopt;
    if (abs(l1.det()) != abs(l2.det())) return std::nullopt;
    std::vector<IntMat> found = isometries_into(l1, l2.gram(), true);
    if (found.empty()) return std::nullopt;
    return found.front();
}

} // namespace latfm
