#pragma once

#include <utility>

#include "latticefm/genus.hpp"

namespace latfm {

struct OverlatticeResult {
    Lattice lattice;     // the glued overlattice, HNF-canonical basis
    Embedding embedding; // the original lattice inside it
    Int index;           // [L : M], equals |H|
};

// An isotropic subgroup of disc(T + K), kept both in chain coordinates and as the
// graph pairs (x in D_T, y in D_K) of its split presentation.
struct GluingDatum {
    FqfSubgroup h;
    std::vector<std::pair<FqfElement, FqfElement>> pairs;
    std::vector<FqfElement> gamma_basis; // independent generators of Gamma = p_T(H)
    std::vector<long> gamma_orders;
    std::vector<FqfElement> gamma_images; // their images under the anti-isometry
};

// L_H = preimage of H in the dual lattice; even and integral because H is isotropic.
OverlatticeResult glue(const Lattice& m, const FqfSubgroup& h);
OverlatticeResult glue(const Lattice& m, const DiscriminantForm& dm, const FqfSubgroup& h);

// Image of L/iM in D_M for a finite-index embedding; always isotropic.
FqfSubgroup classifying_subgroup(const Embedding& i);
FqfSubgroup classifying_subgroup(const Embedding& i, const DiscriminantForm& d_domain);

struct SplitProjections {
    bool t_injective = false;
    bool k_injective = false;
    std::vector<std::pair<FqfElement, FqfElement>> pairs; // (D_T part, D_K part) per element
    // graph data, filled when both projections are injective
    std::vector<FqfElement> gamma_basis;
    std::vector<long> gamma_orders;
    std::vector<FqfElement> gamma_images;
};

// Decomposes a subgroup of disc(T + K) along the two factors.
SplitProjections split_projections(const Lattice& t, const Lattice& k, const FqfSubgroup& h,
                                   long limit = kDefaultGroupLimit);

// All isotropic H <= D_T x D_K with both projections injective whose glued lattice has
// discriminant form isomorphic to target_q. Each datum comes in split presentation.
std::vector<GluingDatum> enumerate_gluings(const Lattice& t, const Lattice& k,
                                           const FiniteQuadraticForm& target_q,
                                           long limit = kDefaultGroupLimit);

// Orbits of the (left x right)-action g f h^-1 on a list of automorphisms, via union-find.
long double_orbit_count(const FiniteQuadraticForm& q, const std::vector<FqfAut>& elements,
                        const std::vector<FqfAut>& left_gens,
                        const std::vector<FqfAut>& right_gens);

// Orbits of gluing data under subgroups of O(D_T) and O(D_K) acting on the graph pairs.
long count_gluing_orbits(const FiniteQuadraticForm& d_t, const FiniteQuadraticForm& d_k,
                         const std::vector<GluingDatum>& gluings,
                         const std::vector<FqfAut>& left_gens_on_t,
                         const std::vector<FqfAut>& right_gens_on_k);

// Gluing lists for (T,K) and (T,K') matched through an isomorphism q_K = q_K',
// valid when K' is in the genus of K and the overlattice genus has a unique class.
std::vector<std::pair<GluingDatum, GluingDatum>> transfer_gluings(const Lattice& t,
                                                                  const Lattice& k,
                                                                  const Lattice& k_prime,
                                                                  const Lattice& l,
                                                                  long limit = kDefaultGroupLimit);

} // namespace latfm
