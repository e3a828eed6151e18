#pragma once

#include <optional>
#include <vector>

#include "latticefm/lattice.hpp"

namespace latfm {

// Cap for element-level enumeration (elements, subgroups, automorphisms).
constexpr long kDefaultGroupLimit = 100000;

// Element of a finite quadratic form, coordinates modulo the invariant factors.
using FqfElement = std::vector<long>;

// Finite abelian group in invariant-factor form d_1 | d_2 | ... | d_k (each > 1)
// with a quadratic form q: D -> Q/2Z and its bilinear form b: D x D -> Q/Z.
// q-values are stored in [0,2), b-values in [0,1).
class FiniteQuadraticForm {
public:
    FiniteQuadraticForm() = default; // trivial group
    FiniteQuadraticForm(std::vector<long> factors, std::vector<Rat> q, RatMat b);

    // Canonicalises an arbitrary cyclic presentation (orders need not chain) into
    // invariant-factor form.
    static FiniteQuadraticForm from_cyclic(const std::vector<long>& orders,
                                           const std::vector<Rat>& q, const RatMat& b);

    const std::vector<long>& invariant_factors() const { return factors_; }
    std::size_t gens() const { return factors_.size(); }
    Int order() const;
    bool is_trivial() const { return factors_.empty(); }

    const Rat& gen_q(std::size_t i) const { return q_[i]; }
    const Rat& gen_b(std::size_t i, std::size_t j) const { return b_(i, j); }

    FqfElement zero() const { return FqfElement(factors_.size(), 0); }
    FqfElement reduce(const std::vector<long>& coords) const;
    FqfElement add(const FqfElement& x, const FqfElement& y) const;
    FqfElement neg(const FqfElement& x) const;
    FqfElement scale(long n, const FqfElement& x) const;
    bool is_zero(const FqfElement& x) const;
    long element_order(const FqfElement& x) const;

    Rat q_of(const FqfElement& x) const;                      // in [0,2)
    Rat b_of(const FqfElement& x, const FqfElement& y) const; // in [0,1)

    FiniteQuadraticForm negated() const;

    bool operator==(const FiniteQuadraticForm&) const = default;

private:
    std::vector<long> factors_;
    std::vector<Rat> q_;
    RatMat b_;
};

FiniteQuadraticForm negate(const FiniteQuadraticForm& q);

// number of invariant factors > 1, i.e. l(D)
std::size_t min_generators(const FiniteQuadraticForm& q);

Rat mod_2z(const Rat& x);
Rat mod_z(const Rat& x);

// Discriminant form of a lattice together with rational lifts of its generators
// and the Smith data needed to map dual vectors to classes.
struct DiscriminantForm {
    FiniteQuadraticForm form;
    RatMat lifts;                  // rank x gens; column i lifts generator i into L (x) Q
    IntMat snf_u;                  // from u * gram * v = d
    std::vector<Int> snf_diag;     // all invariant factors including 1s
    std::vector<std::size_t> kept; // indices with d_i > 1

    RatVec lift(const FqfElement& x) const;
};

DiscriminantForm discriminant_form(const Lattice& l);

// Class of a dual vector w (basis coordinates in L (x) Q with G*w integral).
FqfElement class_of_dual_vector(const Lattice& l, const DiscriminantForm& df, const RatVec& w);

struct FqfSubgroup {
    std::vector<FqfElement> gens;
    std::vector<FqfElement> elements; // sorted, unique, contains zero

    std::size_t order() const { return elements.size(); }
    bool contains(const FqfElement& x) const;
    bool operator==(const FqfSubgroup&) const = default;
};

FqfSubgroup subgroup_closure(const FiniteQuadraticForm& q, const std::vector<FqfElement>& gens);
FqfSubgroup trivial_subgroup(const FiniteQuadraticForm& q);

std::vector<FqfElement> all_elements(const FiniteQuadraticForm& q,
                                     long limit = kDefaultGroupLimit);

// Every subgroup exactly once, by closure under adjoining single elements,
// deduplicated on the element set. Deterministic (order, elements) ordering.
std::vector<FqfSubgroup> all_subgroups(const FiniteQuadraticForm& q,
                                       long limit = kDefaultGroupLimit);

bool is_isotropic(const FiniteQuadraticForm& q, const FqfSubgroup& h);
std::vector<FqfSubgroup> isotropic_subgroups(const FiniteQuadraticForm& q,
                                             long limit = kDefaultGroupLimit);

// H^perp = {x | b(x, H) = 0}
FqfSubgroup orthogonal_subgroup(const FiniteQuadraticForm& q, const FqfSubgroup& h,
                                long limit = kDefaultGroupLimit);

// Induced form on H^perp / H for isotropic H.
struct QuotientForm {
    FiniteQuadraticForm form;
    std::vector<FqfElement> reps; // representatives in D of the quotient generators
};
QuotientForm quotient_form(const FiniteQuadraticForm& q, const FqfSubgroup& h,
                           long limit = kDefaultGroupLimit);

// Independent generators of a subgroup with chained orders (o_1 | o_2 | ...).
struct SubgroupBasis {
    std::vector<FqfElement> basis;
    std::vector<long> orders;
};
SubgroupBasis subgroup_basis(const FiniteQuadraticForm& q, const FqfSubgroup& h);

// Automorphism given by generator images; column i is the image of generator i.
using FqfAut = std::vector<FqfElement>;

FqfAut identity_aut(const FiniteQuadraticForm& q);
FqfAut negation_aut(const FiniteQuadraticForm& q);
FqfElement apply_aut(const FiniteQuadraticForm& q, const FqfAut& a, const FqfElement& x);
FqfAut compose_auts(const FiniteQuadraticForm& q, const FqfAut& a, const FqfAut& b); // a after b
bool is_automorphism(const FiniteQuadraticForm& q, const FqfAut& a);

// All automorphisms of the group preserving q (and hence b), by backtracking over
// generator images with (order, q-value) pruning.
std::vector<FqfAut> orthogonal_group(const FiniteQuadraticForm& q,
                                     long limit = kDefaultGroupLimit);

// Isomorphism of pairs (D,q) -> (D',q') as images of the generators of q1 in q2,
// or nullopt. The returned map is verified elementwise.
std::optional<FqfAut> fqf_isomorphic(const FiniteQuadraticForm& q1, const FiniteQuadraticForm& q2,
                                     long limit = kDefaultGroupLimit);

// Push-forward of a lattice isometry to the discriminant form.
FqfAut induced_disc_automorphism(const Lattice& l, const DiscriminantForm& df,
                                 const IntMat& isometry);

} // namespace latfm
