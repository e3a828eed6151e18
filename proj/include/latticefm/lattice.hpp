#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latticefm/intmat.hpp"

namespace latfm {

struct Signature {
    int plus = 0;
    int minus = 0;

    int rank() const { return plus + minus; }
    bool is_definite() const { return plus == 0 || minus == 0; }
    bool is_positive_definite() const { return minus == 0 && plus > 0; }
    bool is_negative_definite() const { return plus == 0 && minus > 0; }
    bool is_indefinite() const { return plus > 0 && minus > 0; }
    bool operator==(const Signature&) const = default;
};

// An even nondegenerate lattice presented by its Gram matrix.
// Basis vectors are the unit coordinate vectors; the pairing is (v,w) = v^t G w.
class Lattice {
public:
    explicit Lattice(IntMat gram, std::string label = "");

    const IntMat& gram() const { return gram_; }
    std::size_t rank() const { return gram_.rows(); }
    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    Int det() const;

    // Index pairs (e, f) of standard hyperbolic bases; set by standard_lattice and
    // propagated through direct_sum. Needed by the Eichler-orbit machinery.
    const std::vector<std::pair<int, int>>& hyperbolic_pairs() const { return hyperbolic_pairs_; }
    void mark_hyperbolic_pair(int e, int f) { hyperbolic_pairs_.emplace_back(e, f); }

    bool operator==(const Lattice& other) const { return gram_ == other.gram_; }

private:
    IntMat gram_;
    std::string label_;
    std::vector<std::pair<int, int>> hyperbolic_pairs_;
};

// An isometric embedding of `domain` onto a sublattice of `ambient`;
// columns of `matrix` are the images of the domain basis vectors.
class Embedding {
public:
    Embedding(Lattice domain, Lattice ambient, IntMat matrix);

    const Lattice& domain() const { return domain_; }
    const Lattice& ambient() const { return ambient_; }
    const IntMat& matrix() const { return matrix_; }

private:
    Lattice domain_;
    Lattice ambient_;
    IntMat matrix_;
};

Lattice make_lattice(const IntMat& gram, const std::string& label = "");

// Named lattices with frozen basis orderings:
//   U            e, f with e^2 = f^2 = 0, (e,f) = 1
//   E8 / E8(-1)  Bourbaki Cartan matrix, nodes 1..8
//   E6 / E6(-1)  Bourbaki Cartan matrix, nodes 1..6
//   A2 / A2(-1)  [[2,1],[1,2]] and its negative
//   D16plus(-1)  negative of the even unimodular D16+ (D16 glued with the half-vector)
//   <n>          rank one, generator of square n (n even, nonzero)
//   K3           U + U + U + E8(-1) + E8(-1), in this block order
//   L2d(d)       U + U + <-2d> + E8(-1) + E8(-1), in this block order
Lattice standard_lattice(const std::string& name);
Lattice standard_lattice(const std::string& name, long parameter);

Lattice hyperbolic_plane();
Lattice rank_one(const Int& n);
Lattice e8();
Lattice e6();
Lattice a2();
Lattice d16plus_negative();
Lattice k3_lattice();
Lattice l2d_lattice(long d);

Lattice direct_sum(const Lattice& a, const Lattice& b);
Lattice direct_sum(const std::vector<Lattice>& parts);
Lattice twist(const Lattice& l, const Int& n);

// Exact signature by symmetric congruence diagonalisation over Q.
Signature signature(const Lattice& l);

// Embedding of the span of the given columns (must be independent with nondegenerate
// restriction of the form).
Embedding span_embedding(const Lattice& ambient, const IntMat& columns,
                         const std::string& label = "");

// The orthogonal complement of the image, always primitive in the ambient lattice.
Embedding orthogonal_complement(const Embedding& e);

// True iff ambient/image is torsion free (all invariant factors of the matrix are 1).
bool is_primitive(const Embedding& e);

// Saturation of the image; contains it with finite index.
Embedding primitive_hull(const Embedding& e);

// Positive generator of the ideal (v, L).
Int divisor(const Lattice& l, const IntVec& v);

bool is_primitive_vector(const Lattice& l, const IntVec& v);

// All v with v^t G v = n for a definite lattice, both signs included,
// in lexicographic order. Exact Fincke-Pohst style enumeration; every
// candidate is verified exactly.
std::vector<IntVec> short_vectors(const Lattice& l, const Int& n);

struct RepresentResult {
    enum class Status { Witness, ObstructedMod, NotFound };
    Status status = Status::NotFound;
    IntVec witness;                 // Status::Witness
    bool witness_primitive = false; // gcd of witness coordinates is 1
    Int obstruction_modulus;        // Status::ObstructedMod
    // Status::NotFound bookkeeping: which guarantee applies.
    bool complete = false;          // definite lattice, finite ball exhausted: a proof
    long coefficient_bound = 0;     // indefinite search box that was exhausted
    Int largest_scanned_modulus;    // congruence moduli scanned without finding an obstruction

    bool found() const { return status == Status::Witness; }
};

// Searches for v != 0 with v^t G v = n. Definite lattices get a complete decision.
// Indefinite lattices are scanned for congruence obstructions (all moduli m <= bound
// with m^rank <= 10^7, plus 8|det G|), then searched over |coordinates| <= bound.
RepresentResult represents(const Lattice& l, const Int& n, long bound = 100);

// All isometries of a definite lattice of rank <= 8, by backtracking over images of
// basis vectors among short vectors of matching norms. Closed under product and inverse.
std::vector<IntMat> isometry_group_definite(const Lattice& l);

// All S with S^t G1 S = G2, columns drawn from short vectors of `l1`.
std::vector<IntMat> isometries_into(const Lattice& l1, const IntMat& g2, bool first_only);

// For a rank-2 even unimodular lattice of signature (1,1): a basis change to the
// standard hyperbolic Gram [[0,1],[1,0]], found from an exact isotropic vector.
std::optional<IntMat> hyperbolic_plane_basis(const Lattice& l);

constexpr int kDefiniteRankLimit = 8;

} // namespace latfm
