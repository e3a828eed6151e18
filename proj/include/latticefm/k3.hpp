#pragma once

#include <string>

#include "latticefm/overlattice.hpp"

namespace latfm {

// The ambient data of a degree-2d polarisation: the rank-21 complement lattice
// and its cyclic discriminant form of order 2d.
struct PolarisedSetup {
    long degree;
    Lattice ambient;
    DiscriminantForm disc;
};

PolarisedSetup polarised_setup(long d);

// Number of distinct prime factors, with the convention p(1) = 1.
int prime_count(long d);

// 2^(p(d)-1)
Int oguiso_count(long d);

// Degree of the covering between the stable and full quotients of the period domain:
// |O(D)| / 2 for the cyclic discriminant of L2d(d), with the d = 1 degeneration giving 1.
Int stable_covering_degree(long d, long limit = kDefaultGroupLimit);

struct EichlerInvariant {
    Int length;     // v^2
    FqfElement cls; // [v / div(v)] in the discriminant group
    bool operator==(const EichlerInvariant&) const = default;
    bool operator<(const EichlerInvariant& o) const {
        if (length != o.length) return length < o.length;
        return cls < o.cls;
    }
};

// Orbit invariant (v^2, [v/div(v)]) of a primitive vector in a lattice with a marked
// 2U summand.
EichlerInvariant eichler_invariant(const Lattice& l, const DiscriminantForm& df, const IntVec& v);
EichlerInvariant eichler_invariant(const Lattice& l, const IntVec& v);

struct VcOrbitCount {
    long stable_orbits = 0;           // distinct Eichler invariants
    long full_orbit_lower_bound = 0;  // ceil(stable / 2), from the +-id action
    std::vector<IntVec> vectors;      // the constructed family, in L2d(p^3) coordinates
};

// The family v_c = p^2 e2 + p(1+c^2) f2 + c l inside L2d(p^3), for 1 + c^2 = 0 (mod p),
// c = 0..p^2-1. Each vector is verified primitive with v^2 = 2p^3 and div = p^2.
VcOrbitCount count_vc_orbits(long p);

// Orbit count of O(D) under {+-id} x {+-id}; agrees with oguiso_count by two routes.
Int fm_count_rank_one(long d, long limit = kDefaultGroupLimit);

struct FmEntry {
    std::string label;
    FiniteQuadraticForm disc;          // D_S
    std::vector<FqfAut> os_image;      // generators of the image of O(S) in O(D_S)
    std::vector<FqfAut> hodge_image;   // generators of the Hodge-isometry image in O(D_S)
    bool automatic = false;            // os_image derived from a definite lattice
};

// Entry with the image of O(S) pushed forward automatically (S definite, rank <= 8).
// The Hodge image defaults to {+-id}, the generic choice.
FmEntry fm_entry_from_definite(const Lattice& s, std::vector<FqfAut> hodge_image = {});
FmEntry fm_entry_manual(const std::string& label, const FiniteQuadraticForm& disc,
                        std::vector<FqfAut> os_image, std::vector<FqfAut> hodge_image = {});

struct FmCountResult {
    Int total;
    std::vector<std::pair<std::string, long>> breakdown; // per-entry orbit counts
};

// Sum over candidate complements S of the double-orbit counts
// | hodge_image x os_image \ O(D_S) |.
FmCountResult fm_count_general(const std::vector<FmEntry>& entries,
                               long limit = kDefaultGroupLimit);

struct ReportClaim {
    std::string id;
    std::string topic;
    std::string description;
    bool pass = false;
    std::string detail;
};

struct PolarisationReport {
    std::vector<ReportClaim> claims;
    bool all_pass = true;
};

// Reproduces the worked representability and complement checks for the two rank-2
// Neron-Severi candidates and the E6-sublattice family.
PolarisationReport verify_polarisation_examples();

// Full reproduction suite; filter selects claims whose id or topic contains the string.
std::vector<ReportClaim> run_paper_suite(const std::string& filter = "",
                                         bool inject_failure = false);

} // namespace latfm
