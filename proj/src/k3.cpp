#include "latticefm/k3.hpp"

#include <algorithm>
#include <set>

namespace latfm {

PolarisedSetup polarised_setup(long d) {
    Lattice ambient = l2d_lattice(d);
    DiscriminantForm disc = discriminant_form(ambient);
    return PolarisedSetup{d, std::move(ambient), std::move(disc)};
}

int prime_count(long d) {
    if (d < 1) throw PreconditionError("prime_count needs d >= 1");
    if (d == 1) return 1;
    int count = 0;
    for (long p = 2; p * p <= d; ++p)
        if (d % p == 0) {
            ++count;
            while (d % p == 0) d /= p;
        }
    if (d > 1) ++count;
    return count;
}

Int oguiso_count(long d) {
    Int one = 1;
    return one << (prime_count(d) - 1);
}

Int stable_covering_degree(long d, long limit) {
    if (d < 1) throw PreconditionError("stable_covering_degree needs d >= 1");
    if (d == 1) return 1;
    FiniteQuadraticForm q = discriminant_form(l2d_lattice(d)).form;
    return Int(long(orthogonal_group(q, limit).size())) / 2;
}

EichlerInvariant eichler_invariant(const Lattice& l, const DiscriminantForm& df, const IntVec& v) {
    if (l.hyperbolic_pairs().size() < 2)
        throw PreconditionError("NoMarkedHyperbolicPlanes: the lattice carries no 2U marking");
    if (!is_primitive_vector(l, v)) throw PreconditionError("NotPrimitive: vector has content > 1");
    Int div = divisor(l, v);
    RatVec w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        w[i] = Rat(v[i], div);
        w[i].canonicalize();
    }
    EichlerInvariant out;
    out.cls = class_of_dual_vector(l, df, w);
    IntVec gv = l.gram() * v;
    out.length = 0;
    for (std::size_t i = 0; i < v.size(); ++i) out.length += v[i] * gv[i];
    return out;
}

EichlerInvariant eichler_invariant(const Lattice& l, const IntVec& v) {
    return eichler_invariant(l, discriminant_form(l), v);
}

VcOrbitCount count_vc_orbits(long p) {
    if (p < 2 || mpz_probab_prime_p(Int(p).get_mpz_t(), 30) == 0)
        throw PreconditionError("count_vc_orbits needs a prime");
    long d = p * p * p;
    Lattice l = l2d_lattice(d);
    DiscriminantForm df = discriminant_form(l);

    VcOrbitCount out;
    std::set<EichlerInvariant> invariants;
    for (long c = 0; c < p * p; ++c) {
        if ((1 + c * c) % p != 0) continue;
        IntVec v(l.rank(), Int(0));
        v[2] = Int(p) * p;            // e2
        v[3] = Int(p) * (1 + c * c);  // f2
        v[4] = c;                     // generator of <-2d>
        if (!is_primitive_vector(l, v)) throw Error("v_c family member is not primitive");
        EichlerInvariant inv = eichler_invariant(l, df, v);
        if (inv.length != Int(2) * d) throw Error("v_c family member has wrong length");
        if (divisor(l, v) != Int(p) * p) throw Error("v_c family member has wrong divisor");
        invariants.insert(inv);
        out.vectors.push_back(std::move(v));
    }
    out.stable_orbits = long(invariants.size());
    out.full_orbit_lower_bound = (out.stable_orbits + 1) / 2;
    return out;
}

Int fm_count_rank_one(long d, long limit) {
    if (d < 1) throw PreconditionError("fm_count_rank_one needs d >= 1");
    FiniteQuadraticForm q = discriminant_form(l2d_lattice(d)).form;
    std::vector<FqfAut> group = orthogonal_group(q, limit);
    std::vector<FqfAut> pm{negation_aut(q)};
    return Int(double_orbit_count(q, group, pm, pm));
}

FmEntry fm_entry_from_definite(const Lattice& s, std::vector<FqfAut> hodge_image) {
    DiscriminantForm df = discriminant_form(s);
    FmEntry entry;
    entry.label = s.label().empty() ? "definite complement" : s.label();
    entry.disc = df.form;
    entry.automatic = true;
    std::set<FqfAut> images;
    for (const IntMat& g : isometry_group_definite(s))
        images.insert(induced_disc_automorphism(s, df, g));
    entry.os_image.assign(images.begin(), images.end());
    entry.hodge_image =
        hodge_image.empty() ? std::vector<FqfAut>{negation_aut(df.form)} : std::move(hodge_image);
    return entry;
}

FmEntry fm_entry_manual(const std::string& label, const FiniteQuadraticForm& disc,
                        std::vector<FqfAut> os_image, std::vector<FqfAut> hodge_image) {
    FmEntry entry;
    entry.label = label;
    entry.disc = disc;
    entry.os_image = std::move(os_image);
    entry.hodge_image =
        hodge_image.empty() ? std::vector<FqfAut>{negation_aut(disc)} : std::move(hodge_image);
    return entry;
}

FmCountResult fm_count_general(const std::vector<FmEntry>& entries, long limit) {
    FmCountResult result;
    result.total = 0;
    for (const FmEntry& entry : entries) {
        for (const FqfAut& a : entry.os_image)
            if (!is_automorphism(entry.disc, a))
                throw PreconditionError("NotClosed: listed O(S) generator does not preserve q");
        for (const FqfAut& a : entry.hodge_image)
            if (!is_automorphism(entry.disc, a))
                throw PreconditionError("NotClosed: listed Hodge generator does not preserve q");
        std::vector<FqfAut> group = orthogonal_group(entry.disc, limit);
        long orbits = double_orbit_count(entry.disc, group, entry.hodge_image, entry.os_image);
        result.breakdown.emplace_back(entry.label, orbits);
        result.total += orbits;
    }
    return result;
}

namespace {

void add_claim(PolarisationReport& report, const std::string& id, const std::string& topic,
               const std::string& description, bool pass, const std::string& detail = "") {
    report.claims.push_back(ReportClaim{id, topic, description, pass, detail});
    if (!pass) report.all_pass = false;
}

// x = e1 and y = -7 f1 + (a norm-`corr` correction); embeds the two rank-2 candidates
// primitively into the K3 lattice.
Embedding embed_rank2_candidate(const Lattice& k3, const IntMat& gram) {
    std::size_t n = k3.rank();
    IntMat cols(n, 2);
    cols(0, 0) = 1; // x = e1
    cols(1, 1) = -7;
    if (gram(1, 1) == -2) {
        cols(6, 1) = 1; // a root of the first E8(-1) block
    } else if (gram(1, 1) == 10) {
        cols(2, 1) = 1; // e2 + 5 f2 has square 10
        cols(3, 1) = 5;
    } else {
        throw Error("unsupported rank-2 candidate");
    }
    Embedding e = span_embedding(k3, cols);
    if (!(e.domain().gram() == gram)) throw Error("candidate embedding has wrong Gram matrix");
    return e;
}

} // namespace

PolarisationReport verify_polarisation_examples() {
    PolarisationReport report;
    Lattice n1(IntMat::from_rows({{0, -7}, {-7, -2}}), "N1");
    Lattice n2(IntMat::from_rows({{0, -7}, {-7, 10}}), "N2");

    {
        RepresentResult r = represents(n1, -2, 100);
        add_claim(report, "ns-candidates/represents-minus-2", "polarisation-degrees",
                  "[[0,-7],[-7,-2]] represents -2", r.found(),
                  r.found() ? "witness (" + r.witness[0].get_str() + "," + r.witness[1].get_str() + ")"
                            : "no witness");
    }
    {
        RepresentResult r = represents(n1, 10, 100);
        bool pass = !r.found();
        std::string detail = "no witness with |coords| <= 100; congruence moduli scanned up to " +
                             r.largest_scanned_modulus.get_str() + " without an obstruction";
        if (r.status == RepresentResult::Status::ObstructedMod)
            detail = "obstructed mod " + r.obstruction_modulus.get_str();
        add_claim(report, "ns-candidates/does-not-represent-10", "polarisation-degrees",
                  "[[0,-7],[-7,-2]] does not represent 10", pass, detail);
    }
    {
        RepresentResult r = represents(n2, 10, 100);
        bool pass = r.found() && r.witness == IntVec{Int(0), Int(1)} && r.witness_primitive;
        add_claim(report, "ns-candidates/represents-10", "polarisation-degrees",
                  "[[0,-7],[-7,10]] primitively represents 10 via (0,1)", pass);
    }
    {
        RepresentResult r = represents(n2, 6, 100);
        bool pass = r.found() && r.witness == IntVec{Int(2), Int(3)};
        add_claim(report, "ns-candidates/represents-6", "polarisation-degrees",
                  "[[0,-7],[-7,10]] represents 6 via (2,3)", pass);
    }
    {
        Lattice a2m = twist(a2(), -1);
        Lattice diag = direct_sum(rank_one(-42), rank_one(-14));
        bool a2_has = !short_vectors(a2m, -2).empty();
        bool diag_has = !short_vectors(diag, -2).empty();
        add_claim(report, "ns-candidates/root-presence", "polarisation-degrees",
                  "A2(-1) contains (-2)-vectors, <-42>+<-14> does not", a2_has && !diag_has);
    }
    {
        // both candidates embed into the K3 lattice with complements in one genus,
        // and the complement genus has a uniqueness certificate
        Lattice k3 = k3_lattice();
        Embedding e1 = embed_rank2_candidate(k3, n1.gram());
        Embedding e2 = embed_rank2_candidate(k3, n2.gram());
        bool prim = is_primitive(e1) && is_primitive(e2);
        Embedding c1 = orthogonal_complement(e1);
        Embedding c2 = orthogonal_complement(e2);
        bool genus_eq = same_genus(c1.domain(), c2.domain());
        bool unique = nikulin_unique_in_genus(c1.domain()) == GenusUniqueness::Yes;
        add_claim(report, "ns-candidates/common-complement", "polarisation-degrees",
                  "the two candidates have K3-complements in one genus, unique in it",
                  prim && genus_eq && unique);
    }
    {
        // the E6-family: both A2(-1) and <-42>+<-14> occur as complements of the same
        // rank-19 sublattice inside lattices with the L2d(7) invariants
        Lattice t19 = direct_sum({hyperbolic_plane(), hyperbolic_plane(), twist(e8(), -1),
                                  twist(e6(), -1), rank_one(-14)});
        FiniteQuadraticForm target = discriminant_form(l2d_lattice(7)).form;
        auto ga = enumerate_gluings(t19, twist(a2(), -1), target);
        auto gb = enumerate_gluings(t19, direct_sum(rank_one(-42), rank_one(-14)), target);
        add_claim(report, "ns-candidates/e6-family-complements", "polarisation-degrees",
                  "A2(-1) and <-42>+<-14> both glue with the rank-19 sublattice to the "
                  "L2d(7) invariants",
                  !ga.empty() && !gb.empty(),
                  std::to_string(ga.size()) + " and " + std::to_string(gb.size()) + " gluings");
    }
    {
        // Neron-Severi identification: <14> glued with <-42>+<-14> recovers A2(-1)+<14>
        Lattice ns_model = direct_sum(twist(a2(), -1), rank_one(14));
        FiniteQuadraticForm target = discriminant_form(ns_model).form;
        auto gl = enumerate_gluings(rank_one(14), direct_sum(rank_one(-42), rank_one(-14)), target);
        bool pass = !gl.empty() && nikulin_unique_in_genus(ns_model) == GenusUniqueness::Yes;
        if (pass) {
            Lattice m = direct_sum(rank_one(14), direct_sum(rank_one(-42), rank_one(-14)));
            for (const GluingDatum& g : gl)
                if (!same_genus(glue(m, g.h).lattice, ns_model)) pass = false;
        }
        add_claim(report, "ns-candidates/neron-severi-identification", "polarisation-degrees",
                  "<14> + <-42> + <-14> has an overlattice isometric to A2(-1) + <14>", pass);
    }
    return report;
}

} // namespace latfm
