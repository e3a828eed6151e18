// Acceptance suite: one criterion per block, one PASS/FAIL line each, exact
// assertions throughout. Exit code 0 only if every criterion holds.

#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "latticefm/k3.hpp"

using namespace latfm;

namespace {

struct CheckFailure {
    std::string what;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw CheckFailure{what};
}

Lattice form_a() { return make_lattice(IntMat::from_rows({{2, 4}, {4, 0}}), "A"); }
Lattice form_b() { return make_lattice(IntMat::from_rows({{0, 4}, {4, 0}}), "B"); }
Lattice form_c() { return make_lattice(IntMat::from_rows({{-2, 4}, {4, 0}}), "C"); }
Lattice form_d() { return make_lattice(IntMat::from_rows({{2, 1}, {1, 12}}), "D"); }
Lattice form_e() { return make_lattice(IntMat::from_rows({{4, 1}, {1, 6}}), "E"); }

FiniteQuadraticForm model_2_8(const Rat& q1, const Rat& q2) {
    RatMat b(2, 2);
    b(0, 0) = mod_z(q1);
    b(1, 1) = mod_z(q2);
    b(0, 1) = b(1, 0) = Rat(1, 2);
    return FiniteQuadraticForm({2, 8}, {q1, q2}, b);
}

std::vector<Rat> order2_values(const FiniteQuadraticForm& q) {
    std::vector<Rat> vals;
    for (const FqfElement& x : all_elements(q))
        if (q.element_order(x) <= 2) vals.push_back(q.q_of(x));
    std::sort(vals.begin(), vals.end());
    return vals;
}

// ---- criterion 1: binary-form suite -------------------------------------------------

void criterion_binary_forms() {
    DiscriminantForm da = discriminant_form(form_a());
    require(da.form.invariant_factors() == std::vector<long>{2, 8}, "D_A is Z/2 x Z/8");
    require(fqf_isomorphic(da.form, model_2_8(Rat(1, 2), Rat(3, 8))).has_value(),
            "q_A has generator values 1/2 and 3/8");

    DiscriminantForm db = discriminant_form(form_b());
    require(db.form.invariant_factors() == std::vector<long>{4, 4}, "D_B is Z/4 x Z/4");

    DiscriminantForm dc = discriminant_form(form_c());
    require(!fqf_isomorphic(da.form, dc.form).has_value(), "q_A and q_C are not isomorphic");
    require(order2_values(da.form) == std::vector<Rat>{Rat(0), Rat(0), Rat(1, 2), Rat(1, 2)},
            "order-2 q-values of D_A are {0, 1/2, 0, 1/2}");
    require(order2_values(dc.form) == std::vector<Rat>{Rat(0), Rat(0), Rat(3, 2), Rat(3, 2)},
            "order-2 q-values of D_C are {0, 3/2, 0, 3/2}");

    require(!same_genus(form_a(), form_b()), "A and B are in different genera");
    require(!same_genus(form_a(), form_c()), "A and C are in different genera");
}

// ---- criterion 2: genus vs isomorphism ----------------------------------------------

void criterion_genus_vs_isomorphism() {
    require(same_genus(form_d(), form_e()), "D and E are in the same genus");
    require(!is_isomorphic_definite(form_d(), form_e()).has_value(), "D and E are not isomorphic");

    RepresentResult rd = represents(form_d(), 2);
    require(rd.found() && rd.witness == IntVec{Int(1), Int(0)}, "D represents 2 via (1,0)");

    RepresentResult re = represents(form_e(), 2);
    require(!re.found() && re.complete, "E does not represent 2, with the completeness flag");
}

// ---- criterion 3: gluing laws over the corpus ----------------------------------------

void criterion_gluing_laws() {
    std::vector<Lattice> corpus{
        hyperbolic_plane(),
        direct_sum(rank_one(2), rank_one(-2)),
        direct_sum(rank_one(8), rank_one(2)),
        form_a(),
        form_b(),
        form_c(),
        direct_sum(a2(), twist(a2(), -1)),
    };
    int glued_total = 0;
    for (const Lattice& m : corpus) {
        DiscriminantForm dm = discriminant_form(m);
        Int det_m = abs(det_exact(m.gram()));
        for (const FqfSubgroup& h : isotropic_subgroups(dm.form)) {
            OverlatticeResult res = glue(m, dm, h);
            FqfSubgroup back = classifying_subgroup(res.embedding, dm);
            require(back.elements == h.elements, "classify(glue(H)) = H");
            Int ho(long(h.order()));
            require(abs(res.lattice.det()) * ho * ho == det_m, "|det glue| |H|^2 = |det M|");
            for (std::size_t i = 0; i < res.lattice.rank(); ++i)
                require(res.lattice.gram()(i, i) % 2 == 0, "glued Gram is even");
            ++glued_total;
        }
    }
    require(glued_total >= 10, "the corpus provides a nontrivial family of gluings");
}

// ---- criterion 4: primitivity criterion ----------------------------------------------

void criterion_primitivity() {
    Lattice l = make_lattice(IntMat::from_rows({{2, 0}, {0, 2}}));
    IntMat cols(2, 2);
    cols(0, 0) = 2; // T = <8> spanned by 2 e1 (imprimitive)
    cols(1, 1) = 1; // K = <2> spanned by e2 (primitive)
    Lattice m = direct_sum(rank_one(8), rank_one(2));
    Embedding e(m, l, cols);
    FqfSubgroup h = classifying_subgroup(e);
    SplitProjections sp = split_projections(rank_one(8), rank_one(2), h);
    require(sp.t_injective, "p_T is injective");
    require(!sp.k_injective, "p_K is not injective");

    IntMat t_col(2, 1), k_col(2, 1);
    t_col(0, 0) = 2;
    k_col(1, 0) = 1;
    require(is_primitive(span_embedding(l, k_col)), "the K side is primitive");
    require(!is_primitive(span_embedding(l, t_col)), "the T side is imprimitive");
}

// ---- criterion 5: unimodular gluing count --------------------------------------------

void criterion_gluing_count() {
    std::vector<GluingDatum> gl = enumerate_gluings(rank_one(4), rank_one(-4), FiniteQuadraticForm());
    std::size_t aut_order = orthogonal_group(discriminant_form(rank_one(4)).form).size();
    require(gl.size() == 2, "exactly two gluings of <4> + <-4>");
    require(aut_order == 2, "|O(D_<4>)| = 2");

    Lattice m = direct_sum(rank_one(4), rank_one(-4));
    for (const GluingDatum& g : gl) {
        OverlatticeResult res = glue(m, g.h);
        require(abs(res.lattice.det()) == 1, "glued lattice is unimodular");
        require(signature(res.lattice) == Signature{1, 1}, "glued lattice has signature (1,1)");
        require(hyperbolic_plane_basis(res.lattice).has_value(),
                "glued Gram reduces to the canonical hyperbolic form");
    }
}

// ---- criterion 6: automorphism order law ---------------------------------------------

void criterion_aut_order_law() {
    for (long d = 2; d <= 12; ++d) {
        std::size_t order = orthogonal_group(discriminant_form(l2d_lattice(d)).form).size();
        std::ostringstream what;
        what << "|O(D)| = 2^p(d) at d = " << d;
        require(Int(long(order)) == Int(1) << prime_count(d), what.str());
    }
    require(orthogonal_group(discriminant_form(l2d_lattice(1)).form).size() == 1,
            "d = 1 is the documented exception with |O(D)| = 1");
}

// ---- criterion 7: rank-one counts, two routes ----------------------------------------

void criterion_rank_one_counts() {
    for (long d = 1; d <= 12; ++d) {
        std::ostringstream what;
        what << "orbit count equals 2^(p(d)-1) at d = " << d;
        require(fm_count_rank_one(d) == oguiso_count(d), what.str());
    }
}

// ---- criterion 8: the divisor-p^2 orbit family ---------------------------------------

void criterion_orbit_family() {
    VcOrbitCount c5 = count_vc_orbits(5);
    require(c5.stable_orbits == 10 && c5.full_orbit_lower_bound == 5, "p = 5 gives (10, 5)");
    VcOrbitCount c13 = count_vc_orbits(13);
    require(c13.stable_orbits == 26 && c13.full_orbit_lower_bound == 13, "p = 13 gives (26, 13)");
    VcOrbitCount c3 = count_vc_orbits(3);
    require(c3.stable_orbits == 0 && c3.full_orbit_lower_bound == 0, "p = 3 gives (0, 0)");

    for (long p : {5L, 13L}) {
        Lattice l = l2d_lattice(p * p * p);
        for (const IntVec& v : count_vc_orbits(p).vectors) {
            require(is_primitive_vector(l, v), "family vector is primitive");
            IntVec gv = l.gram() * v;
            Int len = 0;
            for (std::size_t i = 0; i < v.size(); ++i) len += v[i] * gv[i];
            require(len == Int(2) * p * p * p, "family vector has length 2p^3");
            require(divisor(l, v) == Int(p) * p, "family vector has divisor p^2");
        }
    }
}

// ---- criterion 9: unimodular complements ---------------------------------------------

void criterion_unimodular_complements() {
    for (long d = 1; d <= 3; ++d) {
        Lattice a = direct_sum({twist(e8(), -1), twist(e8(), -1), hyperbolic_plane(),
                                hyperbolic_plane(), rank_one(-2 * d)});
        Lattice b = direct_sum({d16plus_negative(), hyperbolic_plane(), hyperbolic_plane(),
                                rank_one(-2 * d)});
        Lattice c = l2d_lattice(d);
        GenusSymbol ga = genus_symbol(a), gb = genus_symbol(b), gc = genus_symbol(c);
        std::ostringstream what;
        what << "three rank-21 lattices share the genus symbol at d = " << d;
        require(ga.sig == gc.sig && gb.sig == gc.sig, what.str() + " (signature)");
        require(fqf_isomorphic(ga.disc, gc.disc).has_value() &&
                    fqf_isomorphic(gb.disc, gc.disc).has_value(),
                what.str() + " (form)");
    }
}

// ---- criterion 10: representation report ---------------------------------------------

void criterion_representation_report() {
    Lattice n1 = make_lattice(IntMat::from_rows({{0, -7}, {-7, -2}}));
    Lattice n2 = make_lattice(IntMat::from_rows({{0, -7}, {-7, 10}}));

    require(represents(n1, -2, 100).found(), "[[0,-7],[-7,-2]] represents -2");

    RepresentResult r10 = represents(n1, 10, 100);
    require(!r10.found(), "[[0,-7],[-7,-2]] has no witness for 10 at bound 100");
    require(r10.coefficient_bound >= 100, "the bound-100 search ran");
    require(r10.largest_scanned_modulus >= 100, "the congruence scan covered moduli up to 100");

    RepresentResult rb10 = represents(n2, 10, 100);
    require(rb10.found() && rb10.witness == IntVec{Int(0), Int(1)} && rb10.witness_primitive,
            "[[0,-7],[-7,10]] primitively represents 10 via (0,1)");
    RepresentResult rb6 = represents(n2, 6, 100);
    require(rb6.found() && rb6.witness == IntVec{Int(2), Int(3)},
            "[[0,-7],[-7,10]] represents 6 via (2,3)");

    require(!short_vectors(twist(a2(), -1), -2).empty(), "A2(-1) contains a (-2)-vector");
    require(short_vectors(direct_sum(rank_one(-42), rank_one(-14)), -2).empty(),
            "<-42> + <-14> contains no (-2)-vector");

    PolarisationReport report = verify_polarisation_examples();
    require(report.all_pass, "every claim in the polarisation report verifies");
}

// ---- criterion 11: discriminant group oracle -----------------------------------------

// Independent cokernel computation: canonical coset representatives from the
// column-style Hermite basis of im(G), never touching the Smith machinery.
struct CokernelOracle {
    IntMat basis; // lower triangular, columns span im(G)
    std::size_t n;

    explicit CokernelOracle(const IntMat& g)
        : basis(hermite_normal_form(g.transposed()).h.transposed()), n(g.rows()) {}

    IntVec reduce(IntVec x) const {
        for (std::size_t i = 0; i < n; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), x[i].get_mpz_t(), basis(i, i).get_mpz_t());
            if (q == 0) continue;
            for (std::size_t r = i; r < n; ++r) x[r] -= q * basis(r, i);
        }
        return x;
    }

    Int group_order() const {
        Int n_total = 1;
        for (std::size_t i = 0; i < n; ++i) n_total *= basis(i, i);
        return n_total;
    }

    // number of cosets killed by m
    long annihilated_by(long m) const {
        std::vector<Int> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = basis(i, i);
        IntVec x(n, Int(0));
        long count = 0;
        for (;;) {
            IntVec mx(n);
            for (std::size_t i = 0; i < n; ++i) mx[i] = Int(m) * x[i];
            IntVec r = reduce(mx);
            bool zero = true;
            for (const Int& v : r)
                if (v != 0) zero = false;
            if (zero) ++count;
            std::size_t i = n;
            while (i > 0) {
                x[i - 1] += 1;
                if (x[i - 1] < d[i - 1]) break;
                x[i - 1] = 0;
                --i;
            }
            if (i == 0) break;
        }
        return count;
    }
};

struct Lcg {
    unsigned long long state;
    explicit Lcg(unsigned long long seed) : state(seed) {}
    long next(long lo, long hi) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return lo + long((state >> 33) % (unsigned long long)(hi - lo + 1));
    }
};

void criterion_oracle_equivalence() {
    Lcg rng(424243);
    int samples = 0;
    while (samples < 200) {
        std::size_t r = std::size_t(rng.next(1, 3));
        IntMat g(r, r);
        for (std::size_t i = 0; i < r; ++i) {
            g(i, i) = 2 * rng.next(-3, 3);
            for (std::size_t j = i + 1; j < r; ++j) g(i, j) = g(j, i) = rng.next(-6, 6);
        }
        Int det = det_exact(g);
        if (det == 0) continue;
        ++samples;

        Lattice l(g);
        DiscriminantForm df = discriminant_form(l);
        CokernelOracle oracle(g);

        require(df.form.order() == abs(det), "discriminant order equals |det|");
        require(oracle.group_order() == abs(det), "oracle coset count equals |det|");

        // annihilator counts for each divisor of the exponent match the Smith factors
        std::vector<long> factors = df.form.invariant_factors();
        long exponent = factors.empty() ? 1 : factors.back();
        for (long m = 1; m <= exponent; ++m) {
            if (exponent % m != 0) continue;
            long predicted = 1;
            for (long d : factors) predicted *= std::gcd(d, m);
            require(oracle.annihilated_by(m) == predicted,
                    "m-torsion count matches the invariant-factor prediction");
        }
    }
}

struct Criterion {
    std::string id;
    std::function<void()> run;
};

} // namespace

int main() {
    std::vector<Criterion> criteria{
        {"01 binary-form suite", criterion_binary_forms},
        {"02 genus vs isomorphism", criterion_genus_vs_isomorphism},
        {"03 gluing laws", criterion_gluing_laws},
        {"04 primitivity criterion", criterion_primitivity},
        {"05 unimodular gluing count", criterion_gluing_count},
        {"06 discriminant automorphism order law", criterion_aut_order_law},
        {"07 rank-one counts by two routes", criterion_rank_one_counts},
        {"08 divisor-p^2 orbit family", criterion_orbit_family},
        {"09 unimodular complements", criterion_unimodular_complements},
        {"10 representation report", criterion_representation_report},
        {"11 discriminant group oracle", criterion_oracle_equivalence},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        try {
            c.run();
            std::cout << "PASS " << c.id << "\n";
        } catch (const CheckFailure& f) {
            std::cout << "FAIL " << c.id << ": " << f.what << "\n";
            ++failures;
        } catch (const std::exception& e) {
            std::cout << "FAIL " << c.id << ": unexpected error: " << e.what() << "\n";
            ++failures;
        }
    }
    if (failures == 0)
        std::cout << "acceptance: all " << criteria.size() << " criteria passed\n";
    else
        std::cout << "acceptance: " << failures << " of " << criteria.size()
                  << " criteria FAILED\n";
    return failures == 0 ? 0 : 1;
}
