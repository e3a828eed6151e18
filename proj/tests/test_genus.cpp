#include <doctest.h>

#include "latticefm/genus.hpp"

using namespace latfm;

namespace {

Lattice form_a() { return make_lattice(IntMat::from_rows({{2, 4}, {4, 0}}), "A"); }
Lattice form_b() { return make_lattice(IntMat::from_rows({{0, 4}, {4, 0}}), "B"); }
Lattice form_c() { return make_lattice(IntMat::from_rows({{-2, 4}, {4, 0}}), "C"); }
Lattice form_d() { return make_lattice(IntMat::from_rows({{2, 1}, {1, 12}}), "D"); }
Lattice form_e() { return make_lattice(IntMat::from_rows({{4, 1}, {1, 6}}), "E"); }

} // namespace

TEST_CASE("genus symbols") {
    GenusSymbol u = genus_symbol(hyperbolic_plane());
    CHECK(u.sig == Signature{1, 1});
    CHECK(u.disc.is_trivial());

    GenusSymbol l = genus_symbol(l2d_lattice(7));
    CHECK(l.sig == Signature{2, 19});
    CHECK(l.disc.invariant_factors() == std::vector<long>{14});

    GenusSymbol ns = genus_symbol(direct_sum(twist(a2(), -1), rank_one(14)));
    CHECK(ns.sig == Signature{1, 2});
    CHECK(ns.disc.order() == 42);
}

TEST_CASE("genus equality on the worked examples") {
    CHECK(same_genus(form_d(), form_e()));
    CHECK_FALSE(same_genus(form_a(), form_b()));
    CHECK_FALSE(same_genus(form_a(), form_c()));

    for (long d : {1L, 2L, 3L}) {
        Lattice a = direct_sum({twist(e8(), -1), twist(e8(), -1), hyperbolic_plane(),
                                hyperbolic_plane(), rank_one(-2 * d)});
        Lattice b = direct_sum({d16plus_negative(), hyperbolic_plane(), hyperbolic_plane(),
                                rank_one(-2 * d)});
        CHECK(same_genus(a, l2d_lattice(d)));
        CHECK(same_genus(b, l2d_lattice(d)));
    }
}

TEST_CASE("genus equality is an equivalence on a corpus") {
    std::vector<Lattice> corpus{form_a(), form_b(), form_c(), form_d(), form_e(),
                                hyperbolic_plane()};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CHECK(same_genus(corpus[i], corpus[i]));
        for (std::size_t j = 0; j < corpus.size(); ++j)
            CHECK(same_genus(corpus[i], corpus[j]) == same_genus(corpus[j], corpus[i]));
    }
    for (std::size_t i = 0; i < corpus.size(); ++i)
        for (std::size_t j = 0; j < corpus.size(); ++j)
            for (std::size_t k = 0; k < corpus.size(); ++k)
                if (same_genus(corpus[i], corpus[j]) && same_genus(corpus[j], corpus[k]))
                    CHECK(same_genus(corpus[i], corpus[k]));
}

TEST_CASE("rebasing preserves the genus") {
    // small unimodular base changes S^t G S
    std::vector<IntMat> bases{IntMat::from_rows({{1, 1}, {0, 1}}),
                              IntMat::from_rows({{1, 0}, {3, 1}}),
                              IntMat::from_rows({{2, 1}, {1, 1}})};
    for (const Lattice& l : {form_a(), form_d()})
        for (const IntMat& s : bases) {
            Lattice rebased = make_lattice(s.transposed() * l.gram() * s);
            CHECK(same_genus(l, rebased));
        }
}

TEST_CASE("uniqueness criterion") {
    CHECK(nikulin_unique_in_genus(l2d_lattice(7)) == GenusUniqueness::Yes);
    CHECK(nikulin_unique_in_genus(direct_sum(twist(a2(), -1), rank_one(14))) ==
          GenusUniqueness::Yes);
    CHECK(nikulin_unique_in_genus(form_d()) == GenusUniqueness::Unknown);
    // indefinite but rank < 2 + l
    CHECK(nikulin_unique_in_genus(form_a()) == GenusUniqueness::Unknown);
    CHECK(nikulin_unique_in_genus(direct_sum(hyperbolic_plane(), hyperbolic_plane())) ==
          GenusUniqueness::Yes);
}

TEST_CASE("definite isomorphism testing") {
    CHECK_FALSE(is_isomorphic_definite(form_d(), form_e()).has_value());

    Lattice d = form_d();
    Lattice d_swapped = make_lattice(IntMat::from_rows({{12, 1}, {1, 2}}));
    auto s = is_isomorphic_definite(d, d_swapped);
    REQUIRE(s.has_value());
    CHECK(s->transposed() * d.gram() * *s == d_swapped.gram());

    Lattice d22 = make_lattice(IntMat::from_rows({{2, 0}, {0, 2}}));
    auto id = is_isomorphic_definite(d22, d22);
    REQUIRE(id.has_value());

    CHECK_THROWS_AS(is_isomorphic_definite(form_d(), hyperbolic_plane()), PreconditionError);
    std::vector<Int> nine(9, Int(2));
    CHECK_THROWS_AS(is_isomorphic_definite(make_lattice(IntMat::diagonal(nine)),
                                           make_lattice(IntMat::diagonal(nine))),
                    LimitError);
}

TEST_CASE("isomorphic definite lattices share a genus") {
    Lattice a2neg = twist(a2(), -1);
    Lattice rebased = make_lattice(IntMat::from_rows({{-2, 1}, {1, -2}}));
    if (auto s = is_isomorphic_definite(a2neg, rebased); s.has_value())
        CHECK(same_genus(a2neg, rebased));
}
