#include <doctest.h>

#include "latticefm/intmat.hpp"

using namespace latfm;

namespace {

struct Lcg {
    unsigned long long state;
    explicit Lcg(unsigned long long seed) : state(seed) {}
    long next(long lo, long hi) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return lo + long((state >> 33) % (unsigned long long)(hi - lo + 1));
    }
};

IntMat random_matrix(Lcg& rng, std::size_t rows, std::size_t cols, long span) {
    IntMat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.next(-span, span);
    return m;
}

} // namespace

TEST_CASE("smith normal form on the worked binary forms") {
    CHECK(smith_normal_form(IntMat::identity(2)).d == IntMat::identity(2));

    SmithResult a = smith_normal_form(IntMat::from_rows({{2, 4}, {4, 0}}));
    CHECK(a.diagonal() == std::vector<Int>{2, 8});
    SmithResult b = smith_normal_form(IntMat::from_rows({{0, 4}, {4, 0}}));
    CHECK(b.diagonal() == std::vector<Int>{4, 4});
}

TEST_CASE("smith transformation identities") {
    IntMat m = IntMat::from_rows({{2, 4}, {4, 0}});
    SmithResult s = smith_normal_form(m);
    CHECK(s.u * m * s.v == s.d);
    CHECK(abs(det_exact(s.u)) == 1);
    CHECK(abs(det_exact(s.v)) == 1);
}

TEST_CASE("exact determinants") {
    CHECK(det_exact(IntMat::from_rows({{0, 1}, {1, 0}})) == -1);
    CHECK(det_exact(IntMat::from_rows({{2, 4}, {4, 0}})) == -16);
    CHECK(det_exact(IntMat::from_rows({{2, 1}, {1, 12}})) == 23);
    CHECK(det_exact(IntMat(0, 0)) == 1);
    CHECK(det_exact(IntMat::from_rows({{1, 2}, {2, 4}})) == 0);
}

TEST_CASE("hermite normal form") {
    CHECK(hermite_normal_form(IntMat::identity(3)).h == IntMat::identity(3));

    IntMat m = IntMat::from_rows({{2, 0}, {1, 1}});
    HermiteResult h = hermite_normal_form(m);
    CHECK(h.h == IntMat::from_rows({{1, 1}, {0, 2}}));
    CHECK(h.u * m == h.h);
    CHECK(abs(det_exact(h.u)) == 1);

    IntMat gcd_case = IntMat::from_rows({{4}, {6}});
    CHECK(hermite_normal_form(gcd_case).h == IntMat::from_rows({{2}, {0}}));
}

TEST_CASE("rational solve") {
    RatVec b{Rat(1, 2), Rat(3)};
    auto x = solve_rational(IntMat::identity(2), b);
    REQUIRE(x.has_value());
    CHECK(*x == b);

    auto y = solve_rational(IntMat::from_rows({{2, 4}, {4, 0}}), RatVec{Rat(1), Rat(0)});
    REQUIRE(y.has_value());
    CHECK(*y == RatVec{Rat(0), Rat(1, 4)});

    CHECK_FALSE(solve_rational(IntMat(2, 2), RatVec{Rat(1), Rat(0)}).has_value());
    auto z = solve_rational(IntMat(2, 2), RatVec{Rat(0), Rat(0)});
    CHECK(z.has_value()); // consistent degenerate system
}

TEST_CASE("saturated integer kernels") {
    IntMat k1 = integer_kernel_saturated(IntMat::from_rows({{1, 1}}));
    REQUIRE(k1.cols() == 1);
    CHECK(abs(k1(0, 0)) == 1);
    CHECK(k1(0, 0) + k1(1, 0) == 0);

    // saturation forced: kernel of [[2,2]] is spanned by (1,-1), not (2,-2)
    IntMat k2 = integer_kernel_saturated(IntMat::from_rows({{2, 2}}));
    REQUIRE(k2.cols() == 1);
    CHECK(abs(k2(0, 0)) == 1);

    // pairing row of e+f inside U
    IntMat gu = IntMat::from_rows({{0, 1}, {1, 0}});
    IntVec ef{Int(1), Int(1)};
    IntVec row = gu * ef;
    IntMat pairing(1, 2);
    pairing(0, 0) = row[0];
    pairing(0, 1) = row[1];
    IntMat k3 = integer_kernel_saturated(pairing);
    REQUIRE(k3.cols() == 1);
    CHECK(k3(0, 0) + k3(1, 0) == 0);
}

TEST_CASE("unimodular inverse") {
    IntMat u = IntMat::from_rows({{1, 2}, {0, 1}});
    CHECK(inverse_unimodular(u) * u == IntMat::identity(2));
    CHECK_THROWS_AS(inverse_unimodular(IntMat::from_rows({{2, 0}, {0, 1}})), ValidationError);
}

TEST_CASE("smith and hermite properties on random matrices") {
    Lcg rng(20240811);
    int nonsingular_checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        std::size_t rows = std::size_t(rng.next(1, 4));
        std::size_t cols = std::size_t(rng.next(1, 4));
        IntMat m = random_matrix(rng, rows, cols, 9);

        SmithResult s = smith_normal_form(m);
        CHECK(s.u * m * s.v == s.d);
        CHECK(abs(det_exact(s.u)) == 1);
        CHECK(abs(det_exact(s.v)) == 1);
        std::vector<Int> diag = s.diagonal();
        for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
            CHECK(diag[i] >= 0);
            if (diag[i] != 0) CHECK(diag[i + 1] % diag[i] == 0);
            if (diag[i] == 0) CHECK(diag[i + 1] == 0);
        }

        HermiteResult h = hermite_normal_form(m);
        CHECK(h.u * m == h.h);
        CHECK(abs(det_exact(h.u)) == 1);
        CHECK(same_row_span(m, h.h));

        if (rows == cols) {
            Int det = det_exact(m);
            Int prod = 1;
            for (const Int& d : diag) prod *= d;
            CHECK(abs(det) == prod);
            if (det != 0) ++nonsingular_checked;
        }

        IntMat k = integer_kernel_saturated(m);
        if (k.cols() > 0) {
            CHECK((m * k).is_zero());
            // saturation: all invariant factors of the kernel basis are 1
            for (const Int& d : smith_normal_form(k).diagonal())
                CHECK((d == 0 || d == 1));
        }
        CHECK(k.cols() + smith_normal_form(m).rank() == cols);
    }
    CHECK(nonsingular_checked > 5);
}
