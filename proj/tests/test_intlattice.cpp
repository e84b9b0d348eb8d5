#include <doctest.h>

#include <random>

#include "kla/intlattice.hpp"

using namespace kla;

namespace {

IntMatrix randomMatrix(std::mt19937_64& rng, std::size_t r, std::size_t c,
                       int span = 9) {
    std::uniform_int_distribution<int> dist(-span, span);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = dist(rng);
    return m;
}

IntMatrix minusIdentity(std::size_t d) {
    return IntMatrix::zero(d, d) - IntMatrix::identity(d);
}

} // namespace

TEST_CASE("hnf fixed points and canonical form") {
    CHECK(hnf(IntMatrix::identity(2)) == IntMatrix::identity(2));
    CHECK(hnf(IntMatrix::zero(2, 2)) == IntMatrix::zero(2, 2));
    // columns (2,0),(4,2) span the same lattice as (2,0),(0,2)
    IntMatrix m = IntMatrix::fromRows({{2, 4}, {0, 2}});
    IntMatrix expected = IntMatrix::fromRows({{2, 0}, {0, 2}});
    CHECK(hnf(m) == expected);
}

TEST_CASE("hnf is idempotent and span-preserving on random input") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
        IntMatrix m = randomMatrix(rng, 3, 4);
        IntMatrix h = hnf(m);
        CHECK(hnf(h) == h);
        // every column of h lies in the span of m's columns and vice versa
        Sublattice sm = Sublattice::fromGenerators(3, m);
        Sublattice sh = Sublattice::fromGenerators(3, h);
        CHECK(sm == sh);
    }
}

TEST_CASE("snf on fixed instances") {
    IntMatrix diag23 = IntMatrix::fromRows({{2, 0}, {0, 3}});
    SNFResult s = snf(diag23);
    REQUIRE(s.d.size() == 2);
    CHECK(s.d[0] == 1);
    CHECK(s.d[1] == 6);

    SNFResult id = snf(IntMatrix::identity(3));
    for (const Int& x : id.d) CHECK(x == 1);

    SNFResult z = snf(IntMatrix::zero(2, 3));
    for (const Int& x : z.d) CHECK(x == 0);
}

TEST_CASE("snf postconditions on random matrices") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        IntMatrix m = randomMatrix(rng, 3, 3);
        SNFResult s = snf(m);
        IntMatrix prod = s.U * m * s.V;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                CHECK(prod.at(i, j) == (i == j ? s.d[i] : Int(0)));
        for (std::size_t i = 0; i + 1 < s.d.size(); ++i)
            if (s.d[i] != 0) CHECK(s.d[i + 1] % s.d[i] == 0);
    }
}

TEST_CASE("kernelSaturated") {
    Sublattice k = kernelSaturated(IntMatrix::fromRows({{1, 1}}));
    REQUIRE(k.rank() == 1);
    CHECK(k.basis.at(0, 0) * k.basis.at(1, 0) == -1); // span{(1,-1)} up to sign

    CHECK(kernelSaturated(IntMatrix::identity(3)).rank() == 0);
    CHECK(kernelSaturated(IntMatrix::zero(2, 2)) == Sublattice::full(2));
}

TEST_CASE("fixedSublattice") {
    CHECK(fixedSublattice(IntMatrix::identity(2)).rank() == 2);
    CHECK(fixedSublattice(minusIdentity(2)).rank() == 0);
    IntMatrix cyc = IntMatrix::fromRows({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
    Sublattice f = fixedSublattice(cyc);
    REQUIRE(f.rank() == 1);
    CHECK(f.basis.at(0, 0) == 1);
    CHECK(f.basis.at(1, 0) == 1);
    CHECK(f.basis.at(2, 0) == 1);
}

TEST_CASE("fixed rank complements the rational rank of rho - I") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 25; ++t) {
        IntMatrix m = randomMatrix(rng, 4, 4, 3);
        std::size_t fr = fixedSublattice(m).rank();
        std::size_t rr = rationalRank(m - IntMatrix::identity(4));
        CHECK(fr + rr == 4);
    }
}

TEST_CASE("quotientStructure") {
    Sublattice z2 = Sublattice::full(2);
    Sublattice twice =
        Sublattice::fromGenerators(2, IntMatrix::fromRows({{2, 0}, {0, 2}}));
    FiniteAbelian q = quotientStructure(z2, twice);
    REQUIRE(q.elementaryDivisors.size() == 2);
    CHECK(q.elementaryDivisors[0] == 2);
    CHECK(q.elementaryDivisors[1] == 2);

    CHECK(quotientStructure(z2, z2).isTrivial());

    Sublattice mixed =
        Sublattice::fromGenerators(2, IntMatrix::fromRows({{2, 0}, {0, 3}}));
    FiniteAbelian q6 = quotientStructure(z2, mixed);
    REQUIRE(q6.elementaryDivisors.size() == 1);
    CHECK(q6.elementaryDivisors[0] == 6);

    CHECK_THROWS_AS(quotientStructure(twice, z2), Error);          // not contained
    Sublattice line =
        Sublattice::fromGenerators(2, IntMatrix::fromRows({{1}, {0}}));
    CHECK_THROWS_AS(quotientStructure(z2, line), Error); // infinite quotient
}

TEST_CASE("h1Cyclic fixed instances") {
    CHECK(h1Cyclic(IntMatrix::identity(3), 5).isTrivial());
    for (unsigned d = 1; d <= 4; ++d) {
        FiniteAbelian h = h1Cyclic(minusIdentity(d), 2);
        REQUIRE(h.elementaryDivisors.size() == d);
        for (const Int& e : h.elementaryDivisors) CHECK(e == 2);
    }
    IntMatrix comp = IntMatrix::fromRows({{0, -1}, {1, -1}});
    FiniteAbelian h3 = h1Cyclic(comp, 3);
    REQUIRE(h3.elementaryDivisors.size() == 1);
    CHECK(h3.elementaryDivisors[0] == 3);

    CHECK_THROWS_AS(h1Cyclic(IntMatrix::fromRows({{2}}), 2), Error);
}

TEST_CASE("h1Cyclic is invariant under unimodular conjugation") {
    IntMatrix comp = IntMatrix::fromRows({{0, -1}, {1, -1}});
    IntMatrix u = IntMatrix::fromRows({{1, 3}, {0, 1}});
    IntMatrix uinv = IntMatrix::fromRows({{1, -3}, {0, 1}});
    CHECK(h1Cyclic(u * comp * uinv, 3) == h1Cyclic(comp, 3));
}

TEST_CASE("matrix power and solveInHnfBasis") {
    IntMatrix comp = IntMatrix::fromRows({{0, -1}, {1, -1}});
    CHECK(matrixPower(comp, 3) == IntMatrix::identity(2));
    IntMatrix basis = IntMatrix::fromRows({{2, 0}, {0, 3}});
    std::vector<Int> x;
    CHECK(solveInHnfBasis(basis, {Int(4), Int(9)}, x));
    CHECK(x[0] == 2);
    CHECK(x[1] == 3);
    CHECK_FALSE(solveInHnfBasis(basis, {Int(1), Int(0)}, x));
}
