#include <doctest.h>

#include "kla/groupcat.hpp"
#include "kla/oracles.hpp"

using namespace kla;

namespace {

IntMatrix minusIdentity(std::size_t d) {
    return IntMatrix::zero(d, d) - IntMatrix::identity(d);
}

const IntMatrix companion3 = IntMatrix::fromRows({{0, -1}, {1, -1}});

} // namespace

TEST_CASE("micy cardinalities") {
    CHECK(micyCardOf(0) == Card::fin(0));
    CHECK(micyCardOf(1) == Card::fin(1));
    CHECK(micyCardOf(2) == Card::omega());
    CHECK(micyCardOf(7) == Card::omega());
    CHECK(micyCardFreeGroup(1) == Card::fin(1));
    CHECK(micyCardFreeGroup(2) == Card::omega());
    CHECK(micyCardFreeGroup(5) == Card::omega());
}

TEST_CASE("analyzeAction: free odd-p action") {
    ActionAnalysis an = analyzeAction(2, 3, companion3);
    CHECK(an.e == 0);
    CHECK(an.freeAwayFromZero);
    CHECK(an.h1.order() == 3);
    REQUIRE(an.jCard.has_value());
    CHECK(*an.jCard == Card::fin(3));
    CHECK(an.i1Card == Card::omega());
    CHECK(an.i2Card == Card::fin(0));
}

TEST_CASE("analyzeAction: trivial action") {
    ActionAnalysis an = analyzeAction(2, 3, IntMatrix::identity(2));
    CHECK(an.e == 2);
    CHECK_FALSE(an.freeAwayFromZero);
    CHECK(an.h1.isTrivial());
    CHECK(*an.jCard == Card::fin(1));
    CHECK(an.micyFixedCard == Card::omega());
}

TEST_CASE("analyzeAction: infinite dihedral") {
    ActionAnalysis an = analyzeAction(1, 2, IntMatrix::fromRows({{-1}}));
    CHECK(an.e == 0);
    CHECK(an.freeAwayFromZero);
    CHECK(an.h1.order() == 2);
    CHECK(*an.jCard == Card::fin(2));
    CHECK(an.i1Card == Card::fin(0));
    CHECK(an.i2Card == Card::fin(1));
    CHECK(an.jcSize == Card::fin(1));
}

TEST_CASE("analyzeAction: p = 2 free forces -I") {
    for (unsigned d : {1u, 2u, 4u}) {
        ActionAnalysis an = analyzeAction(d, 2, minusIdentity(d));
        CHECK(an.freeAwayFromZero);
        CHECK(an.i1Card == Card::fin(0));
        CHECK(an.i2Card == micyCardOf(d));
        CHECK(an.jcSize == Card::fin(1ull << (d - 1)));
    }
    // order-2 action with a fixed vector is not free; no -I requirement
    IntMatrix swap2 = IntMatrix::fromRows({{0, 1}, {1, 0}});
    ActionAnalysis an = analyzeAction(2, 2, swap2);
    CHECK_FALSE(an.freeAwayFromZero);
    CHECK(an.e == 1);
}

TEST_CASE("analyzeAction: freeness equals vanishing fixed rank on random input") {
    for (unsigned p : {2u, 3u, 5u}) {
        for (unsigned i = 0; i < 20; ++i) {
            unsigned blocks = 1;
            unsigned fixedRank = i % 3;
            IntMatrix rho =
                kla::oracles::randomOrderPMatrix(p, blocks, fixedRank, 900 + i);
            ActionAnalysis an = analyzeAction(
                static_cast<unsigned>(rho.rows()), p, rho);
            CHECK(an.e == fixedRank);
            CHECK(an.freeAwayFromZero == (fixedRank == 0));
            // |H^1| is a power of p
            Int order = an.h1.order();
            while (order % p == 0) order /= p;
            CHECK(order == 1);
        }
    }
}

TEST_CASE("analyzeAction: non-split extensions need an explicit jCard") {
    ActionAnalysis an = analyzeAction(2, 3, companion3, /*split=*/false);
    CHECK_FALSE(an.jCard.has_value());
    ActionAnalysis an2 =
        analyzeAction(2, 3, companion3, /*split=*/false, Card::fin(1));
    CHECK(*an2.jCard == Card::fin(1));
}

TEST_CASE("analyzeAction: rejects wrong order") {
    CHECK_THROWS_AS(analyzeAction(1, 2, IntMatrix::fromRows({{2}})), Error);
    CHECK_THROWS_AS(analyzeAction(2, 3, minusIdentity(2)), Error);
}

TEST_CASE("jcSize matches the -I cohomology computation") {
    for (unsigned d = 1; d <= 8; ++d) {
        ActionAnalysis an = analyzeAction(d, 2, minusIdentity(d));
        Int h = h1Cyclic(minusIdentity(d - 1), 2).order();
        CHECK(an.jcSize == Card::fin(h.get_ui()));
    }
}

TEST_CASE("validate") {
    CHECK_NOTHROW(validate(GroupDesc{Zd{3}}));
    CHECK_NOTHROW(validate(GroupDesc{SurfaceGroup{0}}));
    CHECK_THROWS_AS(validate(GroupDesc{FreeGroup{0}}), Error);
    CHECK_THROWS_AS(validate(GroupDesc{TFHyperbolic{{2, 1}, Card::fin(0)}}),
                    Error);
    CrystZp bad{2, 3, minusIdentity(2), true, std::nullopt};
    CHECK_THROWS_AS(validate(GroupDesc{bad}), Error);
    CrystZp notPrime{1, 4, IntMatrix::identity(1), true, std::nullopt};
    CHECK_THROWS_AS(validate(GroupDesc{notPrime}), Error);
}

TEST_CASE("group json round-trip") {
    std::vector<GroupDesc> gs = {
        Zd{3}, FreeGroup{2}, SurfaceGroup{4},
        TFHyperbolic{{1, 4, 1}, Card::omega()},
        CrystZp{2, 3, companion3, false, Card::fin(1)}};
    for (const GroupDesc& g : gs) {
        GroupDesc back = groupFromJson(groupToJson(g));
        CHECK(groupToJson(back) == groupToJson(g));
    }
    CHECK_THROWS_AS(groupFromJson({{"type", "banana"}}), Error);
}
