#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "kla/card.hpp"
#include "kla/intlattice.hpp"

namespace kla {

struct Zd {
    unsigned d = 0;
};

struct FreeGroup {
    unsigned r = 1;
};

struct SurfaceGroup {
    unsigned g = 0;
};

/// Torsion-free hyperbolic group presented through its Betti numbers
/// (b0 = 1) and the cardinality of its set of conjugacy classes of
/// maximal infinite cyclic subgroups. Assumes free integral homology and a
/// collapsed, split Atiyah-Hirzebruch evaluation; rows are tagged accordingly.
struct TFHyperbolic {
    std::vector<std::uint64_t> betti;
    Card micyCard = Card::fin(0);
};

/// Extension 1 -> Z^d -> G -> Z/p -> 1 with conjugation action rho.
struct CrystZp {
    unsigned d = 0;
    unsigned p = 2; // p = 1 means trivial quotient
    IntMatrix rho;
    bool split = true;
    std::optional<Card> jCardOverride;
};

using GroupDesc = std::variant<Zd, FreeGroup, SurfaceGroup, TFHyperbolic, CrystZp>;

/// Derived invariants of the conjugation action feeding the theorem engine.
struct ActionAnalysis {
    unsigned d = 0;
    unsigned p = 1;
    std::size_t e = 0;          // rank of the fixed sublattice A^{Z/p}
    bool freeAwayFromZero = false;
    FiniteAbelian h1;           // H^1(Z/p; A)
    std::optional<Card> jCard;  // |J|; absent for non-split without override
    Card micyFixedCard = Card::fin(0);
    Card i1Card = Card::fin(0);
    Card i2Card = Card::fin(0);
    Card jcSize = Card::fin(0); // |J_C| for C in I_2

    nlohmann::json toJson() const;
};

bool isPrimeNumber(unsigned n);

/// Maximal infinite cyclic subgroups of Z^d: none, one, or countably many.
Card micyCardOf(unsigned d);

/// Conjugacy classes of maximal infinite cyclic subgroups of the free group F_r.
Card micyCardFreeGroup(unsigned r);

ActionAnalysis analyzeAction(unsigned d, unsigned p, const IntMatrix& rho,
                             bool split = true,
                             std::optional<Card> jCardOverride = std::nullopt);

ActionAnalysis analyzeAction(const CrystZp& g);

/// Checks all structural invariants; throws with a descriptive message.
void validate(const GroupDesc& g);

GroupDesc groupFromJson(const nlohmann::json& j);
nlohmann::json groupToJson(const GroupDesc& g);
std::string groupName(const GroupDesc& g);

} // namespace kla
