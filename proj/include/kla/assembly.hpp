#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kla/expr.hpp"
#include "kla/groupcat.hpp"

namespace kla {

enum class Theory { K, Wh, L, Sper };

Theory theoryFromName(const std::string& s);
std::string theoryName(Theory t);

struct Query {
    GroupDesc group;
    RingSpec ring;
    Theory theory = Theory::K;
    std::optional<Decoration> decoration; // L / Sper only
    int nFrom = 0;
    int nTo = 0;
    bool localize2 = false;
    bool structureSetPreset = false;
};

struct Hypothesis {
    std::string name;
    bool satisfied = true;
};

struct ResultRow {
    int degree = 0;
    GradedExpr expr;
    std::string theorem;
    std::vector<Hypothesis> hypotheses;
    bool conditional = false; // some hypothesis could not be verified
    std::vector<std::string> notes;

    nlohmann::json toJson() const;
};

// Z^d
GradedExpr whZd(unsigned d, const RingSpec& ring, int n);
GradedExpr kZd(unsigned d, const RingSpec& ring, int n);
GradedExpr lZd(unsigned d, const RingSpec& ring, int n,
               Decoration dec = Decoration::minusInf());

// torsion-free hyperbolic catalog
GradedExpr freeGroupExpr(unsigned r, const RingSpec& ring, Theory theory, int n,
                         Decoration dec = Decoration::minusInf());
GradedExpr surfaceGroupExpr(unsigned g, const RingSpec& ring, Theory theory, int n,
                            Decoration dec = Decoration::minusInf());
GradedExpr tfHyperbolicExpr(const std::vector<std::uint64_t>& betti, Card micyCard,
                            const RingSpec& ring, Theory theory, int n,
                            Decoration dec = Decoration::minusInf());

// hyperbolic with torsion: formal skeleton with opaque summands
GradedExpr hyperbolicSkeleton(Card micyCard, const RingSpec& ring, Theory theory,
                              int n);

// virtually Z^d
GradedExpr freeActionWh(const ActionAnalysis& an, const RingSpec& ring, int n);
GradedExpr freeActionL(const ActionAnalysis& an, const RingSpec& ring, int n);
GradedExpr zpWh(const ActionAnalysis& an, const RingSpec& ring, int n);
GradedExpr zpL(const ActionAnalysis& an, const RingSpec& ring, int n,
               Decoration dec = Decoration::minusInf(),
               const SimplifyOptions& opts = {});

// K_n(R[G x Z^d]) with R[G] as a tagged group ring, and the Wh analogue
GradedExpr kProductWithZd(unsigned d, const std::string& innerTag,
                          const RingSpec& ring, int n);
GradedExpr whProductWithZd(unsigned d, const std::string& innerGroupTag,
                           const RingSpec& ring, int n);

std::vector<ResultRow> evaluate(const Query& q);

std::uint64_t binom(unsigned n, unsigned k);

} // namespace kla
