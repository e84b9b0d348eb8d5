#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "kla/card.hpp"
#include "kla/errors.hpp"

namespace kla {

using Int = mpz_class;

enum class AtomKind {
    ConcreteFree,   // Z
    ConcreteCyclic, // Z/m
    K,
    NK,
    L,
    Wh,
    Sper,
    UNil,
    Opaque,
};

enum class DecorKind { S, H, P, Lower, MinusInf };

/// L-theory decoration: s, h = <1>, p = <0>, <j> for j <= -1, or <-oo>.
struct Decoration {
    DecorKind kind = DecorKind::MinusInf;
    int j = 0; // only for Lower, j <= -1

    static Decoration s() { return {DecorKind::S, 0}; }
    static Decoration h() { return {DecorKind::H, 0}; }
    static Decoration p() { return {DecorKind::P, 0}; }
    static Decoration lower(int j);
    static Decoration minusInf() { return {DecorKind::MinusInf, 0}; }
    static Decoration parse(const std::string& s);

    std::string toString() const;
    std::string toLatex() const;
    friend auto operator<=>(const Decoration&, const Decoration&) = default;
};

/// Coefficient ring of an atom: a base ring symbol, optionally extended to a
/// group ring R[Z/p] over a finite cyclic group.
struct RingExpr {
    std::string base;                     // display symbol, e.g. "R" or "Z"
    std::optional<std::string> groupRing; // e.g. "Z/3"

    std::string toString() const {
        return groupRing ? base + "[" + *groupRing + "]" : base;
    }
    friend auto operator<=>(const RingExpr&, const RingExpr&) = default;
};

struct Atom {
    AtomKind kind = AtomKind::ConcreteFree;
    RingExpr ring;                     // symbolic kinds only
    std::string group;                 // Wh/Sper subgroup tag ("Z/2", "1"); UNil fixed
    int degree = 0;                    // symbolic kinds and graded opaques
    std::optional<Decoration> decoration; // L and Sper only
    Int modulus = 0;                   // ConcreteCyclic, >= 2
    std::string label;                 // Opaque
    bool opaqueGraded = true;          // Opaque: false = concrete (e.g. Z[1/p])

    static Atom Z() { return Atom{}; }
    static Atom cyclic(Int m);
    static Atom k(RingExpr r, int n);
    static Atom nk(RingExpr r, int n);
    static Atom l(RingExpr r, int n, Decoration dec);
    static Atom wh(std::string grp, RingExpr r, int n);
    static Atom sper(std::string grp, RingExpr r, int n, Decoration dec);
    static Atom unil(RingExpr r, int n);
    static Atom opaque(std::string label, int n, bool graded = true);

    bool isConcrete() const {
        return kind == AtomKind::ConcreteFree || kind == AtomKind::ConcreteCyclic ||
               (kind == AtomKind::Opaque && !opaqueGraded);
    }

    std::string toString(bool localized = false) const;
    std::string toLatex(bool localized = false) const;
    friend bool operator==(const Atom& a, const Atom& b);
    friend bool operator<(const Atom& a, const Atom& b);
};

/// What is known about the coefficient ring: an axiom bundle plus an
/// optional table of concrete values for K/NK/L atoms over the base ring.
struct RingSpec {
    std::string name;
    std::string symbol = "R";
    bool isZ = false;
    bool regular = false;
    bool containsQ = false;
    bool dedekindCharZero = false;

    // (kind, degree) -> concrete expression; kinds K, NK, L only.
    std::map<std::pair<AtomKind, int>, class GradedExpr> values;
    std::set<AtomKind> allZero; // per-kind blanket "zero" entries

    static RingSpec preset(const std::string& name);
    static RingSpec fromJson(const nlohmann::json& j);
    nlohmann::json toJson() const;

    RingExpr expr() const { return RingExpr{symbol, std::nullopt}; }
    RingExpr groupRing(const std::string& tag) const { return RingExpr{symbol, tag}; }

    /// R = Z, or regular with Q contained, or Dedekind of characteristic 0:
    /// each forces the lower K-theory vanishing used by the L-theoretic splittings.
    bool lowerKVanishes() const {
        return isZ || (regular && containsQ) || dedekindCharZero;
    }
};

struct SimplifyOptions {
    bool structureSetPreset = false; // Sper^s(Z/p;Z) table, stated without proof in source
};

/// Formal finite direct sum of atoms with cardinal multiplicities, kept
/// canonically sorted with merged multiplicities and no zero terms.
class GradedExpr {
  public:
    GradedExpr() = default;

    static GradedExpr zero() { return {}; }
    static GradedExpr atom(Atom a, Card mult = Card::fin(1));

    const std::vector<std::pair<Atom, Card>>& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }
    bool localized() const { return localized_; }

    friend bool operator==(const GradedExpr&, const GradedExpr&) = default;

    std::string toText() const;
    std::string toLatex() const;
    nlohmann::json toJson() const;
    static GradedExpr fromJson(const nlohmann::json& j);

    friend GradedExpr dsum(const GradedExpr& a, const GradedExpr& b);
    friend GradedExpr scale(const GradedExpr& e, Card c);
    friend GradedExpr shift(const GradedExpr& e, int k);
    friend GradedExpr simplify(const GradedExpr& e, const RingSpec& ring,
                               const SimplifyOptions& opts);
    friend GradedExpr localizeAwayFrom2(const GradedExpr& e);

  private:
    static GradedExpr fromTerms(std::vector<std::pair<Atom, Card>> terms,
                                bool localized);
    std::vector<std::pair<Atom, Card>> terms_;
    bool localized_ = false;
};

GradedExpr dsum(const GradedExpr& a, const GradedExpr& b);
GradedExpr scale(const GradedExpr& e, Card c);
GradedExpr shift(const GradedExpr& e, int k);
GradedExpr simplify(const GradedExpr& e, const RingSpec& ring,
                    const SimplifyOptions& opts = {});
GradedExpr localizeAwayFrom2(const GradedExpr& e);

inline bool equal(const GradedExpr& a, const GradedExpr& b) { return a == b; }

enum class RenderFormat { Text, Latex, Json };
std::string render(const GradedExpr& e, RenderFormat fmt);

/// Tiny grammar for ring value tables: "0", "Z", "Z/6", "Z^3 + (Z/2)^2".
GradedExpr parseConcreteExpr(const std::string& s);

std::string atomKindName(AtomKind k);
AtomKind atomKindFromName(const std::string& s);

} // namespace kla
