#include "kla/assembly.hpp"

#include <sstream>

namespace kla {

std::uint64_t binom(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

Theory theoryFromName(const std::string& s) {
    if (s == "K") return Theory::K;
    if (s == "Wh") return Theory::Wh;
    if (s == "L") return Theory::L;
    if (s == "Sper") return Theory::Sper;
    fail(ErrorCode::Parse, "unknown theory: " + s);
}

std::string theoryName(Theory t) {
    switch (t) {
        case Theory::K: return "K";
        case Theory::Wh: return "Wh";
        case Theory::L: return "L";
        case Theory::Sper: return "Sper";
    }
    return "?";
}

namespace {

std::string zpTag(unsigned p) { return "Z/" + std::to_string(p); }

GradedExpr nkPair(const RingExpr& r, unsigned dTop, int n, std::uint64_t copies) {
    // sum_{i=0}^{dTop} copies * C(dTop, i) * NK_{n-i}(r)
    GradedExpr e = GradedExpr::zero();
    for (unsigned i = 0; i <= dTop; ++i)
        e = dsum(e, GradedExpr::atom(Atom::nk(r, n - static_cast<int>(i)),
                                     Card::fin(copies * binom(dTop, i))));
    return e;
}

} // namespace

GradedExpr whZd(unsigned d, const RingSpec& ring, int n) {
    if (d == 0) return GradedExpr::zero();
    GradedExpr inner = nkPair(ring.expr(), d - 1, n, 2);
    return simplify(scale(inner, micyCardOf(d)), ring);
}

GradedExpr kZd(unsigned d, const RingSpec& ring, int n) {
    GradedExpr e = GradedExpr::zero();
    for (unsigned i = 0; i <= d; ++i)
        e = dsum(e, GradedExpr::atom(Atom::k(ring.expr(), n - static_cast<int>(i)),
                                     Card::fin(binom(d, i))));
    return simplify(dsum(e, whZd(d, ring, n)), ring);
}

GradedExpr lZd(unsigned d, const RingSpec& ring, int n, Decoration dec) {
    GradedExpr e = GradedExpr::zero();
    for (unsigned i = 0; i <= d; ++i)
        e = dsum(e,
                 GradedExpr::atom(Atom::l(ring.expr(), n - static_cast<int>(i), dec),
                                  Card::fin(binom(d, i))));
    return simplify(e, ring);
}

GradedExpr freeGroupExpr(unsigned r, const RingSpec& ring, Theory theory, int n,
                         Decoration dec) {
    if (r < 1) fail(ErrorCode::Invalid, "free group rank must be >= 1");
    const RingExpr R = ring.expr();
    switch (theory) {
        case Theory::K: {
            GradedExpr e = GradedExpr::atom(Atom::k(R, n));
            e = dsum(e, GradedExpr::atom(Atom::k(R, n - 1), Card::fin(r)));
            e = dsum(e, scale(GradedExpr::atom(Atom::nk(R, n), Card::fin(2)),
                              micyCardFreeGroup(r)));
            return simplify(e, ring);
        }
        case Theory::Wh:
            return simplify(scale(GradedExpr::atom(Atom::nk(R, n), Card::fin(2)),
                                  micyCardFreeGroup(r)),
                            ring);
        case Theory::L: {
            GradedExpr e = GradedExpr::atom(Atom::l(R, n, dec));
            e = dsum(e, GradedExpr::atom(Atom::l(R, n - 1, dec), Card::fin(r)));
            return simplify(e, ring);
        }
        case Theory::Sper:
            return GradedExpr::zero();
    }
    return GradedExpr::zero();
}

GradedExpr surfaceGroupExpr(unsigned g, const RingSpec& ring, Theory theory, int n,
                            Decoration dec) {
    const RingExpr R = ring.expr();
    if (g == 0) {
        switch (theory) {
            case Theory::K: return simplify(GradedExpr::atom(Atom::k(R, n)), ring);
            case Theory::L:
                return simplify(GradedExpr::atom(Atom::l(R, n, dec)), ring);
            default: return GradedExpr::zero();
        }
    }
    if (g == 1) {
        switch (theory) {
            case Theory::K: return kZd(2, ring, n);
            case Theory::Wh: return whZd(2, ring, n);
            case Theory::L: return lZd(2, ring, n, dec);
            case Theory::Sper: return GradedExpr::zero();
        }
    }
    switch (theory) {
        case Theory::K: {
            GradedExpr e = GradedExpr::atom(Atom::k(R, n));
            e = dsum(e, GradedExpr::atom(Atom::k(R, n - 1), Card::fin(2 * g)));
            e = dsum(e, GradedExpr::atom(Atom::k(R, n - 2)));
            e = dsum(e, scale(GradedExpr::atom(Atom::nk(R, n), Card::fin(2)),
                              Card::omega()));
            return simplify(e, ring);
        }
        case Theory::Wh:
            return simplify(
                scale(GradedExpr::atom(Atom::nk(R, n), Card::fin(2)), Card::omega()),
                ring);
        case Theory::L: {
            GradedExpr e = GradedExpr::atom(Atom::l(R, n, dec));
            e = dsum(e, GradedExpr::atom(Atom::l(R, n - 1, dec), Card::fin(2 * g)));
            e = dsum(e, GradedExpr::atom(Atom::l(R, n - 2, dec)));
            return simplify(e, ring);
        }
        case Theory::Sper: return GradedExpr::zero();
    }
    return GradedExpr::zero();
}

GradedExpr tfHyperbolicExpr(const std::vector<std::uint64_t>& betti, Card micyCard,
                            const RingSpec& ring, Theory theory, int n,
                            Decoration dec) {
    if (betti.empty() || betti[0] != 1)
        fail(ErrorCode::Invalid, "betti numbers must start with b0 = 1");
    const RingExpr R = ring.expr();
    GradedExpr hom = GradedExpr::zero();
    for (std::size_t i = 0; i < betti.size(); ++i) {
        if (betti[i] == 0) continue;
        Atom a = theory == Theory::L
                     ? Atom::l(R, n - static_cast<int>(i), dec)
                     : Atom::k(R, n - static_cast<int>(i));
        hom = dsum(hom, GradedExpr::atom(a, Card::fin(betti[i])));
    }
    switch (theory) {
        case Theory::K:
            return simplify(
                dsum(hom, scale(GradedExpr::atom(Atom::nk(R, n), Card::fin(2)),
                                micyCard)),
                ring);
        case Theory::Wh:
            return simplify(
                scale(GradedExpr::atom(Atom::nk(R, n), Card::fin(2)), micyCard),
                ring);
        case Theory::L: return simplify(hom, ring);
        case Theory::Sper: return GradedExpr::zero();
    }
    return GradedExpr::zero();
}

GradedExpr hyperbolicSkeleton(Card micyCard, const RingSpec& ring, Theory theory,
                              int n) {
    const bool isL = theory == Theory::L || theory == Theory::Sper;
    std::string spectrum = isL ? "L(" + ring.symbol + ")" : "K(" + ring.symbol + ")";
    GradedExpr base = GradedExpr::atom(Atom::opaque("H^G(EfinG;" + spectrum + ")", n));
    GradedExpr nil =
        scale(GradedExpr::atom(Atom::opaque("NilVC(" + spectrum + ")", n)), micyCard);
    return dsum(base, nil);
}

GradedExpr freeActionWh(const ActionAnalysis& an, const RingSpec& ring, int n) {
    if (!an.freeAwayFromZero)
        fail(ErrorCode::NotFree, "conjugation action is not free away from 0");
    if (!an.jCard) fail(ErrorCode::UnknownJ, "|J| unknown; supply a jcard override");
    const RingExpr R = ring.expr();
    GradedExpr e = GradedExpr::zero();
    if (an.p >= 2)
        e = scale(GradedExpr::atom(Atom::wh(zpTag(an.p), R, n)), *an.jCard);
    if (an.d >= 1) {
        e = dsum(e, scale(nkPair(R, an.d - 1, n, 2), an.i1Card));
        e = dsum(e, scale(nkPair(R, an.d - 1, n, 1), an.i2Card));
    }
    return simplify(e, ring);
}

GradedExpr freeActionL(const ActionAnalysis& an, const RingSpec& ring, int n) {
    if (!an.freeAwayFromZero)
        fail(ErrorCode::NotFree, "conjugation action is not free away from 0");
    if (!an.jCard) fail(ErrorCode::UnknownJ, "|J| unknown; supply a jcard override");
    const RingExpr R = ring.expr();
    GradedExpr e = GradedExpr::zero();
    if (an.p >= 2)
        e = scale(GradedExpr::atom(
                      Atom::sper(zpTag(an.p), R, n, Decoration::minusInf())),
                  *an.jCard);
    e = dsum(e, scale(GradedExpr::atom(Atom::unil(R, n)), an.i2Card * an.jcSize));
    return simplify(e, ring);
}

GradedExpr zpWh(const ActionAnalysis& an, const RingSpec& ring, int n) {
    if (an.p < 2) fail(ErrorCode::Invalid, "zpWh requires Q = Z/p with p prime");
    if (!ring.regular)
        fail(ErrorCode::NotRegular, "theorem requires a regular coefficient ring");
    if (!an.jCard) fail(ErrorCode::UnknownJ, "|J| unknown; supply a jcard override");
    const RingExpr R = ring.expr();
    const RingExpr Rzp = ring.groupRing(zpTag(an.p));
    const unsigned e = static_cast<unsigned>(an.e);
    GradedExpr wh = GradedExpr::zero();
    for (unsigned i = 0; i <= e; ++i)
        wh = dsum(wh, GradedExpr::atom(Atom::wh(zpTag(an.p), R, n - static_cast<int>(i)),
                                       Card::fin(binom(e, i))));
    GradedExpr nil = GradedExpr::zero();
    if (e >= 1) nil = nkPair(Rzp, e - 1, n, 2);
    GradedExpr out = dsum(scale(wh, *an.jCard),
                          scale(nil, *an.jCard * an.micyFixedCard));
    return simplify(out, ring);
}

GradedExpr zpL(const ActionAnalysis& an, const RingSpec& ring, int n, Decoration dec,
               const SimplifyOptions& opts) {
    if (an.p < 3 || an.p % 2 == 0)
        fail(ErrorCode::EvenP, "theorem requires an odd prime p");
    if (dec.kind != DecorKind::MinusInf && !ring.isZ)
        fail(ErrorCode::DecorationNeedsZ,
             "decorations other than <-oo> require R = Z");
    if (!an.jCard) fail(ErrorCode::UnknownJ, "|J| unknown; supply a jcard override");
    const RingExpr R = ring.expr();
    const unsigned e = static_cast<unsigned>(an.e);
    GradedExpr s = GradedExpr::zero();
    for (unsigned i = 0; i <= e; ++i)
        s = dsum(s, GradedExpr::atom(
                        Atom::sper(zpTag(an.p), R, n - static_cast<int>(i), dec),
                        Card::fin(binom(e, i))));
    return simplify(scale(s, *an.jCard), ring, opts);
}

GradedExpr kProductWithZd(unsigned d, const std::string& innerTag,
                          const RingSpec& ring, int n) {
    const RingExpr Rg = ring.groupRing(innerTag);
    GradedExpr e = GradedExpr::zero();
    for (unsigned i = 0; i <= d; ++i)
        e = dsum(e, GradedExpr::atom(Atom::k(Rg, n - static_cast<int>(i)),
                                     Card::fin(binom(d, i))));
    if (d >= 1)
        e = dsum(e, scale(nkPair(Rg, d - 1, n, 2), micyCardOf(d)));
    return simplify(e, ring);
}

GradedExpr whProductWithZd(unsigned d, const std::string& innerGroupTag,
                           const RingSpec& ring, int n) {
    const RingExpr R = ring.expr();
    const RingExpr Rg = ring.groupRing(innerGroupTag);
    GradedExpr e = GradedExpr::zero();
    for (unsigned i = 0; i <= d; ++i)
        e = dsum(e, GradedExpr::atom(Atom::wh(innerGroupTag, R, n - static_cast<int>(i)),
                                     Card::fin(binom(d, i))));
    if (d >= 1)
        e = dsum(e, scale(nkPair(Rg, d - 1, n, 2), micyCardOf(d)));
    return simplify(e, ring);
}

namespace {

Hypothesis lowerKHyp(const RingSpec& ring) {
    return {"K_n(RV) = 0 for n << 0 and all virtually cyclic V "
            "(holds for Z, regular with Q, or Dedekind char 0)",
            ring.lowerKVanishes()};
}

void finalizeRow(ResultRow& row, const Query& q) {
    for (const auto& h : row.hypotheses)
        if (!h.satisfied) row.conditional = true;
    if (q.localize2) row.expr = localizeAwayFrom2(row.expr);
}

ResultRow evalOne(const Query& q, int n) {
    ResultRow row;
    row.degree = n;
    const Decoration dec = q.decoration.value_or(Decoration::minusInf());
    if (q.decoration && q.decoration->kind != DecorKind::MinusInf && !q.ring.isZ)
        fail(ErrorCode::DecorationNeedsZ,
             "decorations other than <-oo> require the Z preset");
    SimplifyOptions opts{q.structureSetPreset};

    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, Zd>) {
                switch (q.theory) {
                    case Theory::K:
                        row.expr = kZd(g.d, q.ring, n);
                        row.theorem = "zd-K";
                        break;
                    case Theory::Wh:
                        row.expr = whZd(g.d, q.ring, n);
                        row.theorem = "zd-Wh";
                        break;
                    case Theory::L:
                        row.expr = lZd(g.d, q.ring, n, dec);
                        row.theorem = "zd-L";
                        break;
                    case Theory::Sper:
                        row.expr = GradedExpr::zero();
                        row.theorem = "torsion-free-structure-vanishing";
                        row.hypotheses.push_back(lowerKHyp(q.ring));
                        break;
                }
            } else if constexpr (std::is_same_v<T, FreeGroup>) {
                row.expr = freeGroupExpr(g.r, q.ring, q.theory, n, dec);
                row.theorem = "free-group";
                if (q.theory == Theory::Sper)
                    row.hypotheses.push_back(lowerKHyp(q.ring));
            } else if constexpr (std::is_same_v<T, SurfaceGroup>) {
                row.expr = surfaceGroupExpr(g.g, q.ring, q.theory, n, dec);
                row.theorem = "surface-group";
                if (q.theory == Theory::Sper)
                    row.hypotheses.push_back(lowerKHyp(q.ring));
                if (g.g >= 2 && q.theory == Theory::L && q.ring.isZ &&
                    (((n % 4) + 4) % 4 == 1 || ((n % 4) + 4) % 4 == 3))
                    row.notes.push_back(
                        "source table lists exponent g in odd degrees; the "
                        "displayed splitting formula gives exponent 2g, which "
                        "is emitted here");
            } else if constexpr (std::is_same_v<T, TFHyperbolic>) {
                row.expr = tfHyperbolicExpr(g.betti, g.micyCard, q.ring, q.theory,
                                            n, dec);
                row.theorem = "torsion-free-hyperbolic";
                row.hypotheses.push_back(
                    {"free integral homology with collapsed, split "
                     "Atiyah-Hirzebruch spectral sequence",
                     false});
                if (q.theory == Theory::Sper || q.theory == Theory::L)
                    row.hypotheses.push_back(lowerKHyp(q.ring));
            } else if constexpr (std::is_same_v<T, CrystZp>) {
                ActionAnalysis an = analyzeAction(g);
                switch (q.theory) {
                    case Theory::Wh:
                        if (an.freeAwayFromZero) {
                            row.expr = freeActionWh(an, q.ring, n);
                            row.theorem = "free-action-K";
                        } else {
                            row.expr = zpWh(an, q.ring, n);
                            row.theorem = "crystZp-K";
                            row.hypotheses.push_back({"R regular", true});
                        }
                        break;
                    case Theory::Sper:
                        if (an.freeAwayFromZero) {
                            row.expr = freeActionL(an, q.ring, n);
                            row.theorem = "free-action-L";
                            row.hypotheses.push_back(lowerKHyp(q.ring));
                        } else {
                            row.expr = zpL(an, q.ring, n, dec, opts);
                            row.theorem = q.decoration &&
                                                  dec.kind != DecorKind::MinusInf
                                              ? "crystZp-L-decorated"
                                              : "crystZp-L-odd";
                        }
                        break;
                    default:
                        fail(ErrorCode::NoApplicableTheorem,
                             "no closed form for " + theoryName(q.theory) +
                                 " of a virtually Z^d group; query Wh or Sper");
                }
            }
        },
        q.group);
    finalizeRow(row, q);
    return row;
}

} // namespace

std::vector<ResultRow> evaluate(const Query& q) {
    validate(q.group);
    if (q.decoration && q.theory != Theory::L && q.theory != Theory::Sper)
        fail(ErrorCode::Invalid, "decoration applies to L and Sper only");
    if (q.nFrom > q.nTo) fail(ErrorCode::Invalid, "empty degree range");
    std::vector<ResultRow> rows;
    for (int n = q.nFrom; n <= q.nTo; ++n) rows.push_back(evalOne(q, n));
    return rows;
}

nlohmann::json ResultRow::toJson() const {
    nlohmann::json hyps = nlohmann::json::array();
    for (const auto& h : hypotheses)
        hyps.push_back({{"name", h.name}, {"satisfied", h.satisfied}});
    nlohmann::json j;
    j["degree"] = degree;
    j["expr"] = expr.toJson();
    j["text"] = expr.toText();
    j["theorem"] = theorem;
    j["hypotheses"] = hyps;
    j["conditional"] = conditional;
    j["notes"] = notes;
    return j;
}

} // namespace kla
