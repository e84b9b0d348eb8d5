#include "kla/expr.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace kla {

Decoration Decoration::lower(int j) {
    if (j > -1) fail(ErrorCode::Invalid, "decoration <j> requires j <= -1");
    return {DecorKind::Lower, j};
}

Decoration Decoration::parse(const std::string& s) {
    if (s == "s") return Decoration::s();
    if (s == "h" || s == "<1>") return Decoration::h();
    if (s == "p" || s == "<0>") return Decoration::p();
    if (s == "-inf" || s == "<-inf>" || s == "<-oo>") return Decoration::minusInf();
    if (s.size() > 2 && s.front() == '<' && s.back() == '>')
        return Decoration::lower(std::stoi(s.substr(1, s.size() - 2)));
    fail(ErrorCode::Parse, "unknown decoration: " + s);
}

std::string Decoration::toString() const {
    switch (kind) {
        case DecorKind::S: return "s";
        case DecorKind::H: return "h";
        case DecorKind::P: return "p";
        case DecorKind::Lower: return "<" + std::to_string(j) + ">";
        case DecorKind::MinusInf: return "<-oo>";
    }
    return "?";
}

std::string Decoration::toLatex() const {
    switch (kind) {
        case DecorKind::S: return "s";
        case DecorKind::H: return "h";
        case DecorKind::P: return "p";
        case DecorKind::Lower: return "\\langle " + std::to_string(j) + " \\rangle";
        case DecorKind::MinusInf: return "\\langle -\\infty \\rangle";
    }
    return "?";
}

Atom Atom::cyclic(Int m) {
    if (m < 2) fail(ErrorCode::Invalid, "cyclic modulus must be >= 2");
    Atom a;
    a.kind = AtomKind::ConcreteCyclic;
    a.modulus = std::move(m);
    return a;
}

Atom Atom::k(RingExpr r, int n) {
    Atom a;
    a.kind = AtomKind::K;
    a.ring = std::move(r);
    a.degree = n;
    return a;
}

Atom Atom::nk(RingExpr r, int n) {
    Atom a;
    a.kind = AtomKind::NK;
    a.ring = std::move(r);
    a.degree = n;
    return a;
}

Atom Atom::l(RingExpr r, int n, Decoration dec) {
    Atom a;
    a.kind = AtomKind::L;
    a.ring = std::move(r);
    a.degree = n;
    a.decoration = dec;
    return a;
}

Atom Atom::wh(std::string grp, RingExpr r, int n) {
    Atom a;
    a.kind = AtomKind::Wh;
    a.group = std::move(grp);
    a.ring = std::move(r);
    a.degree = n;
    return a;
}

Atom Atom::sper(std::string grp, RingExpr r, int n, Decoration dec) {
    Atom a;
    a.kind = AtomKind::Sper;
    a.group = std::move(grp);
    a.ring = std::move(r);
    a.degree = n;
    a.decoration = dec;
    return a;
}

Atom Atom::unil(RingExpr r, int n) {
    Atom a;
    a.kind = AtomKind::UNil;
    a.ring = std::move(r);
    a.degree = n;
    return a;
}

Atom Atom::opaque(std::string label, int n, bool graded) {
    Atom a;
    a.kind = AtomKind::Opaque;
    a.label = std::move(label);
    a.degree = graded ? n : 0;
    a.opaqueGraded = graded;
    return a;
}

namespace {
// sort key, total and documented: kind, ring, group, degree, decoration,
// modulus, label, gradedness
auto atomKey(const Atom& a) {
    int dec = a.decoration ? static_cast<int>(a.decoration->kind) + 1 : 0;
    int decJ = a.decoration ? a.decoration->j : 0;
    return std::make_tuple(static_cast<int>(a.kind), a.ring.base,
                           a.ring.groupRing.value_or(""), a.group, a.degree,
                           dec, decJ, cmp(a.modulus, 0) == 0 ? std::string()
                                                             : a.modulus.get_str(),
                           a.label, a.opaqueGraded);
}
} // namespace

bool operator==(const Atom& a, const Atom& b) { return atomKey(a) == atomKey(b); }
bool operator<(const Atom& a, const Atom& b) { return atomKey(a) < atomKey(b); }

std::string Atom::toString(bool localized) const {
    std::ostringstream os;
    switch (kind) {
        case AtomKind::ConcreteFree:
            return localized ? "Z[1/2]" : "Z";
        case AtomKind::ConcreteCyclic:
            return "Z/" + modulus.get_str();
        case AtomKind::K:
            os << "K_" << degree << "(" << ring.toString() << ")";
            return os.str();
        case AtomKind::NK:
            os << "NK_" << degree << "(" << ring.toString() << ")";
            return os.str();
        case AtomKind::L:
            os << "L_" << degree << "^" << decoration->toString() << "("
               << ring.toString() << ")";
            return os.str();
        case AtomKind::Wh:
            os << "Wh_" << degree << "(" << group << ";" << ring.toString() << ")";
            return os.str();
        case AtomKind::Sper:
            os << "Sper_" << degree << "^" << decoration->toString() << "("
               << group << ";" << ring.toString() << ")";
            return os.str();
        case AtomKind::UNil:
            os << "UNil_" << degree << "(Dinf;" << ring.toString() << ")";
            return os.str();
        case AtomKind::Opaque:
            if (opaqueGraded) {
                os << label << "_" << degree;
                return os.str();
            }
            return label;
    }
    return "?";
}

std::string Atom::toLatex(bool localized) const {
    std::ostringstream os;
    switch (kind) {
        case AtomKind::ConcreteFree:
            return localized ? "\\mathbb{Z}[1/2]" : "\\mathbb{Z}";
        case AtomKind::ConcreteCyclic:
            return "\\mathbb{Z}/" + modulus.get_str();
        case AtomKind::K:
            os << "K_{" << degree << "}(" << ring.toString() << ")";
            return os.str();
        case AtomKind::NK:
            os << "N\\!K_{" << degree << "}(" << ring.toString() << ")";
            return os.str();
        case AtomKind::L:
            os << "L_{" << degree << "}^{" << decoration->toLatex() << "}("
               << ring.toString() << ")";
            return os.str();
        case AtomKind::Wh:
            os << "\\operatorname{Wh}_{" << degree << "}(" << group << ";"
               << ring.toString() << ")";
            return os.str();
        case AtomKind::Sper:
            os << "\\mathcal{S}^{\\operatorname{per}," << decoration->toLatex()
               << "}_{" << degree << "}(" << group << ";" << ring.toString() << ")";
            return os.str();
        case AtomKind::UNil:
            os << "\\operatorname{UNil}_{" << degree << "}(D_\\infty;"
               << ring.toString() << ")";
            return os.str();
        case AtomKind::Opaque:
            if (opaqueGraded) {
                os << "\\mathrm{" << label << "}_{" << degree << "}";
                return os.str();
            }
            return label;
    }
    return "?";
}

GradedExpr GradedExpr::atom(Atom a, Card mult) {
    GradedExpr e;
    if (!mult.isZero()) e.terms_.push_back({std::move(a), mult});
    return e;
}

GradedExpr GradedExpr::fromTerms(std::vector<std::pair<Atom, Card>> terms,
                                 bool localized) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    GradedExpr e;
    e.localized_ = localized;
    for (auto& [a, c] : terms) {
        if (c.isZero()) continue;
        if (!e.terms_.empty() && e.terms_.back().first == a)
            e.terms_.back().second = e.terms_.back().second + c;
        else
            e.terms_.push_back({std::move(a), c});
    }
    return e;
}

GradedExpr dsum(const GradedExpr& a, const GradedExpr& b) {
    std::vector<std::pair<Atom, Card>> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return GradedExpr::fromTerms(std::move(t), a.localized_ || b.localized_);
}

GradedExpr scale(const GradedExpr& e, Card c) {
    std::vector<std::pair<Atom, Card>> t;
    for (const auto& [a, m] : e.terms_) t.push_back({a, m * c});
    return GradedExpr::fromTerms(std::move(t), e.localized_);
}

GradedExpr shift(const GradedExpr& e, int k) {
    std::vector<std::pair<Atom, Card>> t;
    for (auto [a, m] : e.terms_) {
        if (!a.isConcrete()) a.degree -= k;
        t.push_back({std::move(a), m});
    }
    return GradedExpr::fromTerms(std::move(t), e.localized_);
}

namespace {

// positive modular residue
int posMod(int n, int m) { return ((n % m) + m) % m; }

// 4-periodic L-theory of Z, any decoration: Z, 0, Z/2, 0
GradedExpr lOfZ(int n) {
    switch (posMod(n, 4)) {
        case 0: return GradedExpr::atom(Atom::Z());
        case 2: return GradedExpr::atom(Atom::cyclic(2));
        default: return GradedExpr::zero();
    }
}

std::optional<unsigned> cyclicTagOrder(const std::string& tag) {
    if (tag.rfind("Z/", 0) != 0) return std::nullopt;
    try {
        int v = std::stoi(tag.substr(2));
        if (v < 2) return std::nullopt;
        return static_cast<unsigned>(v);
    } catch (...) {
        return std::nullopt;
    }
}

bool isPrime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// one rewrite pass on a single atom; returns the replacement if a rule fires
std::optional<GradedExpr> rewriteAtom(const Atom& a, const RingSpec& ring,
                                      const SimplifyOptions& opts) {
    const bool overBase = a.ring.base == ring.symbol && !a.ring.groupRing;
    const bool overGroupRing = a.ring.base == ring.symbol && a.ring.groupRing.has_value();

    if (a.kind == AtomKind::Wh && (a.group == "1" || a.group.empty()))
        return GradedExpr::zero();
    if (a.kind == AtomKind::Sper && (a.group == "1" || a.group.empty()))
        return GradedExpr::zero();

    if (a.kind == AtomKind::NK && overBase && ring.regular)
        return GradedExpr::zero();
    if (a.kind == AtomKind::K && overBase && ring.regular && a.degree <= -1)
        return GradedExpr::zero();
    if (a.kind == AtomKind::K && overGroupRing && ring.dedekindCharZero &&
        a.degree <= -2 && cyclicTagOrder(*a.ring.groupRing))
        return GradedExpr::zero();
    if (a.kind == AtomKind::NK && overGroupRing && ring.isZ && a.degree <= 1) {
        auto p = cyclicTagOrder(*a.ring.groupRing);
        if (p && isPrime(*p)) return GradedExpr::zero();
    }
    if (a.kind == AtomKind::L && overBase && ring.isZ) return lOfZ(a.degree);

    if (opts.structureSetPreset && a.kind == AtomKind::Sper && ring.isZ &&
        a.ring.base == ring.symbol && a.decoration &&
        a.decoration->kind == DecorKind::S) {
        auto p = cyclicTagOrder(a.group);
        if (p && isPrime(*p) && *p % 2 == 1) {
            if (a.degree % 2 != 0) return GradedExpr::zero();
            std::string lbl = "Z[1/" + std::to_string(*p) + "]";
            return GradedExpr::atom(Atom::opaque(lbl, 0, false),
                                    Card::fin((*p - 1) / 2));
        }
    }

    if (overBase &&
        (a.kind == AtomKind::K || a.kind == AtomKind::NK || a.kind == AtomKind::L)) {
        if (ring.allZero.count(a.kind)) return GradedExpr::zero();
        auto it = ring.values.find({a.kind, a.degree});
        if (it != ring.values.end()) return it->second;
    }
    return std::nullopt;
}

} // namespace

GradedExpr simplify(const GradedExpr& e, const RingSpec& ring,
                    const SimplifyOptions& opts) {
    // rules replace symbolic atoms by concrete expressions, so one pass is a
    // fixed point; loop anyway and stop on stabilization
    GradedExpr cur = e;
    for (int iter = 0; iter < 4; ++iter) {
        std::vector<std::pair<Atom, Card>> collected;
        bool changed = false;
        for (const auto& [a, m] : cur.terms()) {
            if (auto rep = rewriteAtom(a, ring, opts)) {
                for (const auto& [ra, rm] : rep->terms())
                    collected.push_back({ra, rm * m});
                changed = true;
            } else {
                collected.push_back({a, m});
            }
        }
        if (!changed) break;
        cur = GradedExpr::fromTerms(std::move(collected), cur.localized());
    }
    // rules can introduce 2-torsion into an already-localized expression
    return cur.localized() ? localizeAwayFrom2(cur) : cur;
}

GradedExpr localizeAwayFrom2(const GradedExpr& e) {
    std::vector<std::pair<Atom, Card>> t;
    for (const auto& [a, m] : e.terms()) {
        if (a.kind == AtomKind::UNil) continue;
        if (a.kind == AtomKind::ConcreteCyclic) {
            Int odd = a.modulus;
            while (odd % 2 == 0) odd /= 2;
            if (odd == 1) continue;
            t.push_back({Atom::cyclic(odd), m});
            continue;
        }
        t.push_back({a, m});
    }
    auto r = GradedExpr::fromTerms(std::move(t), true);
    return r;
}

std::string GradedExpr::toText() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, m] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::string at = a.toString(localized_);
        bool needParens = a.kind == AtomKind::ConcreteCyclic;
        if (m == Card::fin(1))
            os << at;
        else if (m.isOmega())
            os << (needParens ? "(" + at + ")" : at) << "^(oo)";
        else
            os << (needParens ? "(" + at + ")" : at) << "^" << m.finValue();
    }
    return os.str();
}

std::string GradedExpr::toLatex() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, m] : terms_) {
        if (!first) os << " \\oplus ";
        first = false;
        std::string at = a.toLatex(localized_);
        bool needParens = a.kind == AtomKind::ConcreteCyclic;
        if (m == Card::fin(1))
            os << at;
        else if (m.isOmega())
            os << (needParens ? "\\left(" + at + "\\right)" : at)
               << "^{(\\infty)}";
        else
            os << (needParens ? "\\left(" + at + "\\right)" : at) << "^{"
               << m.finValue() << "}";
    }
    return os.str();
}

std::string atomKindName(AtomKind k) {
    switch (k) {
        case AtomKind::ConcreteFree: return "Z";
        case AtomKind::ConcreteCyclic: return "cyclic";
        case AtomKind::K: return "K";
        case AtomKind::NK: return "NK";
        case AtomKind::L: return "L";
        case AtomKind::Wh: return "Wh";
        case AtomKind::Sper: return "Sper";
        case AtomKind::UNil: return "UNil";
        case AtomKind::Opaque: return "opaque";
    }
    return "?";
}

AtomKind atomKindFromName(const std::string& s) {
    if (s == "Z") return AtomKind::ConcreteFree;
    if (s == "cyclic") return AtomKind::ConcreteCyclic;
    if (s == "K") return AtomKind::K;
    if (s == "NK") return AtomKind::NK;
    if (s == "L") return AtomKind::L;
    if (s == "Wh") return AtomKind::Wh;
    if (s == "Sper") return AtomKind::Sper;
    if (s == "UNil") return AtomKind::UNil;
    if (s == "opaque") return AtomKind::Opaque;
    fail(ErrorCode::Parse, "unknown atom kind: " + s);
}

nlohmann::json GradedExpr::toJson() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [a, m] : terms_) {
        nlohmann::json atom;
        atom["kind"] = atomKindName(a.kind);
        switch (a.kind) {
            case AtomKind::ConcreteFree:
                break;
            case AtomKind::ConcreteCyclic:
                atom["modulus"] = a.modulus.get_str();
                break;
            case AtomKind::Opaque:
                atom["label"] = a.label;
                if (a.opaqueGraded) atom["degree"] = a.degree;
                atom["graded"] = a.opaqueGraded;
                break;
            default: {
                nlohmann::json ring;
                ring["base"] = a.ring.base;
                if (a.ring.groupRing) ring["groupRing"] = *a.ring.groupRing;
                atom["ring"] = ring;
                atom["degree"] = a.degree;
                if (!a.group.empty()) atom["group"] = a.group;
                if (a.decoration) atom["decoration"] = a.decoration->toString();
                break;
            }
        }
        nlohmann::json mult;
        if (m.isOmega())
            mult = "omega";
        else
            mult = nlohmann::json{{"fin", m.finValue()}};
        terms.push_back({{"atom", atom}, {"mult", mult}});
    }
    nlohmann::json j;
    j["schema"] = "kla-expr/1";
    if (localized_) j["localized"] = true;
    j["terms"] = terms;
    return j;
}

GradedExpr GradedExpr::fromJson(const nlohmann::json& j) {
    std::vector<std::pair<Atom, Card>> t;
    for (const auto& term : j.at("terms")) {
        const auto& ja = term.at("atom");
        Atom a;
        a.kind = atomKindFromName(ja.at("kind").get<std::string>());
        switch (a.kind) {
            case AtomKind::ConcreteFree:
                break;
            case AtomKind::ConcreteCyclic:
                a.modulus = Int(ja.at("modulus").get<std::string>());
                break;
            case AtomKind::Opaque:
                a.label = ja.at("label").get<std::string>();
                a.opaqueGraded = ja.value("graded", true);
                a.degree = a.opaqueGraded ? ja.at("degree").get<int>() : 0;
                break;
            default: {
                const auto& jr = ja.at("ring");
                a.ring.base = jr.at("base").get<std::string>();
                if (jr.contains("groupRing"))
                    a.ring.groupRing = jr.at("groupRing").get<std::string>();
                a.degree = ja.at("degree").get<int>();
                a.group = ja.value("group", std::string());
                if (ja.contains("decoration"))
                    a.decoration =
                        Decoration::parse(ja.at("decoration").get<std::string>());
                break;
            }
        }
        const auto& jm = term.at("mult");
        Card m = jm.is_string() && jm.get<std::string>() == "omega"
                     ? Card::omega()
                     : Card::fin(jm.at("fin").get<std::uint64_t>());
        t.push_back({std::move(a), m});
    }
    return fromTerms(std::move(t), j.value("localized", false));
}

std::string render(const GradedExpr& e, RenderFormat fmt) {
    switch (fmt) {
        case RenderFormat::Text: return e.toText();
        case RenderFormat::Latex: return e.toLatex();
        case RenderFormat::Json: return e.toJson().dump();
    }
    return "";
}

GradedExpr parseConcreteExpr(const std::string& s) {
    GradedExpr out = GradedExpr::zero();
    std::size_t pos = 0;
    auto skipWs = [&] { while (pos < s.size() && s[pos] == ' ') ++pos; };
    skipWs();
    if (pos >= s.size() || s == "0" || s == "zero") return out;
    while (pos < s.size()) {
        skipWs();
        std::string tok;
        bool parens = s[pos] == '(';
        if (parens) ++pos;
        while (pos < s.size() && s[pos] != (parens ? ')' : '^') &&
               (parens || (s[pos] != '+' && s[pos] != ' ')))
            tok += s[pos++];
        if (parens) {
            if (pos >= s.size() || s[pos] != ')')
                fail(ErrorCode::Parse, "unbalanced parens in: " + s);
            ++pos;
        }
        Card mult = Card::fin(1);
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            std::string exp;
            bool expParens = pos < s.size() && s[pos] == '(';
            if (expParens) ++pos;
            while (pos < s.size() && s[pos] != ' ' && s[pos] != '+' && s[pos] != ')')
                exp += s[pos++];
            if (expParens && pos < s.size() && s[pos] == ')') ++pos;
            mult = (exp == "oo") ? Card::omega()
                                 : Card::fin(std::stoull(exp));
        }
        Atom a;
        if (tok == "Z")
            a = Atom::Z();
        else if (tok.rfind("Z/", 0) == 0)
            a = Atom::cyclic(Int(tok.substr(2)));
        else if (tok.rfind("Z[", 0) == 0)
            a = Atom::opaque(tok, 0, false);
        else
            fail(ErrorCode::Parse, "not a concrete atom: " + tok);
        out = dsum(out, GradedExpr::atom(a, mult));
        skipWs();
        if (pos < s.size()) {
            if (s[pos] != '+') fail(ErrorCode::Parse, "expected '+' in: " + s);
            ++pos;
        }
    }
    return out;
}

RingSpec RingSpec::preset(const std::string& name) {
    RingSpec r;
    r.name = name;
    if (name == "Z") {
        r.symbol = "Z";
        r.isZ = r.regular = r.dedekindCharZero = true;
    } else if (name == "regular") {
        r.regular = true;
    } else if (name == "regularQ") {
        r.regular = r.containsQ = true;
    } else if (name == "dedekind0") {
        r.dedekindCharZero = true;
    } else if (name == "generic") {
        // no axioms
    } else {
        fail(ErrorCode::Parse, "unknown ring preset: " + name);
    }
    return r;
}

RingSpec RingSpec::fromJson(const nlohmann::json& j) {
    RingSpec r;
    r.name = j.at("name").get<std::string>();
    for (const auto& ax : j.value("axioms", nlohmann::json::array())) {
        std::string a = ax.get<std::string>();
        if (a == "IsZ") r.isZ = true;
        else if (a == "Regular") r.regular = true;
        else if (a == "ContainsQ") r.containsQ = true;
        else if (a == "DedekindCharZero") r.dedekindCharZero = true;
        else fail(ErrorCode::Parse, "unknown ring axiom: " + a);
    }
    if (r.isZ) r.regular = r.dedekindCharZero = true;
    r.symbol = j.value("symbol", r.isZ ? std::string("Z") : std::string("R"));
    if (j.contains("values")) {
        for (const auto& [kindName, table] : j.at("values").items()) {
            AtomKind k = atomKindFromName(kindName);
            if (k != AtomKind::K && k != AtomKind::NK && k != AtomKind::L)
                fail(ErrorCode::Parse, "value table supports K/NK/L only");
            if (table.is_string()) {
                if (table.get<std::string>() != "zero")
                    fail(ErrorCode::Parse, "per-kind value must be \"zero\"");
                r.allZero.insert(k);
            } else {
                for (const auto& [deg, val] : table.items())
                    r.values[{k, std::stoi(deg)}] =
                        parseConcreteExpr(val.get<std::string>());
            }
        }
    }
    return r;
}

nlohmann::json RingSpec::toJson() const {
    nlohmann::json axioms = nlohmann::json::array();
    if (isZ) axioms.push_back("IsZ");
    if (regular) axioms.push_back("Regular");
    if (containsQ) axioms.push_back("ContainsQ");
    if (dedekindCharZero) axioms.push_back("DedekindCharZero");
    nlohmann::json j;
    j["name"] = name;
    j["symbol"] = symbol;
    j["axioms"] = axioms;
    return j;
}

} // namespace kla
