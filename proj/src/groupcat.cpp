#include "kla/groupcat.hpp"

#include <sstream>

namespace kla {

Card micyCardOf(unsigned d) {
    if (d == 0) return Card::fin(0);
    if (d == 1) return Card::fin(1);
    return Card::omega();
}

Card micyCardFreeGroup(unsigned r) {
    if (r < 1) fail(ErrorCode::Invalid, "free group rank must be >= 1");
    return r == 1 ? Card::fin(1) : Card::omega();
}

ActionAnalysis analyzeAction(unsigned d, unsigned p, const IntMatrix& rho,
                             bool split, std::optional<Card> jCardOverride) {
    if (rho.rows() != d || rho.cols() != d)
        fail(ErrorCode::Invalid, "rho must be d x d");
    if (p != 1 && !isPrimeNumber(p))
        fail(ErrorCode::Invalid, "p must be 1 or prime");

    ActionAnalysis an;
    an.d = d;
    an.p = p;

    if (p == 1) {
        // trivial quotient: free vacuously, no finite subgroups
        an.e = d;
        an.freeAwayFromZero = true;
        an.jCard = Card::fin(0);
        an.micyFixedCard = micyCardOf(d);
        an.i1Card = micyCardOf(d);
        an.i2Card = Card::fin(0);
        return an;
    }

    if (!(matrixPower(rho, p) == IntMatrix::identity(d)))
        fail(ErrorCode::NotOrderP, "rho^p != I");

    an.e = fixedSublattice(rho).rank();
    // p prime: a nonzero vector fixed by any nontrivial power is fixed by
    // the generator, so freeness reduces to e = 0
    an.freeAwayFromZero = (an.e == 0);
    an.h1 = h1Cyclic(rho, p);
    an.micyFixedCard = micyCardOf(static_cast<unsigned>(an.e));

    if (jCardOverride)
        an.jCard = jCardOverride;
    else if (split) {
        // split extension contains Z/p, so J is nonempty and |J| = |H^1|
        Int o = an.h1.order();
        if (!o.fits_ulong_p())
            fail(ErrorCode::QuotientTooLarge, "|H^1| exceeds representable range");
        an.jCard = Card::fin(o.get_ui());
    }
    // else: |J| unknown without user input; ops requiring it raise UnknownJ

    if (an.freeAwayFromZero) {
        if (p == 2) {
            // rho^2 = I with no fixed vectors forces rho = -I, so every
            // maximal infinite cyclic subgroup has stabilizer Z/2
            if (!(rho == IntMatrix::zero(d, d) - IntMatrix::identity(d)))
                fail(ErrorCode::Invalid, "free order-2 action must be -I");
            an.i1Card = Card::fin(0);
            an.i2Card = micyCardOf(d);
            an.jcSize = d >= 1 ? Card::fin(std::uint64_t(1) << (d - 1)) : Card::fin(0);
        } else {
            // odd order: no stabilizer can embed Z/2 in aut(C) = {+-1}
            an.i2Card = Card::fin(0);
            an.i1Card = d >= 2 ? Card::omega() : micyCardOf(d);
        }
    }
    return an;
}

ActionAnalysis analyzeAction(const CrystZp& g) {
    return analyzeAction(g.d, g.p, g.rho, g.split, g.jCardOverride);
}

bool isPrimeNumber(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void validate(const GroupDesc& g) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FreeGroup>) {
                if (v.r < 1) fail(ErrorCode::Invalid, "free group rank must be >= 1");
            } else if constexpr (std::is_same_v<T, TFHyperbolic>) {
                if (v.betti.empty() || v.betti[0] != 1)
                    fail(ErrorCode::Invalid, "betti numbers must start with b0 = 1");
            } else if constexpr (std::is_same_v<T, CrystZp>) {
                if (v.rho.rows() != v.d || v.rho.cols() != v.d)
                    fail(ErrorCode::Invalid, "rho must be d x d");
                if (v.p != 1 && !isPrimeNumber(v.p))
                    fail(ErrorCode::Invalid, "p must be prime");
                if (v.p >= 2 &&
                    !(matrixPower(v.rho, v.p) == IntMatrix::identity(v.d)))
                    fail(ErrorCode::NotOrderP, "rho^p != I");
            }
        },
        g);
}

namespace {

IntMatrix matrixFromJson(const nlohmann::json& j, unsigned d) {
    if (!j.is_array() || j.size() != d)
        fail(ErrorCode::Parse, "rho must be a d x d array of integers");
    IntMatrix m(d, d);
    for (unsigned i = 0; i < d; ++i) {
        if (!j[i].is_array() || j[i].size() != d)
            fail(ErrorCode::Parse, "rho must be a d x d array of integers");
        for (unsigned k = 0; k < d; ++k) {
            const auto& cell = j[i][k];
            if (cell.is_string())
                m.at(i, k) = Int(cell.get<std::string>());
            else
                m.at(i, k) = Int(cell.get<long>());
        }
    }
    return m;
}

Card cardFromJson(const nlohmann::json& j) {
    if (j.is_string() && j.get<std::string>() == "omega") return Card::omega();
    return Card::fin(j.get<std::uint64_t>());
}

nlohmann::json cardToJson(Card c) {
    if (c.isOmega()) return "omega";
    return c.finValue();
}

} // namespace

GroupDesc groupFromJson(const nlohmann::json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "zd") return Zd{j.at("d").get<unsigned>()};
    if (type == "free") return FreeGroup{j.at("r").get<unsigned>()};
    if (type == "surface") return SurfaceGroup{j.at("g").get<unsigned>()};
    if (type == "tfHyperbolic") {
        TFHyperbolic g;
        g.betti = j.at("betti").get<std::vector<std::uint64_t>>();
        g.micyCard = cardFromJson(j.at("micy"));
        return g;
    }
    if (type == "crystZp") {
        CrystZp g;
        g.d = j.at("d").get<unsigned>();
        g.p = j.at("p").get<unsigned>();
        g.rho = matrixFromJson(j.at("rho"), g.d);
        g.split = j.value("split", true);
        if (j.contains("jcard")) g.jCardOverride = cardFromJson(j.at("jcard"));
        return g;
    }
    fail(ErrorCode::Parse, "unknown group type: " + type);
}

nlohmann::json groupToJson(const GroupDesc& g) {
    nlohmann::json j;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Zd>) {
                j["type"] = "zd";
                j["d"] = v.d;
            } else if constexpr (std::is_same_v<T, FreeGroup>) {
                j["type"] = "free";
                j["r"] = v.r;
            } else if constexpr (std::is_same_v<T, SurfaceGroup>) {
                j["type"] = "surface";
                j["g"] = v.g;
            } else if constexpr (std::is_same_v<T, TFHyperbolic>) {
                j["type"] = "tfHyperbolic";
                j["betti"] = v.betti;
                j["micy"] = cardToJson(v.micyCard);
            } else if constexpr (std::is_same_v<T, CrystZp>) {
                j["type"] = "crystZp";
                j["d"] = v.d;
                j["p"] = v.p;
                nlohmann::json rho = nlohmann::json::array();
                for (std::size_t i = 0; i < v.rho.rows(); ++i) {
                    nlohmann::json row = nlohmann::json::array();
                    for (std::size_t k = 0; k < v.rho.cols(); ++k)
                        row.push_back(v.rho.at(i, k).get_str());
                    rho.push_back(row);
                }
                j["rho"] = rho;
                j["split"] = v.split;
                if (v.jCardOverride) j["jcard"] = cardToJson(*v.jCardOverride);
            }
        },
        g);
    return j;
}

std::string groupName(const GroupDesc& g) {
    std::ostringstream os;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Zd>) os << "Z^" << v.d;
            else if constexpr (std::is_same_v<T, FreeGroup>) os << "F_" << v.r;
            else if constexpr (std::is_same_v<T, SurfaceGroup>) os << "Surface_" << v.g;
            else if constexpr (std::is_same_v<T, TFHyperbolic>) os << "TFHyp";
            else if constexpr (std::is_same_v<T, CrystZp>)
                os << "Z^" << v.d << ":Z/" << v.p;
        },
        g);
    return os.str();
}

nlohmann::json ActionAnalysis::toJson() const {
    nlohmann::json j;
    j["d"] = d;
    j["p"] = p;
    j["e"] = e;
    j["freeAwayFromZero"] = freeAwayFromZero;
    j["h1"] = h1.toString();
    j["h1Order"] = h1.order().get_str();
    j["jCard"] = jCard ? cardToJson(*jCard) : nlohmann::json("unknown");
    j["micyFixedCard"] = cardToJson(micyFixedCard);
    j["i1Card"] = cardToJson(i1Card);
    j["i2Card"] = cardToJson(i2Card);
    j["jcSize"] = cardToJson(jcSize);
    return j;
}

} // namespace kla
