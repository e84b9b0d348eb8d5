// Command-line front end: parse group/ring descriptors, evaluate queries
// over degree ranges, print analysis reports, run the oracle suite.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kla/assembly.hpp"
#include "kla/errors.hpp"
#include "kla/expr.hpp"
#include "kla/groupcat.hpp"
#include "kla/oracles.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) kla::fail(kla::ErrorCode::Parse, "cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json parseJsonText(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        kla::fail(kla::ErrorCode::Parse, "invalid JSON in " + what);
    return j;
}

unsigned parseUnsigned(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        unsigned long v = std::stoul(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return static_cast<unsigned>(v);
    } catch (const std::exception&) {
        kla::fail(kla::ErrorCode::Parse, "expected a number in " + what + ": " + s);
    }
}

kla::Card parseCard(const std::string& s) {
    if (s == "omega" || s == "oo") return kla::Card::omega();
    return kla::Card::fin(parseUnsigned(s, "cardinality"));
}

// `zd:D`, `free:R`, `surface:G`, `tfhyp:b0,b1,...[:micy=omega|N]`,
// `crystZp:{json}`, `@file`, or inline JSON.
kla::GroupDesc parseGroupArg(const std::string& arg) {
    if (!arg.empty() && arg.front() == '@')
        return kla::groupFromJson(parseJsonText(slurp(arg.substr(1)), arg));
    if (!arg.empty() && arg.front() == '{')
        return kla::groupFromJson(parseJsonText(arg, "group descriptor"));
    auto colon = arg.find(':');
    if (colon == std::string::npos)
        kla::fail(kla::ErrorCode::Parse, "unrecognized group descriptor: " + arg);
    std::string kind = arg.substr(0, colon);
    std::string rest = arg.substr(colon + 1);
    if (kind == "zd") return kla::Zd{parseUnsigned(rest, "zd rank")};
    if (kind == "free") return kla::FreeGroup{parseUnsigned(rest, "free rank")};
    if (kind == "surface") return kla::SurfaceGroup{parseUnsigned(rest, "genus")};
    if (kind == "tfhyp") {
        kla::TFHyperbolic g;
        std::string bettiPart = rest;
        auto micyPos = rest.find(":micy=");
        if (micyPos != std::string::npos) {
            bettiPart = rest.substr(0, micyPos);
            g.micyCard = parseCard(rest.substr(micyPos + 6));
        }
        std::istringstream is(bettiPart);
        std::string tok;
        while (std::getline(is, tok, ','))
            g.betti.push_back(parseUnsigned(tok, "betti number"));
        return g;
    }
    if (kind == "crystZp")
        return kla::groupFromJson(parseJsonText(rest, "crystZp descriptor"));
    kla::fail(kla::ErrorCode::Parse, "unrecognized group kind: " + kind);
}

kla::RingSpec parseRingArg(const std::string& arg) {
    if (!arg.empty() && arg.front() == '@')
        return kla::RingSpec::fromJson(parseJsonText(slurp(arg.substr(1)), arg));
    if (!arg.empty() && arg.front() == '{')
        return kla::RingSpec::fromJson(parseJsonText(arg, "ring spec"));
    return kla::RingSpec::preset(arg);
}

// "a..b" or a single integer
std::pair<int, int> parseRange(const std::string& s) {
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            int n = std::stoi(s);
            return {n, n};
        }
        return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
    } catch (const std::exception&) {
        kla::fail(kla::ErrorCode::Parse, "bad degree range: " + s);
    }
}

std::string renderRow(const kla::ResultRow& row, kla::RenderFormat fmt) {
    std::ostringstream os;
    os << "n=" << row.degree << "  "
       << (fmt == kla::RenderFormat::Latex ? row.expr.toLatex()
                                           : row.expr.toText());
    os << "  [" << row.theorem;
    for (const auto& h : row.hypotheses)
        if (!h.satisfied) os << "; assumed: " << h.name;
    os << "]";
    for (const auto& note : row.notes) os << "\n    note: " << note;
    return os.str();
}

struct CommonOpts {
    std::string group;
    std::string ring = "generic";
    std::string theory = "K";
    std::string decoration;
    std::string range = "0";
    std::string format = "text";
    std::string jcard;
    bool localize2 = false;
    bool structureSetPreset = false;
};

kla::RenderFormat formatOf(const std::string& s) {
    if (s == "text") return kla::RenderFormat::Text;
    if (s == "latex") return kla::RenderFormat::Latex;
    if (s == "json") return kla::RenderFormat::Json;
    kla::fail(kla::ErrorCode::Parse, "unknown format: " + s);
}

kla::Query buildQuery(const CommonOpts& o) {
    kla::Query q;
    q.group = parseGroupArg(o.group);
    if (!o.jcard.empty()) {
        auto* c = std::get_if<kla::CrystZp>(&q.group);
        if (!c)
            kla::fail(kla::ErrorCode::Parse, "--jcard applies to crystZp groups");
        c->jCardOverride = parseCard(o.jcard);
    }
    q.ring = parseRingArg(o.ring);
    q.theory = kla::theoryFromName(o.theory);
    if (!o.decoration.empty()) q.decoration = kla::Decoration::parse(o.decoration);
    std::tie(q.nFrom, q.nTo) = parseRange(o.range);
    q.localize2 = o.localize2;
    q.structureSetPreset = o.structureSetPreset;
    return q;
}

int runCompute(const CommonOpts& o) {
    kla::Query q = buildQuery(o);
    auto rows = kla::evaluate(q);
    kla::RenderFormat fmt = formatOf(o.format);
    if (fmt == kla::RenderFormat::Json) {
        json out;
        out["schema"] = "kla-table/1";
        out["group"] = kla::groupToJson(q.group);
        out["ring"] = q.ring.name;
        out["theory"] = kla::theoryName(q.theory);
        json arr = json::array();
        for (const auto& r : rows) arr.push_back(r.toJson());
        out["rows"] = arr;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << kla::theoryName(q.theory) << "(" << kla::groupName(q.group)
                  << "; " << q.ring.name << ")\n";
        for (const auto& r : rows) std::cout << renderRow(r, fmt) << "\n";
    }
    return 0;
}

int runAnalyze(const CommonOpts& o) {
    kla::GroupDesc g = parseGroupArg(o.group);
    auto* c = std::get_if<kla::CrystZp>(&g);
    if (!c) kla::fail(kla::ErrorCode::Parse, "analyze expects a crystZp group");
    if (!o.jcard.empty()) c->jCardOverride = parseCard(o.jcard);
    kla::ActionAnalysis an = kla::analyzeAction(*c);
    if (formatOf(o.format) == kla::RenderFormat::Json) {
        json out = an.toJson();
        out["schema"] = "kla-analysis/1";
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "extension: 1 -> Z^" << an.d << " -> G -> Z/" << an.p
              << " -> 1\n"
              << "fixed rank e = " << an.e << "\n"
              << "free away from 0: " << (an.freeAwayFromZero ? "yes" : "no")
              << "\n"
              << "H^1(Z/p; A) = " << an.h1.toString() << " (order "
              << an.h1.order().get_str() << ")\n"
              << "|J| = " << (an.jCard ? an.jCard->toString() : "unknown") << "\n"
              << "|I_1| = " << an.i1Card.toString() << ", |I_2| = "
              << an.i2Card.toString() << ", |J_C| = " << an.jcSize.toString()
              << "\n"
              << "applicable: "
              << (an.freeAwayFromZero ? "free-action Wh/Sper theorems"
                                      : "Q = Z/p Wh/Sper theorems")
              << "\n";
    return 0;
}

int runTable(const CommonOpts& o, const std::string& family) {
    auto colon = family.find(':');
    if (colon == std::string::npos)
        kla::fail(kla::ErrorCode::Parse, "family must look like zd:0..3");
    std::string kind = family.substr(0, colon);
    auto [lo, hi] = parseRange(family.substr(colon + 1));
    if (lo < 0 || hi < lo)
        kla::fail(kla::ErrorCode::Parse, "bad family range: " + family);

    std::vector<kla::GroupDesc> groups;
    for (int v = lo; v <= hi; ++v) {
        unsigned u = static_cast<unsigned>(v);
        if (kind == "zd") groups.push_back(kla::Zd{u});
        else if (kind == "free") groups.push_back(kla::FreeGroup{u});
        else if (kind == "surface") groups.push_back(kla::SurfaceGroup{u});
        else kla::fail(kla::ErrorCode::Parse, "unknown family kind: " + kind);
    }

    kla::RenderFormat fmt = formatOf(o.format);
    json cols = json::array();
    std::vector<std::vector<std::string>> cells;
    auto [nFrom, nTo] = parseRange(o.range);
    for (const auto& g : groups) {
        kla::Query q;
        q.group = g;
        q.ring = parseRingArg(o.ring);
        q.theory = kla::theoryFromName(o.theory);
        if (!o.decoration.empty())
            q.decoration = kla::Decoration::parse(o.decoration);
        q.nFrom = nFrom;
        q.nTo = nTo;
        q.localize2 = o.localize2;
        q.structureSetPreset = o.structureSetPreset;
        std::vector<std::string> col;
        try {
            for (const auto& r : kla::evaluate(q))
                col.push_back(fmt == kla::RenderFormat::Latex ? r.expr.toLatex()
                                                              : r.expr.toText());
        } catch (const kla::Error&) {
            col.assign(static_cast<std::size_t>(nTo - nFrom + 1), "ERR");
        }
        cells.push_back(std::move(col));
        cols.push_back(kla::groupName(g));
    }

    if (fmt == kla::RenderFormat::Json) {
        json out;
        out["schema"] = "kla-family-table/1";
        out["groups"] = cols;
        out["degrees"] = json::array();
        for (int n = nFrom; n <= nTo; ++n) out["degrees"].push_back(n);
        json body = json::array();
        for (const auto& col : cells) body.push_back(col);
        out["cells"] = body;
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "degree";
    for (const auto& g : groups) std::cout << "\t" << kla::groupName(g);
    std::cout << "\n";
    for (int n = nFrom; n <= nTo; ++n) {
        std::cout << n;
        for (const auto& col : cells)
            std::cout << "\t" << col[static_cast<std::size_t>(n - nFrom)];
        std::cout << "\n";
    }
    return 0;
}

int runOracle(std::uint64_t seed, bool quick, const std::string& format) {
    auto reports = kla::oracles::runSuite(seed, quick);
    bool allAgree = true;
    if (formatOf(format) == kla::RenderFormat::Json) {
        json out;
        out["schema"] = "kla-oracle/1";
        out["seed"] = seed;
        json arr = json::array();
        for (const auto& r : reports) {
            arr.push_back(r.toJson());
            allAgree = allAgree && r.agree;
        }
        out["reports"] = arr;
        out["allAgree"] = allAgree;
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& r : reports) {
            allAgree = allAgree && r.agree;
            std::cout << (r.agree ? "ok   " : "FAIL ") << r.name;
            if (!r.agree)
                std::cout << "\n     main:   " << r.mainValue
                          << "\n     oracle: " << r.oracleValue
                          << "\n     input:  " << r.inputDigest;
            std::cout << "\n";
        }
        std::cout << (allAgree ? "all oracles agree" : "ORACLE DISAGREEMENT")
                  << " (" << reports.size() << " checks)\n";
    }
    return allAgree ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"K- and L-theory calculator for hyperbolic and virtually "
                 "abelian groups"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string family;
    std::uint64_t seed = 20260826;
    bool quick = false;

    auto addCommon = [&](CLI::App* cmd, bool needsGroup) {
        if (needsGroup)
            cmd->add_option("--group", opts.group, "group descriptor")->required();
        cmd->add_option("--ring", opts.ring,
                        "ring preset (Z, regular, regularQ, dedekind0, generic), "
                        "@file, or inline JSON");
        cmd->add_option("--theory", opts.theory, "K, Wh, L, or Sper");
        cmd->add_option("--decoration", opts.decoration,
                        "L/Sper decoration: s, h, p, <j>, or -inf");
        cmd->add_option("--n", opts.range, "degree or range a..b");
        cmd->add_option("--format", opts.format, "text, latex, or json");
        cmd->add_option("--jcard", opts.jcard,
                        "override |J| for non-split extensions (N or omega)");
        cmd->add_flag("--localize2", opts.localize2, "invert 2 in the result");
        cmd->add_flag("--structure-set-preset", opts.structureSetPreset,
                      "enable the odd-prime structure-set value table");
    };

    CLI::App* compute = app.add_subcommand("compute", "evaluate a query");
    addCommon(compute, true);
    CLI::App* analyze =
        app.add_subcommand("analyze", "report conjugation-action invariants");
    addCommon(analyze, true);
    CLI::App* table = app.add_subcommand("table", "evaluate a group family");
    table->add_option("--family", family, "zd:a..b, free:a..b, or surface:a..b")
        ->required();
    addCommon(table, false);
    CLI::App* oracle = app.add_subcommand("oracle", "run the oracle suite");
    oracle->add_option("--seed", seed, "suite seed");
    oracle->add_flag("--quick", quick, "reduced instance counts");
    oracle->add_option("--format", opts.format, "text or json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(compute)) return runCompute(opts);
        if (app.got_subcommand(analyze)) return runAnalyze(opts);
        if (app.got_subcommand(table)) return runTable(opts, family);
        return runOracle(seed, quick, opts.format);
    } catch (const kla::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case kla::ErrorCode::NoApplicableTheorem:
            case kla::ErrorCode::UnknownJ:
            case kla::ErrorCode::NonSplitUnknownJ:
                return 2;
            default:
                return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
