#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "kla/expr.hpp"
#include "kla/intlattice.hpp"

namespace kla::oracles {

struct OracleReport {
    std::string name;
    std::string inputDigest;
    std::string mainValue;
    std::string oracleValue;
    bool agree = false;

    nlohmann::json toJson() const;
};

/// Default cap on the coset enumeration; overridden by KLA_ORACLE_BOUND.
std::uint64_t cosetBound();

/// H^1(Z/p; Z^d) by breadth-first coset enumeration of ker(N)/im(rho-1),
/// with membership tested by exact echelon solves. Independent of the
/// normal-form path in intlattice.
FiniteAbelian h1CosetEnum(const IntMatrix& rho, unsigned p,
                          std::uint64_t bound = cosetBound());

/// K_n(R[Z^d]) for regular R by d-fold Bass-Heller-Swan recursion.
GradedExpr bhsIterate(unsigned d, const RingSpec& ring, int n);

/// 4-periodic L-theory of Z, independent of decoration.
GradedExpr lPeriodicTable(int n, Decoration dec = Decoration::minusInf());

struct OrbitProbeReport {
    std::uint64_t classCount = 0;
    std::uint64_t trivialStabilizers = 0;
    std::uint64_t z2Stabilizers = 0;
    bool allStabilizersAdmissible = false; // every stabilizer in {1, Z/2}
    bool matchesParityRule = false;        // I1/I2 split matches analyzeAction
};

/// Enumerates primitive vectors of sup-norm <= bound up to sign and checks
/// the stabilizer dichotomy of the induced action on them.
OrbitProbeReport primitiveOrbitProbe(const IntMatrix& rho, unsigned p, long bound);

/// Deterministic unimodular conjugate of a block-companion order-p matrix;
/// the random-instance generator behind the cross-validation suites.
IntMatrix randomOrderPMatrix(unsigned p, unsigned blocks, unsigned fixedRank,
                             std::uint64_t seed);

/// Full cross-validation suite; every report must agree.
std::vector<OracleReport> runSuite(std::uint64_t seed, bool quick);

} // namespace kla::oracles
