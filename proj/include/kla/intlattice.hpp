#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

#include "kla/errors.hpp"

namespace kla {

using Int = mpz_class;

/// Dense integer matrix with arbitrary-precision entries, row-major.
class IntMatrix {
  public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries);

    static IntMatrix identity(std::size_t n);
    static IntMatrix zero(std::size_t rows, std::size_t cols);
    static IntMatrix fromRows(const std::vector<std::vector<long>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool isZero() const;
    bool isSquare() const { return rows_ == cols_; }

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    bool operator==(const IntMatrix& o) const = default;

    std::vector<Int> applyTo(const std::vector<Int>& v) const;
    IntMatrix column(std::size_t j) const;

    std::string toString() const;

  private:
    std::size_t rows_, cols_;
    std::vector<Int> a_;
};

struct SNFResult {
    std::vector<Int> d; // diagonal, divisibility chain, zeros trailing
    IntMatrix U;        // rows x rows, unimodular
    IntMatrix V;        // cols x cols, unimodular
};

/// Sublattice of Z^ambientRank; basis columns are independent and kept in
/// canonical column Hermite form, so equal sublattices compare equal.
struct Sublattice {
    std::size_t ambientRank = 0;
    IntMatrix basis; // ambientRank x rank

    std::size_t rank() const { return basis.cols(); }
    static Sublattice full(std::size_t d);
    static Sublattice fromGenerators(std::size_t ambientRank, const IntMatrix& gens);
    bool operator==(const Sublattice& o) const = default;
};

/// Finite abelian group as elementary divisors d1 | d2 | ..., each >= 2.
struct FiniteAbelian {
    std::vector<Int> elementaryDivisors;

    Int order() const;
    bool isTrivial() const { return elementaryDivisors.empty(); }
    bool operator==(const FiniteAbelian& o) const = default;
    std::string toString() const;
};

/// Canonical column-style Hermite normal form: same column span over Z,
/// pivot rows strictly increasing, positive pivots, entries reduced,
/// zero columns trailing. Output dimensions match the input.
IntMatrix hnf(const IntMatrix& m);

/// Smith normal form with transforms: U*M*V = diag(d).
SNFResult snf(const IntMatrix& m);

/// Basis of the integer kernel {v : Mv = 0}. Always saturated.
Sublattice kernelSaturated(const IntMatrix& m);

/// Fixed sublattice of a square integer matrix, ker(rho - I).
Sublattice fixedSublattice(const IntMatrix& rho);

/// Elementary divisors of big/small for a finite-index inclusion.
FiniteAbelian quotientStructure(const Sublattice& big, const Sublattice& small);

/// H^1(Z/p; Z^d) for the action rho of order p: ker(N)/im(rho-1),
/// N = sum of rho^i. Requires rho^p = I.
FiniteAbelian h1Cyclic(const IntMatrix& rho, unsigned p);

/// Rank over Q (fraction-free elimination); internal consistency checks only.
std::size_t rationalRank(const IntMatrix& m);

IntMatrix matrixPower(const IntMatrix& m, unsigned k);

/// Solve basis * x = v over Z for a column-HNF basis; nullopt-like via bool.
bool solveInHnfBasis(const IntMatrix& basis, const std::vector<Int>& v,
                     std::vector<Int>& out);

} // namespace kla
