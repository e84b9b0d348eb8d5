#include "kla/intlattice.hpp"

#include <algorithm>
#include <sstream>

namespace kla {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows_ * cols_)
        fail(ErrorCode::Invalid, "IntMatrix: entry count does not match shape");
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::zero(std::size_t rows, std::size_t cols) {
    return IntMatrix(rows, cols);
}

IntMatrix IntMatrix::fromRows(const std::vector<std::vector<long>>& rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows[0].size();
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c)
            fail(ErrorCode::Invalid, "IntMatrix: ragged rows");
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

bool IntMatrix::isZero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Int& x) { return x == 0; });
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) fail(ErrorCode::Invalid, "IntMatrix: shape mismatch in *");
    IntMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& x = at(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r.at(i, j) += x * o.at(k, j);
        }
    return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        fail(ErrorCode::Invalid, "IntMatrix: shape mismatch in +");
    IntMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        fail(ErrorCode::Invalid, "IntMatrix: shape mismatch in -");
    IntMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

std::vector<Int> IntMatrix::applyTo(const std::vector<Int>& v) const {
    if (v.size() != cols_) fail(ErrorCode::Invalid, "IntMatrix: vector length mismatch");
    std::vector<Int> r(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
    return r;
}

IntMatrix IntMatrix::column(std::size_t j) const {
    IntMatrix c(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) c.at(i, 0) = at(i, j);
    return c;
}

std::string IntMatrix::toString() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < cols_; ++j)
            os << (j ? "," : "") << at(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

namespace {

// Row-style HNF in place: nonzero rows first, pivot columns strictly
// increasing, positive pivots, entries above each pivot reduced into
// [0, pivot). Pivot choice is smallest nonzero magnitude, then lowest row.
void rowHnfInPlace(IntMatrix& m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        // gcd-eliminate column c among rows >= r until one nonzero remains
        while (true) {
            std::size_t best = m.rows();
            for (std::size_t i = r; i < m.rows(); ++i) {
                if (m.at(i, c) == 0) continue;
                if (best == m.rows() ||
                    cmp(abs(m.at(i, c)), abs(m.at(best, c))) < 0)
                    best = i;
            }
            if (best == m.rows()) break; // column zero below r
            bool others = false;
            for (std::size_t i = r; i < m.rows(); ++i) {
                if (i == best || m.at(i, c) == 0) continue;
                others = true;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m.at(i, c).get_mpz_t(),
                           m.at(best, c).get_mpz_t());
                for (std::size_t j = 0; j < m.cols(); ++j)
                    m.at(i, j) -= q * m.at(best, j);
            }
            if (!others) {
                if (best != r)
                    for (std::size_t j = 0; j < m.cols(); ++j)
                        swap(m.at(best, j), m.at(r, j));
                break;
            }
        }
        if (m.at(r, c) == 0) continue;
        if (m.at(r, c) < 0)
            for (std::size_t j = 0; j < m.cols(); ++j) m.at(r, j) = -m.at(r, j);
        for (std::size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), m.at(i, c).get_mpz_t(),
                       m.at(r, c).get_mpz_t());
            if (q == 0) continue;
            for (std::size_t j = 0; j < m.cols(); ++j)
                m.at(i, j) -= q * m.at(r, j);
        }
        ++r;
    }
}

} // namespace

IntMatrix hnf(const IntMatrix& m) {
    IntMatrix t = m.transpose();
    rowHnfInPlace(t);
    return t.transpose();
}

SNFResult snf(const IntMatrix& m) {
    const std::size_t R = m.rows(), C = m.cols();
    IntMatrix a = m;
    IntMatrix u = IntMatrix::identity(R);
    IntMatrix v = IntMatrix::identity(C);

    auto rowOp = [&](std::size_t i, std::size_t k, const Int& q) {
        // row i -= q * row k
        for (std::size_t j = 0; j < C; ++j) a.at(i, j) -= q * a.at(k, j);
        for (std::size_t j = 0; j < R; ++j) u.at(i, j) -= q * u.at(k, j);
    };
    auto colOp = [&](std::size_t j, std::size_t k, const Int& q) {
        for (std::size_t i = 0; i < R; ++i) a.at(i, j) -= q * a.at(i, k);
        for (std::size_t i = 0; i < C; ++i) v.at(i, j) -= q * v.at(i, k);
    };
    auto rowSwap = [&](std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t j = 0; j < C; ++j) swap(a.at(i, j), a.at(k, j));
        for (std::size_t j = 0; j < R; ++j) swap(u.at(i, j), u.at(k, j));
    };
    auto colSwap = [&](std::size_t j, std::size_t k) {
        if (j == k) return;
        for (std::size_t i = 0; i < R; ++i) swap(a.at(i, j), a.at(i, k));
        for (std::size_t i = 0; i < C; ++i) swap(v.at(i, j), v.at(i, k));
    };
    auto rowNegate = [&](std::size_t i) {
        for (std::size_t j = 0; j < C; ++j) a.at(i, j) = -a.at(i, j);
        for (std::size_t j = 0; j < R; ++j) u.at(i, j) = -u.at(i, j);
    };

    std::size_t t = 0;
    const std::size_t n = std::min(R, C);
    while (t < n) {
        // smallest nonzero magnitude in the trailing submatrix, lowest index
        std::size_t pi = R, pj = C;
        for (std::size_t i = t; i < R; ++i)
            for (std::size_t j = t; j < C; ++j) {
                if (a.at(i, j) == 0) continue;
                if (pi == R || cmp(abs(a.at(i, j)), abs(a.at(pi, pj))) < 0) {
                    pi = i;
                    pj = j;
                }
            }
        if (pi == R) break; // all zero
        rowSwap(t, pi);
        colSwap(t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (a.at(i, t) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), a.at(i, t).get_mpz_t(),
                           a.at(t, t).get_mpz_t());
                rowOp(i, t, q);
                if (a.at(i, t) != 0) { // remainder became the smaller pivot
                    rowSwap(t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (a.at(t, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), a.at(t, j).get_mpz_t(),
                           a.at(t, t).get_mpz_t());
                colOp(j, t, q);
                if (a.at(t, j) != 0) {
                    colSwap(t, j);
                    clean = false;
                }
            }
            if (!clean) continue;
            // divisibility fix: pivot must divide the whole submatrix
            for (std::size_t i = t + 1; i < R && clean; ++i)
                for (std::size_t j = t + 1; j < C && clean; ++j)
                    if (a.at(i, j) % a.at(t, t) != 0) {
                        Int one = -1;
                        rowOp(t, i, one); // row t += row i
                        clean = false;
                    }
        }
        if (a.at(t, t) < 0) rowNegate(t);
        ++t;
    }

    SNFResult res;
    res.d.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.d[i] = a.at(i, i);
    res.U = std::move(u);
    res.V = std::move(v);
    return res;
}

Sublattice Sublattice::full(std::size_t d) {
    return Sublattice{d, IntMatrix::identity(d)};
}

Sublattice Sublattice::fromGenerators(std::size_t ambientRank, const IntMatrix& gens) {
    if (gens.rows() != ambientRank)
        fail(ErrorCode::Invalid, "Sublattice: generator shape mismatch");
    IntMatrix h = hnf(gens);
    std::size_t r = 0;
    for (std::size_t j = 0; j < h.cols(); ++j) {
        bool nz = false;
        for (std::size_t i = 0; i < h.rows(); ++i)
            if (h.at(i, j) != 0) nz = true;
        if (nz) r = j + 1;
    }
    IntMatrix basis(ambientRank, r);
    for (std::size_t i = 0; i < ambientRank; ++i)
        for (std::size_t j = 0; j < r; ++j) basis.at(i, j) = h.at(i, j);
    return Sublattice{ambientRank, basis};
}

Sublattice kernelSaturated(const IntMatrix& m) {
    const std::size_t n = m.cols();
    // column HNF of [M; I]: columns whose M-part vanished carry a kernel basis
    IntMatrix stacked(m.rows() + n, n);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) stacked.at(i, j) = m.at(i, j);
    for (std::size_t j = 0; j < n; ++j) stacked.at(m.rows() + j, j) = 1;
    IntMatrix h = hnf(stacked);
    std::vector<std::size_t> kernelCols;
    for (std::size_t j = 0; j < n; ++j) {
        bool topZero = true, anyNz = false;
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (h.at(i, j) != 0) topZero = false;
        for (std::size_t i = 0; i < h.rows(); ++i)
            if (h.at(i, j) != 0) anyNz = true;
        if (topZero && anyNz) kernelCols.push_back(j);
    }
    IntMatrix gens(n, kernelCols.size());
    for (std::size_t k = 0; k < kernelCols.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
            gens.at(i, k) = h.at(m.rows() + i, kernelCols[k]);
    return Sublattice::fromGenerators(n, gens);
}

Sublattice fixedSublattice(const IntMatrix& rho) {
    if (!rho.isSquare()) fail(ErrorCode::Invalid, "fixedSublattice: matrix not square");
    return kernelSaturated(rho - IntMatrix::identity(rho.rows()));
}

bool solveInHnfBasis(const IntMatrix& basis, const std::vector<Int>& v,
                     std::vector<Int>& out) {
    const std::size_t d = basis.rows(), r = basis.cols();
    if (v.size() != d) fail(ErrorCode::Invalid, "solveInHnfBasis: length mismatch");
    // pivot row of each column
    std::vector<std::size_t> pivotRow(r);
    for (std::size_t j = 0; j < r; ++j) {
        std::size_t i = 0;
        while (i < d && basis.at(i, j) == 0) ++i;
        if (i == d) fail(ErrorCode::Invalid, "solveInHnfBasis: zero basis column");
        pivotRow[j] = i;
    }
    out.assign(r, Int(0));
    std::vector<Int> rem = v;
    for (std::size_t j = 0; j < r; ++j) {
        const Int& p = basis.at(pivotRow[j], j);
        Int q, rmd;
        mpz_tdiv_qr(q.get_mpz_t(), rmd.get_mpz_t(),
                    rem[pivotRow[j]].get_mpz_t(), p.get_mpz_t());
        if (rmd != 0) return false;
        out[j] = q;
        if (q != 0)
            for (std::size_t i = 0; i < d; ++i) rem[i] -= q * basis.at(i, j);
    }
    for (std::size_t i = 0; i < d; ++i)
        if (rem[i] != 0) return false;
    return true;
}

FiniteAbelian quotientStructure(const Sublattice& big, const Sublattice& small) {
    if (big.ambientRank != small.ambientRank)
        fail(ErrorCode::Invalid, "quotientStructure: ambient rank mismatch");
    if (big.rank() != small.rank())
        fail(ErrorCode::InfiniteQuotient, "quotientStructure: ranks differ");
    const std::size_t r = big.rank();
    IntMatrix x(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        std::vector<Int> col(small.ambientRank);
        for (std::size_t i = 0; i < small.ambientRank; ++i)
            col[i] = small.basis.at(i, j);
        std::vector<Int> sol;
        if (!solveInHnfBasis(big.basis, col, sol))
            fail(ErrorCode::NotContained, "quotientStructure: small not contained in big");
        for (std::size_t i = 0; i < r; ++i) x.at(i, j) = sol[i];
    }
    SNFResult s = snf(x);
    FiniteAbelian g;
    for (const Int& di : s.d) {
        if (di == 0)
            fail(ErrorCode::InfiniteQuotient, "quotientStructure: singular inclusion");
        if (di > 1) g.elementaryDivisors.push_back(di);
    }
    return g;
}

IntMatrix matrixPower(const IntMatrix& m, unsigned k) {
    IntMatrix r = IntMatrix::identity(m.rows());
    for (unsigned i = 0; i < k; ++i) r = r * m;
    return r;
}

FiniteAbelian h1Cyclic(const IntMatrix& rho, unsigned p) {
    if (!rho.isSquare()) fail(ErrorCode::Invalid, "h1Cyclic: rho not square");
    if (p < 1) fail(ErrorCode::Invalid, "h1Cyclic: p must be positive");
    const std::size_t d = rho.rows();
    if (!(matrixPower(rho, p) == IntMatrix::identity(d)))
        fail(ErrorCode::NotOrderP, "h1Cyclic: rho^p != I");
    IntMatrix norm(d, d), pw = IntMatrix::identity(d);
    for (unsigned i = 0; i < p; ++i) {
        norm = norm + pw;
        pw = pw * rho;
    }
    Sublattice z1 = kernelSaturated(norm);
    Sublattice b1 = Sublattice::fromGenerators(d, rho - IntMatrix::identity(d));
    return quotientStructure(z1, b1);
}

std::size_t rationalRank(const IntMatrix& m) {
    // fraction-free (Bareiss-style) elimination on a copy
    IntMatrix a = m;
    const std::size_t R = a.rows(), C = a.cols();
    std::size_t rank = 0;
    Int prev = 1;
    for (std::size_t c = 0; c < C && rank < R; ++c) {
        std::size_t piv = R;
        for (std::size_t i = rank; i < R; ++i)
            if (a.at(i, c) != 0) { piv = i; break; }
        if (piv == R) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < C; ++j) swap(a.at(piv, j), a.at(rank, j));
        for (std::size_t i = rank + 1; i < R; ++i) {
            for (std::size_t j = c + 1; j < C; ++j) {
                a.at(i, j) = a.at(rank, c) * a.at(i, j) - a.at(i, c) * a.at(rank, j);
                a.at(i, j) /= prev;
            }
            a.at(i, c) = 0;
        }
        prev = a.at(rank, c);
        ++rank;
    }
    return rank;
}

Int FiniteAbelian::order() const {
    Int o = 1;
    for (const Int& d : elementaryDivisors) o *= d;
    return o;
}

std::string FiniteAbelian::toString() const {
    if (elementaryDivisors.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < elementaryDivisors.size(); ++i)
        os << (i ? " + " : "") << "Z/" << elementaryDivisors[i].get_str();
    return os.str();
}

} // namespace kla
