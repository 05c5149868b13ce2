#pragma once

#include <gmpxx.h>
#include <string>
#include <vector>

#include "heckeraise/errors.hpp"

namespace heckeraise {

using bigint = mpz_class;
using rat = mpq_class;

class MatrixZ;

// Dense exact rational matrix.  Row vectors act on the left: v -> v*A, and
// subspaces are row spans.
class MatrixQ {
public:
    MatrixQ() : nrows_(0), ncols_(0) {}
    MatrixQ(long r, long c) : nrows_(r), ncols_(c), a_(r * c) {}
    static MatrixQ identity(long n);

    long nrows() const { return nrows_; }
    long ncols() const { return ncols_; }
    rat& at(long i, long j) { return a_[i * ncols_ + j]; }
    const rat& at(long i, long j) const { return a_[i * ncols_ + j]; }

    MatrixQ mul(const MatrixQ& B) const;
    MatrixQ add(const MatrixQ& B) const;
    MatrixQ sub(const MatrixQ& B) const;
    MatrixQ scale(const rat& c) const;
    MatrixQ transpose() const;
    bool is_zero() const;
    bool operator==(const MatrixQ& B) const;
    bool is_integral() const;
    MatrixZ to_integer() const; // requires is_integral

private:
    long nrows_, ncols_;
    std::vector<rat> a_;
};

// Dense integer matrix.
class MatrixZ {
public:
    MatrixZ() : nrows_(0), ncols_(0) {}
    MatrixZ(long r, long c) : nrows_(r), ncols_(c), a_(r * c) {}
    static MatrixZ identity(long n);

    long nrows() const { return nrows_; }
    long ncols() const { return ncols_; }
    bigint& at(long i, long j) { return a_[i * ncols_ + j]; }
    const bigint& at(long i, long j) const { return a_[i * ncols_ + j]; }

    MatrixZ mul(const MatrixZ& B) const;
    MatrixZ transpose() const;
    bool operator==(const MatrixZ& B) const;
    bool is_zero() const;
    MatrixQ to_rational() const;

private:
    long nrows_, ncols_;
    std::vector<bigint> a_;
};

// Row-reduced echelon form with unit pivots; zero rows dropped.  Elimination
// uses primitive integer pivot rows (content divided out) to bound blowup.
MatrixQ rref_q(const MatrixQ& A, std::vector<long>& pivots);
long rank_q(const MatrixQ& A);
// Rows span {x : x*A = 0}.
MatrixQ left_kernel_q(const MatrixQ& A);
// Rows v with A*v^T = 0 (right kernel).
MatrixQ right_kernel_q(const MatrixQ& A);
// X with X*A = B, i.e. every row of B written in the row space of A.
// Throws internal if some row of B is outside the row span.
MatrixQ solve_left(const MatrixQ& A, const MatrixQ& B);

// Incremental row Hermite form over Z: pivots positive, entries above each
// pivot reduced into [0, pivot), rows sorted by pivot column.  Insertions
// keep the form fully reduced, which keeps entries small (Cohen, GTM 138,
// ch 2.4 flavor).
class HnfBuilder {
public:
    HnfBuilder(long ncols, bool track_transform);
    void insert(std::vector<bigint> row);
    long nrows() const { return (long)rows_.size(); }
    long ncols() const { return ncols_; }
    MatrixZ result() const;
    // Transform rows of the zero-reducing inserts: a saturated basis of
    // {x : x*A = 0} in insertion coordinates.
    MatrixZ kernel() const;
    const std::vector<long>& pivot_cols() const { return pivots_; }

private:
    long ncols_;
    bool track_;
    long inserted_ = 0;
    std::vector<std::vector<bigint>> rows_, trows_;
    std::vector<long> pivots_; // pivot column per stored row
    std::vector<std::vector<bigint>> kernel_;
    void reduce_above(long k);
};

MatrixZ hnf(const MatrixZ& A);
// Saturated basis of the integer left kernel {x in Z^r : x*A = 0}, in HNF.
MatrixZ integer_left_kernel(const MatrixZ& A);
// Basis of (Q-rowspan(A)) ∩ Z^n, Hermite-reduced.
MatrixZ saturate(const MatrixZ& A);
// Smith normal form diagonal (nonzero entries, each dividing the next).
std::vector<bigint> elementary_divisors(MatrixZ A);
// Characteristic polynomial coefficients c with det(xI - A) = sum c[i] x^i,
// c.size() = n+1, via Faddeev-LeVerrier.
std::vector<rat> charpoly(const MatrixQ& A);

std::string to_string(const rat& x);
std::string to_string(const bigint& x);

} // namespace heckeraise
