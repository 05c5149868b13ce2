#pragma once

#include <cstdint>
#include <vector>

#include "heckeraise/arith.hpp"
#include "heckeraise/errors.hpp"

namespace heckeraise {

// Dense matrix over Z/ell^n with entries reduced into [0, modulus).
class MatrixR {
public:
    MatrixR(ResidueRing ring, long r, long c)
        : ring_(ring), nrows_(r), ncols_(c), a_(r * c, 0) {}
    static MatrixR identity(ResidueRing ring, long n);

    const ResidueRing& ring() const { return ring_; }
    long nrows() const { return nrows_; }
    long ncols() const { return ncols_; }
    uint64_t& at(long i, long j) { return a_[i * ncols_ + j]; }
    uint64_t at(long i, long j) const { return a_[i * ncols_ + j]; }

    MatrixR mul(const MatrixR& B) const;
    MatrixR add(const MatrixR& B) const;
    MatrixR sub(const MatrixR& B) const;
    MatrixR scale(uint64_t c) const;
    bool is_zero() const;
    bool operator==(const MatrixR& B) const;

private:
    ResidueRing ring_;
    long nrows_, ncols_;
    std::vector<uint64_t> a_;
};

struct HowellForm {
    MatrixR H;         // canonical Howell normal form, zero rows dropped
    MatrixR transform; // T with T * A = H
};

// Incremental Howell reduction over Z/ell^n.  Pivots are normalized to
// ell^v; stored rows keep zeros left of their pivot; span closure is
// maintained by enqueueing ell^(n-v) multiples of stored rows (Storjohann's
// treatment of Howell's algorithm).
class HowellBuilder {
public:
    HowellBuilder(ResidueRing ring, long ncols, bool track_transform);
    void insert(const std::vector<uint64_t>& row);
    long nrows() const { return (long)rows_.size(); }
    // True once every column carries a unit pivot (so H = identity).
    bool unit_complete() const;
    // Canonical form + transform (in insertion coordinates).
    HowellForm finish() const;
    // Transform rows of inserts (and closure rows) that reduced to zero;
    // generates {x : x*A = 0}.
    std::vector<std::vector<uint64_t>> kernel_rows() const;
    const std::vector<long>& pivot_cols() const { return pivots_; }
    const std::vector<std::vector<uint64_t>>& raw_rows() const { return rows_; }
    const std::vector<std::vector<uint64_t>>& raw_transforms() const { return trows_; }

private:
    ResidueRing ring_;
    long ncols_;
    bool track_;
    long inserted_ = 0;
    long unit_pivots_ = 0;
    std::vector<std::vector<uint64_t>> rows_, trows_;
    std::vector<long> pivots_;
    std::vector<int> pivot_val_;
    std::vector<long> pivot_at_; // column -> stored row index or -1
    std::vector<std::vector<uint64_t>> kernel_;
    void process(std::vector<uint64_t> row, std::vector<uint64_t> trow);
};

HowellForm howell(const MatrixR& A);
// Rows generating {v : A*v^T = 0}, in Howell form (canonical).
MatrixR kernel_r(const MatrixR& A);
// Kernel of the vertical stack [A_1; A_2; ...]; all matrices must share a
// column count.
MatrixR simultaneous_kernel_r(const std::vector<MatrixR>& As);
// Y with A*Y = identity, for A whose rows are unimodular mod ell (e.g. the
// reduction of a saturated lattice basis).  Throws internal otherwise.
MatrixR right_inverse_mod(const MatrixR& A);

} // namespace heckeraise
