#include "heckeraise/modmat.hpp"

#include <algorithm>
#include <deque>

namespace heckeraise {

namespace {

// dst -= c*src over the ring, aligning transform widths.
void axpy_r(const ResidueRing& R, std::vector<uint64_t>& dst, uint64_t c,
            const std::vector<uint64_t>& src) {
    if (c == 0) return;
    if (dst.size() < src.size()) dst.resize(src.size(), 0);
    for (size_t j = 0; j < src.size(); ++j)
        if (src[j]) dst[j] = R.sub(dst[j], R.mul(c, src[j]));
}

void scale_r(const ResidueRing& R, std::vector<uint64_t>& v, uint64_t c) {
    for (uint64_t& x : v) x = R.mul(x, c);
}

} // namespace

MatrixR MatrixR::identity(ResidueRing ring, long n) {
    MatrixR I(ring, n, n);
    for (long i = 0; i < n; ++i) I.at(i, i) = 1 % ring.modulus;
    return I;
}

MatrixR MatrixR::mul(const MatrixR& B) const {
    if (ncols_ != B.nrows_ || ring_.modulus != B.ring_.modulus)
        throw error(errc::dimension_mismatch, "MatrixR::mul");
    MatrixR C(ring_, nrows_, B.ncols_);
    for (long i = 0; i < nrows_; ++i)
        for (long k = 0; k < ncols_; ++k) {
            uint64_t x = at(i, k);
            if (!x) continue;
            for (long j = 0; j < B.ncols_; ++j)
                if (B.at(k, j))
                    C.at(i, j) = ring_.add(C.at(i, j), ring_.mul(x, B.at(k, j)));
        }
    return C;
}

MatrixR MatrixR::add(const MatrixR& B) const {
    if (nrows_ != B.nrows_ || ncols_ != B.ncols_)
        throw error(errc::dimension_mismatch, "MatrixR::add");
    MatrixR C(ring_, nrows_, ncols_);
    for (size_t t = 0; t < a_.size(); ++t) C.a_[t] = ring_.add(a_[t], B.a_[t]);
    return C;
}

MatrixR MatrixR::sub(const MatrixR& B) const {
    if (nrows_ != B.nrows_ || ncols_ != B.ncols_)
        throw error(errc::dimension_mismatch, "MatrixR::sub");
    MatrixR C(ring_, nrows_, ncols_);
    for (size_t t = 0; t < a_.size(); ++t) C.a_[t] = ring_.sub(a_[t], B.a_[t]);
    return C;
}

MatrixR MatrixR::scale(uint64_t c) const {
    MatrixR C(ring_, nrows_, ncols_);
    c %= ring_.modulus;
    for (size_t t = 0; t < a_.size(); ++t) C.a_[t] = ring_.mul(a_[t], c);
    return C;
}

bool MatrixR::is_zero() const {
    for (uint64_t x : a_)
        if (x) return false;
    return true;
}

bool MatrixR::operator==(const MatrixR& B) const {
    return nrows_ == B.nrows_ && ncols_ == B.ncols_ &&
           ring_.modulus == B.ring_.modulus && a_ == B.a_;
}

HowellBuilder::HowellBuilder(ResidueRing ring, long ncols, bool track)
    : ring_(ring), ncols_(ncols), track_(track), pivot_at_(ncols, -1) {}

bool HowellBuilder::unit_complete() const { return unit_pivots_ == ncols_; }

void HowellBuilder::process(std::vector<uint64_t> row, std::vector<uint64_t> trow) {
    std::deque<std::pair<std::vector<uint64_t>, std::vector<uint64_t>>> queue;
    queue.emplace_back(std::move(row), std::move(trow));
    while (!queue.empty()) {
        auto [r, t] = std::move(queue.front());
        queue.pop_front();
        long j = 0;
        while (true) {
            while (j < ncols_ && r[j] == 0) ++j;
            if (j == ncols_) {
                if (track_ && !t.empty()) kernel_.push_back(std::move(t));
                break;
            }
            auto [v, u] = ring_.val_unit(r[j]);
            long k = pivot_at_[j];
            if (k < 0) {
                if (u != 1) {
                    uint64_t ui = ring_.inv(u);
                    scale_r(ring_, r, ui);
                    if (track_) scale_r(ring_, t, ui);
                }
                if (v > 0) {
                    uint64_t c = ring_.pow_ell(ring_.n - v);
                    auto cr = r;
                    scale_r(ring_, cr, c);
                    std::vector<uint64_t> ct;
                    if (track_) {
                        ct = t;
                        scale_r(ring_, ct, c);
                    }
                    queue.emplace_back(std::move(cr), std::move(ct));
                } else {
                    ++unit_pivots_;
                }
                pivot_at_[j] = (long)rows_.size();
                rows_.push_back(std::move(r));
                if (track_) trows_.push_back(std::move(t));
                pivots_.push_back(j);
                pivot_val_.push_back(v);
                break;
            }
            int w = pivot_val_[k];
            if (v >= w) {
                uint64_t c = ring_.mul(ring_.pow_ell(v - w), u);
                axpy_r(ring_, r, c, rows_[k]);
                if (track_) axpy_r(ring_, t, c, trows_[k]);
                // r[j] is now zero; continue scanning right.
            } else {
                // Smaller valuation takes over the pivot slot; the old pivot
                // row re-enters the reduction from this column.
                if (u != 1) {
                    uint64_t ui = ring_.inv(u);
                    scale_r(ring_, r, ui);
                    if (track_) scale_r(ring_, t, ui);
                }
                std::swap(r, rows_[k]);
                if (track_) std::swap(t, trows_[k]);
                pivot_val_[k] = v;
                if (v == 0) ++unit_pivots_;
                uint64_t c = ring_.pow_ell(ring_.n - v);
                auto cr = rows_[k];
                scale_r(ring_, cr, c);
                std::vector<uint64_t> ct;
                if (track_) {
                    ct = trows_[k];
                    scale_r(ring_, ct, c);
                }
                queue.emplace_back(std::move(cr), std::move(ct));
                // fall through: old row r still has its ell^w entry at j.
            }
        }
    }
}

void HowellBuilder::insert(const std::vector<uint64_t>& row) {
    if ((long)row.size() != ncols_) throw error(errc::dimension_mismatch, "HowellBuilder");
    std::vector<uint64_t> r(ncols_);
    for (long j = 0; j < ncols_; ++j) r[j] = row[j] % ring_.modulus;
    std::vector<uint64_t> t;
    if (track_) {
        t.assign(inserted_ + 1, 0);
        t[inserted_] = 1;
    }
    ++inserted_;
    process(std::move(r), std::move(t));
}

HowellForm HowellBuilder::finish() const {
    std::vector<long> order(rows_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (long)i;
    std::sort(order.begin(), order.end(),
              [&](long a, long b) { return pivots_[a] < pivots_[b]; });

    auto rows = rows_;
    auto trows = trows_;
    // Entries above each pivot reduced below the pivot value.
    for (size_t s = 0; s < order.size(); ++s) {
        long k = order[s];
        long j = pivots_[k];
        uint64_t p = ring_.pow_ell(pivot_val_[k]);
        for (size_t s2 = 0; s2 < s; ++s2) {
            long i = order[s2];
            uint64_t q = rows[i][j] / p;
            if (!q) continue;
            axpy_r(ring_, rows[i], q, rows[k]);
            if (track_) axpy_r(ring_, trows[i], q, trows[k]);
        }
    }

    MatrixR H(ring_, (long)order.size(), ncols_);
    MatrixR T(ring_, (long)order.size(), track_ ? inserted_ : 0);
    for (size_t s = 0; s < order.size(); ++s) {
        for (long c = 0; c < ncols_; ++c) H.at((long)s, c) = rows[order[s]][c];
        if (track_)
            for (size_t c = 0; c < trows[order[s]].size(); ++c)
                T.at((long)s, (long)c) = trows[order[s]][c];
    }
    return {H, T};
}

std::vector<std::vector<uint64_t>> HowellBuilder::kernel_rows() const {
    std::vector<std::vector<uint64_t>> out;
    for (const auto& t : kernel_) {
        std::vector<uint64_t> v(inserted_, 0);
        for (size_t j = 0; j < t.size(); ++j) v[j] = t[j];
        out.push_back(std::move(v));
    }
    return out;
}

HowellForm howell(const MatrixR& A) {
    HowellBuilder b(A.ring(), A.ncols(), true);
    std::vector<uint64_t> row(A.ncols());
    for (long i = 0; i < A.nrows(); ++i) {
        for (long j = 0; j < A.ncols(); ++j) row[j] = A.at(i, j);
        b.insert(row);
    }
    return b.finish();
}

MatrixR kernel_r(const MatrixR& A) {
    // v with A*v^T = 0  <=>  v in the left kernel of A^T.
    HowellBuilder b(A.ring(), A.nrows(), true);
    std::vector<uint64_t> row(A.nrows());
    for (long c = 0; c < A.ncols(); ++c) {
        for (long i = 0; i < A.nrows(); ++i) row[i] = A.at(i, c);
        b.insert(row);
    }
    auto gens = b.kernel_rows();
    // Canonicalize the generating set.
    HowellBuilder canon(A.ring(), A.ncols(), false);
    for (auto& g : gens) canon.insert(g);
    return canon.finish().H;
}

MatrixR simultaneous_kernel_r(const std::vector<MatrixR>& As) {
    if (As.empty()) throw error(errc::dimension_mismatch, "simultaneous_kernel_r: empty");
    long cols = As[0].ncols();
    long rows = 0;
    for (const auto& A : As) {
        if (A.ncols() != cols || A.ring().modulus != As[0].ring().modulus)
            throw error(errc::dimension_mismatch, "simultaneous_kernel_r");
        rows += A.nrows();
    }
    MatrixR S(As[0].ring(), rows, cols);
    long r0 = 0;
    for (const auto& A : As) {
        for (long i = 0; i < A.nrows(); ++i)
            for (long j = 0; j < cols; ++j) S.at(r0 + i, j) = A.at(i, j);
        r0 += A.nrows();
    }
    return kernel_r(S);
}

MatrixR right_inverse_mod(const MatrixR& A) {
    HowellBuilder b(A.ring(), A.ncols(), true);
    std::vector<uint64_t> row(A.ncols());
    for (long i = 0; i < A.nrows(); ++i) {
        for (long j = 0; j < A.ncols(); ++j) row[j] = A.at(i, j);
        b.insert(row);
    }
    if (b.nrows() != A.nrows())
        throw error(errc::internal, "right_inverse_mod: dependent rows");
    HowellForm f = b.finish();
    for (long i = 0; i < f.H.nrows(); ++i) {
        long j = 0;
        while (j < f.H.ncols() && f.H.at(i, j) == 0) ++j;
        if (j == f.H.ncols() || f.H.at(i, j) != 1)
            throw error(errc::internal, "right_inverse_mod: non-unit pivot");
    }
    // H restricted to pivot columns is the identity, so Y = S*T with S the
    // pivot-column selector satisfies A*Y = I.
    MatrixR Y(A.ring(), A.ncols(), A.nrows());
    for (long i = 0; i < f.H.nrows(); ++i) {
        long j = 0;
        while (f.H.at(i, j) == 0) ++j;
        for (long c = 0; c < A.nrows(); ++c) Y.at(j, c) = f.transform.at(i, c);
    }
    MatrixR check = A.mul(Y);
    if (!(check == MatrixR::identity(A.ring(), A.nrows())))
        throw error(errc::internal, "right_inverse_mod: check failed");
    return Y;
}

} // namespace heckeraise
