#include "heckeraise/qmat.hpp"

#include <algorithm>

namespace heckeraise {

namespace {

// Multiply a rational row through by lcm of denominators over gcd of
// numerators: primitive integer content, bounds growth during elimination.
void row_primitive(std::vector<rat>& v) {
    bigint lcm = 1, gcd = 0;
    for (const rat& x : v) {
        if (x == 0) continue;
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
    }
    for (rat& x : v) {
        if (lcm != 1) x *= rat(lcm);
        if (x != 0) mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), x.get_num().get_mpz_t());
    }
    if (gcd > 1) {
        rat g(gcd);
        for (rat& x : v)
            if (x != 0) x /= g;
    }
}

// dst -= c*src
void axpy_q(std::vector<rat>& dst, const rat& c, const std::vector<rat>& src) {
    if (c == 0) return;
    for (size_t j = 0; j < src.size(); ++j)
        if (src[j] != 0) dst[j] -= c * src[j];
}

void axpy_z(std::vector<bigint>& dst, const bigint& c, const std::vector<bigint>& src) {
    if (c == 0) return;
    if (dst.size() < src.size()) dst.resize(src.size());
    for (size_t j = 0; j < src.size(); ++j)
        if (src[j] != 0)
            mpz_submul(dst[j].get_mpz_t(), c.get_mpz_t(), src[j].get_mpz_t());
}

std::vector<std::vector<rat>> to_rows(const MatrixQ& A) {
    std::vector<std::vector<rat>> rows(A.nrows(), std::vector<rat>(A.ncols()));
    for (long i = 0; i < A.nrows(); ++i)
        for (long j = 0; j < A.ncols(); ++j) rows[i][j] = A.at(i, j);
    return rows;
}

MatrixQ from_rows(const std::vector<std::vector<rat>>& rows, long ncols) {
    MatrixQ R((long)rows.size(), ncols);
    for (long i = 0; i < R.nrows(); ++i)
        for (long j = 0; j < ncols; ++j) R.at(i, j) = rows[i][j];
    return R;
}

// Forward elimination restricted to the first acols columns, tracking row
// operations in the tail columns.  Returns pivot columns; rows reordered so
// pivot rows come first in pivot order.
std::vector<long> eliminate(std::vector<std::vector<rat>>& rows, long acols) {
    std::vector<long> pivots;
    long r = 0;
    for (long col = 0; col < acols && r < (long)rows.size(); ++col) {
        long sel = -1;
        for (long i = r; i < (long)rows.size(); ++i)
            if (rows[i][col] != 0) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(rows[r], rows[sel]);
        row_primitive(rows[r]);
        const rat piv = rows[r][col];
        for (long i = 0; i < (long)rows.size(); ++i) {
            if (i == r || rows[i][col] == 0) continue;
            axpy_q(rows[i], rows[i][col] / piv, rows[r]);
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

} // namespace

MatrixQ MatrixQ::identity(long n) {
    MatrixQ I(n, n);
    for (long i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

MatrixQ MatrixQ::mul(const MatrixQ& B) const {
    if (ncols_ != B.nrows_) throw error(errc::dimension_mismatch, "MatrixQ::mul");
    MatrixQ C(nrows_, B.ncols_);
    for (long i = 0; i < nrows_; ++i)
        for (long k = 0; k < ncols_; ++k) {
            const rat& x = at(i, k);
            if (x == 0) continue;
            for (long j = 0; j < B.ncols_; ++j)
                if (B.at(k, j) != 0) C.at(i, j) += x * B.at(k, j);
        }
    return C;
}

MatrixQ MatrixQ::add(const MatrixQ& B) const {
    if (nrows_ != B.nrows_ || ncols_ != B.ncols_)
        throw error(errc::dimension_mismatch, "MatrixQ::add");
    MatrixQ C(nrows_, ncols_);
    for (size_t t = 0; t < a_.size(); ++t) C.a_[t] = a_[t] + B.a_[t];
    return C;
}

MatrixQ MatrixQ::sub(const MatrixQ& B) const {
    if (nrows_ != B.nrows_ || ncols_ != B.ncols_)
        throw error(errc::dimension_mismatch, "MatrixQ::sub");
    MatrixQ C(nrows_, ncols_);
    for (size_t t = 0; t < a_.size(); ++t) C.a_[t] = a_[t] - B.a_[t];
    return C;
}

MatrixQ MatrixQ::scale(const rat& c) const {
    MatrixQ C(nrows_, ncols_);
    for (size_t t = 0; t < a_.size(); ++t) C.a_[t] = a_[t] * c;
    return C;
}

MatrixQ MatrixQ::transpose() const {
    MatrixQ C(ncols_, nrows_);
    for (long i = 0; i < nrows_; ++i)
        for (long j = 0; j < ncols_; ++j) C.at(j, i) = at(i, j);
    return C;
}

bool MatrixQ::is_zero() const {
    for (const rat& x : a_)
        if (x != 0) return false;
    return true;
}

bool MatrixQ::operator==(const MatrixQ& B) const {
    return nrows_ == B.nrows_ && ncols_ == B.ncols_ && a_ == B.a_;
}

bool MatrixQ::is_integral() const {
    for (const rat& x : a_)
        if (x.get_den() != 1) return false;
    return true;
}

MatrixZ MatrixQ::to_integer() const {
    if (!is_integral()) throw error(errc::internal, "non-integral matrix");
    MatrixZ C(nrows_, ncols_);
    for (long i = 0; i < nrows_; ++i)
        for (long j = 0; j < ncols_; ++j) C.at(i, j) = at(i, j).get_num();
    return C;
}

MatrixZ MatrixZ::identity(long n) {
    MatrixZ I(n, n);
    for (long i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

MatrixZ MatrixZ::mul(const MatrixZ& B) const {
    if (ncols_ != B.nrows_) throw error(errc::dimension_mismatch, "MatrixZ::mul");
    MatrixZ C(nrows_, B.ncols_);
    for (long i = 0; i < nrows_; ++i)
        for (long k = 0; k < ncols_; ++k) {
            const bigint& x = at(i, k);
            if (x == 0) continue;
            for (long j = 0; j < B.ncols_; ++j)
                if (B.at(k, j) != 0)
                    mpz_addmul(C.at(i, j).get_mpz_t(), x.get_mpz_t(),
                               B.at(k, j).get_mpz_t());
        }
    return C;
}

MatrixZ MatrixZ::transpose() const {
    MatrixZ C(ncols_, nrows_);
    for (long i = 0; i < nrows_; ++i)
        for (long j = 0; j < ncols_; ++j) C.at(j, i) = at(i, j);
    return C;
}

bool MatrixZ::operator==(const MatrixZ& B) const {
    return nrows_ == B.nrows_ && ncols_ == B.ncols_ && a_ == B.a_;
}

bool MatrixZ::is_zero() const {
    for (const bigint& x : a_)
        if (x != 0) return false;
    return true;
}

MatrixQ MatrixZ::to_rational() const {
    MatrixQ C(nrows_, ncols_);
    for (long i = 0; i < nrows_; ++i)
        for (long j = 0; j < ncols_; ++j) C.at(i, j) = rat(at(i, j));
    return C;
}

MatrixQ rref_q(const MatrixQ& A, std::vector<long>& pivots) {
    auto rows = to_rows(A);
    pivots = eliminate(rows, A.ncols());
    rows.resize(pivots.size());
    for (size_t k = 0; k < pivots.size(); ++k) {
        const rat piv = rows[k][pivots[k]];
        for (rat& x : rows[k])
            if (x != 0) x /= piv;
    }
    return from_rows(rows, A.ncols());
}

long rank_q(const MatrixQ& A) {
    std::vector<long> pivots;
    rref_q(A, pivots);
    return (long)pivots.size();
}

MatrixQ left_kernel_q(const MatrixQ& A) {
    const long n = A.nrows(), m = A.ncols();
    std::vector<std::vector<rat>> rows(n, std::vector<rat>(m + n));
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < m; ++j) rows[i][j] = A.at(i, j);
        rows[i][m + i] = 1;
    }
    auto pivots = eliminate(rows, m);
    std::vector<std::vector<rat>> ker;
    for (long i = (long)pivots.size(); i < n; ++i)
        ker.emplace_back(rows[i].begin() + m, rows[i].end());
    return from_rows(ker, n);
}

MatrixQ right_kernel_q(const MatrixQ& A) {
    std::vector<long> pivots;
    MatrixQ R = rref_q(A, pivots);
    std::vector<bool> is_pivot(A.ncols(), false);
    for (long p : pivots) is_pivot[p] = true;
    MatrixQ K(A.ncols() - (long)pivots.size(), A.ncols());
    long r = 0;
    for (long f = 0; f < A.ncols(); ++f) {
        if (is_pivot[f]) continue;
        K.at(r, f) = 1;
        for (size_t k = 0; k < pivots.size(); ++k) K.at(r, pivots[k]) = -R.at((long)k, f);
        ++r;
    }
    return K;
}

MatrixQ solve_left(const MatrixQ& A, const MatrixQ& B) {
    if (A.ncols() != B.ncols()) throw error(errc::dimension_mismatch, "solve_left");
    const long n = A.nrows(), m = A.ncols();
    std::vector<std::vector<rat>> rows(n, std::vector<rat>(m + n));
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < m; ++j) rows[i][j] = A.at(i, j);
        rows[i][m + i] = 1;
    }
    auto pivots = eliminate(rows, m);
    // Unit-normalize pivot rows so reduction of b is a plain read-off.
    for (size_t k = 0; k < pivots.size(); ++k) {
        const rat piv = rows[k][pivots[k]];
        for (rat& x : rows[k])
            if (x != 0) x /= piv;
    }
    MatrixQ X(B.nrows(), n);
    std::vector<rat> b(m);
    for (long r = 0; r < B.nrows(); ++r) {
        for (long j = 0; j < m; ++j) b[j] = B.at(r, j);
        std::vector<rat> x(n);
        for (size_t k = 0; k < pivots.size(); ++k) {
            const rat c = b[pivots[k]];
            if (c == 0) continue;
            for (long j = 0; j < m; ++j)
                if (rows[k][j] != 0) b[j] -= c * rows[k][j];
            for (long j = 0; j < n; ++j)
                if (rows[k][m + j] != 0) x[j] += c * rows[k][m + j];
        }
        for (long j = 0; j < m; ++j)
            if (b[j] != 0) throw error(errc::internal, "solve_left: inconsistent system");
        for (long j = 0; j < n; ++j) X.at(r, j) = x[j];
    }
    return X;
}

HnfBuilder::HnfBuilder(long ncols, bool track) : ncols_(ncols), track_(track) {}

void HnfBuilder::reduce_above(long k) {
    const long j = pivots_[k];
    const bigint& p = rows_[k][j];
    bigint q, rem;
    for (long i = 0; i < (long)rows_.size(); ++i) {
        if (i == k || rows_[i][j] == 0) continue;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), rows_[i][j].get_mpz_t(),
                    p.get_mpz_t());
        if (q == 0) continue;
        axpy_z(rows_[i], q, rows_[k]);
        if (track_) axpy_z(trows_[i], q, trows_[k]);
    }
}

void HnfBuilder::insert(std::vector<bigint> row) {
    if ((long)row.size() != ncols_) throw error(errc::dimension_mismatch, "HnfBuilder");
    std::vector<bigint> trow;
    if (track_) {
        trow.resize(inserted_ + 1);
        trow[inserted_] = 1;
    }
    ++inserted_;

    std::vector<long> pivot_at(ncols_, -1);
    for (long k = 0; k < (long)rows_.size(); ++k) pivot_at[pivots_[k]] = k;

    long j = 0;
    while (true) {
        while (j < ncols_ && row[j] == 0) ++j;
        if (j == ncols_) {
            if (track_) kernel_.push_back(std::move(trow));
            return;
        }
        long k = pivot_at[j];
        if (k < 0) {
            if (row[j] < 0) {
                for (bigint& x : row) x = -x;
                if (track_)
                    for (bigint& x : trow) x = -x;
            }
            // Reduce the new row against pivots to its right before storing.
            bigint q, rem;
            for (long c = j + 1; c < ncols_; ++c) {
                long kc = pivot_at[c];
                if (kc < 0 || row[c] == 0) continue;
                mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), row[c].get_mpz_t(),
                            rows_[kc][c].get_mpz_t());
                if (q == 0) continue;
                axpy_z(row, q, rows_[kc]);
                if (track_) axpy_z(trow, q, trows_[kc]);
            }
            rows_.push_back(std::move(row));
            if (track_) trows_.push_back(std::move(trow));
            pivots_.push_back(j);
            reduce_above((long)rows_.size() - 1);
            return;
        }
        bigint& p = rows_[k][j];
        bigint q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), row[j].get_mpz_t(), p.get_mpz_t());
        if (q != 0) {
            axpy_z(row, q, rows_[k]);
            if (track_) axpy_z(trow, q, trows_[k]);
        }
        if (row[j] != 0) {
            // gcd step: replace the stored pivot row and keep reducing.
            bigint g, x, y;
            mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), p.get_mpz_t(),
                       row[j].get_mpz_t());
            std::vector<bigint> new_s(ncols_), new_r(ncols_);
            bigint pg = p / g, ag = row[j] / g;
            for (long c = 0; c < ncols_; ++c) {
                new_s[c] = x * rows_[k][c] + y * row[c];
                new_r[c] = pg * row[c] - ag * rows_[k][c];
            }
            std::vector<bigint> new_ts, new_tr;
            if (track_) {
                size_t w = std::max(trows_[k].size(), trow.size());
                new_ts.resize(w);
                new_tr.resize(w);
                for (size_t c = 0; c < w; ++c) {
                    bigint sk = c < trows_[k].size() ? trows_[k][c] : bigint(0);
                    bigint sr = c < trow.size() ? trow[c] : bigint(0);
                    new_ts[c] = x * sk + y * sr;
                    new_tr[c] = pg * sr - ag * sk;
                }
            }
            rows_[k] = std::move(new_s);
            row = std::move(new_r);
            if (track_) {
                trows_[k] = std::move(new_ts);
                trow = std::move(new_tr);
            }
            reduce_above(k);
        }
    }
}

MatrixZ HnfBuilder::result() const {
    std::vector<long> order(rows_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (long)i;
    std::sort(order.begin(), order.end(),
              [&](long a, long b) { return pivots_[a] < pivots_[b]; });
    // Final normalization: entries above each pivot reduced into [0, pivot).
    auto rows = rows_;
    bigint q, rem;
    for (size_t t = 0; t < order.size(); ++t) {
        long k = order[t];
        long j = pivots_[k];
        for (size_t s = 0; s < t; ++s) {
            long i = order[s];
            if (rows[i][j] == 0) continue;
            mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), rows[i][j].get_mpz_t(),
                        rows[k][j].get_mpz_t());
            if (q != 0) axpy_z(rows[i], q, rows[k]);
        }
    }
    MatrixZ H((long)rows.size(), ncols_);
    for (size_t t = 0; t < order.size(); ++t)
        for (long c = 0; c < ncols_; ++c) H.at((long)t, c) = rows[order[t]][c];
    return H;
}

MatrixZ HnfBuilder::kernel() const {
    MatrixZ K((long)kernel_.size(), inserted_);
    for (long i = 0; i < K.nrows(); ++i)
        for (long j = 0; j < (long)kernel_[i].size(); ++j) K.at(i, j) = kernel_[i][j];
    return K;
}

MatrixZ hnf(const MatrixZ& A) {
    HnfBuilder b(A.ncols(), false);
    for (long i = 0; i < A.nrows(); ++i) {
        std::vector<bigint> row(A.ncols());
        for (long j = 0; j < A.ncols(); ++j) row[j] = A.at(i, j);
        b.insert(std::move(row));
    }
    return b.result();
}

MatrixZ integer_left_kernel(const MatrixZ& A) {
    HnfBuilder b(A.ncols(), true);
    for (long i = 0; i < A.nrows(); ++i) {
        std::vector<bigint> row(A.ncols());
        for (long j = 0; j < A.ncols(); ++j) row[j] = A.at(i, j);
        b.insert(std::move(row));
    }
    return hnf(b.kernel());
}

MatrixZ saturate(const MatrixZ& A) {
    MatrixQ K = right_kernel_q(A.to_rational());
    if (K.nrows() == 0) return MatrixZ::identity(A.ncols());
    // Clear denominators row by row; the annihilator of the right kernel is
    // exactly the rational row span, so its integer points form the
    // saturation.
    MatrixZ Kz(K.nrows(), K.ncols());
    for (long i = 0; i < K.nrows(); ++i) {
        bigint lcm = 1;
        for (long j = 0; j < K.ncols(); ++j)
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(),
                    K.at(i, j).get_den().get_mpz_t());
        for (long j = 0; j < K.ncols(); ++j) {
            rat x = K.at(i, j) * rat(lcm);
            Kz.at(i, j) = x.get_num();
        }
    }
    return integer_left_kernel(Kz.transpose());
}

std::vector<bigint> elementary_divisors(MatrixZ A) {
    const long n = A.nrows(), m = A.ncols();
    std::vector<bigint> divs;
    long t = 0;
    while (t < std::min(n, m)) {
        // Find the smallest nonzero entry in the remaining block.
        long bi = -1, bj = -1;
        for (long i = t; i < n; ++i)
            for (long j = t; j < m; ++j) {
                if (A.at(i, j) == 0) continue;
                if (bi < 0 || mpz_cmpabs(A.at(i, j).get_mpz_t(),
                                         A.at(bi, bj).get_mpz_t()) < 0) {
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;
        for (long j = 0; j < m; ++j) std::swap(A.at(t, j), A.at(bi, j));
        for (long i = 0; i < n; ++i) std::swap(A.at(i, t), A.at(i, bj));
        bool clean = true;
        for (long i = t + 1; i < n; ++i) {
            if (A.at(i, t) == 0) continue;
            bigint q = A.at(i, t) / A.at(t, t);
            for (long j = t; j < m; ++j) A.at(i, j) -= q * A.at(t, j);
            if (A.at(i, t) != 0) clean = false;
        }
        for (long j = t + 1; j < m; ++j) {
            if (A.at(t, j) == 0) continue;
            bigint q = A.at(t, j) / A.at(t, t);
            for (long i = t; i < n; ++i) A.at(i, j) -= q * A.at(i, t);
            if (A.at(t, j) != 0) clean = false;
        }
        if (!clean) continue;
        // Enforce divisibility into the remaining block.
        bool divides = true;
        for (long i = t + 1; i < n && divides; ++i)
            for (long j = t + 1; j < m; ++j)
                if (A.at(i, j) % A.at(t, t) != 0) {
                    for (long c = t; c < m; ++c) A.at(t, c) += A.at(i, c);
                    divides = false;
                    break;
                }
        if (!divides) continue;
        bigint d = A.at(t, t);
        divs.push_back(d < 0 ? bigint(-d) : d);
        ++t;
    }
    return divs;
}

std::vector<rat> charpoly(const MatrixQ& A) {
    if (A.nrows() != A.ncols()) throw error(errc::dimension_mismatch, "charpoly");
    const long n = A.nrows();
    std::vector<rat> c(n + 1);
    c[n] = 1;
    MatrixQ M = A;
    for (long k = 1; k <= n; ++k) {
        rat tr = 0;
        for (long i = 0; i < n; ++i) tr += M.at(i, i);
        c[n - k] = -tr / k;
        if (k == n) break;
        for (long i = 0; i < n; ++i) M.at(i, i) += c[n - k];
        M = A.mul(M);
    }
    return c;
}

std::string to_string(const rat& x) { return x.get_str(); }
std::string to_string(const bigint& x) { return x.get_str(); }

} // namespace heckeraise
