#pragma once

#include <string>
#include <vector>

#include "qlambda/abelian.hpp"
#include "qlambda/numeric.hpp"

namespace qlambda {

struct IntMatrix {
    size_t rows = 0, cols = 0;
    std::vector<Int> a; // row-major

    IntMatrix() = default;
    IntMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, Int(0)) {}

    Int& at(size_t i, size_t j) { return a[i * cols + j]; }
    const Int& at(size_t i, size_t j) const { return a[i * cols + j]; }

    static IntMatrix identity(size_t n) {
        IntMatrix m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool operator==(const IntMatrix& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols != o.rows) throw Error(ErrorCode::Internal, "matrix shape mismatch in product");
        IntMatrix r(rows, o.cols);
        for (size_t i = 0; i < rows; ++i)
            for (size_t k = 0; k < cols; ++k) {
                const Int& x = at(i, k);
                if (x == 0) continue;
                for (size_t j = 0; j < o.cols; ++j) r.at(i, j) += x * o.at(k, j);
            }
        return r;
    }

    IntMatrix operator-(const IntMatrix& o) const {
        if (rows != o.rows || cols != o.cols)
            throw Error(ErrorCode::Internal, "matrix shape mismatch in difference");
        IntMatrix r(rows, cols);
        for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }

    void swap_rows(size_t i, size_t j) {
        if (i == j) return;
        for (size_t k = 0; k < cols; ++k) std::swap(at(i, k), at(j, k));
    }
    void swap_cols(size_t i, size_t j) {
        if (i == j) return;
        for (size_t k = 0; k < rows; ++k) std::swap(at(k, i), at(k, j));
    }

    std::string to_string() const {
        std::string out = "[";
        for (size_t i = 0; i < rows; ++i) {
            out += (i ? ",[" : "[");
            for (size_t j = 0; j < cols; ++j) out += (j ? "," : "") + at(i, j).get_str();
            out += "]";
        }
        return out + "]";
    }
};

inline IntMatrix block_diag(const std::vector<IntMatrix>& blocks) {
    size_t r = 0, c = 0;
    for (const auto& b : blocks) {
        r += b.rows;
        c += b.cols;
    }
    IntMatrix m(r, c);
    size_t ro = 0, co = 0;
    for (const auto& b : blocks) {
        for (size_t i = 0; i < b.rows; ++i)
            for (size_t j = 0; j < b.cols; ++j) m.at(ro + i, co + j) = b.at(i, j);
        ro += b.rows;
        co += b.cols;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Determinant by fraction-free elimination (independent of the SNF path; also
// used by the verify suites as the cokernel-cardinality oracle).
inline Int det_bareiss(IntMatrix m) {
    if (m.rows != m.cols) throw Error(ErrorCode::Internal, "determinant of non-square matrix");
    size_t n = m.rows;
    if (n == 0) return 1;
    Int prev(1);
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m.at(k, k) == 0) {
            size_t piv = k + 1;
            while (piv < n && m.at(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            m.swap_rows(k, piv);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                Int t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m.at(i, j) = t;
            }
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

// ---------------------------------------------------------------------------
// Smith Normal Form: P*M*Q = D with P,Q unimodular, D diagonal, nonnegative,
// d_1 | d_2 | ... and zeros last. Pivot rule: smallest absolute value in the
// working submatrix, first occurrence scanning rows before columns.

struct SNFResult {
    IntMatrix P, D, Q;

    std::vector<Int> diagonal() const {
        std::vector<Int> d;
        for (size_t i = 0; i < std::min(D.rows, D.cols); ++i) d.push_back(D.at(i, i));
        return d;
    }
    size_t rank() const {
        size_t r = 0;
        for (const auto& d : diagonal())
            if (d != 0) ++r;
        return r;
    }
};

inline SNFResult snf(const IntMatrix& M) {
    const size_t m = M.rows, n = M.cols;
    SNFResult res{IntMatrix::identity(m), M, IntMatrix::identity(n)};
    IntMatrix& D = res.D;
    IntMatrix& P = res.P;
    IntMatrix& Q = res.Q;

    auto row_axpy = [&](size_t dst, size_t src, const Int& c) {
        for (size_t j = 0; j < n; ++j) D.at(dst, j) += c * D.at(src, j);
        for (size_t j = 0; j < m; ++j) P.at(dst, j) += c * P.at(src, j);
    };
    auto col_axpy = [&](size_t dst, size_t src, const Int& c) {
        for (size_t i = 0; i < m; ++i) D.at(i, dst) += c * D.at(i, src);
        for (size_t i = 0; i < n; ++i) Q.at(i, dst) += c * Q.at(i, src);
    };

    const size_t mn = std::min(m, n);
    for (size_t t = 0; t < mn; ++t) {
        // pivot search
        bool found = false;
        size_t pi = t, pj = t;
        Int best;
        for (size_t i = t; i < m; ++i)
            for (size_t j = t; j < n; ++j) {
                const Int& v = D.at(i, j);
                if (v == 0) continue;
                Int av = v < 0 ? Int(-v) : v;
                if (!found || av < best) {
                    found = true;
                    best = av;
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break; // remaining submatrix zero

        if (pi != t) {
            D.swap_rows(t, pi);
            P.swap_rows(t, pi);
        }
        if (pj != t) {
            D.swap_cols(t, pj);
            Q.swap_cols(t, pj);
        }

        for (;;) {
            bool dirty = false;
            for (size_t i = t + 1; i < m; ++i) {
                if (D.at(i, t) == 0) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), D.at(i, t).get_mpz_t(), D.at(t, t).get_mpz_t());
                if (q != 0) row_axpy(i, t, Int(-q));
                if (D.at(i, t) != 0) { // strictly smaller remainder becomes the pivot
                    D.swap_rows(t, i);
                    P.swap_rows(t, i);
                    dirty = true;
                }
            }
            if (dirty) continue;
            for (size_t j = t + 1; j < n; ++j) {
                if (D.at(t, j) == 0) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), D.at(t, j).get_mpz_t(), D.at(t, t).get_mpz_t());
                if (q != 0) col_axpy(j, t, Int(-q));
                if (D.at(t, j) != 0) {
                    D.swap_cols(t, j);
                    Q.swap_cols(t, j);
                    dirty = true;
                }
            }
            if (dirty) continue;
            // divisibility fix-up: fold an offending row into the pivot row
            bool fixed = true;
            for (size_t i = t + 1; i < m && fixed; ++i)
                for (size_t j = t + 1; j < n && fixed; ++j)
                    if (D.at(i, j) % D.at(t, t) != 0) {
                        row_axpy(t, i, Int(1));
                        fixed = false;
                    }
            if (fixed) break;
        }

        if (D.at(t, t) < 0) {
            for (size_t j = 0; j < n; ++j) D.at(t, j) = -D.at(t, j);
            for (size_t j = 0; j < m; ++j) P.at(t, j) = -P.at(t, j);
        }
    }
    return res;
}

// coker(M : Z^cols -> Z^rows) and ker rank, read off the Smith form.
inline FGAbelianGroup coker_group(const IntMatrix& M) {
    SNFResult s = snf(M);
    FGAbelianGroup g;
    size_t rank = s.rank();
    g.free_rank = M.rows - rank;
    for (const auto& d : s.diagonal())
        if (d >= 2) g.invariant_factors.push_back(d);
    return g;
}

inline size_t ker_rank(const IntMatrix& M) { return M.cols - snf(M).rank(); }

// ---------------------------------------------------------------------------
// Exterior powers: entries are k x k minors indexed by sorted k-subsets in
// lexicographic order.

inline std::vector<std::vector<size_t>> k_subsets(size_t d, size_t k) {
    std::vector<std::vector<size_t>> out;
    std::vector<size_t> cur(k);
    for (size_t i = 0; i < k; ++i) cur[i] = i;
    if (k > d) return out;
    for (;;) {
        out.push_back(cur);
        if (k == 0) break;
        size_t i = k;
        while (i-- > 0) {
            if (cur[i] + (k - i) < d) {
                ++cur[i];
                for (size_t j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
                break;
            }
            if (i == 0) return out;
        }
    }
    return out;
}

inline IntMatrix exterior_power(const IntMatrix& L, size_t k) {
    if (L.rows != L.cols) throw Error(ErrorCode::Internal, "exterior power of non-square matrix");
    if (k > L.rows) throw Error(ErrorCode::IndexRange, "exterior power index exceeds dimension");
    auto subs = k_subsets(L.rows, k);
    IntMatrix out(subs.size(), subs.size());
    for (size_t r = 0; r < subs.size(); ++r)
        for (size_t c = 0; c < subs.size(); ++c) {
            IntMatrix minor(k, k);
            for (size_t i = 0; i < k; ++i)
                for (size_t j = 0; j < k; ++j) minor.at(i, j) = L.at(subs[r][i], subs[c][j]);
            out.at(r, c) = det_bareiss(minor);
        }
    return out;
}

} // namespace qlambda
