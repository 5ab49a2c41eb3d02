#pragma once

// Small exact linear algebra over Z and Q: determinants, inverses,
// Smith and Hermite normal forms. Matrices are row-major vector<vector<>>.

#include "rational.hpp"

#include <cstdlib>
#include <utility>
#include <vector>

namespace qgroot {

using RatMatrix = std::vector<std::vector<Rational>>;
using IntMatrix = std::vector<std::vector<Integer>>;

inline RatMatrix rat_identity(std::size_t n) {
    RatMatrix m(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline RatMatrix to_rational(const IntMatrix& a) {
    RatMatrix m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (const auto& x : a[i]) m[i].emplace_back(x);
    return m;
}

inline RatMatrix rat_mul(const RatMatrix& a, const RatMatrix& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    RatMatrix p(n, std::vector<Rational>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) p[i][j] += a[i][t] * b[t][j];
        }
    return p;
}

inline std::vector<Rational> rat_mul(const RatMatrix& a, const std::vector<Rational>& v) {
    std::vector<Rational> out(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

inline RatMatrix rat_transpose(const RatMatrix& a) {
    if (a.empty()) return {};
    RatMatrix t(a[0].size(), std::vector<Rational>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

inline Rational rat_det(RatMatrix a) {
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return det;
}

/// Throws PreconditionError if singular.
inline RatMatrix rat_inverse(RatMatrix a) {
    const std::size_t n = a.size();
    RatMatrix inv = rat_identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw PreconditionError("singular matrix");
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        Rational s = 1 / a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] *= s;
            inv[c][j] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rational f = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

struct SmithForm {
    IntMatrix diag;  // P * A * Q
    IntMatrix P, Q;  // unimodular
};

inline IntMatrix int_identity(std::size_t n) {
    IntMatrix m(n, std::vector<Integer>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

/// Smith normal form with transforms: P*A*Q = diag(s_1 | s_2 | ...), s_k >= 0.
inline SmithForm smith_normal_form(IntMatrix a) {
    const std::size_t m = a.size(), n = m ? a[0].size() : 0;
    IntMatrix P = int_identity(m), Q = int_identity(n);
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(a[i], a[j]);
        std::swap(P[i], P[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (auto& row : a) std::swap(row[i], row[j]);
        for (auto& row : Q) std::swap(row[i], row[j]);
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const Integer& f) {  // row dst += f*row src
        for (std::size_t j = 0; j < n; ++j) a[dst][j] += f * a[src][j];
        for (std::size_t j = 0; j < m; ++j) P[dst][j] += f * P[src][j];
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const Integer& f) {
        for (std::size_t i = 0; i < m; ++i) a[i][dst] += f * a[i][src];
        for (std::size_t i = 0; i < n; ++i) Q[i][dst] += f * Q[i][src];
    };

    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block goes to (t,t)
            std::size_t bi = m, bj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (a[i][j] != 0 && (bi == m || abs(a[i][j]) < abs(a[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == m) return {a, P, Q};
            swap_rows(t, bi);
            swap_cols(t, bj);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a[i][t] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                add_row(i, t, -q);
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a[t][j] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                add_col(j, t, -q);
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility of the trailing block by the pivot
            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == m) break;
            add_row(t, bad, 1);
        }
        if (a[t][t] < 0) {
            for (std::size_t j = 0; j < n; ++j) a[t][j] = -a[t][j];
            for (std::size_t j = 0; j < m; ++j) P[t][j] = -P[t][j];
        }
    }
    return {a, P, Q};
}

/// Lower-triangular column Hermite form of a full-rank square integer basis (columns are generators).
inline IntMatrix column_hermite_form(IntMatrix h) {
    const std::size_t n = h.size();
    auto col_op = [&](std::size_t j, std::size_t k, const Integer& a, const Integer& b, const Integer& c,
                      const Integer& d) {  // (col j, col k) <- (a*j + b*k, c*j + d*k)
        for (std::size_t i = 0; i < n; ++i) {
            Integer x = h[i][j], y = h[i][k];
            h[i][j] = a * x + b * y;
            h[i][k] = c * x + d * y;
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            if (h[i][k] == 0) continue;
            Integer g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h[i][i].get_mpz_t(), h[i][k].get_mpz_t());
            Integer u = h[i][i] / g, v = h[i][k] / g;
            col_op(i, k, s, t, -v, u);
        }
        if (h[i][i] == 0) throw PreconditionError("lattice basis is not full rank");
        if (h[i][i] < 0)
            for (std::size_t r = 0; r < n; ++r) h[r][i] = -h[r][i];
        for (std::size_t j = 0; j < i; ++j) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), h[i][j].get_mpz_t(), h[i][i].get_mpz_t());
            if (q != 0)
                for (std::size_t r = 0; r < n; ++r) h[r][j] -= q * h[r][i];
        }
    }
    return h;
}

/// Hermite form for a rational full-rank basis: clear denominators, reduce, rescale.
inline RatMatrix column_hermite_form(const RatMatrix& basis) {
    std::vector<Rational> all;
    for (const auto& row : basis) all.insert(all.end(), row.begin(), row.end());
    Integer den = lcm_of_denominators(all);
    IntMatrix scaled(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (const auto& q : basis[i]) {
            Rational s = q * den;
            scaled[i].push_back(s.get_num());
        }
    IntMatrix h = column_hermite_form(std::move(scaled));
    RatMatrix out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        for (const auto& z : h[i]) {
            Rational q(z, den);
            q.canonicalize();
            out[i].push_back(q);
        }
    return out;
}

}  // namespace qgroot
