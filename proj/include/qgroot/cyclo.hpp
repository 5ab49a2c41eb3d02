#pragma once

// Exact arithmetic in the cyclotomic field Q(g), g a primitive N-th root of unity,
// and dense linear algebra over it.
//
// Elements are residues modulo the N-th cyclotomic polynomial, stored as
// phi(N) rational coefficients in the power basis 1, g, ..., g^(phi(N)-1).

#include "rational.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

namespace qgroot {

namespace detail {

using IntPoly = std::vector<Integer>;  // coefficient of x^k at index k
using RatPoly = std::vector<Rational>;

inline void trim(IntPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline void trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division a / b over Z[x]; b must be monic and divide a.
inline IntPoly exact_divide(IntPoly a, const IntPoly& b) {
    trim(a);
    const std::size_t db = b.size() - 1;
    assert(b.back() == 1);
    if (a.size() < b.size()) return {};
    IntPoly q(a.size() - db, 0);
    for (std::size_t k = a.size(); k-- > db;) {
        Integer c = a[k];
        if (c == 0) continue;
        q[k - db] = c;
        for (std::size_t j = 0; j <= db; ++j) a[k - db + j] -= c * b[j];
    }
    trim(a);
    if (!a.empty()) throw std::logic_error("cyclotomic recursion: non-exact division");
    return q;
}

inline IntPoly cyclotomic_polynomial_uncached(long n);

inline const IntPoly& cyclotomic_polynomial(long n) {
    static std::mutex mu;
    static std::map<long, IntPoly> cache;
    {
        std::lock_guard lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    IntPoly p = cyclotomic_polynomial_uncached(n);
    std::lock_guard lock(mu);
    return cache.emplace(n, std::move(p)).first->second;
}

// Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
inline IntPoly cyclotomic_polynomial_uncached(long n) {
    IntPoly p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (long d = 1; d < n; ++d)
        if (n % d == 0) p = exact_divide(std::move(p), cyclotomic_polynomial(d));
    return p;
}

inline RatPoly poly_mul(const RatPoly& a, const RatPoly& b) {
    if (a.empty() || b.empty()) return {};
    RatPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

inline RatPoly poly_sub(const RatPoly& a, const RatPoly& b) {
    RatPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

// a = q*b + r with deg r < deg b; b nonzero.
inline std::pair<RatPoly, RatPoly> poly_divmod(RatPoly a, const RatPoly& b) {
    trim(a);
    const std::size_t db = b.size() - 1;
    if (a.size() < b.size()) return {{}, a};
    RatPoly q(a.size() - db, 0);
    const Rational lead_inv = 1 / b.back();
    for (std::size_t k = a.size(); k-- > db;) {
        if (a[k] == 0) continue;
        Rational c = a[k] * lead_inv;
        q[k - db] = c;
        for (std::size_t j = 0; j <= db; ++j) a[k - db + j] -= c * b[j];
    }
    trim(a);
    trim(q);
    return {q, a};
}

}  // namespace detail

struct FieldData {
    long order = 1;
    long degree = 1;
    detail::IntPoly modulus;                  // monic, size degree+1
    std::vector<std::vector<Rational>> powers;  // g^k reduced, k = 0..order-1
};

class CycloElem;

/// The cyclotomic field Q(g) with g of multiplicative order N.
class Field {
public:
    /// N = 1 gives the rationals with generator 1.
    explicit Field(long order);

    long order() const { return d_->order; }
    long degree() const { return d_->degree; }
    const detail::IntPoly& modulus() const { return d_->modulus; }

    CycloElem zero() const;
    CycloElem one() const;
    CycloElem generator() const;
    /// g^k, any integer k.
    CycloElem root(long k) const;
    CycloElem from_rational(const Rational& q) const;
    CycloElem from_coeffs(std::vector<Rational> coeffs) const;

    /// k in [0, N) with x == g^k, if x is a power of the generator.
    std::optional<long> root_exponent(const CycloElem& x) const;

    bool operator==(const Field& other) const { return d_ == other.d_ || d_->order == other.d_->order; }

    const FieldData& data() const { return *d_; }

private:
    std::shared_ptr<const FieldData> d_;
};

class CycloElem {
public:
    CycloElem(Field field, std::vector<Rational> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
        assert(static_cast<long>(c_.size()) == field_.degree());
    }

    const Field& field() const { return field_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q == 0; });
    }
    bool is_one() const {
        if (c_[0] != 1) return false;
        return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& q) { return q == 0; });
    }
    /// The rational value if the element lies in Q.
    std::optional<Rational> as_rational() const {
        for (std::size_t k = 1; k < c_.size(); ++k)
            if (c_[k] != 0) return std::nullopt;
        return c_[0];
    }

    CycloElem& operator+=(const CycloElem& o) {
        check_same(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    CycloElem& operator-=(const CycloElem& o) {
        check_same(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    CycloElem& operator*=(const CycloElem& o) { return *this = *this * o; }
    CycloElem& operator*=(const Rational& q) {
        for (auto& c : c_) c *= q;
        return *this;
    }

    friend CycloElem operator+(CycloElem a, const CycloElem& b) { return a += b; }
    friend CycloElem operator-(CycloElem a, const CycloElem& b) { return a -= b; }
    friend CycloElem operator-(CycloElem a) {
        for (auto& c : a.c_) c = -c;
        return a;
    }
    friend CycloElem operator*(CycloElem a, const Rational& q) { return a *= q; }
    friend CycloElem operator*(const Rational& q, CycloElem a) { return a *= q; }

    friend CycloElem operator*(const CycloElem& a, const CycloElem& b) {
        a.check_same(b);
        const long n = a.field_.degree();
        if (n == 1) return CycloElem(a.field_, {a.c_[0] * b.c_[0]});
        std::vector<Rational> prod(2 * n - 1, 0);
        for (long i = 0; i < n; ++i) {
            if (a.c_[i] == 0) continue;
            for (long j = 0; j < n; ++j)
                if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
        }
        // x^n = -sum_{j<n} m_j x^j
        const auto& m = a.field_.modulus();
        for (long k = 2 * n - 2; k >= n; --k) {
            if (prod[k] == 0) continue;
            Rational c = prod[k];
            prod[k] = 0;
            for (long j = 0; j < n; ++j)
                if (m[j] != 0) prod[k - n + j] -= c * m[j];
        }
        prod.resize(n);
        return CycloElem(a.field_, std::move(prod));
    }

    /// Multiplicative inverse by the extended Euclidean algorithm modulo the cyclotomic polynomial.
    CycloElem inverse() const {
        if (is_zero()) throw DivisionByZero();
        using detail::RatPoly;
        RatPoly mod(field_.modulus().begin(), field_.modulus().end());
        RatPoly a(c_.begin(), c_.end());
        detail::trim(a);
        // invariant: s*a == r0 (mod modulus)
        RatPoly r0 = a, r1 = mod, s0 = {1}, s1 = {};
        while (!r1.empty()) {
            auto [q, r] = detail::poly_divmod(r0, r1);
            RatPoly s = detail::poly_sub(s0, detail::poly_mul(q, s1));
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s);
        }
        // r0 is a nonzero constant because the modulus is irreducible
        if (r0.size() != 1) throw std::logic_error("cyclotomic modulus is not coprime to element");
        const Rational inv = 1 / r0[0];
        auto [q, rem] = detail::poly_divmod(s0, mod);
        std::vector<Rational> out(field_.degree(), 0);
        for (std::size_t k = 0; k < rem.size(); ++k) out[k] = rem[k] * inv;
        return CycloElem(field_, std::move(out));
    }

    friend CycloElem operator/(const CycloElem& a, const CycloElem& b) { return a * b.inverse(); }

    CycloElem pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        CycloElem result = field_.one(), base = *this;
        while (e > 0) {
            if (e & 1) result *= base;
            base *= base;
            e >>= 1;
        }
        return result;
    }

    friend bool operator==(const CycloElem& a, const CycloElem& b) {
        return a.field_.order() == b.field_.order() && a.c_ == b.c_;
    }

    friend std::ostream& operator<<(std::ostream& os, const CycloElem& x) {
        bool first = true;
        for (std::size_t k = 0; k < x.c_.size(); ++k) {
            if (x.c_[k] == 0) continue;
            if (!first) os << " + ";
            first = false;
            os << x.c_[k];
            if (k > 0) os << "*g^" << k;
        }
        if (first) os << 0;
        return os;
    }

private:
    void check_same(const CycloElem& o) const {
        if (field_.order() != o.field_.order()) throw PreconditionError("cyclotomic elements from different fields");
    }

    Field field_;
    std::vector<Rational> c_;
};

inline Field::Field(long order) {
    if (order < 1) throw PreconditionError("cyclotomic order must be positive");
    auto d = std::make_shared<FieldData>();
    d->order = order;
    d->modulus = detail::cyclotomic_polynomial(order);
    d->degree = static_cast<long>(d->modulus.size()) - 1;
    const long n = d->degree;
    // powers of g by repeated multiplication by x
    std::vector<Rational> cur(n, 0);
    cur[0] = 1;
    d->powers.reserve(order);
    for (long k = 0; k < order; ++k) {
        d->powers.push_back(cur);
        if (n == 1) {
            // Q: g = -modulus[0]
            cur[0] = cur[0] * Rational(-d->modulus[0]);
            continue;
        }
        Rational top = cur[n - 1];
        for (long j = n - 1; j > 0; --j) cur[j] = cur[j - 1];
        cur[0] = 0;
        if (top != 0)
            for (long j = 0; j < n; ++j) cur[j] -= top * d->modulus[j];
    }
    d_ = std::move(d);
}

inline CycloElem Field::zero() const { return CycloElem(*this, std::vector<Rational>(degree(), 0)); }
inline CycloElem Field::one() const { return root(0); }
inline CycloElem Field::generator() const { return root(1); }
inline CycloElem Field::root(long k) const { return CycloElem(*this, d_->powers[positive_mod(k, order())]); }
inline CycloElem Field::from_rational(const Rational& q) const {
    std::vector<Rational> c(degree(), 0);
    c[0] = q;
    return CycloElem(*this, std::move(c));
}
inline CycloElem Field::from_coeffs(std::vector<Rational> coeffs) const {
    for (auto& q : coeffs) q.canonicalize();  // callers may pass raw num/den pairs
    if (static_cast<long>(coeffs.size()) > degree()) {
        // reduce an arbitrary polynomial
        CycloElem acc = zero();
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            if (coeffs[k] != 0) acc += root(static_cast<long>(k)) * coeffs[k];
        return acc;
    }
    coeffs.resize(degree(), 0);
    return CycloElem(*this, std::move(coeffs));
}

inline std::optional<long> Field::root_exponent(const CycloElem& x) const {
    for (long k = 0; k < order(); ++k)
        if (x.coeffs() == d_->powers[k]) return k;
    return std::nullopt;
}

/// zeta^q := g^(2*delta*q), where the field was built with N = 2*delta*l so that zeta = g^(2*delta).
inline long zeta_exponent(const Field& field, long delta, const Rational& q) {
    if (delta <= 0) throw PreconditionError("delta must be positive");
    if (field.order() % (2 * delta) != 0)
        throw PreconditionError("field order is not a multiple of 2*delta");
    Rational e = q * (2 * delta);
    if (!is_integer(e))
        throw PreconditionError("exponent " + q.get_str() + " does not lie in (1/" + std::to_string(2 * delta) + ")Z");
    Integer r = e.get_num() % field.order();
    if (r < 0) r += field.order();
    return r.get_si();
}

inline CycloElem zeta_rational_power(const Field& field, long delta, const Rational& q) {
    return field.root(zeta_exponent(field, delta, q));
}

// ---------------------------------------------------------------------------
// Dense matrices

class CycloMatrix {
public:
    CycloMatrix(const Field& field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), a_(rows * cols, field.zero()) {}

    static CycloMatrix identity(const Field& field, std::size_t n) {
        CycloMatrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
        return m;
    }

    const Field& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    CycloElem& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const CycloElem& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    bool is_zero() const {
        return std::all_of(a_.begin(), a_.end(), [](const CycloElem& x) { return x.is_zero(); });
    }

    CycloMatrix transpose() const {
        CycloMatrix t(field_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    CycloMatrix& operator+=(const CycloMatrix& o) {
        check_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    CycloMatrix& operator-=(const CycloMatrix& o) {
        check_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    CycloMatrix& operator*=(const CycloElem& s) {
        for (auto& x : a_) x = x * s;
        return *this;
    }
    friend CycloMatrix operator+(CycloMatrix a, const CycloMatrix& b) { return a += b; }
    friend CycloMatrix operator-(CycloMatrix a, const CycloMatrix& b) { return a -= b; }
    friend CycloMatrix operator*(CycloMatrix a, const CycloElem& s) { return a *= s; }
    friend CycloMatrix operator*(const CycloElem& s, CycloMatrix a) { return a *= s; }

    friend CycloMatrix operator*(const CycloMatrix& a, const CycloMatrix& b) {
        if (a.cols_ != b.rows_) throw std::logic_error("matrix product shape mismatch");
        CycloMatrix p(a.field_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const CycloElem& x = a(i, k);
                if (x.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (!b(k, j).is_zero()) p(i, j) += x * b(k, j);
            }
        return p;
    }

    std::vector<CycloElem> operator*(const std::vector<CycloElem>& v) const {
        if (v.size() != cols_) throw std::logic_error("matrix-vector shape mismatch");
        std::vector<CycloElem> out(rows_, field_.zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k)
                if (!(*this)(i, k).is_zero() && !v[k].is_zero()) out[i] += (*this)(i, k) * v[k];
        return out;
    }

    CycloMatrix column(std::size_t c) const { return submatrix_cols({c}); }

    CycloMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
        CycloMatrix s(field_, rows.size(), cols.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
        return s;
    }
    CycloMatrix submatrix_cols(const std::vector<std::size_t>& cols) const {
        std::vector<std::size_t> rows(rows_);
        for (std::size_t i = 0; i < rows_; ++i) rows[i] = i;
        return submatrix(rows, cols);
    }
    CycloMatrix submatrix_rows(const std::vector<std::size_t>& rows) const {
        std::vector<std::size_t> cols(cols_);
        for (std::size_t j = 0; j < cols_; ++j) cols[j] = j;
        return submatrix(rows, cols);
    }

    /// [this | other]
    CycloMatrix hconcat(const CycloMatrix& o) const {
        if (rows_ != o.rows_) throw std::logic_error("hconcat row mismatch");
        CycloMatrix r(field_, rows_, cols_ + o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, cols_ + j) = o(i, j);
        }
        return r;
    }
    CycloMatrix vconcat(const CycloMatrix& o) const {
        if (cols_ != o.cols_) throw std::logic_error("vconcat column mismatch");
        CycloMatrix r(field_, rows_ + o.rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
        for (std::size_t i = 0; i < o.rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(rows_ + i, j) = o(i, j);
        return r;
    }

    friend bool operator==(const CycloMatrix& a, const CycloMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

private:
    void check_shape(const CycloMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::logic_error("matrix shape mismatch");
    }

    Field field_;
    std::size_t rows_, cols_;
    std::vector<CycloElem> a_;
};

struct RowEchelon {
    CycloMatrix reduced;              // reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

/// Gauss-Jordan elimination. Pivot columns are the lexicographically first independent columns.
inline RowEchelon row_reduce(CycloMatrix m) {
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
        std::size_t p = rank;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != rank)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(rank, j));
        const CycloElem inv = m(rank, c).inverse();
        for (std::size_t j = c; j < m.cols(); ++j)
            if (!m(rank, j).is_zero()) m(rank, j) = m(rank, j) * inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == rank || m(r, c).is_zero()) continue;
            const CycloElem f = m(r, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!m(rank, j).is_zero()) m(r, j) -= f * m(rank, j);
        }
        pivots.push_back(c);
        ++rank;
    }
    return {std::move(m), std::move(pivots)};
}

struct RankNullspace {
    std::size_t rank = 0;
    std::vector<std::vector<CycloElem>> nullspace;  // basis of {v : m v = 0}
    std::vector<std::size_t> pivots;
};

inline RankNullspace rank_nullspace(const CycloMatrix& m) {
    RowEchelon e = row_reduce(m);
    RankNullspace out;
    out.rank = e.pivots.size();
    out.pivots = e.pivots;
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivots) is_pivot[c] = true;
    const Field& f = m.field();
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<CycloElem> v(m.cols(), f.zero());
        v[free] = f.one();
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
        out.nullspace.push_back(std::move(v));
    }
    return out;
}

inline std::size_t rank(const CycloMatrix& m) { return row_reduce(m).pivots.size(); }

/// Inverse of a square matrix; throws DivisionByZero if singular.
inline CycloMatrix inverse(const CycloMatrix& m) {
    if (m.rows() != m.cols()) throw std::logic_error("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    RowEchelon e = row_reduce(m.hconcat(CycloMatrix::identity(m.field(), n)));
    if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) throw DivisionByZero();
    CycloMatrix inv(m.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
    return inv;
}

inline CycloMatrix column_matrix(const Field& f, const std::vector<std::vector<CycloElem>>& cols, std::size_t rows) {
    CycloMatrix m(f, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
}

}  // namespace qgroot
