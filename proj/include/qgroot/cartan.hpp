#pragma once

// Cartan data, the simply connected root datum, roots and coroots,
// rho / rho_ell, the lattices Y_ell and X_ell, and the first alcove.
//
// Weights are stored in the fundamental-weight basis (coordinate k is <k, lambda>);
// coweights in the simple-coroot basis of Y = Z[I]. The embedding Y -> X sends
// i to i', whose coordinates are <k, i'> = 2 k.i / k.k.

#include "cyclo.hpp"
#include "intlinalg.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace qgroot {

/// A point of X (x) Q in fundamental-weight coordinates.
struct Weight {
    std::vector<Rational> c;

    Weight() = default;
    explicit Weight(std::vector<Rational> coords) : c(std::move(coords)) {}
    static Weight zero(std::size_t rank) { return Weight(std::vector<Rational>(rank, 0)); }
    static Weight from_ints(const std::vector<long>& v) {
        Weight w;
        for (long x : v) w.c.emplace_back(x);
        return w;
    }

    std::size_t size() const { return c.size(); }
    bool is_integral() const {
        return std::all_of(c.begin(), c.end(), [](const Rational& q) { return is_integer(q); });
    }
    bool is_zero() const {
        return std::all_of(c.begin(), c.end(), [](const Rational& q) { return q == 0; });
    }

    Weight& operator+=(const Weight& o) {
        for (std::size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
        return *this;
    }
    Weight& operator-=(const Weight& o) {
        for (std::size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
        return *this;
    }
    friend Weight operator+(Weight a, const Weight& b) { return a += b; }
    friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
    friend Weight operator-(Weight a) {
        for (auto& q : a.c) q = -q;
        return a;
    }
    friend Weight operator*(const Rational& s, Weight a) {
        for (auto& q : a.c) q *= s;
        return a;
    }
    friend bool operator==(const Weight& a, const Weight& b) { return a.c == b.c; }
    friend bool operator<(const Weight& a, const Weight& b) {
        return std::lexicographical_compare(a.c.begin(), a.c.end(), b.c.begin(), b.c.end());
    }
};

inline std::string to_string(const Weight& w) {
    std::string s = "(";
    for (std::size_t k = 0; k < w.c.size(); ++k) s += (k ? "," : "") + w.c[k].get_str();
    return s + ")";
}

/// An element of Y = Z[I] in the simple-coroot basis.
using Coweight = std::vector<long>;

inline long height(const Coweight& v) { return std::accumulate(v.begin(), v.end(), 0L); }
inline bool is_nonnegative(const Coweight& v) {
    return std::all_of(v.begin(), v.end(), [](long x) { return x >= 0; });
}
inline Coweight simple_coweight(std::size_t rank, std::size_t i) {
    Coweight v(rank, 0);
    v[i] = 1;
    return v;
}
inline Coweight operator+(Coweight a, const Coweight& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    return a;
}
inline Coweight operator-(Coweight a, const Coweight& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
    return a;
}

using CartanMatrix = std::vector<std::vector<long>>;

struct CartanDatum {
    CartanDatum() = default;  // not an aggregate, so braced matrices pick the CartanMatrix overload

    std::vector<std::vector<long>> form;  // i.j
    std::vector<long> d_i;                // i.i / 2
    long d = 1;
    long delta = 1;                       // det <i, j'>
    std::vector<std::vector<long>> cartan;  // cartan[i][j] = <i, j'> = 2 i.j / i.i
    std::vector<std::string> warnings;

    std::size_t rank() const { return form.size(); }
};

namespace detail {

inline bool is_connected(const std::vector<std::vector<long>>& form) {
    const std::size_t n = form.size();
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        auto i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < n; ++j)
            if (!seen[j] && form[i][j] != 0) {
                seen[j] = true;
                stack.push_back(j);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

}  // namespace detail

/// Checks the Cartan datum axioms and derives d_i, d and delta.
inline CartanDatum validate_cartan(const std::vector<std::vector<long>>& matrix) {
    const std::size_t n = matrix.size();
    if (n == 0) throw PreconditionError("Cartan datum: empty index set");
    for (const auto& row : matrix)
        if (row.size() != n) throw PreconditionError("Cartan datum: matrix is not square");
    CartanDatum D;
    D.form = matrix;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (matrix[i][j] != matrix[j][i]) throw PreconditionError("Cartan datum: form is not symmetric");
    for (std::size_t i = 0; i < n; ++i) {
        long ii = matrix[i][i];
        if (ii <= 0 || ii % 2 != 0)
            throw PreconditionError("Cartan datum: i.i must be even and positive (index " + std::to_string(i) + ")");
        D.d_i.push_back(ii / 2);
    }
    D.cartan.assign(n, std::vector<long>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            long num = 2 * matrix[i][j];
            if (num % matrix[i][i] != 0)
                throw PreconditionError("Cartan datum: 2 i.j / i.i is not an integer");
            D.cartan[i][j] = num / matrix[i][i];
            if (i != j && D.cartan[i][j] > 0) throw PreconditionError("Cartan datum: 2 i.j / i.i must be <= 0 for i != j");
        }
    RatMatrix G(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) G[i].emplace_back(matrix[i][j]);
    for (std::size_t k = 1; k <= n; ++k) {
        RatMatrix minor(k);
        for (std::size_t i = 0; i < k; ++i) minor[i].assign(G[i].begin(), G[i].begin() + k);
        if (rat_det(minor) <= 0) throw PreconditionError("Cartan datum: form is not positive definite");
    }
    D.d = *std::max_element(D.d_i.begin(), D.d_i.end());
    RatMatrix C(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) C[i].emplace_back(D.cartan[i][j]);
    D.delta = to_long(rat_det(C));
    if (!detail::is_connected(matrix)) D.warnings.push_back("Cartan datum is reducible");
    if (D.d > 3) D.warnings.push_back("d = " + std::to_string(D.d) + " exceeds 3");
    return D;
}

/// A positive coroot together with the root w(i') paired with it.
struct RootPair {
    Coweight coroot;              // simple-coroot coordinates
    std::vector<long> root;       // simple-root coordinates (in the basis i')
    long ell = 0;                 // ell_beta
};

struct LatticeData {
    RatMatrix y_ell_basis;   // columns, fundamental-weight coordinates
    RatMatrix x_ell_basis;   // columns
    Integer dd_X = 0;        // card(X / Y_ell)
    Integer dd_Xell = 0;     // card(X_ell / Y_ell)
};

/// Everything derived from a Cartan datum and the order l of zeta.
class CartanContext {
public:
    CartanDatum datum;
    long l = 0;
    long ell = 0;
    std::vector<long> ell_i;
    Field fine_field{1};     // N = 2*delta*l, generator zeta'
    Field zeta_field{1};     // N = l, generator zeta
    std::vector<RootPair> positive;  // ordered by height, then coordinates
    bool ell_beta_consistent = true;
    std::size_t presentations_seen = 0;
    Weight rho, rho_ell;
    Coweight gamma0, beta0;
    long h = 0;
    long dim_g = 0;
    LatticeData lattices;
    std::vector<std::string> warnings;

    std::size_t rank() const { return datum.rank(); }
    long delta() const { return datum.delta; }

    /// mu1 . mu2 on X (x) Q.
    Rational dot(const Weight& a, const Weight& b) const {
        Rational s = 0;
        for (std::size_t i = 0; i < rank(); ++i) {
            if (a.c[i] == 0) continue;
            for (std::size_t j = 0; j < rank(); ++j)
                if (b.c[j] != 0) s += a.c[i] * weight_form_[i][j] * b.c[j];
        }
        return s;
    }

    /// <nu, lambda>
    Rational pair(const Coweight& nu, const Weight& w) const {
        Rational s = 0;
        for (std::size_t i = 0; i < rank(); ++i) s += nu[i] * w.c[i];
        return s;
    }

    /// The image of nu under Y -> X.
    Weight embed(const Coweight& nu) const {
        Weight w = Weight::zero(rank());
        for (std::size_t j = 0; j < rank(); ++j)
            for (std::size_t i = 0; i < rank(); ++i) w.c[j] += nu[i] * datum.cartan[j][i];
        return w;
    }

    Weight simple_root(std::size_t i) const { return embed(simple_coweight(rank(), i)); }

    /// i' . lambda = d_i <i, lambda>
    Rational iprime_dot(std::size_t i, const Weight& w) const { return datum.d_i[i] * w.c[i]; }

    /// i . j for simple coroots, which equals i' . j'.
    long simple_dot(std::size_t i, std::size_t j) const { return datum.form[i][j]; }

    Weight root_weight(const RootPair& p) const {
        Weight w = Weight::zero(rank());
        for (std::size_t j = 0; j < rank(); ++j)
            for (std::size_t k = 0; k < rank(); ++k) w.c[j] += p.root[k] * datum.cartan[j][k];
        return w;
    }

    bool in_X(const Weight& w) const { return w.is_integral(); }

    bool in_Y_ell(const Weight& w) const {
        if (!w.is_integral()) return false;
        auto coords = rat_mul(y_ell_inverse_, w.c);
        return std::all_of(coords.begin(), coords.end(), [](const Rational& q) { return is_integer(q); });
    }

    bool in_X_ell(const Weight& w) const {
        const auto& B = lattices.y_ell_basis;
        for (std::size_t col = 0; col < rank(); ++col) {
            Weight y = Weight::zero(rank());
            for (std::size_t r = 0; r < rank(); ++r) y.c[r] = B[r][col];
            Rational v = dot(w, y) / ell;
            if (!is_integer(v)) return false;
        }
        return true;
    }

    /// Solves w = coweight image; nullopt if w is not in the image of Y.
    std::optional<Coweight> as_coweight(const Weight& w) const {
        auto c = rat_mul(cartan_inverse_, w.c);
        Coweight out;
        for (const auto& q : c) {
            if (!is_integer(q)) return std::nullopt;
            out.push_back(to_long(q));
        }
        return out;
    }

    /// zeta^k in the algebra field Q(zeta), k an integer.
    CycloElem zeta(long k) const { return zeta_field.root(k); }
    CycloElem zeta(const Rational& k) const { return zeta_field.root(to_long(k)); }
    /// zeta^q in Q(zeta') for q in (1/2delta)Z.
    CycloElem zeta_fine(const Rational& q) const { return zeta_rational_power(fine_field, delta(), q); }
    long zeta_fine_exponent(const Rational& q) const { return zeta_exponent(fine_field, delta(), q); }

    const RatMatrix& weight_form() const { return weight_form_; }

private:
    friend CartanContext build_context(const CartanDatum& datum, long l);
    RatMatrix weight_form_;     // omega_i . omega_j
    RatMatrix cartan_inverse_;  // fundamental coords -> simple-root coords
    RatMatrix y_ell_inverse_;
};

namespace detail {

inline std::vector<long> reflect_coroot(const CartanDatum& D, std::size_t j, const std::vector<long>& y) {
    // s_j(y) = y - <y, j'> j
    long p = 0;
    for (std::size_t k = 0; k < y.size(); ++k) p += y[k] * D.cartan[k][j];
    auto out = y;
    out[j] -= p;
    return out;
}

inline std::vector<long> reflect_root(const CartanDatum& D, std::size_t j, const std::vector<long>& a) {
    // a in the basis k'; s_j(a) = a - <j, a> j'
    long p = 0;
    for (std::size_t k = 0; k < a.size(); ++k) p += a[k] * D.cartan[j][k];
    auto out = a;
    out[j] -= p;
    return out;
}

inline long gcd(long a, long b) { return std::gcd(a, b); }

// Orbit closure of the simple (coroot, root) pairs under simple reflections.
inline std::vector<RootPair> positive_root_pairs(const CartanDatum& D, long ell, bool& consistent,
                                                 std::size_t& presentations) {
    const std::size_t n = D.rank();
    std::map<std::vector<long>, RootPair> seen;
    std::vector<RootPair> queue;
    consistent = true;
    presentations = 0;
    for (std::size_t i = 0; i < n; ++i) {
        RootPair p{simple_coweight(n, i), std::vector<long>(n, 0), ell / gcd(ell, D.d_i[i])};
        p.root[i] = 1;
        queue.push_back(p);
    }
    while (!queue.empty()) {
        RootPair p = queue.back();
        queue.pop_back();
        ++presentations;
        auto it = seen.find(p.coroot);
        if (it != seen.end()) {
            if (it->second.ell != p.ell || it->second.root != p.root) consistent = false;
            continue;
        }
        seen.emplace(p.coroot, p);
        for (std::size_t j = 0; j < n; ++j)
            queue.push_back({reflect_coroot(D, j, p.coroot), reflect_root(D, j, p.root), p.ell});
    }
    std::vector<RootPair> pos;
    for (auto& [k, p] : seen)
        if (is_nonnegative(p.coroot)) {
            if (!is_nonnegative(p.root)) consistent = false;
            pos.push_back(p);
        }
    std::sort(pos.begin(), pos.end(), [](const RootPair& a, const RootPair& b) {
        if (height(a.coroot) != height(b.coroot)) return height(a.coroot) < height(b.coroot);
        return a.coroot > b.coroot;
    });
    return pos;
}

inline LatticeData compute_lattices(const RatMatrix& form, long ell) {
    const std::size_t n = form.size();
    // Y_ell = { q in Z^n : F q in ell Z^n }.  With F = Fn/den: Fn q = 0 mod ell*den.
    std::vector<Rational> all;
    for (const auto& row : form) all.insert(all.end(), row.begin(), row.end());
    Integer den = lcm_of_denominators(all);
    IntMatrix Fn(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rational s = form[i][j] * den;
            Fn[i].push_back(s.get_num());
        }
    const Integer m = den * ell;
    SmithForm snf = smith_normal_form(Fn);
    // P Fn Q = S; q = Q r with s_k r_k = 0 mod m
    IntMatrix basis(n, std::vector<Integer>(n, 0));
    for (std::size_t k = 0; k < n; ++k) {
        Integer s = k < snf.diag.size() && k < snf.diag[k].size() ? snf.diag[k][k] : Integer(0);
        Integer step;
        if (s == 0) {
            step = 1;
        } else {
            Integer g;
            mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), s.get_mpz_t());
            step = m / g;
        }
        for (std::size_t r = 0; r < n; ++r) basis[r][k] = snf.Q[r][k] * step;
    }
    LatticeData out;
    out.y_ell_basis = to_rational(column_hermite_form(std::move(basis)));
    // X_ell = ell (B^T F)^{-1} Z^n
    RatMatrix BtF = rat_mul(rat_transpose(out.y_ell_basis), form);
    RatMatrix C = rat_inverse(BtF);
    for (auto& row : C)
        for (auto& q : row) q *= ell;
    out.x_ell_basis = column_hermite_form(C);
    Rational detB = abs(rat_det(out.y_ell_basis));
    Rational detC = abs(rat_det(out.x_ell_basis));
    out.dd_X = detB.get_num();
    Rational ratio = detB / detC;
    out.dd_Xell = ratio.get_num();
    if (!is_integer(ratio)) throw std::logic_error("X_ell does not contain Y_ell with finite index");
    return out;
}

}  // namespace detail

/// Builds the full context; throws PreconditionError if the ell_i assumptions fail.
inline CartanContext build_context(const CartanDatum& datum, long l) {
    if (l <= 1) throw PreconditionError("l must be > 1");
    CartanContext ctx;
    const std::size_t n = datum.rank();
    ctx.datum = datum;
    ctx.warnings = datum.warnings;
    ctx.l = l;
    ctx.ell = l % 2 == 0 ? l / 2 : l;
    for (std::size_t i = 0; i < n; ++i) ctx.ell_i.push_back(ctx.ell / std::gcd(ctx.ell, datum.d_i[i]));
    for (std::size_t i = 0; i < n; ++i) {
        if (ctx.ell_i[i] <= 1) throw PreconditionError("assumption ell_i > 1 fails for index " + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && ctx.ell_i[i] <= -datum.cartan[i][j] + 1)
                throw PreconditionError("assumption ell_i > -<i,j'> + 1 fails for (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
        if (ctx.ell_i[i] <= 3) ctx.warnings.push_back("ell_" + std::to_string(i) + " <= 3");
    }
    ctx.fine_field = Field(2 * datum.delta * l);
    ctx.zeta_field = Field(l);

    RatMatrix G(n), D(n, std::vector<Rational>(n, 0)), C(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            G[i].emplace_back(datum.form[i][j]);
            C[i].emplace_back(datum.cartan[i][j]);
        }
        D[i][i] = datum.d_i[i];
    }
    // omega_i . omega_j = (D G^{-1} D)_{ij}
    ctx.weight_form_ = rat_mul(rat_mul(D, rat_inverse(G)), D);
    ctx.cartan_inverse_ = rat_inverse(C);

    ctx.positive = detail::positive_root_pairs(datum, ctx.ell, ctx.ell_beta_consistent, ctx.presentations_seen);
    ctx.rho = Weight::zero(n);
    ctx.rho_ell = Weight::zero(n);
    for (std::size_t i = 0; i < n; ++i) {
        ctx.rho.c[i] = 1;
        ctx.rho_ell.c[i] = ctx.ell_i[i] - 1;
    }
    ctx.gamma0 = ctx.positive.back().coroot;
    for (const auto& p : ctx.positive)
        if (height(p.coroot) > height(ctx.gamma0)) ctx.gamma0 = p.coroot;
    const RootPair* highest_root = &ctx.positive.front();
    for (const auto& p : ctx.positive)
        if (height(p.root) > height(highest_root->root)) highest_root = &p;
    ctx.beta0 = highest_root->coroot;
    ctx.h = 1 + to_long(ctx.pair(ctx.beta0, ctx.rho));
    ctx.dim_g = static_cast<long>(n + 2 * ctx.positive.size());

    ctx.lattices = detail::compute_lattices(ctx.weight_form_, ctx.ell);
    ctx.y_ell_inverse_ = rat_inverse(ctx.lattices.y_ell_basis);
    return ctx;
}

inline CartanContext build_context(const std::vector<std::vector<long>>& matrix, long l) {
    return build_context(validate_cartan(matrix), l);
}

/// 1/2 sum of positive roots.
inline Weight rho_half_sum(const CartanContext& ctx) {
    Weight s = Weight::zero(ctx.rank());
    for (const auto& p : ctx.positive) s += ctx.root_weight(p);
    return Rational(1, 2) * s;
}

/// 1/2 sum (ell_alpha - 1) alpha over positive roots.
inline Weight rho_ell_half_sum(const CartanContext& ctx) {
    Weight s = Weight::zero(ctx.rank());
    for (const auto& p : ctx.positive) s += Rational(p.ell - 1) * ctx.root_weight(p);
    return Rational(1, 2) * s;
}

inline const LatticeData& lattices(const CartanContext& ctx) { return ctx.lattices; }

/// The first alcove, sorted lexicographically.
inline std::vector<Weight> alcove(const CartanContext& ctx) {
    const std::size_t n = ctx.rank();
    bool all_equal = std::all_of(ctx.ell_i.begin(), ctx.ell_i.end(), [&](long e) { return e == ctx.ell; });
    Coweight bound_vec;
    long limit;
    if (all_equal) {
        bound_vec = ctx.gamma0;
        limit = ctx.ell;
    } else {
        bound_vec = ctx.beta0;
        limit = 0;
        for (const auto& p : ctx.positive)
            if (p.coroot == ctx.beta0) limit = p.ell;
    }
    std::vector<Weight> out;
    std::vector<long> q(n, 0);
    // sum_i b_i (q_i + 1) < limit, q_i >= 0
    auto rec = [&](auto&& self, std::size_t i, long used) -> void {
        if (i == n) {
            if (used < limit) out.push_back(Weight::from_ints(q));
            return;
        }
        for (long v = 0;; ++v) {
            long u = used + bound_vec[i] * (v + 1);
            if (u >= limit) break;
            q[i] = v;
            self(self, i + 1, u);
        }
        q[i] = 0;
    };
    rec(rec, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

/// n(lambda) = 1/2 lambda.lambda - lambda.rho_ell for lambda in X_ell.
inline Rational n_function(const CartanContext& ctx, const Weight& w) {
    if (!ctx.in_X_ell(w)) throw PreconditionError("weight " + to_string(w) + " is not in X_ell");
    return Rational(1, 2) * ctx.dot(w, w) - ctx.dot(w, ctx.rho_ell);
}

/// dd_ell^g with dd_ell = card(X_ell / Y_ell).
inline Integer heisenberg_rank(const CartanContext& ctx, unsigned long g) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), ctx.lattices.dd_Xell.get_mpz_t(), g);
    return r;
}

}  // namespace qgroot
