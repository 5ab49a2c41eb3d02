#pragma once

// Objects of C as X_ell-graded spaces with theta_i / epsilon_i matrices:
// baby Verma modules, the contravariant form, simple quotients, tensor
// products, the two duals, and the trivial isotypic part.

#include "shuffle.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qgroot {

using Character = std::map<Weight, long>;

/// Left modules are u-modules; a right module stores operators that compose in reverse
/// (the check dual, whose actions are plain transposes).
enum class Side { Left, Right };

class WeightModule {
public:
    WeightModule(const CartanContext& ctx, Side side = Side::Left)
        : ctx_(&ctx), side(side), theta(ctx.rank()), epsilon(ctx.rank()) {}

    const CartanContext& ctx() const { return *ctx_; }
    const Field& field() const { return ctx_->zeta_field; }

    Side side;
    std::map<Weight, std::size_t> dims;  // nonzero weight spaces only
    std::vector<std::map<Weight, CycloMatrix>> theta;    // [i][lambda] : M_lambda -> M_{lambda - i'}
    std::vector<std::map<Weight, CycloMatrix>> epsilon;  // [i][lambda] : M_lambda -> M_{lambda + i'}
    std::optional<Weight> highest;

    std::size_t dim(const Weight& w) const {
        auto it = dims.find(w);
        return it == dims.end() ? 0 : it->second;
    }
    std::size_t total_dim() const {
        std::size_t s = 0;
        for (const auto& [w, d] : dims) s += d;
        return s;
    }
    Character character() const {
        Character ch;
        for (const auto& [w, d] : dims) ch[w] = static_cast<long>(d);
        return ch;
    }

    /// theta_i on M_lambda as a dense matrix (zero if not stored).
    CycloMatrix theta_at(std::size_t i, const Weight& w) const {
        return lookup(theta[i], w, w - ctx_->simple_root(i));
    }
    CycloMatrix epsilon_at(std::size_t i, const Weight& w) const {
        return lookup(epsilon[i], w, w + ctx_->simple_root(i));
    }

private:
    CycloMatrix lookup(const std::map<Weight, CycloMatrix>& m, const Weight& src, const Weight& dst) const {
        auto it = m.find(src);
        if (it != m.end()) return it->second;
        return CycloMatrix(field(), dim(dst), dim(src));
    }

    const CartanContext* ctx_;
};

inline Character convolve(const Character& a, const Character& b) {
    Character c;
    for (const auto& [x, m] : a)
        for (const auto& [y, n] : b) c[x + y] += m * n;
    return c;
}

/// [a]_i with a = <i, lambda>, written as 1 - zeta^{-2 i'.lambda}.
inline CycloElem quantum_bracket(const CartanContext& ctx, std::size_t i, const Weight& w) {
    return ctx.zeta_field.one() - ctx.zeta(-2 * to_long(ctx.iprime_dot(i, w)));
}

inline long iprime_exponent(const CartanContext& ctx, std::size_t i, const Weight& w) {
    return to_long(ctx.iprime_dot(i, w));
}

// ---------------------------------------------------------------------------
// Relation checks

struct RelationReport {
    bool ok = true;
    std::vector<std::string> failures;
    void fail(std::string msg) {
        ok = false;
        if (failures.size() < 20) failures.push_back(std::move(msg));
    }
};

/// Relation (a): eps_i theta_j - zeta^{i.j} theta_j eps_i = delta_ij [<i, lambda>]_i on every M_lambda.
/// For right modules the composite reads theta_j eps_i - zeta^{i.j} eps_i theta_j and the
/// scalar is [<i, -lambda>]_i, which is the transpose of the left identity on M_{-lambda}.
inline RelationReport check_relation_a(const WeightModule& M) {
    const CartanContext& ctx = M.ctx();
    RelationReport rep;
    for (const auto& [w, d] : M.dims)
        for (std::size_t i = 0; i < ctx.rank(); ++i)
            for (std::size_t j = 0; j < ctx.rank(); ++j) {
                const CycloElem z = ctx.zeta(ctx.simple_dot(i, j));
                CycloMatrix lhs(M.field(), 0, 0);
                if (M.side == Side::Left) {
                    const Weight down = w - ctx.simple_root(j), up = w + ctx.simple_root(i);
                    lhs = M.epsilon_at(i, down) * M.theta_at(j, w) - z * (M.theta_at(j, up) * M.epsilon_at(i, w));
                } else {
                    const Weight up = w + ctx.simple_root(i), down = w - ctx.simple_root(j);
                    lhs = M.theta_at(j, up) * M.epsilon_at(i, w) - z * (M.epsilon_at(i, down) * M.theta_at(j, w));
                }
                CycloMatrix rhs(M.field(), M.dim(w - ctx.simple_root(j) + ctx.simple_root(i)), d);
                if (i == j) {
                    CycloElem s = quantum_bracket(ctx, i, M.side == Side::Left ? w : -w);
                    for (std::size_t k = 0; k < d; ++k) rhs(k, k) = s;
                }
                if (!(lhs == rhs))
                    rep.fail("relation (a) fails at weight " + to_string(w) + " for (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
            }
    return rep;
}

namespace detail {

// Operator of a word on M_src, evaluated in theta (down) or epsilon (up); memoized by suffix.
class WordEvaluator {
public:
    WordEvaluator(const WeightModule& M, bool use_theta) : M_(M), theta_(use_theta) {}

    CycloMatrix eval(const Word& w, const Weight& src) {
        auto key = std::make_pair(w, src);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const CartanContext& ctx = M_.ctx();
        CycloMatrix out(M_.field(), 0, 0);
        if (w.empty()) {
            out = CycloMatrix::identity(M_.field(), M_.dim(src));
        } else if (M_.side == Side::Left) {
            // theta_{w0} (theta_{w1} ... ) : apply the tail first
            Word tail(w.begin() + 1, w.end());
            Weight mid = shift(tail, src);
            out = op(static_cast<std::size_t>(w[0]), mid) * eval(tail, src);
        } else {
            // right action: v . w0 . w1 ... applies w0 first
            Word tail(w.begin() + 1, w.end());
            const auto i = static_cast<std::size_t>(w[0]);
            Weight mid = theta_ ? src - ctx.simple_root(i) : src + ctx.simple_root(i);
            out = eval(tail, mid) * op(i, src);
        }
        memo_.emplace(std::move(key), out);
        return out;
    }

    Weight shift(const Word& w, const Weight& src) const {
        Weight s = M_.ctx().embed(word_weight(w, M_.ctx().rank()));
        return theta_ ? src - s : src + s;
    }

private:
    CycloMatrix op(std::size_t i, const Weight& src) const {
        return theta_ ? M_.theta_at(i, src) : M_.epsilon_at(i, src);
    }

    const WeightModule& M_;
    bool theta_;
    std::map<std::pair<Word, Weight>, CycloMatrix> memo_;
};

}  // namespace detail

/// Relation (b), made finite: for every nu that occurs as a difference of two weights of M,
/// the generators of rad_nu modulo theta_i rad_{nu-i} must act as zero in the thetas and in
/// the epsilons. By induction on nu this covers the whole radical.
inline RelationReport check_relation_b(const WeightModule& M, const UMinus& u) {
    const CartanContext& ctx = M.ctx();
    RelationReport rep;
    std::set<Coweight> diffs;
    for (const auto& [a, da] : M.dims)
        for (const auto& [b, db] : M.dims) {
            auto nu = ctx.as_coweight(a - b);
            if (nu && is_nonnegative(*nu) && height(*nu) > 0) diffs.insert(*nu);
        }
    detail::WordEvaluator down(M, true), up(M, false);
    for (const auto& nu : diffs) {
        auto gens = u.radical_generators(nu);
        if (gens.kernel.empty()) continue;
        std::vector<Word> words;
        for (const auto& [i, b] : gens.candidates) {
            Word w{i};
            const auto& tail = u.piece(nu - simple_coweight(ctx.rank(), static_cast<std::size_t>(i)))->basis[b];
            w.insert(w.end(), tail.begin(), tail.end());
            words.push_back(std::move(w));
        }
        const Weight shift = ctx.embed(nu);
        for (const auto& [src, d] : M.dims) {
            for (int pass = 0; pass < 2; ++pass) {
                const bool th = pass == 0;
                const Weight dst = th ? src - shift : src + shift;
                if (M.dim(dst) == 0) continue;
                auto& ev = th ? down : up;
                std::vector<CycloMatrix> ops;
                for (const auto& w : words) ops.push_back(ev.eval(w, src));
                for (const auto& k : gens.kernel) {
                    CycloMatrix acc(M.field(), M.dim(dst), d);
                    for (std::size_t c = 0; c < k.size(); ++c)
                        if (!k[c].is_zero()) acc += ops[c] * k[c];
                    if (!acc.is_zero()) rep.fail(std::string("relation (b) fails in the ") + (th ? "thetas" : "epsilons") +
                                                " at weight " + to_string(src));
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Verma and simple modules

inline void require_x_ell(const CartanContext& ctx, const Weight& w) {
    if (w.size() != ctx.rank()) throw PreconditionError("weight has the wrong number of coordinates");
    if (!ctx.in_X_ell(w)) throw PreconditionError("weight " + to_string(w) + " is not in X_ell");
}

namespace detail {

inline std::vector<Coweight> pieces_by_height(const UMinus& u) {
    std::vector<Coweight> order;
    for (const auto& [nu, p] : u.pieces()) order.push_back(nu);
    std::stable_sort(order.begin(), order.end(),
                     [](const Coweight& a, const Coweight& b) { return height(a) < height(b); });
    return order;
}

}  // namespace detail

/// M(lambda) = u^- (x) v_lambda.
inline WeightModule verma(const CartanContext& ctx, const UMinus& u, const Weight& lambda) {
    require_x_ell(ctx, lambda);
    const std::size_t n = ctx.rank();
    const Field& f = ctx.zeta_field;
    WeightModule M(ctx);
    M.highest = lambda;
    auto wt = [&](const Coweight& nu) { return lambda - ctx.embed(nu); };
    // eps[i][nu] : f_nu -> f_{nu-i}
    std::vector<std::map<Coweight, CycloMatrix>> eps(n);
    for (const auto& nu : detail::pieces_by_height(u)) {
        const UPiece& p = *u.piece(nu);
        M.dims[wt(nu)] = p.dim();
        for (std::size_t i = 0; i < n; ++i) {
            if (auto up = u.piece(nu + simple_coweight(n, i))) M.theta[i].emplace(wt(nu), up->left.at(static_cast<int>(i)));
            if (nu[i] == 0) continue;
            const Coweight nu_i = nu - simple_coweight(n, i);
            const UPiece* q = u.piece(nu_i);
            if (!q) continue;
            CycloMatrix E(f, q->dim(), p.dim());
            for (std::size_t col = 0; col < p.dim(); ++col) {
                const auto [j, b] = p.basis_split[col];
                const auto uj = static_cast<std::size_t>(j);
                const Coweight nu_j = nu - simple_coweight(n, uj);
                if (uj == i) E(b, col) += quantum_bracket(ctx, i, wt(nu_j));
                auto it = eps[i].find(nu_j);
                if (it == eps[i].end()) continue;
                CycloMatrix v = q->left.at(j) * it->second.column(b);
                const CycloElem z = ctx.zeta(ctx.simple_dot(i, uj));
                for (std::size_t r = 0; r < q->dim(); ++r) E(r, col) += z * v(r, 0);
            }
            eps[i].emplace(nu, E);
            M.epsilon[i].emplace(wt(nu), std::move(E));
        }
    }
    return M;
}

/// Contravariant form on M(lambda): (x v, y v) = coefficient of v in tau(x) y v, keyed by weight.
inline std::map<Weight, CycloMatrix> contravariant_gram(const CartanContext& ctx, const UMinus& u,
                                                        const WeightModule& M) {
    if (!M.highest) throw PreconditionError("contravariant form needs a highest weight module");
    const Weight lambda = *M.highest;
    const std::size_t n = ctx.rank();
    std::map<Coweight, CycloMatrix> by_nu;
    std::map<Weight, CycloMatrix> out;
    for (const auto& nu : detail::pieces_by_height(u)) {
        const UPiece& p = *u.piece(nu);
        const Weight w = lambda - ctx.embed(nu);
        CycloMatrix G(ctx.zeta_field, p.dim(), p.dim());
        if (height(nu) == 0) {
            G(0, 0) = ctx.zeta_field.one();
        } else {
            for (std::size_t row = 0; row < p.dim(); ++row) {
                const auto [a, b] = p.basis_split[row];
                const Coweight sub = nu - simple_coweight(n, static_cast<std::size_t>(a));
                CycloMatrix r = by_nu.at(sub).submatrix_rows({b}) * M.epsilon_at(static_cast<std::size_t>(a), w);
                for (std::size_t c = 0; c < p.dim(); ++c) G(row, c) = r(0, c);
            }
        }
        by_nu.emplace(nu, G);
        out.emplace(w, std::move(G));
    }
    return out;
}

/// (theta_i u, v) = (u, eps_i v), i.e. theta_i^T G_{mu - i'} = G_mu eps_i.
inline RelationReport check_contravariance(const WeightModule& M, const std::map<Weight, CycloMatrix>& gram) {
    const CartanContext& ctx = M.ctx();
    RelationReport rep;
    for (const auto& [w, G] : gram) {
        if (!(G == G.transpose())) rep.fail("contravariant form is not symmetric at " + to_string(w));
        for (std::size_t i = 0; i < ctx.rank(); ++i) {
            const Weight down = w - ctx.simple_root(i);
            auto it = gram.find(down);
            if (it == gram.end()) continue;
            if (!(M.theta_at(i, w).transpose() * it->second == G * M.epsilon_at(i, down)))
                rep.fail("contravariance fails at " + to_string(w));
        }
    }
    return rep;
}

/// Quotient of a module by a graded submodule given as per-weight kernels of a form.
inline WeightModule quotient_by_radical(const WeightModule& M, const std::map<Weight, CycloMatrix>& gram) {
    const CartanContext& ctx = M.ctx();
    WeightModule L(ctx, M.side);
    L.highest = M.highest;
    std::map<Weight, CycloMatrix> proj, incl;
    for (const auto& [w, G] : gram) {
        RowEchelon e = row_reduce(G);
        const std::size_t r = e.pivots.size();
        if (r == 0) continue;
        std::vector<std::size_t> rows(r);
        for (std::size_t k = 0; k < r; ++k) rows[k] = k;
        proj.emplace(w, e.reduced.submatrix_rows(rows));
        CycloMatrix I(M.field(), G.cols(), r);
        for (std::size_t k = 0; k < r; ++k) I(e.pivots[k], k) = M.field().one();
        incl.emplace(w, std::move(I));
        L.dims[w] = r;
    }
    for (std::size_t i = 0; i < ctx.rank(); ++i)
        for (const auto& [w, d] : L.dims) {
            auto put = [&](std::map<Weight, CycloMatrix>& dst, const std::map<Weight, CycloMatrix>& src, const Weight& to) {
                auto pt = proj.find(to);
                auto s = src.find(w);
                if (pt == proj.end() || s == src.end()) return;
                CycloMatrix m = pt->second * s->second * incl.at(w);
                if (!m.is_zero()) dst.emplace(w, std::move(m));
            };
            put(L.theta[i], M.theta[i], w - ctx.simple_root(i));
            put(L.epsilon[i], M.epsilon[i], w + ctx.simple_root(i));
        }
    return L;
}

struct SimpleModule {
    WeightModule module;
    Character character;
};

inline SimpleModule simple(const CartanContext& ctx, const UMinus& u, const Weight& lambda) {
    WeightModule M = verma(ctx, u, lambda);
    WeightModule L = quotient_by_radical(M, contravariant_gram(ctx, u, M));
    Character ch = L.character();
    return {std::move(L), std::move(ch)};
}

/// No singular vectors below the top: the joint kernel of all eps_i vanishes on every
/// weight space other than the highest one.
inline bool irreducibility_certificate(const WeightModule& L) {
    const CartanContext& ctx = L.ctx();
    for (const auto& [w, d] : L.dims) {
        if (L.highest && w == *L.highest) continue;
        CycloMatrix stack(L.field(), 0, d);
        for (std::size_t i = 0; i < ctx.rank(); ++i) stack = stack.vconcat(L.epsilon_at(i, w));
        if (rank(stack) != d) return false;
    }
    if (L.highest && L.dim(*L.highest) != 1) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Tensor products and duals

/// Delta(theta_i) = theta_i (x) 1 + K~_i^{-1} (x) theta_i, and the same for eps_i.
inline WeightModule tensor(const WeightModule& M, const WeightModule& N) {
    if (M.side != Side::Left || N.side != Side::Left) throw PreconditionError("tensor product of left modules only");
    const CartanContext& ctx = M.ctx();
    const Field& f = M.field();
    WeightModule T(ctx);
    struct Block {
        Weight a, b;
        std::size_t offset;
    };
    std::map<Weight, std::vector<Block>> blocks;
    for (const auto& [a, da] : M.dims)
        for (const auto& [b, db] : N.dims) {
            auto& v = blocks[a + b];
            v.push_back({a, b, T.dims[a + b]});
            T.dims[a + b] += da * db;
        }
    auto block_offset = [&](const Weight& a, const Weight& b) -> std::optional<std::size_t> {
        auto it = blocks.find(a + b);
        if (it == blocks.end()) return std::nullopt;
        for (const auto& bl : it->second)
            if (bl.a == a) return bl.offset;
        return std::nullopt;
    };
    for (std::size_t i = 0; i < ctx.rank(); ++i) {
        const Weight ri = ctx.simple_root(i);
        for (int pass = 0; pass < 2; ++pass) {
            const bool th = pass == 0;
            auto& dst = th ? T.theta[i] : T.epsilon[i];
            for (const auto& [w, blist] : blocks) {
                const Weight target = th ? w - ri : w + ri;
                if (T.dim(target) == 0) continue;
                CycloMatrix m(f, T.dim(target), T.dim(w));
                for (const auto& bl : blist) {
                    const std::size_t db = N.dim(bl.b);
                    // first leg
                    const Weight a2 = th ? bl.a - ri : bl.a + ri;
                    if (auto off = block_offset(a2, bl.b); off && M.dim(a2) > 0) {
                        CycloMatrix A = th ? M.theta_at(i, bl.a) : M.epsilon_at(i, bl.a);
                        for (std::size_t r = 0; r < A.rows(); ++r)
                            for (std::size_t c = 0; c < A.cols(); ++c) {
                                if (A(r, c).is_zero()) continue;
                                for (std::size_t y = 0; y < db; ++y) m(*off + r * db + y, bl.offset + c * db + y) += A(r, c);
                            }
                    }
                    // second leg with K~_i^{-1} on the first factor
                    const Weight b2 = th ? bl.b - ri : bl.b + ri;
                    if (auto off = block_offset(bl.a, b2); off && N.dim(b2) > 0) {
                        CycloMatrix B = th ? N.theta_at(i, bl.b) : N.epsilon_at(i, bl.b);
                        const CycloElem k = ctx.zeta(-iprime_exponent(ctx, i, bl.a));
                        const std::size_t db2 = N.dim(b2);
                        for (std::size_t x = 0; x < M.dim(bl.a); ++x)
                            for (std::size_t r = 0; r < B.rows(); ++r)
                                for (std::size_t c = 0; c < B.cols(); ++c)
                                    if (!B(r, c).is_zero()) m(*off + x * db2 + r, bl.offset + x * db + c) += k * B(r, c);
                    }
                }
                if (!m.is_zero()) dst.emplace(w, std::move(m));
            }
        }
    }
    return T;
}

enum class DualVariant { Check, Star };

/// check: (M^v)_lambda = (M_{-lambda})^*, actions by transpose (a right module).
/// star: f -> f o A(x) with A(theta_i) = -theta_i K~_i, A(eps_i) = -eps_i K~_i (a left module).
inline WeightModule dual(const WeightModule& M, DualVariant variant) {
    if (M.side != Side::Left) throw PreconditionError("dual of a left module only");
    const CartanContext& ctx = M.ctx();
    WeightModule D(ctx, variant == DualVariant::Check ? Side::Right : Side::Left);
    for (const auto& [w, d] : M.dims) D.dims[-w] = d;
    for (std::size_t i = 0; i < ctx.rank(); ++i) {
        const Weight ri = ctx.simple_root(i);
        for (const auto& [s, m] : M.theta[i]) {
            CycloMatrix t = m.transpose();
            if (variant == DualVariant::Star) t = t * -ctx.zeta(iprime_exponent(ctx, i, s));
            D.theta[i].emplace(ri - s, std::move(t));
        }
        for (const auto& [s, m] : M.epsilon[i]) {
            CycloMatrix t = m.transpose();
            if (variant == DualVariant::Star) t = t * -ctx.zeta(iprime_exponent(ctx, i, s));
            D.epsilon[i].emplace(-s - ri, std::move(t));
        }
    }
    return D;
}

// ---------------------------------------------------------------------------
// Trivial isotypic part and blocks

struct TrivialIsotypic {
    std::size_t inv_dim = 0;
    std::size_t coinv_dim = 0;
    std::size_t mts_dim = 0;
    std::vector<std::vector<CycloElem>> inv_basis;
};

inline TrivialIsotypic trivial_isotypic(const WeightModule& M) {
    if (M.side != Side::Left) throw PreconditionError("trivial isotypic part of a left module only");
    const CartanContext& ctx = M.ctx();
    const Weight zero = Weight::zero(ctx.rank());
    const std::size_t d = M.dim(zero);
    TrivialIsotypic out;
    if (d == 0) return out;
    CycloMatrix stack(M.field(), 0, d);
    CycloMatrix W(M.field(), d, 0);
    for (std::size_t i = 0; i < ctx.rank(); ++i) {
        const Weight ri = ctx.simple_root(i);
        stack = stack.vconcat(M.theta_at(i, zero)).vconcat(M.epsilon_at(i, zero));
        W = W.hconcat(M.theta_at(i, ri)).hconcat(M.epsilon_at(i, -ri));
    }
    RankNullspace rn = rank_nullspace(stack);
    out.inv_basis = rn.nullspace;
    out.inv_dim = rn.nullspace.size();
    const std::size_t rw = rank(W);
    out.coinv_dim = d - rw;
    if (out.inv_dim > 0) {
        CycloMatrix both = W.hconcat(column_matrix(M.field(), out.inv_basis, d));
        out.mts_dim = rank(both) - rw;
    }
    return out;
}

/// <L(l_1), ..., L(l_n)> = dim of the maximal trivial summand of the left-associated product.
inline std::size_t conformal_block_dim(const CartanContext& ctx, const UMinus& u, const std::vector<Weight>& lambdas,
                                       std::vector<std::string>* warnings = nullptr) {
    if (lambdas.empty()) throw PreconditionError("conformal_block_dim: empty weight list");
    const auto alc = alcove(ctx);
    std::map<Weight, WeightModule> simples;
    std::optional<WeightModule> T;
    for (const auto& w : lambdas) {
        if (warnings && std::find(alc.begin(), alc.end(), w) == alc.end())
            warnings->push_back("weight " + to_string(w) + " is outside the first alcove");
        auto it = simples.find(w);
        if (it == simples.end()) it = simples.emplace(w, simple(ctx, u, w).module).first;
        T = T ? tensor(*T, it->second) : it->second;
    }
    return trivial_isotypic(*T).mts_dim;
}

/// Lusztig's generators: E_i = zeta_i/(1 - zeta_i^{-2}) eps_i K~_i, F_i = theta_i, K_i = zeta^{<i,lambda>}.
struct LusztigView {
    std::vector<std::map<Weight, CycloMatrix>> E, F;
    std::vector<std::map<Weight, CycloElem>> K;
};

inline LusztigView lusztig_view(const WeightModule& M) {
    const CartanContext& ctx = M.ctx();
    LusztigView v;
    v.F = M.theta;
    v.E.resize(ctx.rank());
    v.K.resize(ctx.rank());
    for (std::size_t i = 0; i < ctx.rank(); ++i) {
        const long di = ctx.datum.d_i[i];
        const CycloElem c = ctx.zeta(di) / (ctx.zeta_field.one() - ctx.zeta(-2 * di));
        for (const auto& [w, m] : M.epsilon[i]) v.E[i].emplace(w, m * (c * ctx.zeta(iprime_exponent(ctx, i, w))));
        for (const auto& [w, d] : M.dims) {
            if (!is_integer(w.c[i])) throw PreconditionError("K_i needs an integral pairing <i, lambda>");
            v.K[i].emplace(w, ctx.zeta(to_long(w.c[i])));
        }
    }
    return v;
}

}  // namespace qgroot
