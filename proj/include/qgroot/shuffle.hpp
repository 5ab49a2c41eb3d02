#pragma once

// The free algebra 'f on theta_i, its twisted coproduct r, the symmetric
// bilinear form (.,.) and the finite quotient f = 'f / radical (= u^-).
//
// Everything here lives in Q(zeta) with zeta of order l: all exponents are
// products i.j of coroots, hence integers.

#include "cartan.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace qgroot {

using Word = std::vector<int>;

inline Coweight word_weight(const Word& w, std::size_t rank) {
    Coweight v(rank, 0);
    for (int i : w) ++v[static_cast<std::size_t>(i)];
    return v;
}

/// All words of weight nu, lexicographically ordered.
inline std::vector<Word> words_of_weight(const Coweight& nu) {
    Word w;
    for (std::size_t i = 0; i < nu.size(); ++i)
        for (long k = 0; k < nu[i]; ++k) w.push_back(static_cast<int>(i));
    std::vector<Word> out;
    do {
        out.push_back(w);
    } while (std::next_permutation(w.begin(), w.end()));
    return out;
}

/// A finite linear combination of words.
class FreeAlgElem {
public:
    explicit FreeAlgElem(Field f) : field_(std::move(f)) {}
    static FreeAlgElem word(const Field& f, Word w) {
        FreeAlgElem x(f);
        x.add(std::move(w), f.one());
        return x;
    }

    void add(Word w, const CycloElem& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(std::move(w), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    const std::map<Word, CycloElem>& terms() const { return terms_; }
    const Field& field() const { return field_; }
    bool is_zero() const { return terms_.empty(); }

    friend FreeAlgElem operator*(const FreeAlgElem& a, const FreeAlgElem& b) {
        FreeAlgElem p(a.field_);
        for (const auto& [u, x] : a.terms_)
            for (const auto& [v, y] : b.terms_) {
                Word w = u;
                w.insert(w.end(), v.begin(), v.end());
                p.add(std::move(w), x * y);
            }
        return p;
    }
    friend FreeAlgElem operator+(FreeAlgElem a, const FreeAlgElem& b) {
        for (const auto& [w, c] : b.terms_) a.add(w, c);
        return a;
    }

private:
    Field field_;
    std::map<Word, CycloElem> terms_;
};

/// An element of 'f (x) 'f.
using TensorElem = std::map<std::pair<Word, Word>, CycloElem>;

/// r(x): each word splits into a left and a right subword; the twist picks up
/// zeta^{x_q . x_p} for every right letter q preceding a left letter p.
inline TensorElem coproduct_r(const CartanContext& ctx, const FreeAlgElem& x) {
    TensorElem out;
    for (const auto& [w, c] : x.terms()) {
        const std::size_t a = w.size();
        for (unsigned long mask = 0; mask < (1UL << a); ++mask) {  // bit set: letter goes left
            Word left, right;
            long e = 0;
            Coweight right_wt(ctx.rank(), 0);
            for (std::size_t p = 0; p < a; ++p) {
                const auto letter = static_cast<std::size_t>(w[p]);
                if (mask >> p & 1UL) {
                    for (std::size_t k = 0; k < ctx.rank(); ++k) e += right_wt[k] * ctx.simple_dot(k, letter);
                    left.push_back(w[p]);
                } else {
                    ++right_wt[letter];
                    right.push_back(w[p]);
                }
            }
            auto key = std::make_pair(std::move(left), std::move(right));
            CycloElem term = c * ctx.zeta(e);
            auto it = out.find(key);
            if (it == out.end())
                out.emplace(std::move(key), term);
            else
                it->second += term;
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

/// The bilinear form, by recursion on the last letter of the second argument:
/// (x, y theta_j) = sum_{p : x_p = j} zeta^{j . wt(x_{>p})} (x \ p, y).
class ShuffleForm {
public:
    explicit ShuffleForm(const CartanContext& ctx) : ctx_(&ctx) {}

    CycloElem operator()(const Word& x, const Word& y) const {
        const Field& f = ctx_->zeta_field;
        if (x.size() != y.size()) return f.zero();
        if (x.empty()) return f.one();
        if (word_weight(x, ctx_->rank()) != word_weight(y, ctx_->rank())) return f.zero();
        auto key = std::make_pair(x, y);
        {
            std::lock_guard lock(mu_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        const int j = y.back();
        Word y0(y.begin(), y.end() - 1);
        CycloElem total = f.zero();
        long tail = 0;  // j . wt(x_{>p})
        for (std::size_t p = x.size(); p-- > 0;) {
            if (x[p] == j) {
                Word x0 = x;
                x0.erase(x0.begin() + static_cast<std::ptrdiff_t>(p));
                CycloElem v = (*this)(x0, y0);
                if (!v.is_zero()) total += ctx_->zeta(tail) * v;
            }
            tail += ctx_->simple_dot(static_cast<std::size_t>(j), static_cast<std::size_t>(x[p]));
        }
        std::lock_guard lock(mu_);
        memo_.emplace(std::move(key), total);
        return total;
    }

    CycloElem operator()(const FreeAlgElem& x, const FreeAlgElem& y) const {
        CycloElem s = ctx_->zeta_field.zero();
        for (const auto& [u, a] : x.terms())
            for (const auto& [v, b] : y.terms()) {
                CycloElem p = (*this)(u, v);
                if (!p.is_zero()) s += a * b * p;
            }
        return s;
    }

private:
    const CartanContext* ctx_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<Word, Word>, CycloElem> memo_;
};

/// Full-word Gram data at one weight.
struct GramData {
    Coweight weight;
    std::vector<Word> word_basis;
    CycloMatrix gram;
    std::size_t rank = 0;
    std::vector<std::vector<CycloElem>> radical_basis;
    std::vector<Word> quotient_words;
};

/// Brute-force Gram matrix over every word of weight nu.
inline GramData gram_radical(const CartanContext& ctx, const Coweight& nu, const ShuffleForm& form) {
    if (!is_nonnegative(nu)) throw PreconditionError("gram_radical: weight is not in Y+");
    GramData g{nu, words_of_weight(nu), CycloMatrix(ctx.zeta_field, 0, 0), 0, {}, {}};
    const std::size_t n = g.word_basis.size();
    g.gram = CycloMatrix(ctx.zeta_field, n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) g.gram(a, b) = form(g.word_basis[a], g.word_basis[b]);
    RankNullspace rn = rank_nullspace(g.gram);
    g.rank = rn.rank;
    g.radical_basis = std::move(rn.nullspace);
    for (auto p : rn.pivots) g.quotient_words.push_back(g.word_basis[p]);
    return g;
}

inline GramData gram_radical(const CartanContext& ctx, const Coweight& nu) {
    ShuffleForm form(ctx);
    return gram_radical(ctx, nu, form);
}

/// One graded piece f_nu of the quotient, with the structure maps needed downstream.
struct UPiece {
    Coweight weight;
    std::vector<Word> basis;  // representative words; basis[k] = letter(k) . (basis word of nu - letter)
    std::vector<std::pair<int, std::size_t>> basis_split;  // (first letter, index in piece nu - letter)
    CycloMatrix gram{Field(1), 0, 0};
    CycloMatrix gram_inv{Field(1), 0, 0};
    std::map<int, CycloMatrix> left;   // left[i] : f_{nu-i} -> f_nu, multiplication by theta_i
    std::map<int, CycloMatrix> deriv;  // deriv[j] : f_nu -> f_{nu-j}, (x, theta_j y) = (deriv_j x, y)

    // All candidates theta_i b (b in the basis of nu - i), their Gram matrix and its kernel.
    std::vector<std::pair<int, std::size_t>> candidates;
    CycloMatrix candidate_gram{Field(1), 0, 0};
    std::vector<std::vector<CycloElem>> candidate_kernel;

    std::size_t dim() const { return basis.size(); }
};

/// The graded quotient f = u^-, built degree by degree from candidate sets theta_i f_{nu-i}.
class UMinus {
public:
    UMinus(const CartanContext& ctx, long degree_cap = 64);

    const CartanContext& ctx() const { return *ctx_; }
    const Field& field() const { return ctx_->zeta_field; }
    /// Pieces by weight; only nonzero pieces are stored.
    const std::map<Coweight, UPiece>& pieces() const { return pieces_; }
    const UPiece* piece(const Coweight& nu) const {
        auto it = pieces_.find(nu);
        return it == pieces_.end() ? nullptr : &it->second;
    }
    std::size_t dim(const Coweight& nu) const {
        auto p = piece(nu);
        return p ? p->dim() : 0;
    }
    std::size_t total_dim() const {
        std::size_t s = 0;
        for (const auto& [nu, p] : pieces_) s += p.dim();
        return s;
    }
    long top_degree() const { return top_degree_; }
    /// Dimensions per total degree 0..top.
    std::vector<std::size_t> degree_dims() const {
        std::vector<std::size_t> d(static_cast<std::size_t>(top_degree_) + 1, 0);
        for (const auto& [nu, p] : pieces_) d[static_cast<std::size_t>(height(nu))] += p.dim();
        return d;
    }

    /// Generators of the radical at weight nu modulo theta_i rad_{nu-i}: candidate
    /// combinations sum_k c_k theta_{i_k} b_k vanishing in f_nu. Works for any nu in Y+.
    struct RadicalGenerators {
        std::vector<std::pair<int, std::size_t>> candidates;
        std::vector<std::vector<CycloElem>> kernel;
    };
    RadicalGenerators radical_generators(const Coweight& nu) const;

    /// Coordinates in f_nu of the class of a word.
    std::vector<CycloElem> word_coordinates(const Word& w) const;

private:
    void build_piece(const Coweight& nu);

    const CartanContext* ctx_;
    std::map<Coweight, UPiece> pieces_;
    std::map<Coweight, RadicalGenerators> zero_candidates_;  // weights with candidates but f_nu = 0
    long top_degree_ = 0;
};

namespace detail {

inline std::vector<Coweight> weights_of_height(std::size_t rank, long h) {
    std::vector<Coweight> out;
    Coweight v(rank, 0);
    auto rec = [&](auto&& self, std::size_t i, long left) -> void {
        if (i + 1 == rank) {
            v[i] = left;
            out.push_back(v);
            return;
        }
        for (long x = 0; x <= left; ++x) {
            v[i] = x;
            self(self, i + 1, left - x);
        }
    };
    rec(rec, 0, h);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

inline UMinus::UMinus(const CartanContext& ctx, long degree_cap) : ctx_(&ctx) {
    const std::size_t n = ctx.rank();
    UPiece zero;
    zero.weight = Coweight(n, 0);
    zero.basis = {Word{}};
    zero.basis_split = {{-1, 0}};
    zero.gram = CycloMatrix::identity(field(), 1);
    zero.gram_inv = zero.gram;
    pieces_.emplace(zero.weight, std::move(zero));
    for (long deg = 1;; ++deg) {
        if (deg > degree_cap) throw SupportCapExceeded("support cap exceeded at total degree " + std::to_string(deg));
        bool any = false;
        for (const auto& nu : detail::weights_of_height(n, deg)) {
            build_piece(nu);
            if (piece(nu)) any = true;
        }
        if (!any) break;
        top_degree_ = deg;
    }
}

inline UMinus::RadicalGenerators UMinus::radical_generators(const Coweight& nu) const {
    if (auto p = piece(nu)) return {p->candidates, p->candidate_kernel};
    if (auto it = zero_candidates_.find(nu); it != zero_candidates_.end()) return it->second;
    // f_nu = 0: every candidate is a radical element
    RadicalGenerators g;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        if (nu[i] == 0) continue;
        if (auto q = piece(nu - simple_coweight(nu.size(), i)))
            for (std::size_t b = 0; b < q->dim(); ++b) g.candidates.emplace_back(static_cast<int>(i), b);
    }
    std::sort(g.candidates.begin(), g.candidates.end(), [&](const auto& a, const auto& b) {
        Word wa{a.first}, wb{b.first};
        const auto& ba = piece(nu - simple_coweight(nu.size(), a.first))->basis[a.second];
        const auto& bb = piece(nu - simple_coweight(nu.size(), b.first))->basis[b.second];
        wa.insert(wa.end(), ba.begin(), ba.end());
        wb.insert(wb.end(), bb.begin(), bb.end());
        return wa < wb;
    });
    for (std::size_t k = 0; k < g.candidates.size(); ++k) {
        std::vector<CycloElem> v(g.candidates.size(), field().zero());
        v[k] = field().one();
        g.kernel.push_back(std::move(v));
    }
    return g;
}

inline void UMinus::build_piece(const Coweight& nu) {
    const std::size_t n = ctx_->rank();
    const Field& f = field();
    struct Cand {
        int letter;
        std::size_t idx;
        Word word;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < n; ++i) {
        if (nu[i] == 0) continue;
        const UPiece* q = piece(nu - simple_coweight(n, i));
        if (!q) continue;
        for (std::size_t b = 0; b < q->dim(); ++b) {
            Word w{static_cast<int>(i)};
            w.insert(w.end(), q->basis[b].begin(), q->basis[b].end());
            cands.push_back({static_cast<int>(i), b, std::move(w)});
        }
    }
    if (cands.empty()) return;
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.word < b.word; });

    // (theta_i u, theta_j u') = delta_ij (u, u') + zeta^{i.j} (theta_i deriv_j u, u')
    std::map<std::pair<int, int>, CycloMatrix> block;  // rows: basis of nu-i, cols: basis of nu-j
    auto block_of = [&](int i, int j) -> const CycloMatrix& {
        auto key = std::make_pair(i, j);
        auto it = block.find(key);
        if (it != block.end()) return it->second;
        const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
        const Coweight nu_i = nu - simple_coweight(n, ui), nu_j = nu - simple_coweight(n, uj);
        const UPiece& pi = *piece(nu_i);
        const UPiece& pj = *piece(nu_j);
        CycloMatrix m(f, pi.dim(), pj.dim());
        if (i == j) m = pi.gram;
        Coweight nu_ij = nu_i - simple_coweight(n, uj);
        if (is_nonnegative(nu_ij) && piece(nu_ij)) {
            // columns: theta_i deriv_j e_b in f_{nu-j}
            const CycloMatrix& D = pi.deriv.at(j);
            const CycloMatrix& L = pj.left.at(i);
            CycloMatrix t = (L * D).transpose() * pj.gram;
            m += t * ctx_->zeta(ctx_->simple_dot(ui, uj));
        }
        return block.emplace(key, std::move(m)).first->second;
    };
    const std::size_t c = cands.size();
    CycloMatrix C(f, c, c);
    for (std::size_t a = 0; a < c; ++a)
        for (std::size_t b = 0; b < c; ++b) C(a, b) = block_of(cands[a].letter, cands[b].letter)(cands[a].idx, cands[b].idx);

    RankNullspace rn = rank_nullspace(C);
    UPiece p;
    p.weight = nu;
    for (const auto& cd : cands) p.candidates.emplace_back(cd.letter, cd.idx);
    p.candidate_gram = C;
    p.candidate_kernel = std::move(rn.nullspace);
    if (rn.rank == 0) {
        // keep the kernel data around for relation checks even though f_nu = 0
        zero_candidates_.emplace(nu, RadicalGenerators{p.candidates, p.candidate_kernel});
        return;
    }
    const auto& piv = rn.pivots;
    for (auto k : piv) {
        p.basis.push_back(cands[k].word);
        p.basis_split.emplace_back(cands[k].letter, cands[k].idx);
    }
    p.gram = C.submatrix(piv, piv);
    p.gram_inv = inverse(p.gram);
    std::vector<std::size_t> all(c);
    for (std::size_t k = 0; k < c; ++k) all[k] = k;
    CycloMatrix coords = p.gram_inv * C.submatrix(piv, all);  // candidate k in basis coordinates
    for (std::size_t i = 0; i < n; ++i) {
        if (nu[i] == 0) continue;
        const UPiece* q = piece(nu - simple_coweight(n, i));
        if (!q) continue;
        CycloMatrix L(f, p.dim(), q->dim());
        for (std::size_t k = 0; k < c; ++k)
            if (cands[k].letter == static_cast<int>(i))
                for (std::size_t r = 0; r < p.dim(); ++r) L(r, cands[k].idx) = coords(r, k);
        p.left.emplace(static_cast<int>(i), std::move(L));
    }
    // deriv_j (theta_i b) = delta_ij b + zeta^{i.j} theta_i deriv_j b
    for (std::size_t j = 0; j < n; ++j) {
        if (nu[j] == 0) continue;
        const UPiece* q = piece(nu - simple_coweight(n, j));
        if (!q) continue;
        CycloMatrix D(f, q->dim(), p.dim());
        for (std::size_t col = 0; col < p.dim(); ++col) {
            const auto [i, b] = p.basis_split[col];
            const auto ui = static_cast<std::size_t>(i);
            if (ui == j) D(b, col) += f.one();
            const Coweight nu_i = nu - simple_coweight(n, ui);
            const Coweight nu_ij = nu_i - simple_coweight(n, j);
            if (!is_nonnegative(nu_ij) || !piece(nu_ij)) continue;
            const UPiece& pi = *piece(nu_i);
            CycloMatrix v = q->left.at(i) * (pi.deriv.at(static_cast<int>(j)).column(b));
            const CycloElem z = ctx_->zeta(ctx_->simple_dot(ui, j));
            for (std::size_t r = 0; r < q->dim(); ++r) D(r, col) += z * v(r, 0);
        }
        p.deriv.emplace(static_cast<int>(j), std::move(D));
    }
    pieces_.emplace(nu, std::move(p));
}

inline std::vector<CycloElem> UMinus::word_coordinates(const Word& w) const {
    const std::size_t n = ctx_->rank();
    const Coweight nu = word_weight(w, n);
    const UPiece* p = piece(nu);
    if (!p) return {};
    if (w.empty()) return {field().one()};
    Word rest(w.begin() + 1, w.end());
    auto sub = word_coordinates(rest);
    std::vector<CycloElem> out(p->dim(), field().zero());
    if (sub.empty()) return out;
    const CycloMatrix& L = p->left.at(w[0]);
    return L * sub;
}

/// The graded basis of u^- over its full support.
inline UMinus u_minus_basis(const CartanContext& ctx, long degree_cap = 64) { return UMinus(ctx, degree_cap); }

}  // namespace qgroot
