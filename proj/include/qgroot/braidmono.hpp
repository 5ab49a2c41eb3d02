#pragma once

// Rank-one braiding local systems on coloured configurations of the punctured
// disk, as scalar representations of a presented groupoid. Scalars are stored as
// exponents of zeta' modulo N = 2 delta l; a sign -1 is the exponent N/2.

#include "ribbon.hpp"
#include "shuffle.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace qgroot {

enum class Flavour { J, Sign, I };

inline std::string flavour_name(Flavour f) {
    switch (f) {
        case Flavour::J: return "J";
        case Flavour::Sign: return "Sign";
        case Flavour::I: return "I";
    }
    return "?";
}

/// A generator of the groupoid: half-twist of positions (pos, pos+1) or the loop of the
/// innermost point around 0. Positions are 0-based, counted outward from 0.
struct Generator {
    enum Kind { TwistPlus, TwistMinus, InnerLoop };
    Kind kind;
    Word source;
    std::size_t pos = 0;

    Word target() const {
        Word w = source;
        if (kind != InnerLoop) std::swap(w[pos], w[pos + 1]);
        return w;
    }
    auto key() const { return std::tie(kind, source, pos); }
    friend bool operator<(const Generator& a, const Generator& b) { return a.key() < b.key(); }
    friend bool operator==(const Generator& a, const Generator& b) { return a.key() == b.key(); }
};

inline std::string word_label(const Word& w) {
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + std::to_string(w[k]);
    return s;
}

inline std::string generator_label(const Generator& g) {
    switch (g.kind) {
        case Generator::TwistPlus: return "s+" + std::to_string(g.pos) + "@" + word_label(g.source);
        case Generator::TwistMinus: return "s-" + std::to_string(g.pos) + "@" + word_label(g.source);
        case Generator::InnerLoop: return "g@" + word_label(g.source);
    }
    return "?";
}

using Path = std::vector<Generator>;

struct Relation {
    std::string name;
    Word base;
    Path lhs, rhs;
};

struct GroupoidPresentation {
    Coweight nu;
    std::vector<Word> objects;
    std::vector<Generator> generators;
    std::vector<Relation> relations;
};

namespace detail {

// Builds a path of plus/minus twists and loops from a start object.
class PathBuilder {
public:
    explicit PathBuilder(Word start) : cur_(std::move(start)) {}
    PathBuilder& twist(std::size_t k, bool plus = true) {
        Generator g{plus ? Generator::TwistPlus : Generator::TwistMinus, cur_, k};
        cur_ = g.target();
        path_.push_back(std::move(g));
        return *this;
    }
    PathBuilder& loop() {
        path_.push_back({Generator::InnerLoop, cur_, 0});
        return *this;
    }
    Path done() const { return path_; }
    const Word& end() const { return cur_; }

private:
    Word cur_;
    Path path_;
};

}  // namespace detail

/// Objects are colour words of weight nu; relations are inverse pairs, far commutation,
/// the braid relation, the type-B relation and commutation of the loop with outer twists.
inline GroupoidPresentation build_groupoid(const Coweight& nu) {
    if (!is_nonnegative(nu)) throw PreconditionError("build_groupoid: weight is not in Y+");
    if (height(nu) == 0) throw PreconditionError("build_groupoid: nu = 0 has no configuration points");
    GroupoidPresentation P;
    P.nu = nu;
    P.objects = words_of_weight(nu);
    const std::size_t m = static_cast<std::size_t>(height(nu));
    using detail::PathBuilder;
    for (const auto& w : P.objects) {
        P.generators.push_back({Generator::InnerLoop, w, 0});
        for (std::size_t k = 0; k + 1 < m; ++k) {
            P.generators.push_back({Generator::TwistPlus, w, k});
            P.generators.push_back({Generator::TwistMinus, w, k});
        }
    }
    for (const auto& w : P.objects) {
        for (std::size_t k = 0; k + 1 < m; ++k) {
            P.relations.push_back({"inverse", w, PathBuilder(w).twist(k).twist(k, false).done(), {}});
            for (std::size_t k2 = k + 2; k2 + 1 < m; ++k2)
                P.relations.push_back({"far-commutation", w, PathBuilder(w).twist(k).twist(k2).done(),
                                       PathBuilder(w).twist(k2).twist(k).done()});
            if (k + 2 < m)
                P.relations.push_back({"braid", w, PathBuilder(w).twist(k).twist(k + 1).twist(k).done(),
                                       PathBuilder(w).twist(k + 1).twist(k).twist(k + 1).done()});
            if (k >= 1)
                P.relations.push_back({"loop-commutation", w, PathBuilder(w).loop().twist(k).done(),
                                       PathBuilder(w).twist(k).loop().done()});
        }
        if (m >= 2)
            P.relations.push_back({"type-B", w, PathBuilder(w).loop().twist(0).loop().twist(0).done(),
                                   PathBuilder(w).twist(0).loop().twist(0).loop().done()});
    }
    return P;
}

/// A one-dimensional representation: an exponent of zeta' per generator.
struct MonodromyRep {
    Flavour flavour = Flavour::I;
    Weight mu;
    Coweight nu;
    long N = 1;
    GroupoidPresentation presentation;
    std::map<Generator, long> exponent;

    long evaluate(const Path& p) const {
        long s = 0;
        for (const auto& g : p) s += exponent.at(g);
        return positive_mod(s, N);
    }
};

namespace detail {

inline long colour_dot(const CartanContext& ctx, int a, int b) {
    return ctx.simple_dot(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
}

// zeta^{2 mu . a'} for a colour a
inline long loop_exponent(const CartanContext& ctx, const Weight& mu, int a) {
    return ctx.zeta_fine_exponent(2 * ctx.dot(mu, ctx.simple_root(static_cast<std::size_t>(a))));
}

inline long twist_exponent(const CartanContext& ctx, Flavour fl, const Generator& g) {
    const long N = ctx.fine_field.order();
    const int a = g.source[g.pos], b = g.source[g.pos + 1];
    long e = 0;
    if (fl != Flavour::Sign) {
        const long ab = colour_dot(ctx, a, b);
        e += ctx.zeta_fine_exponent(Rational(g.kind == Generator::TwistPlus ? -ab : ab));
    }
    if (fl != Flavour::J && a == b) e += N / 2;
    return positive_mod(e, N);
}

}  // namespace detail

/// J: twist(a,b)^{+-} -> zeta^{-+ a.b}, loop(a) -> zeta^{2 mu.a}; Sign: -1 on equal-colour twists; I = J Sign.
inline MonodromyRep standard_monodromy(const CartanContext& ctx, Flavour fl, const Weight& mu, const Coweight& nu) {
    if (mu.size() != ctx.rank() || nu.size() != ctx.rank()) throw PreconditionError("monodromy: rank mismatch");
    if (!ctx.in_X_ell(mu)) throw PreconditionError("monodromy: mu is not in X_ell");
    MonodromyRep rep;
    rep.flavour = fl;
    rep.mu = mu;
    rep.nu = nu;
    rep.N = ctx.fine_field.order();
    rep.presentation = build_groupoid(nu);
    for (const auto& g : rep.presentation.generators) {
        long e = 0;
        if (g.kind == Generator::InnerLoop)
            e = fl == Flavour::Sign ? 0 : detail::loop_exponent(ctx, mu, g.source[0]);
        else
            e = detail::twist_exponent(ctx, fl, g);
        rep.exponent.emplace(g, e);
    }
    return rep;
}

struct RelationCheck {
    bool ok = true;
    std::size_t checked = 0;
    std::vector<std::string> failures;
};

inline RelationCheck verify_relations(const MonodromyRep& rep) {
    RelationCheck out;
    for (const auto& r : rep.presentation.relations) {
        ++out.checked;
        if (rep.evaluate(r.lhs) != rep.evaluate(r.rhs)) {
            out.ok = false;
            if (out.failures.size() < 20) out.failures.push_back(r.name + " at " + word_label(r.base));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Factorization

namespace detail {

// The loop of the point at position m1 around 0 and the m1 points inside it.
inline Path outer_point_loop(const Word& w, std::size_t m1) {
    PathBuilder b(w);
    for (std::size_t k = m1; k-- > 0;) b.twist(k);
    b.loop();
    for (std::size_t k = 0; k < m1; ++k) b.twist(k);
    return b.done();
}

inline bool factorization_pair(const CartanContext& ctx, Flavour fl, const Weight& mu, const Coweight& nu1,
                               const Coweight& nu2, std::vector<std::string>* why) {
    const std::size_t n = ctx.rank();
    const Coweight total = nu1 + nu2;
    if (height(total) == 0) return true;
    const MonodromyRep big = standard_monodromy(ctx, fl, mu, total);
    const std::size_t m1 = static_cast<std::size_t>(height(nu1)), m2 = static_cast<std::size_t>(height(nu2));
    std::optional<MonodromyRep> inner, outer;
    if (m1 > 0) inner = standard_monodromy(ctx, fl, mu, nu1);
    if (m2 > 0) outer = standard_monodromy(ctx, fl, mu - ctx.embed(nu1), nu2);
    bool ok = true;
    auto fail = [&](const std::string& s) {
        ok = false;
        if (why && why->size() < 20) why->push_back(s);
    };
    std::vector<Word> us = m1 ? words_of_weight(nu1) : std::vector<Word>{Word{}};
    std::vector<Word> vs = m2 ? words_of_weight(nu2) : std::vector<Word>{Word{}};
    for (const auto& u : us)
        for (const auto& v : vs) {
            Word w = u;
            w.insert(w.end(), v.begin(), v.end());
            if (m1 > 0) {
                Generator gb{Generator::InnerLoop, w, 0}, gi{Generator::InnerLoop, u, 0};
                if (big.exponent.at(gb) != inner->exponent.at(gi)) fail("inner loop at " + word_label(w));
                for (std::size_t k = 0; k + 1 < m1; ++k)
                    for (auto kind : {Generator::TwistPlus, Generator::TwistMinus})
                        if (big.exponent.at({kind, w, k}) != inner->exponent.at({kind, u, k}))
                            fail("inner twist at " + word_label(w));
            }
            if (m2 > 0) {
                for (std::size_t k = 0; k + 1 < m2; ++k)
                    for (auto kind : {Generator::TwistPlus, Generator::TwistMinus})
                        if (big.exponent.at({kind, w, m1 + k}) != outer->exponent.at({kind, v, k}))
                            fail("outer twist at " + word_label(w));
                const long around = big.evaluate(outer_point_loop(w, m1));
                if (around != outer->exponent.at({Generator::InnerLoop, v, 0}))
                    fail("outer loop around the inner disk at " + word_label(w));
            }
        }
    (void)n;
    return ok;
}

}  // namespace detail

/// The scalar shadow of m^* I_mu^{nu1+nu2} = p^*(I_mu^{nu1} [x] I_{mu-nu1}^{nu2}); with nu3 the
/// two bracketings of a triple are checked as well.
inline bool factorization_check(const CartanContext& ctx, const Weight& mu, const Coweight& nu1, const Coweight& nu2,
                                const std::optional<Coweight>& nu3 = std::nullopt, Flavour fl = Flavour::I,
                                std::vector<std::string>* why = nullptr) {
    if (!is_nonnegative(nu1) || !is_nonnegative(nu2) || (nu3 && !is_nonnegative(*nu3)))
        throw PreconditionError("factorization_check: weights must be in Y+");
    bool ok = detail::factorization_pair(ctx, fl, mu, nu1, nu2, why);
    if (nu3) {
        ok = detail::factorization_pair(ctx, fl, mu, nu1 + nu2, *nu3, why) && ok;
        ok = detail::factorization_pair(ctx, fl, mu - ctx.embed(nu1), nu2, *nu3, why) && ok;
        ok = detail::factorization_pair(ctx, fl, mu, nu1, nu2 + *nu3, why) && ok;
        const Weight a = (mu - ctx.embed(nu1)) - ctx.embed(nu2), b = mu - ctx.embed(nu1 + nu2);
        if (!(a == b)) {
            ok = false;
            if (why) why->push_back("weight shifts are not additive");
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// Two-point systems

/// Generator exponents for J^nu_{mu1,mu2}: labels "z~0", "t<k>~0", "t<k>~z", twists "s+<k>", "s-<k>",
/// keyed per colour word.
struct TwoPointRep {
    Flavour flavour = Flavour::I;
    Weight mu1, mu2;
    Coweight nu;
    long N = 1;
    long z_loop = 0;
    std::map<Word, std::map<std::string, long>> exponent;
};

inline TwoPointRep two_point_monodromy(const CartanContext& ctx, const Weight& mu1, const Weight& mu2, const Coweight& nu,
                                       Flavour fl = Flavour::I) {
    if (!ctx.in_X_ell(mu1) || !ctx.in_X_ell(mu2)) throw PreconditionError("two-point monodromy: weights must be in X_ell");
    TwoPointRep rep;
    rep.flavour = fl;
    rep.mu1 = mu1;
    rep.mu2 = mu2;
    rep.nu = nu;
    rep.N = ctx.fine_field.order();
    rep.z_loop = fl == Flavour::Sign ? 0 : ctx.zeta_fine_exponent(-2 * ctx.dot(mu1, mu2));
    if (height(nu) == 0) return rep;
    for (const auto& w : words_of_weight(nu)) {
        auto& e = rep.exponent[w];
        for (std::size_t k = 0; k < w.size(); ++k) {
            const std::string t = "t" + std::to_string(k);
            e[t + "~0"] = fl == Flavour::Sign ? 0 : detail::loop_exponent(ctx, mu1, w[k]);
            e[t + "~z"] = fl == Flavour::Sign ? 0 : detail::loop_exponent(ctx, mu2, w[k]);
            if (k + 1 < w.size()) {
                e["s+" + std::to_string(k)] = detail::twist_exponent(ctx, fl, {Generator::TwistPlus, w, k});
                e["s-" + std::to_string(k)] = detail::twist_exponent(ctx, fl, {Generator::TwistMinus, w, k});
            }
        }
    }
    return rep;
}

/// Collapsing z to 0: loops around {0, z} become loops of I_{mu1+mu2}, twists are unchanged.
inline bool fusion_degeneration_check(const CartanContext& ctx, const Weight& mu1, const Weight& mu2,
                                      const Coweight& nu, Flavour fl = Flavour::I) {
    if (height(nu) == 0) return true;
    const TwoPointRep two = two_point_monodromy(ctx, mu1, mu2, nu, fl);
    const MonodromyRep one = standard_monodromy(ctx, fl, mu1 + mu2, nu);
    for (const auto& [w, e] : two.exponent) {
        const long merged = positive_mod(e.at("t0~0") + e.at("t0~z"), two.N);
        if (merged != one.exponent.at({Generator::InnerLoop, w, 0})) return false;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const std::string t = "t" + std::to_string(k);
            // a pure loop of t_k around the merged puncture
            const long pure = fl == Flavour::Sign ? 0 : detail::loop_exponent(ctx, mu1 + mu2, w[k]);
            if (positive_mod(e.at(t + "~0") + e.at(t + "~z"), two.N) != pure) return false;
            if (k + 1 < w.size()) {
                if (e.at("s+" + std::to_string(k)) != one.exponent.at({Generator::TwistPlus, w, k})) return false;
                if (e.at("s-" + std::to_string(k)) != one.exponent.at({Generator::TwistMinus, w, k})) return false;
            }
        }
    }
    return true;
}

/// zeta^{-2 n(mu)}, the monodromy of a tangent vector at a point of colour weight mu.
inline RootOfUnity tangent_loop_scalar(const CartanContext& ctx, const Weight& mu) {
    return fine_power(ctx, -2 * n_function(ctx, mu));
}

/// sum mu - nu = (2 - 2g) rho_ell modulo Y_ell.
inline bool admissible(const CartanContext& ctx, const std::vector<Weight>& mus, const Coweight& nu, long g) {
    if (!is_nonnegative(nu)) throw PreconditionError("admissible: nu must be in Y+");
    if (g < 0) throw PreconditionError("admissible: genus must be nonnegative");
    Weight v = Weight::zero(ctx.rank());
    for (const auto& m : mus) {
        if (m.size() != ctx.rank()) throw PreconditionError("admissible: rank mismatch");
        v += m;
    }
    v -= ctx.embed(nu);
    v -= Rational(2 - 2 * g) * ctx.rho_ell;
    return ctx.in_Y_ell(v);
}

}  // namespace qgroot
