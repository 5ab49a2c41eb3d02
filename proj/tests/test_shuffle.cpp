#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace qgroot;
using oracle::A1;
using oracle::A2;
using oracle::B2;

namespace {

Word random_word(std::mt19937& rng, std::size_t rank, std::size_t len) {
    Word w(len);
    for (auto& x : w) x = static_cast<int>(rng() % rank);
    return w;
}

FreeAlgElem combo(const Field& f, const std::vector<Word>& words, const std::vector<CycloElem>& coeffs) {
    FreeAlgElem x(f);
    for (std::size_t k = 0; k < words.size(); ++k)
        if (!coeffs[k].is_zero()) x.add(words[k], coeffs[k]);
    return x;
}

// True when x pairs to zero with every word of its weight.
bool in_radical(const CartanContext& ctx, const ShuffleForm& form, const FreeAlgElem& x, const Coweight& nu) {
    for (const auto& w : words_of_weight(nu))
        if (!form(x, FreeAlgElem::word(ctx.zeta_field, w)).is_zero()) return false;
    return true;
}

}  // namespace

TEST(Shuffle, WordsOfWeight) {
    auto ws = words_of_weight({2, 1});
    EXPECT_EQ(ws, (std::vector<Word>{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
    EXPECT_EQ(words_of_weight({0, 0}), std::vector<Word>{Word{}});
}

TEST(Shuffle, FormBaseCases) {
    auto ctx = build_context(A2, 10);
    ShuffleForm form(ctx);
    EXPECT_TRUE(form({0}, {0}).is_one());
    EXPECT_TRUE(form({0}, {1}).is_zero());
    EXPECT_TRUE(form({}, {}).is_one());
    EXPECT_TRUE(form({0, 1}, {0}).is_zero());
    // (theta_i theta_i, theta_i theta_i) = 1 + zeta^{i.i}
    EXPECT_EQ(form({0, 0}, {0, 0}), ctx.zeta_field.one() + ctx.zeta(2));
}

TEST(Shuffle, FormSymmetricOnRandomPairs) {
    auto ctx = build_context(A2, 10);
    ShuffleForm form(ctx);
    std::mt19937 rng(2024);
    for (int t = 0; t < 100; ++t) {
        const std::size_t len = 1 + rng() % 4;
        const Coweight nu = word_weight(random_word(rng, 2, len), 2);
        const auto words = words_of_weight(nu);
        std::vector<CycloElem> a, b;
        for (std::size_t k = 0; k < words.size(); ++k) {
            a.push_back(rng() % 2 ? oracle::random_elem(ctx.zeta_field, rng, 2) : ctx.zeta_field.zero());
            b.push_back(rng() % 2 ? oracle::random_elem(ctx.zeta_field, rng, 2) : ctx.zeta_field.zero());
        }
        auto x = combo(ctx.zeta_field, words, a), y = combo(ctx.zeta_field, words, b);
        EXPECT_EQ(form(x, y), form(y, x)) << "trial " << t;
    }
}

TEST(Shuffle, FormMatchesCoproductRoute) {
    for (const auto& m : {A2, B2}) {
        auto ctx = build_context(m, 10);
        ShuffleForm form(ctx);
        std::mt19937 rng(5);
        for (int t = 0; t < 40; ++t) {
            Word y = random_word(rng, 2, 1 + rng() % 2), y2 = random_word(rng, 2, 1 + rng() % 2);
            Word yy = y;
            yy.insert(yy.end(), y2.begin(), y2.end());
            Word x = yy;
            std::shuffle(x.begin(), x.end(), rng);
            EXPECT_EQ(form(x, yy), oracle::form_via_coproduct(ctx, form, x, y, y2));
        }
    }
}

TEST(Shuffle, SerreRadicalAtTwoIPlusJ) {
    auto ctx = build_context(A2, 10);
    for (const auto& nu : {Coweight{2, 1}, Coweight{1, 2}}) {
        auto g = gram_radical(ctx, nu);
        EXPECT_EQ(g.word_basis.size(), 3u);
        EXPECT_EQ(g.radical_basis.size(), 1u);
        EXPECT_EQ(g.rank, 2u);
    }
    EXPECT_TRUE(gram_radical(ctx, {1, 1}).radical_basis.empty());
}

TEST(Shuffle, NilpotencyRadical) {
    auto ctx = build_context(A1, 10);  // ell = 5
    for (long k = 1; k <= 4; ++k) EXPECT_EQ(gram_radical(ctx, {k}).rank, 1u) << k;
    EXPECT_EQ(gram_radical(ctx, {5}).rank, 0u);
}

TEST(Shuffle, RadicalIsTwoSidedIdeal) {
    auto ctx = build_context(A2, 10);
    ShuffleForm form(ctx);
    const Field& f = ctx.zeta_field;
    for (const auto& nu : {Coweight{2, 1}, Coweight{1, 2}}) {
        auto g = gram_radical(ctx, nu, form);
        ASSERT_FALSE(g.radical_basis.empty());
        for (const auto& r : g.radical_basis) {
            auto x = combo(f, g.word_basis, r);
            ASSERT_TRUE(in_radical(ctx, form, x, nu));
            for (int j = 0; j < 2; ++j) {
                auto tj = FreeAlgElem::word(f, {j});
                const Coweight up = nu + simple_coweight(2, static_cast<std::size_t>(j));
                EXPECT_TRUE(in_radical(ctx, form, tj * x, up));
                EXPECT_TRUE(in_radical(ctx, form, x * tj, up));
            }
        }
    }
}

TEST(Shuffle, GradedDimsA1) {
    auto ctx = build_context(A1, 10);
    auto u = u_minus_basis(ctx);
    EXPECT_EQ(u.degree_dims(), (std::vector<std::size_t>{1, 1, 1, 1, 1}));
    EXPECT_EQ(u.dim({5}), 0u);
    EXPECT_EQ(u.top_degree(), 4);
}

TEST(Shuffle, TotalDimsAgreeWithRootProduct) {
    for (const auto& [m, l, expect] : std::vector<std::tuple<CartanMatrix, long, std::size_t>>{
             {A2, 10, 125}, {A2, 8, 64}, {A2, 6, 27}, {A1, 10, 5}, {B2, 10, 625}}) {
        auto ctx = build_context(m, l);
        auto u = u_minus_basis(ctx);
        EXPECT_EQ(u.total_dim(), expect) << "l=" << l;
        EXPECT_EQ(static_cast<long>(u.total_dim()), oracle::u_minus_product(ctx));
    }
}

TEST(Shuffle, PiecesMatchBruteForceRank) {
    auto ctx = build_context(A2, 6);
    auto u = u_minus_basis(ctx);
    ShuffleForm form(ctx);
    for (long h = 0; h <= 5; ++h)
        for (const auto& nu : detail::weights_of_height(2, h)) {
            auto g = gram_radical(ctx, nu, form);
            EXPECT_EQ(u.dim(nu), g.rank) << nu[0] << "," << nu[1];
            if (auto p = u.piece(nu)) EXPECT_EQ(p->basis, g.quotient_words);
        }
}

TEST(Shuffle, RadicalGeneratorsVanish) {
    auto ctx = build_context(A2, 6);
    auto u = u_minus_basis(ctx);
    ShuffleForm form(ctx);
    const Field& f = ctx.zeta_field;
    for (long h = 1; h <= 4; ++h)
        for (const auto& nu : detail::weights_of_height(2, h)) {
            auto gens = u.radical_generators(nu);
            for (const auto& kv : gens.kernel) {
                FreeAlgElem x(f);
                for (std::size_t k = 0; k < kv.size(); ++k) {
                    if (kv[k].is_zero()) continue;
                    const auto [i, b] = gens.candidates[k];
                    Word w{i};
                    const auto& tail = u.piece(nu - simple_coweight(2, static_cast<std::size_t>(i)))->basis[b];
                    w.insert(w.end(), tail.begin(), tail.end());
                    x.add(w, kv[k]);
                }
                EXPECT_TRUE(in_radical(ctx, form, x, nu)) << nu[0] << "," << nu[1];
            }
        }
}

TEST(Shuffle, WordCoordinatesRespectForm) {
    auto ctx = build_context(A2, 6);
    auto u = u_minus_basis(ctx);
    ShuffleForm form(ctx);
    const Coweight nu{2, 1};
    const UPiece* p = u.piece(nu);
    ASSERT_NE(p, nullptr);
    for (const auto& w : words_of_weight(nu)) {
        auto c = u.word_coordinates(w);
        ASSERT_EQ(c.size(), p->dim());
        for (std::size_t b = 0; b < p->dim(); ++b) {
            CycloElem s = ctx.zeta_field.zero();
            for (std::size_t a = 0; a < p->dim(); ++a) s += c[a] * p->gram(a, b);
            EXPECT_EQ(s, form(w, p->basis[b]));
        }
    }
}

TEST(Shuffle, CapExceeded) {
    auto ctx = build_context(A1, 10);
    EXPECT_THROW(u_minus_basis(ctx, 3), SupportCapExceeded);
    EXPECT_NO_THROW(u_minus_basis(ctx, 5));
}
