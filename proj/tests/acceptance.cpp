// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include "oracles.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <sys/wait.h>

using namespace qgroot;
using oracle::A1;
using oracle::A2;

namespace {

struct Outcome {
    bool ok = true;
    std::vector<std::string> notes;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (notes.size() < 10) notes.push_back(what);
        }
    }
};

Weight w1(long a) { return Weight::from_ints({a}); }

long fine(const CartanContext& ctx, const Rational& q) {
    return positive_mod(to_long(q * (2 * ctx.delta())), ctx.fine_field.order());
}

std::optional<CartanContext> try_context(const CartanMatrix& m, long l) {
    try {
        return build_context(m, l);
    } catch (const PreconditionError&) {
        return std::nullopt;
    }
}

Outcome cartan_suite() {
    Outcome o;
    for (const auto& row : oracle::classical()) {
        auto ctx = build_context(row.matrix, 84);
        o.require(static_cast<long>(ctx.positive.size()) == row.positive_roots, std::string(row.name) + " root count");
        o.require(ctx.dim_g == row.dim_g, std::string(row.name) + " dim g");
        o.require(ctx.h == row.h, std::string(row.name) + " h");
        o.require(ctx.delta() == row.delta, std::string(row.name) + " delta");
        o.require(twelve_rho_rho(ctx) == row.d * row.h * row.dim_g, std::string(row.name) + " strange formula");
        for (long l : {5L, 6L, 8L, 10L, 12L, 14L}) {
            auto c = try_context(row.matrix, l);
            if (!c) continue;
            o.require(rho_half_sum(*c) == c->rho, std::string(row.name) + " rho half sum");
            o.require(rho_ell_half_sum(*c) == c->rho_ell, std::string(row.name) + " rho_ell half sum");
        }
    }
    return o;
}

Outcome shuffle_suite() {
    Outcome o;
    {
        auto ctx = build_context(A2, 10);
        ShuffleForm form(ctx);
        std::mt19937 rng(1);
        for (int t = 0; t < 100; ++t) {
            const std::size_t len = 1 + rng() % 4;
            Coweight nu(2, 0);
            for (std::size_t k = 0; k < len; ++k) ++nu[rng() % 2];
            const auto words = words_of_weight(nu);
            FreeAlgElem x(ctx.zeta_field), y(ctx.zeta_field);
            for (const auto& w : words) {
                x.add(w, oracle::random_elem(ctx.zeta_field, rng, 2));
                y.add(w, oracle::random_elem(ctx.zeta_field, rng, 2));
            }
            o.require(form(x, y) == form(y, x), "form symmetry");
        }
        // radical is a two-sided ideal at the Serre weights
        for (const auto& nu : {Coweight{2, 1}, Coweight{1, 2}}) {
            auto g = gram_radical(ctx, nu, form);
            o.require(g.radical_basis.size() == 1, "Serre radical dimension");
            for (const auto& r : g.radical_basis) {
                FreeAlgElem x(ctx.zeta_field);
                for (std::size_t k = 0; k < r.size(); ++k)
                    if (!r[k].is_zero()) x.add(g.word_basis[k], r[k]);
                for (int j = 0; j < 2; ++j) {
                    auto tj = FreeAlgElem::word(ctx.zeta_field, {j});
                    const Coweight up = nu + simple_coweight(2, static_cast<std::size_t>(j));
                    for (const auto& w : words_of_weight(up)) {
                        auto ww = FreeAlgElem::word(ctx.zeta_field, w);
                        o.require(form(tj * x, ww).is_zero() && form(x * tj, ww).is_zero(), "radical ideal");
                    }
                }
            }
        }
        o.require(u_minus_basis(ctx).total_dim() == 125, "A2 l=10 total 125");
    }
    auto a1 = build_context(A1, 10);
    auto u = u_minus_basis(a1);
    o.require(u.degree_dims() == std::vector<std::size_t>{1, 1, 1, 1, 1}, "A1 graded dims");
    o.require(u.dim({5}) == 0, "A1 degree 5 vanishes");
    return o;
}

Outcome module_suite() {
    Outcome o;
    auto a1 = build_context(A1, 10);
    auto u1 = u_minus_basis(a1);
    for (long m = 0; m <= 4; ++m) {
        auto L = simple(a1, u1, w1(m));
        o.require(L.module.total_dim() == static_cast<std::size_t>(m + 1), "dim L(m omega)");
        o.require(irreducibility_certificate(L.module), "irreducibility certificate");
        o.require(check_relation_a(L.module).ok, "relation (a) on simple");
        o.require(check_relation_b(L.module, u1).ok, "relation (b) on simple");
        for (auto v : {DualVariant::Check, DualVariant::Star}) {
            auto D = dual(L.module, v);
            o.require(check_relation_a(D).ok && check_relation_b(D, u1).ok, "relations on dual");
        }
    }
    auto T = tensor(simple(a1, u1, w1(1)).module, simple(a1, u1, w1(2)).module);
    o.require(check_relation_a(T).ok && check_relation_b(T, u1).ok, "relations on tensor");

    auto a2 = build_context(A2, 10);
    auto u2 = u_minus_basis(a2);
    std::mt19937 rng(17);
    for (int t = 0; t < 5; ++t) {
        Weight lam = Weight::from_ints({static_cast<long>(rng() % 13) - 6, static_cast<long>(rng() % 13) - 6});
        auto M = verma(a2, u2, lam);
        o.require(M.total_dim() == u2.total_dim(), "dim M(lambda) = dim u-");
        o.require(check_relation_a(M).ok, "relation (a) on Verma");
        o.require(check_relation_b(M, u2).ok, "relation (b) on Verma");
        o.require(check_contravariance(M, contravariant_gram(a2, u2, M)).ok, "contravariance");
    }
    for (const auto& lam : {Weight::from_ints({1, 1}), Weight::from_ints({1, 0}), Weight::from_ints({2, 0})}) {
        auto L = simple(a2, u2, lam);
        o.require(irreducibility_certificate(L.module), "A2 irreducibility certificate");
        o.require(check_relation_a(L.module).ok, "relation (a) on A2 simple");
    }
    return o;
}

Outcome blocks_suite() {
    Outcome o;
    auto ctx = build_context(A1, 10);
    auto u = u_minus_basis(ctx);
    const auto alc = alcove(ctx);
    o.require(alc.size() == 4, "alcove size");
    for (const auto& a : alc)
        for (const auto& b : alc)
            o.require(conformal_block_dim(ctx, u, {a, b}) == (a == b ? 1u : 0u), "pairing " + to_string(a) + to_string(b));
    int triples = 0;
    for (long a = 0; a <= 3; ++a)
        for (long b = a; b <= 3; ++b)
            for (long c = b; c <= 3; ++c) {
                ++triples;
                const long got = static_cast<long>(conformal_block_dim(ctx, u, {w1(a), w1(b), w1(c)}));
                o.require(got == oracle::sl2_fusion(a, b, c, 3),
                          "triple " + std::to_string(a) + std::to_string(b) + std::to_string(c));
            }
    o.require(triples == 20, "20 triples");
    return o;
}

Outcome ribbon_suite() {
    Outcome o;
    auto ctx = build_context(A1, 5);
    o.require(braiding_scalar(ctx, w1(1), w1(1)).k == 2, "braiding omega omega");
    o.require(braiding_scalar(ctx, w1(0), w1(1)).k == 0, "braiding zero");
    o.require(balance_scalar(ctx, w1(1)).k == 13, "balance omega");
    o.require(balance_scalar(ctx, w1(0)).k == 0, "balance zero");
    o.require(balance_scalar(ctx, w1(8)).k == 0, "balance 2 rho_ell");
    o.require(fine(ctx, ctx.dot(w1(1), w1(1))) == 2, "braiding by definition");
    o.require(wzw_compare(build_context(A1, 10), 5).matches, "WZW A1 kappa 5");
    o.require(wzw_compare(build_context(A2, 8), 4).matches, "WZW A2 kappa 4");
    return o;
}

Outcome monodromy_suite() {
    Outcome o;
    for (const auto& m : {A1, A2}) {
        auto ctx = build_context(m, 10);
        const std::size_t n = ctx.rank();
        std::vector<Weight> mus{Weight::zero(n), Rational(2) * ctx.rho_ell};
        for (std::size_t i = 0; i < n; ++i) {
            Weight w = Weight::zero(n);
            w.c[i] = 1;
            mus.push_back(w);
        }
        for (auto fl : {Flavour::J, Flavour::Sign, Flavour::I})
            for (const auto& mu : mus)
                for (long h = 1; h <= 4; ++h)
                    for (const auto& nu : detail::weights_of_height(n, h)) {
                        o.require(verify_relations(standard_monodromy(ctx, fl, mu, nu)).ok, "relations " + flavour_name(fl));
                        o.require(fusion_degeneration_check(ctx, mu, mus.back(), nu, fl), "fusion degeneration");
                    }
        for (const auto& mu : mus)
            for (long h1 = 0; h1 <= 2; ++h1)
                for (long h2 = 0; h2 <= 2; ++h2)
                    for (const auto& nu1 : detail::weights_of_height(n, h1))
                        for (const auto& nu2 : detail::weights_of_height(n, h2))
                            o.require(factorization_check(ctx, mu, nu1, nu2, simple_coweight(n, 0)), "factorization");
    }
    // negative control
    auto a2 = build_context(A2, 10);
    auto rep = standard_monodromy(a2, Flavour::J, Weight::from_ints({1, 0}), {2, 1});
    rep.exponent.at({Generator::TwistPlus, {0, 1, 0}, 1}) += 5;
    o.require(!verify_relations(rep).ok, "corruption detected");
    // descent condition
    for (const auto& row : oracle::classical())
        for (long l : {5L, 6L, 8L, 10L, 12L, 14L, 18L, 24L}) {
            auto c = try_context(row.matrix, l);
            if (!c) continue;
            for (std::size_t i = 0; i < c->rank(); ++i)
                o.require(tangent_loop_scalar(*c, -c->simple_root(i)).k == 0, std::string("descent ") + row.name);
        }
    return o;
}

Outcome admissibility_suite() {
    Outcome o;
    for (const auto& m : {A1, A2})
        for (long l : {8L, 10L}) {
            auto ctx = build_context(m, l);
            const std::size_t n = ctx.rank();
            for (long g = 0; g <= 2; ++g) {
                const Weight target = Rational(2 - 2 * g) * ctx.rho_ell;
                for (long a = -5; a <= 5; ++a)
                    for (long b = (n == 1 ? 0 : -5); b <= (n == 1 ? 0 : 5); ++b)
                        for (long h = 0; h <= 2; ++h)
                            for (const auto& nu : detail::weights_of_height(n, h)) {
                                Weight mu = n == 1 ? w1(a) : Weight::from_ints({a, b});
                                const bool brute = oracle::in_y_ell_by_definition(ctx, mu - ctx.embed(nu) - target);
                                o.require(admissible(ctx, {mu}, nu, g) == brute, "admissible vs residue");
                            }
            }
        }
    auto ctx = build_context(A1, 5);
    o.require(heisenberg_rank(ctx, 0) == 1 && heisenberg_rank(ctx, 1) == 10 && heisenberg_rank(ctx, 2) == 100,
              "heisenberg rank");
    return o;
}

std::pair<int, std::string> run_cli(const std::filesystem::path& config) {
    const std::string cmd = std::string("\"") + QGROOT_CLI_PATH + "\" \"" + config.string() + "\" 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome cli_suite() {
    Outcome o;
    std::vector<std::filesystem::path> configs;
    for (const auto& e : std::filesystem::directory_iterator(QGROOT_GOLDEN_DIR))
        if (e.path().extension() == ".json") configs.push_back(e.path());
    std::sort(configs.begin(), configs.end());
    o.require(!configs.empty(), "no golden fixtures");
    for (const auto& c : configs) {
        auto outp = c, codep = c;
        outp.replace_extension(".out");
        codep.replace_extension(".code");
        const std::string expect = slurp(outp);
        const int expect_code = std::stoi(slurp(codep));
        auto first = run_cli(c), second = run_cli(c);
        const std::string name = c.stem().string();
        o.require(first.second == second.second && first.first == second.first, name + ": runs differ");
        o.require(first.second == expect, name + ": output differs from golden");
        o.require(first.first == expect_code, name + ": exit code differs");
    }
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double budget_s;
    };
    const std::vector<Criterion> criteria = {
        {"1 cartan suite", cartan_suite, 1},
        {"2 shuffle suite", shuffle_suite, 120},
        {"3 module suite", module_suite, 120},
        {"4 blocks suite", blocks_suite, 300},
        {"5 ribbon suite", ribbon_suite, 1},
        {"6 monodromy suite", monodromy_suite, 60},
        {"7 admissibility suite", admissibility_suite, 10},
        {"8 cli determinism", cli_suite, 600},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.require(secs < c.budget_s, "over runtime budget");
        std::cout << (o.ok ? "PASS " : "FAIL ") << c.name << " (" << std::fixed << std::setprecision(2) << secs << " s)";
        for (const auto& n : o.notes) std::cout << " [" << n << "]";
        std::cout << "\n";
        if (!o.ok) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
