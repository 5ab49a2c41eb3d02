#pragma once

// JSON job runner behind the qgroot command-line tool. A job is one JSON object
// {"matrix": [[...]], "l": N, "cmd": "...", ...parameters}; the result is one
// JSON object with deterministic key order.

#include "braidmono.hpp"
#include "repcat.hpp"
#include "ribbon.hpp"

#include <json.hpp>

#include <set>
#include <string>

namespace qgroot::cli {

using Json = nlohmann::ordered_json;

/// Raised for configs that do not parse or do not match the schema (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Result {
    int exit_code = 0;
    Json body;
    std::string text() const { return body.dump() + "\n"; }
};

// ---------------------------------------------------------------------------
// Wire encoding

inline Json encode(const Rational& q) {
    if (is_integer(q) && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return q.get_str();
}
inline Json encode(const Integer& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}
inline Json encode(const Weight& w) {
    Json a = Json::array();
    for (const auto& q : w.c) a.push_back(encode(q));
    return a;
}
inline Json encode(const Coweight& v) { return Json(v); }
inline Json encode(const RootOfUnity& r) { return Json::array({r.k, r.N}); }
inline Json encode(const CycloElem& x) {
    Json a = Json::array();
    for (const auto& q : x.coeffs()) a.push_back(encode(q));
    return a;
}
inline Json encode(const Character& ch) {
    Json a = Json::array();
    for (const auto& [w, m] : ch) a.push_back(Json{{"weight", encode(w)}, {"mult", m}});
    return a;
}
inline Json encode_columns(const RatMatrix& m) {
    Json cols = Json::array();
    const std::size_t n = m.size();
    for (std::size_t c = 0; c < n; ++c) {
        Json col = Json::array();
        for (std::size_t r = 0; r < n; ++r) col.push_back(encode(m[r][c]));
        cols.push_back(col);
    }
    return cols;
}

// ---------------------------------------------------------------------------
// Config parsing

inline Rational parse_scalar(const Json& j, const std::string& what) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::exception&) {
            throw ConfigError(what + ": malformed rational '" + j.get<std::string>() + "'");
        }
    }
    throw ConfigError(what + ": expected an integer or a \"p/q\" string");
}

inline Weight parse_weight(const Json& j, std::size_t rank, const std::string& what) {
    if (!j.is_array()) throw ConfigError(what + ": expected an array");
    Weight w;
    for (const auto& x : j) w.c.push_back(parse_scalar(x, what));
    if (w.size() != rank) throw ConfigError(what + ": expected " + std::to_string(rank) + " coordinates");
    return w;
}

inline Coweight parse_coweight(const Json& j, std::size_t rank, const std::string& what) {
    if (!j.is_array()) throw ConfigError(what + ": expected an array");
    Coweight v;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw ConfigError(what + ": expected integers");
        v.push_back(x.get<long>());
    }
    if (v.size() != rank) throw ConfigError(what + ": expected " + std::to_string(rank) + " coordinates");
    return v;
}

inline long parse_long(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) throw ConfigError(what + ": expected an integer");
    return j.get<long>();
}

inline Flavour parse_flavour(const Json& j) {
    if (!j.is_string()) throw ConfigError("flavour: expected a string");
    const auto s = j.get<std::string>();
    if (s == "J") return Flavour::J;
    if (s == "Sign") return Flavour::Sign;
    if (s == "I") return Flavour::I;
    throw ConfigError("flavour: expected one of J, Sign, I");
}

namespace detail {

struct Command {
    std::set<std::string> required, optional;
};

inline const std::map<std::string, Command>& commands() {
    static const std::map<std::string, Command> table = {
        {"numerology", {{}, {}}},
        {"lattices", {{}, {}}},
        {"alcove", {{}, {}}},
        {"shuffle-dims", {{}, {"degree_cap"}}},
        {"radical", {{"nu"}, {}}},
        {"verma", {{"weight"}, {}}},
        {"simple", {{"weight"}, {}}},
        {"tensor-char", {{"weights"}, {}}},
        {"blocks", {{"weights"}, {}}},
        {"ribbon", {{"weight"}, {"mu"}}},
        {"wzw-compare", {{"kappa"}, {}}},
        {"monodromy", {{"nu"}, {"flavour", "mu", "mu1", "mu2"}}},
        {"factorization-check", {{"mu", "nu1", "nu2"}, {"nu3", "flavour"}}},
        {"admissible", {{"weights", "nu"}, {"g"}}},
        {"heisenberg-rank", {{"g"}, {}}},
    };
    return table;
}

class Job {
public:
    Job(const Json& cfg, const CartanContext& ctx) : cfg_(cfg), ctx_(ctx) {}

    Weight weight(const std::string& key) const { return parse_weight(cfg_.at(key), ctx_.rank(), key); }
    Coweight coweight(const std::string& key) const { return parse_coweight(cfg_.at(key), ctx_.rank(), key); }
    std::vector<Weight> weights(const std::string& key) const {
        const Json& a = cfg_.at(key);
        if (!a.is_array()) throw ConfigError(key + ": expected an array of weights");
        std::vector<Weight> out;
        for (const auto& w : a) out.push_back(parse_weight(w, ctx_.rank(), key));
        return out;
    }
    bool has(const std::string& key) const { return cfg_.contains(key); }
    const Json& at(const std::string& key) const { return cfg_.at(key); }
    Flavour flavour() const { return has("flavour") ? parse_flavour(at("flavour")) : Flavour::I; }

private:
    const Json& cfg_;
    const CartanContext& ctx_;
};

inline Json numerology(const CartanContext& ctx) {
    Json out;
    out["rank"] = ctx.rank();
    out["delta"] = ctx.delta();
    out["d"] = ctx.datum.d;
    out["d_i"] = ctx.datum.d_i;
    out["l"] = ctx.l;
    out["ell"] = ctx.ell;
    out["ell_i"] = ctx.ell_i;
    Json coroots = Json::array(), roots = Json::array(), ells = Json::array();
    for (const auto& p : ctx.positive) {
        coroots.push_back(p.coroot);
        roots.push_back(encode(ctx.root_weight(p)));
        ells.push_back(p.ell);
    }
    out["positive_coroots"] = coroots;
    out["positive_roots"] = roots;
    out["ell_beta"] = ells;
    out["ell_beta_consistent"] = ctx.ell_beta_consistent;
    out["rho"] = encode(ctx.rho);
    out["rho_ell"] = encode(ctx.rho_ell);
    out["rho_half_sum_agrees"] = rho_half_sum(ctx) == ctx.rho;
    out["rho_ell_half_sum_agrees"] = rho_ell_half_sum(ctx) == ctx.rho_ell;
    out["gamma0"] = ctx.gamma0;
    out["beta0"] = ctx.beta0;
    out["h"] = ctx.h;
    out["dim_g"] = ctx.dim_g;
    const long t = twelve_rho_rho(ctx);
    out["twelve_rho_rho"] = t;
    out["strange_formula"] = t == ctx.datum.d * ctx.h * ctx.dim_g;
    return out;
}

inline Json run_command(const std::string& cmd, const Job& job, const CartanContext& ctx) {
    Json out;
    if (cmd == "numerology") return numerology(ctx);
    if (cmd == "lattices") {
        const auto& L = ctx.lattices;
        out["y_ell_basis"] = encode_columns(L.y_ell_basis);
        out["x_ell_basis"] = encode_columns(L.x_ell_basis);
        out["dd_X"] = encode(L.dd_X);
        out["dd_Xell"] = encode(L.dd_Xell);
        return out;
    }
    if (cmd == "alcove") {
        Json a = Json::array();
        for (const auto& w : alcove(ctx)) a.push_back(encode(w));
        out["alcove"] = a;
        return out;
    }
    if (cmd == "heisenberg-rank") {
        const long g = parse_long(job.at("g"), "g");
        if (g < 0) throw PreconditionError("g must be nonnegative");
        out["g"] = g;
        out["dd_Xell"] = encode(ctx.lattices.dd_Xell);
        out["rank"] = encode(heisenberg_rank(ctx, static_cast<unsigned long>(g)));
        return out;
    }
    if (cmd == "ribbon") {
        const Weight lambda = job.weight("weight");
        const Weight mu = job.has("mu") ? job.weight("mu") : lambda;
        const RootOfUnity b = balance_scalar(ctx, lambda), r = braiding_scalar(ctx, lambda, mu),
                          c = central_charge(ctx), t = tangent_loop_scalar(ctx, lambda);
        out["n"] = encode(n_function(ctx, lambda));
        out["balance_exponent"] = b.k;
        out["braiding_exponent"] = r.k;
        out["central_charge_exponent"] = c.k;
        out["tangent_exponent"] = t.k;
        out["modulus"] = c.N;
        return out;
    }
    if (cmd == "wzw-compare") {
        const auto w = wzw_compare(ctx, parse_long(job.at("kappa"), "kappa"));
        out["matches"] = w.matches;
        out["lhs_exp"] = w.lhs_exp;
        out["rhs_exp"] = w.rhs_exp;
        out["modulus"] = w.modulus;
        return out;
    }
    if (cmd == "admissible") {
        const long g = job.has("g") ? parse_long(job.at("g"), "g") : 0;
        out["admissible"] = admissible(ctx, job.weights("weights"), job.coweight("nu"), g);
        return out;
    }
    if (cmd == "factorization-check") {
        std::optional<Coweight> nu3;
        if (job.has("nu3")) nu3 = job.coweight("nu3");
        std::vector<std::string> why;
        out["holds"] = factorization_check(ctx, job.weight("mu"), job.coweight("nu1"), job.coweight("nu2"), nu3,
                                           job.flavour(), &why);
        if (!why.empty()) out["failures"] = why;
        return out;
    }
    if (cmd == "monodromy") {
        const Coweight nu = job.coweight("nu");
        const Flavour fl = job.flavour();
        out["flavour"] = flavour_name(fl);
        out["modulus"] = ctx.fine_field.order();
        if (job.has("mu1") || job.has("mu2")) {
            if (!job.has("mu1") || !job.has("mu2")) throw ConfigError("two-point monodromy needs both mu1 and mu2");
            const auto rep = two_point_monodromy(ctx, job.weight("mu1"), job.weight("mu2"), nu, fl);
            out["z_loop"] = Json::array({rep.z_loop, rep.N});
            Json gens = Json::object();
            for (const auto& [w, e] : rep.exponent)
                for (const auto& [label, k] : e) gens[label + "@" + word_label(w)] = Json::array({k, rep.N});
            out["generators"] = gens;
            out["fusion_degeneration"] = fusion_degeneration_check(ctx, rep.mu1, rep.mu2, nu, fl);
            return out;
        }
        const Weight mu = job.has("mu") ? job.weight("mu") : Weight::zero(ctx.rank());
        const auto rep = standard_monodromy(ctx, fl, mu, nu);
        Json gens = Json::object();
        for (const auto& g : rep.presentation.generators)
            gens[generator_label(g)] = Json::array({rep.exponent.at(g), rep.N});
        out["objects"] = rep.presentation.objects.size();
        out["generators"] = gens;
        const auto chk = verify_relations(rep);
        out["relations_checked"] = chk.checked;
        out["relations_hold"] = chk.ok;
        return out;
    }

    // Commands below need u^-.
    if (cmd == "shuffle-dims") {
        const long cap = job.has("degree_cap") ? parse_long(job.at("degree_cap"), "degree_cap") : 64;
        const UMinus u(ctx, cap);
        Json pieces = Json::array();
        for (const auto& [nu, p] : u.pieces()) pieces.push_back(Json{{"nu", nu}, {"dim", p.dim()}});
        out["by_degree"] = u.degree_dims();
        out["total"] = u.total_dim();
        out["pieces"] = pieces;
        return out;
    }
    if (cmd == "radical") {
        const Coweight nu = job.coweight("nu");
        const GramData g = gram_radical(ctx, nu);
        Json words = Json::array(), quot = Json::array(), rad = Json::array();
        for (const auto& w : g.word_basis) words.push_back(w);
        for (const auto& w : g.quotient_words) quot.push_back(w);
        for (const auto& v : g.radical_basis) {
            Json vec = Json::array();
            for (const auto& x : v) vec.push_back(encode(x));
            rad.push_back(vec);
        }
        out["nu"] = nu;
        out["field_order"] = ctx.zeta_field.order();
        out["words"] = words;
        out["rank"] = g.rank;
        out["quotient_words"] = quot;
        out["radical_basis"] = rad;
        return out;
    }
    const UMinus u(ctx);
    if (cmd == "verma") {
        const auto M = verma(ctx, u, job.weight("weight"));
        out["dim"] = M.total_dim();
        out["char"] = encode(M.character());
        return out;
    }
    if (cmd == "simple") {
        const auto L = simple(ctx, u, job.weight("weight"));
        out["dim"] = L.module.total_dim();
        out["char"] = encode(L.character);
        return out;
    }
    if (cmd == "tensor-char") {
        const auto ws = job.weights("weights");
        if (ws.empty()) throw PreconditionError("tensor-char: empty weight list");
        std::optional<WeightModule> T;
        for (const auto& w : ws) {
            auto L = simple(ctx, u, w).module;
            T = T ? tensor(*T, L) : std::move(L);
        }
        out["dim"] = T->total_dim();
        out["char"] = encode(T->character());
        return out;
    }
    if (cmd == "blocks") {
        std::vector<std::string> warnings;
        out["dim"] = conformal_block_dim(ctx, u, job.weights("weights"), &warnings);
        if (!warnings.empty()) out["warnings"] = warnings;
        return out;
    }
    throw ConfigError("unknown cmd '" + cmd + "'");
}

}  // namespace detail

inline Result run(const Json& cfg) {
    try {
        if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
        for (const char* key : {"matrix", "l", "cmd"})
            if (!cfg.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
        if (!cfg.at("cmd").is_string()) throw ConfigError("cmd: expected a string");
        const std::string cmd = cfg.at("cmd").get<std::string>();
        auto it = detail::commands().find(cmd);
        if (it == detail::commands().end()) throw ConfigError("unknown cmd '" + cmd + "'");
        for (const auto& [key, value] : cfg.items()) {
            if (key == "matrix" || key == "l" || key == "cmd") continue;
            if (!it->second.required.contains(key) && !it->second.optional.contains(key))
                throw ConfigError("unknown field '" + key + "' for cmd '" + cmd + "'");
        }
        for (const auto& key : it->second.required)
            if (!cfg.contains(key)) throw ConfigError("missing field '" + key + "' for cmd '" + cmd + "'");
        const Json& mj = cfg.at("matrix");
        if (!mj.is_array()) throw ConfigError("matrix: expected an array of rows");
        CartanMatrix matrix;
        for (const auto& row : mj) {
            if (!row.is_array()) throw ConfigError("matrix: expected an array of rows");
            std::vector<long> r;
            for (const auto& x : row) r.push_back(parse_long(x, "matrix"));
            matrix.push_back(std::move(r));
        }
        const long l = parse_long(cfg.at("l"), "l");
        const CartanContext ctx = build_context(matrix, l);
        const detail::Job job(cfg, ctx);
        Json body = detail::run_command(cmd, job, ctx);
        if (!ctx.warnings.empty()) body["context_warnings"] = ctx.warnings;
        return {0, std::move(body)};
    } catch (const ConfigError& e) {
        return {2, Json{{"error", e.what()}}};
    } catch (const Json::exception& e) {
        return {2, Json{{"error", std::string("malformed config: ") + e.what()}}};
    } catch (const PreconditionError& e) {
        return {1, Json{{"error", e.what()}}};
    } catch (const DivisionByZero& e) {
        return {1, Json{{"error", e.what()}}};
    } catch (const SupportCapExceeded& e) {
        return {1, Json{{"error", e.what()}}};
    }
}

inline Result run(const std::string& text) {
    Json cfg;
    try {
        cfg = Json::parse(text);
    } catch (const Json::parse_error& e) {
        return {2, Json{{"error", std::string("malformed config: ") + e.what()}}};
    }
    return run(cfg);
}

}  // namespace qgroot::cli
