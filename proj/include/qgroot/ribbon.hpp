#pragma once

// Ribbon scalars as powers of zeta' (N = 2 delta l): braiding on highest
// components, the balance, the multiplicative central charge and its WZW form.

#include "cartan.hpp"

namespace qgroot {

/// generator^k in a cyclotomic field of order N.
struct RootOfUnity {
    long k = 0;
    long N = 1;

    CycloElem value(const Field& f) const { return f.root(k * (f.order() / N)); }
    friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
};

inline RootOfUnity fine_power(const CartanContext& ctx, const Rational& q) {
    return {ctx.zeta_fine_exponent(q), ctx.fine_field.order()};
}

/// zeta^{lambda . mu}
inline RootOfUnity braiding_scalar(const CartanContext& ctx, const Weight& lambda, const Weight& mu) {
    if (!ctx.in_X_ell(lambda) || !ctx.in_X_ell(mu)) throw PreconditionError("braiding scalar needs weights in X_ell");
    return fine_power(ctx, ctx.dot(lambda, mu));
}

/// zeta^{n(lambda)}
inline RootOfUnity balance_scalar(const CartanContext& ctx, const Weight& lambda) {
    return fine_power(ctx, n_function(ctx, lambda));
}

/// 12 rho.rho, asserted integral.
inline long twelve_rho_rho(const CartanContext& ctx) {
    Rational v = 12 * ctx.dot(ctx.rho, ctx.rho);
    if (!is_integer(v)) throw std::logic_error("12 rho.rho is not an integer");
    return to_long(v);
}

/// c = (-1)^{card I} zeta^{-12 rho.rho}
inline RootOfUnity central_charge(const CartanContext& ctx) {
    const long N = ctx.fine_field.order();
    const long sign = static_cast<long>(ctx.rank() % 2) * (N / 2);
    return {positive_mod(sign + ctx.zeta_fine_exponent(Rational(-twelve_rho_rho(ctx))), N), N};
}

struct WzwComparison {
    bool matches = false;
    long lhs_exp = 0;  // central charge
    long rhs_exp = 0;  // exp(pi i (kappa - h) dim g / kappa)
    long modulus = 1;
};

/// With zeta = exp(pi i / d kappa), exp(pi i x / kappa) = zeta^{d x}.
inline WzwComparison wzw_compare(const CartanContext& ctx, long kappa) {
    const long d = ctx.datum.d;
    if (kappa <= 0 || ctx.l != 2 * d * kappa)
        throw PreconditionError("wzw_compare needs l = 2 d kappa (l = " + std::to_string(ctx.l) + ", d = " +
                                std::to_string(d) + ", kappa = " + std::to_string(kappa) + ")");
    WzwComparison w;
    w.modulus = ctx.fine_field.order();
    w.lhs_exp = central_charge(ctx).k;
    w.rhs_exp = ctx.zeta_fine_exponent(Rational(d * (kappa - ctx.h) * ctx.dim_g));
    w.matches = w.lhs_exp == w.rhs_exp;
    return w;
}

}  // namespace qgroot
