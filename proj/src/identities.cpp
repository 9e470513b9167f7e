#include "thriftidx/identities.hpp"

#include "thriftidx/error.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>

namespace thriftidx::identities {

IdentityLedger IdentityLedger::from_components(double d_k, double c_s, double c_p, double w_s, double d_hd) {
    IdentityLedger l;
    l.d_k = d_k;
    l.c_s = c_s;
    l.c_p = c_p;
    l.w_s = w_s;
    l.d_hd = d_hd;
    l.c = c_s + c_p;
    l.d_h = human_capital_delta(c_s, w_s, d_hd);
    return l;
}

double net_output_simple(double d_k, double c) { return d_k + c; }

double net_output_extended(double d_k, double d_h, double c_p) { return d_k + d_h + c_p; }

double human_capital_delta(double c_s, double w_s, double d_hd) { return c_s + w_s - d_hd; }

double scaled_tolerance(const IdentityLedger& l, double tol) {
    double scale = 1.0;
    for (const double v : {l.d_k, l.c, l.c_s, l.c_p, l.w_s, l.d_hd, l.d_h}) scale = std::max(scale, std::abs(v));
    if (l.y) scale = std::max(scale, std::abs(*l.y));
    return tol * scale;
}

IdentityReport check_net_output(const IdentityLedger& l, double tol) {
    for (const double v : {l.d_k, l.c, l.c_s, l.c_p, l.w_s, l.d_hd, l.d_h})
        if (!std::isfinite(v)) throw Error(ErrorCode::InvariantViolation, "ledger entries must be finite");

    IdentityReport r;
    r.tolerance = scaled_tolerance(l, tol);
    const double split_gap = l.c - (l.c_s + l.c_p);
    if (std::abs(split_gap) > r.tolerance)
        throw Error(ErrorCode::InvariantViolation,
                    "consumption split violated: C - (C_s + C_p) = " + std::to_string(split_gap));
    const double human_gap = l.d_h - human_capital_delta(l.c_s, l.w_s, l.d_hd);
    if (std::abs(human_gap) > r.tolerance)
        throw Error(ErrorCode::InvariantViolation,
                    "human capital relation violated: dH - (C_s + W_s - D(H)) = " + std::to_string(human_gap));

    r.y_extended = net_output_extended(l.d_k, l.d_h, l.c_p);
    r.y_reduced = l.d_k + l.c + l.w_s - l.d_hd;
    r.residual = r.y_extended - r.y_reduced;
    if (l.y && std::abs(*l.y - r.y_extended) > r.tolerance)
        throw Error(ErrorCode::InvariantViolation, "stated net output disagrees with dK + dH + C_p");
    r.pass = std::abs(r.residual) <= r.tolerance;
    return r;
}

}  // namespace thriftidx::identities
