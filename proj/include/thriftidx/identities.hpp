#pragma once

#include <optional>

namespace thriftidx::identities {

/// Synthetic national-accounting flows, with human capital, in one currency
/// unit. `c` and `d_h` are derived by the ledger relations when not given.
struct IdentityLedger {
    double d_k = 0.0;   // capital growth
    double c = 0.0;     // total consumption
    double c_s = 0.0;   // invested consumption
    double c_p = 0.0;   // pure consumption
    double w_s = 0.0;   // self-invested work
    double d_hd = 0.0;  // human depreciation D(H)
    double d_h = 0.0;   // human-capital growth
    std::optional<double> y;  // net output, when stated

    /// Fills c = c_s + c_p and d_h = c_s + w_s - D(H).
    static IdentityLedger from_components(double d_k, double c_s, double c_p, double w_s, double d_hd);
};

/// Net output neglecting human capital.
double net_output_simple(double d_k, double c);

/// Net output with human capital as the last link of the value-added chain.
double net_output_extended(double d_k, double d_h, double c_p);

double human_capital_delta(double c_s, double w_s, double d_hd);

struct IdentityReport {
    double y_extended = 0.0;  // d_k + d_h + c_p
    double y_reduced = 0.0;   // d_k + c + w_s - D(H)
    double residual = 0.0;    // y_extended - y_reduced
    double tolerance = 0.0;   // after scaling
    bool pass = false;
};

/// Absolute tolerance scaled by max(1, largest |entry|).
double scaled_tolerance(const IdentityLedger& ledger, double tol);

/// Checks the consumption split and the human-capital relation, then compares
/// net output computed both ways. Throws Error(InvariantViolation) when the
/// ledger itself is inconsistent (including a stated y that disagrees).
IdentityReport check_net_output(const IdentityLedger& ledger, double tol = 1e-12);

}  // namespace thriftidx::identities
