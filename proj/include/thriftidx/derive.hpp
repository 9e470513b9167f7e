#pragma once

#include "thriftidx/ingest.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace thriftidx {

/// Which capital stock divides saving and the capital change.
///   BeginOfPeriod: s*_t = S_t / K_{t-1},  g_t = (K_t - K_{t-1}) / K_{t-1}
///   EndOfPeriod:   s*_t = S_t / K_t,      g_t = (K_t - K_{t-1}) / K_t
enum class Convention { BeginOfPeriod, EndOfPeriod };

/// Derived quantities for one country-year. Every field other than the key
/// is absent when its inputs are missing; nothing is ever imputed.
struct DerivedPoint {
    std::string country;
    int year = 0;
    std::optional<double> s_star;    // thrift
    std::optional<double> g;         // capital growth rate
    std::optional<double> d_s_star;  // thrift change
    std::optional<double> d_g;       // capital acceleration
    std::optional<double> ratio;     // s* / g
    std::optional<double> theta;     // thrift index, d_s_star / d_g
    std::optional<double> weight;    // same-year GDP

    bool operator==(const DerivedPoint&) const = default;
};

enum class ScreenTarget {
    Growth,        // |g|, used by level statistics
    Acceleration,  // |d_g|, used by difference statistics
};

struct ScreenSpec {
    double threshold = 0.0;
    ScreenTarget target = ScreenTarget::Acceleration;
};

/// The display ladder: unscreened plus seven successive levels.
inline const std::vector<double>& default_screen_ladder() {
    static const std::vector<double> ladder{0.0, 0.01, 0.025, 0.05, 0.075, 0.10, 0.125, 0.15};
    return ladder;
}

/// Derives one point per observation of a single year-sorted country panel.
/// Differences are only taken between consecutive calendar years; a gap in
/// the panel breaks the chain.
std::vector<DerivedPoint> derive_series(const Panel& panel,
                                        Convention convention = Convention::BeginOfPeriod);

/// True when the point's screened denominator is defined and its absolute
/// value is at least the threshold (boundary inclusive).
bool passes_screen(const DerivedPoint& point, const ScreenSpec& spec);

std::vector<DerivedPoint> apply_screen(const std::vector<DerivedPoint>& points, const ScreenSpec& spec);

/// `country,year,s_star,g,d_s_star,d_g,ratio,theta,weight`; absent fields are
/// written as empty cells.
void write_derived_csv(std::ostream& out, const std::vector<DerivedPoint>& points);

}  // namespace thriftidx
