#include "thriftidx/derive.hpp"

#include "text_util.hpp"

#include <cmath>
#include <ostream>

namespace thriftidx {

std::vector<DerivedPoint> derive_series(const Panel& panel, Convention convention) {
    std::vector<DerivedPoint> out;
    out.reserve(panel.size());
    for (std::size_t i = 0; i < panel.size(); ++i) {
        const auto& cur = panel[i];
        DerivedPoint p;
        p.country = cur.country;
        p.year = cur.year;
        p.weight = cur.gdp;

        if (i > 0 && panel[i - 1].year == cur.year - 1) {
            const auto& prev = panel[i - 1];
            const double base = convention == Convention::BeginOfPeriod ? prev.k : cur.k;
            p.s_star = cur.s_net / base;
            p.g = (cur.k - prev.k) / base;

            const auto& before = out.back();
            if (before.s_star && before.g) {
                p.d_s_star = *p.s_star - *before.s_star;
                p.d_g = *p.g - *before.g;
            }
        }
        if (p.g && *p.g != 0.0) p.ratio = *p.s_star / *p.g;
        if (p.d_g && *p.d_g != 0.0) p.theta = *p.d_s_star / *p.d_g;
        out.push_back(std::move(p));
    }
    return out;
}

bool passes_screen(const DerivedPoint& point, const ScreenSpec& spec) {
    const auto& denominator = spec.target == ScreenTarget::Growth ? point.g : point.d_g;
    return denominator && std::abs(*denominator) >= spec.threshold;
}

std::vector<DerivedPoint> apply_screen(const std::vector<DerivedPoint>& points, const ScreenSpec& spec) {
    std::vector<DerivedPoint> out;
    for (const auto& p : points)
        if (passes_screen(p, spec)) out.push_back(p);
    return out;
}

namespace {
void cell(std::ostream& out, const std::optional<double>& v) {
    out << ',';
    if (v) out << detail::format_roundtrip(*v);
}
}  // namespace

void write_derived_csv(std::ostream& out, const std::vector<DerivedPoint>& points) {
    out << "country,year,s_star,g,d_s_star,d_g,ratio,theta,weight\n";
    for (const auto& p : points) {
        out << p.country << ',' << p.year;
        cell(out, p.s_star);
        cell(out, p.g);
        cell(out, p.d_s_star);
        cell(out, p.d_g);
        cell(out, p.ratio);
        cell(out, p.theta);
        cell(out, p.weight);
        out << '\n';
    }
}

}  // namespace thriftidx
