#include "thriftidx/snapshot.hpp"

#include "thriftidx/error.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

namespace thriftidx {

std::string_view to_string(Weighting w) { return w == Weighting::Gdp ? "gdp" : "unweighted"; }
std::string_view to_string(Convention c) {
    return c == Convention::BeginOfPeriod ? "begin-of-period" : "end-of-period";
}
std::string_view to_string(MissingGdpPolicy m) { return m == MissingGdpPolicy::Exclude ? "exclude" : "unit-weight"; }
std::string_view to_string(Aggregation a) {
    return a == Aggregation::PointwiseMean ? "pointwise" : "ratio-of-means";
}
std::string_view to_string(Quantity q) { return q == Quantity::Ratio ? "ratio" : "theta"; }
std::string_view to_string(SmoothingMode m) { return m == SmoothingMode::Loess ? "loess" : "global-fit"; }

namespace {

ojson opt(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::optional<double> get_opt(const ojson& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

template <typename E>
E enum_from(const ojson& j, const char* key, std::initializer_list<E> values) {
    const auto text = j.at(key).get<std::string>();
    for (const E v : values)
        if (to_string(v) == text) return v;
    throw Error(ErrorCode::BadSnapshot, std::string("unknown value '") + text + "' for " + key);
}

std::optional<YearlySeries> try_yearly(const DerivedSet& derived, const AnalysisConfig& config, Quantity q) {
    try {
        return yearly_series(derived, config, q, config.display_screen);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyYearRange) throw;
        return std::nullopt;
    }
}

}  // namespace

AnalysisSnapshot build_snapshot(const PanelSet& panels, const AnalysisConfig& config, unsigned threads) {
    config.validate();
    AnalysisSnapshot snap;
    snap.config = config;
    snap.fingerprint = dataset_fingerprint(panels);
    snap.derived = derive_all(panels, config.convention, threads);
    snap.ladder = ladder_sweep(snap.derived, config);
    snap.yearly_ratio = try_yearly(snap.derived, config, Quantity::Ratio);
    snap.yearly_theta = try_yearly(snap.derived, config, Quantity::Theta);
    return snap;
}

std::string dataset_fingerprint(const PanelSet& panels) {
    std::ostringstream dump;
    write_panel_csv(dump, panels);
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : dump.str()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ojson config_json(const AnalysisConfig& c) {
    ojson j;
    j["screen_ladder"] = c.screen_ladder;
    j["weighting"] = to_string(c.weighting);
    j["convention"] = to_string(c.convention);
    j["year_range"] = {c.first_year, c.last_year};
    j["missing_gdp_policy"] = to_string(c.missing_gdp);
    j["aggregation"] = to_string(c.aggregation);
    j["display_screen"] = c.display_screen;
    j["loess"] = {{"span", c.loess.span}, {"degree", c.loess.degree}};
    return j;
}

AnalysisConfig config_from_json(const ojson& j) {
    AnalysisConfig c;
    c.screen_ladder = j.at("screen_ladder").get<std::vector<double>>();
    c.weighting = enum_from(j, "weighting", {Weighting::Gdp, Weighting::Unweighted});
    c.convention = enum_from(j, "convention", {Convention::BeginOfPeriod, Convention::EndOfPeriod});
    c.first_year = j.at("year_range").at(0).get<int>();
    c.last_year = j.at("year_range").at(1).get<int>();
    c.missing_gdp = enum_from(j, "missing_gdp_policy", {MissingGdpPolicy::Exclude, MissingGdpPolicy::UnitWeight});
    c.aggregation = enum_from(j, "aggregation", {Aggregation::PointwiseMean, Aggregation::RatioOfMeans});
    c.display_screen = j.at("display_screen").get<double>();
    c.loess.span = j.at("loess").at("span").get<double>();
    c.loess.degree = j.at("loess").at("degree").get<int>();
    return c;
}

ojson regression_json(const std::optional<stats::RegressionResult>& r, const std::string& note) {
    if (!r) return ojson{{"available", false}, {"note", note}};
    ojson j;
    j["available"] = true;
    j["slope"] = r->slope;
    j["intercept"] = r->intercept;
    j["slope_se"] = opt(r->slope_se);
    j["r2"] = r->r2;
    j["n"] = r->n;
    j["t_vs_one"] = opt(r->t_vs_one);
    j["perfect_fit"] = r->perfect_fit;
    return j;
}

namespace {
void regression_from_json(const ojson& j, std::optional<stats::RegressionResult>& r, std::string& note) {
    if (!j.at("available").get<bool>()) {
        note = j.at("note").get<std::string>();
        return;
    }
    stats::RegressionResult out;
    out.slope = j.at("slope").get<double>();
    out.intercept = j.at("intercept").get<double>();
    out.slope_se = get_opt(j, "slope_se");
    out.r2 = j.at("r2").get<double>();
    out.n = j.at("n").get<std::size_t>();
    out.t_vs_one = get_opt(j, "t_vs_one");
    out.perfect_fit = j.at("perfect_fit").get<bool>();
    r = out;
}
}  // namespace

ojson summary_json(const AggregateSummary& s) {
    ojson j;
    j["screen"] = s.screen;
    j["weighting"] = to_string(s.weighting);
    j["empty"] = s.empty;
    j["mean_ratio"] = opt(s.mean_ratio);
    j["mean_theta"] = opt(s.mean_theta);
    j["n_ratio"] = s.n_ratio;
    j["n_theta"] = s.n_theta;
    j["n_levels"] = s.n_levels;
    j["n_diffs"] = s.n_diffs;
    j["countries"] = s.countries;
    j["reg_levels"] = regression_json(s.reg_levels, s.reg_levels_note);
    j["reg_diffs"] = regression_json(s.reg_diffs, s.reg_diffs_note);
    return j;
}

AggregateSummary summary_from_json(const ojson& j) {
    AggregateSummary s;
    s.screen = j.at("screen").get<double>();
    s.weighting = enum_from(j, "weighting", {Weighting::Gdp, Weighting::Unweighted});
    s.empty = j.at("empty").get<bool>();
    s.mean_ratio = get_opt(j, "mean_ratio");
    s.mean_theta = get_opt(j, "mean_theta");
    s.n_ratio = j.at("n_ratio").get<std::size_t>();
    s.n_theta = j.at("n_theta").get<std::size_t>();
    s.n_levels = j.at("n_levels").get<std::size_t>();
    s.n_diffs = j.at("n_diffs").get<std::size_t>();
    s.countries = j.at("countries").get<std::size_t>();
    regression_from_json(j.at("reg_levels"), s.reg_levels, s.reg_levels_note);
    regression_from_json(j.at("reg_diffs"), s.reg_diffs, s.reg_diffs_note);
    return s;
}

ojson yearly_json(const YearlySeries& y) {
    ojson j;
    j["quantity"] = to_string(y.quantity);
    j["screen"] = y.screen;
    j["smoothing"] = to_string(y.smoothing);
    ojson rows = ojson::array();
    for (const auto& e : y.entries) {
        rows.push_back({{"year", e.year},
                        {"mean", e.mean},
                        {"count", e.count},
                        {"total_weight", e.total_weight},
                        {"smoothed", e.smoothed},
                        {"smoothing_fallback", e.smoothing_fallback}});
    }
    j["entries"] = std::move(rows);
    return j;
}

YearlySeries yearly_from_json(const ojson& j) {
    YearlySeries y;
    y.quantity = enum_from(j, "quantity", {Quantity::Ratio, Quantity::Theta});
    y.screen = j.at("screen").get<double>();
    y.smoothing = enum_from(j, "smoothing", {SmoothingMode::Loess, SmoothingMode::GlobalFit});
    for (const auto& r : j.at("entries")) {
        YearlyEntry e;
        e.year = r.at("year").get<int>();
        e.mean = r.at("mean").get<double>();
        e.count = r.at("count").get<std::size_t>();
        e.total_weight = r.at("total_weight").get<double>();
        e.smoothed = r.at("smoothed").get<double>();
        e.smoothing_fallback = r.at("smoothing_fallback").get<bool>();
        y.entries.push_back(e);
    }
    return y;
}

ojson point_json(const DerivedPoint& p) {
    ojson j;
    j["year"] = p.year;
    j["s_star"] = opt(p.s_star);
    j["g"] = opt(p.g);
    j["d_s_star"] = opt(p.d_s_star);
    j["d_g"] = opt(p.d_g);
    j["ratio"] = opt(p.ratio);
    j["theta"] = opt(p.theta);
    j["weight"] = opt(p.weight);
    return j;
}

DerivedPoint point_from_json(const std::string& country, const ojson& j) {
    DerivedPoint p;
    p.country = country;
    p.year = j.at("year").get<int>();
    p.s_star = get_opt(j, "s_star");
    p.g = get_opt(j, "g");
    p.d_s_star = get_opt(j, "d_s_star");
    p.d_g = get_opt(j, "d_g");
    p.ratio = get_opt(j, "ratio");
    p.theta = get_opt(j, "theta");
    p.weight = get_opt(j, "weight");
    return p;
}

std::string snapshot_to_json(const AnalysisSnapshot& s) {
    ojson j;
    j["schema_version"] = s.schema_version;
    j["fingerprint"] = s.fingerprint;
    j["config"] = config_json(s.config);
    ojson ladder = ojson::array();
    for (const auto& l : s.ladder) ladder.push_back(summary_json(l));
    j["ladder"] = std::move(ladder);
    ojson yearly;
    yearly["ratio"] = s.yearly_ratio ? yearly_json(*s.yearly_ratio) : ojson(nullptr);
    yearly["theta"] = s.yearly_theta ? yearly_json(*s.yearly_theta) : ojson(nullptr);
    j["yearly"] = std::move(yearly);
    ojson countries = ojson::array();
    for (const auto& [code, points] : s.derived) {
        ojson rows = ojson::array();
        for (const auto& p : points) rows.push_back(point_json(p));
        countries.push_back({{"country", code}, {"points", std::move(rows)}});
    }
    j["countries"] = std::move(countries);
    return j.dump(1) + "\n";
}

AnalysisSnapshot snapshot_from_json(std::string_view text) {
    try {
        const auto j = ojson::parse(text);
        AnalysisSnapshot s;
        s.schema_version = j.at("schema_version").get<std::string>();
        if (s.schema_version != kSnapshotSchema)
            throw Error(ErrorCode::BadSnapshot, "unsupported snapshot schema '" + s.schema_version + "'");
        s.fingerprint = j.at("fingerprint").get<std::string>();
        s.config = config_from_json(j.at("config"));
        for (const auto& l : j.at("ladder")) s.ladder.push_back(summary_from_json(l));
        if (const auto& y = j.at("yearly").at("ratio"); !y.is_null()) s.yearly_ratio = yearly_from_json(y);
        if (const auto& y = j.at("yearly").at("theta"); !y.is_null()) s.yearly_theta = yearly_from_json(y);
        for (const auto& c : j.at("countries")) {
            const auto code = c.at("country").get<std::string>();
            auto& points = s.derived[code];
            for (const auto& p : c.at("points")) points.push_back(point_from_json(code, p));
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadSnapshot, std::string("malformed snapshot: ") + e.what());
    }
}

}  // namespace thriftidx
