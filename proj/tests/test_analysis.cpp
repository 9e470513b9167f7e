#include "oracles.hpp"
#include "thriftidx/analysis.hpp"
#include "thriftidx/error.hpp"
#include "thriftidx/ingest.hpp"
#include "thriftidx/snapshot.hpp"

#include <gtest/gtest.h>

using namespace thriftidx;

namespace {

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::Io;
}

PanelSet load_fixture() {
    const auto text = oracle::read_text(std::string(THRIFTIDX_TEST_DATA) + "/two_country_wid.csv");
    return assemble_panel(parse_records(text).records, RoleMap{}).panels;
}

DerivedPoint theta_point(const std::string& c, int year, double d_g, double d_s, double w) {
    DerivedPoint p;
    p.country = c;
    p.year = year;
    p.d_g = d_g;
    p.d_s_star = d_s;
    p.theta = d_s / d_g;
    p.weight = w;
    return p;
}

}  // namespace

TEST(GenerateWorld, ThriftByHand) {
    WorldSpec spec;
    spec.kind = WorldKind::Thrift;
    spec.years = 3;
    spec.path = {0.10, 0.20};
    const auto p = generate_world(spec);
    ASSERT_EQ(p.size(), 3u);
    EXPECT_DOUBLE_EQ(p[0].k, 100.0);
    EXPECT_DOUBLE_EQ(p[1].k, 110.0);
    EXPECT_DOUBLE_EQ(p[2].k, 132.0);
    EXPECT_DOUBLE_EQ(p[1].s_net, 10.0);
    EXPECT_DOUBLE_EQ(p[2].s_net, 22.0);
    EXPECT_EQ(p[0].s_net, 0.0);
    EXPECT_EQ(p[2].gdp, p[2].k);
}

TEST(GenerateWorld, FreeGrowthByHand) {
    WorldSpec spec;
    spec.kind = WorldKind::FreeGrowth;
    spec.years = 3;
    spec.path = {0.05, 0.10};
    const auto p = generate_world(spec);
    EXPECT_DOUBLE_EQ(p[1].k, 105.0);
    EXPECT_DOUBLE_EQ(p[2].k, 115.5);
    EXPECT_EQ(p[1].s_net, 0.0);
    EXPECT_EQ(p[2].s_net, 0.0);
}

TEST(GenerateWorld, SeededNoiseIsReproducible) {
    WorldSpec spec;
    spec.years = 10;
    spec.path.assign(9, 0.05);
    spec.noise_sd = 0.02;
    spec.seed = 99;
    EXPECT_EQ(generate_world(spec), generate_world(spec));
    auto other = spec;
    other.seed = 100;
    EXPECT_NE(generate_world(spec), generate_world(other));
    spec.noise_sd = 0;
    EXPECT_EQ(generate_world(spec), generate_world(spec));
}

TEST(GenerateWorld, InvalidSpecs) {
    WorldSpec spec;
    spec.years = 3;
    spec.path = {0.1};
    EXPECT_EQ(code_of([&] { (void)generate_world(spec); }), ErrorCode::InvalidPath);
    spec.path = {0.1, -1.0};
    EXPECT_EQ(code_of([&] { (void)generate_world(spec); }), ErrorCode::InvalidPath);
    spec.path = {0.1, 0.1};
    spec.k0 = 0;
    EXPECT_EQ(code_of([&] { (void)generate_world(spec); }), ErrorCode::InvalidPath);
}

TEST(Worlds, ThriftWorldGivesUnitStatisticsAtEveryScreen) {
    DemoWorldOptions opt;
    opt.kind = WorldKind::Thrift;
    const auto derived = derive_all(generate_worlds(opt), Convention::BeginOfPeriod);
    AnalysisConfig cfg;
    cfg.last_year = 2100;
    for (const double screen : {0.0, 0.01, 0.05, 0.1}) {
        const auto s = pooled_summary(derived, cfg, screen);
        EXPECT_NEAR(*s.mean_ratio, 1.0, 1e-9);
        EXPECT_NEAR(s.reg_levels->slope, 1.0, 1e-9);
        if (s.n_diffs >= 2) {
            EXPECT_NEAR(*s.mean_theta, 1.0, 1e-9);
            EXPECT_NEAR(s.reg_diffs->slope, 1.0, 1e-9);
        }
    }
}

TEST(Worlds, FreeGrowthWorldGivesZeroStatistics) {
    DemoWorldOptions opt;
    opt.kind = WorldKind::FreeGrowth;
    const auto derived = derive_all(generate_worlds(opt), Convention::BeginOfPeriod);
    AnalysisConfig cfg;
    cfg.last_year = 2100;
    const auto s = pooled_summary(derived, cfg, 0.01);
    EXPECT_NEAR(*s.mean_ratio, 0.0, 1e-12);
    EXPECT_NEAR(*s.mean_theta, 0.0, 1e-12);
    EXPECT_NEAR(s.reg_levels->slope, 0.0, 1e-12);
    EXPECT_NEAR(s.reg_diffs->slope, 0.0, 1e-12);
}

TEST(Worlds, DemoCodesAndLengths) {
    DemoWorldOptions opt;
    opt.countries = 12;
    opt.min_years = 5;
    opt.max_years = 9;
    const auto w = generate_worlds(opt);
    ASSERT_EQ(w.size(), 12u);
    EXPECT_TRUE(w.contains("W001"));
    EXPECT_TRUE(w.contains("W012"));
    for (const auto& [c, p] : w) {
        EXPECT_GE(p.size(), 5u);
        EXPECT_LE(p.size(), 9u);
    }
    EXPECT_EQ(generate_worlds(opt), w);
}

TEST(DeriveAll, ThreadCountDoesNotChangeResult) {
    const auto panels = generate_worlds({});
    const auto one = derive_all(panels, Convention::BeginOfPeriod, 1);
    EXPECT_EQ(derive_all(panels, Convention::BeginOfPeriod, 4), one);
    EXPECT_EQ(derive_all(panels, Convention::BeginOfPeriod, 64), one);
}

TEST(PooledSummary, GoldenTwoCountryFixture) {
    const auto golden = oracle::read_golden(std::string(THRIFTIDX_TEST_DATA) + "/two_country_expected.csv");
    const auto derived = derive_all(load_fixture(), Convention::BeginOfPeriod);
    const auto s = pooled_summary(derived, AnalysisConfig{}, 0.01);
    const auto near = [&](double got, const char* key) { EXPECT_NEAR(got, golden.at(key), 1e-12) << key; };
    near(*s.mean_ratio, "mean_ratio");
    near(*s.mean_theta, "mean_theta");
    EXPECT_EQ(s.n_ratio, static_cast<std::size_t>(golden.at("n_ratio")));
    EXPECT_EQ(s.n_theta, static_cast<std::size_t>(golden.at("n_theta")));
    near(s.reg_levels->slope, "levels_slope");
    near(s.reg_levels->intercept, "levels_intercept");
    near(*s.reg_levels->slope_se, "levels_se");
    near(s.reg_levels->r2, "levels_r2");
    near(*s.reg_levels->t_vs_one, "levels_t_vs_one");
    near(s.reg_diffs->slope, "diffs_slope");
    near(s.reg_diffs->intercept, "diffs_intercept");
    near(*s.reg_diffs->slope_se, "diffs_se");
    near(s.reg_diffs->r2, "diffs_r2");
    near(*s.reg_diffs->t_vs_one, "diffs_t_vs_one");
    EXPECT_EQ(s.countries, 2u);

    const auto y = yearly_series(derived, AnalysisConfig{}, Quantity::Ratio, 0.01);
    ASSERT_EQ(y.entries.size(), 3u);
    near(y.entries[0].mean, "yearly_ratio_2001");
    near(y.entries[1].mean, "yearly_ratio_2002");
    near(y.entries[2].mean, "yearly_ratio_2003");
}

TEST(PooledSummary, UnweightedAndMissingGdpPolicies) {
    DerivedSet d;
    d["AA"] = {theta_point("AA", 2000, 0.1, 0.1, 10), theta_point("AA", 2001, 0.1, 0.3, 30)};
    auto nogdp = theta_point("BB", 2000, 0.1, 0.5, 0);
    nogdp.weight.reset();
    d["BB"] = {nogdp};
    AnalysisConfig cfg;
    EXPECT_NEAR(*pooled_summary(d, cfg, 0.01).mean_theta, (1 * 10 + 3 * 30) / 40.0, 1e-12);
    cfg.missing_gdp = MissingGdpPolicy::UnitWeight;
    EXPECT_NEAR(*pooled_summary(d, cfg, 0.01).mean_theta, (1 * 10 + 3 * 30 + 5) / 41.0, 1e-12);
    cfg.weighting = Weighting::Unweighted;
    EXPECT_NEAR(*pooled_summary(d, cfg, 0.01).mean_theta, 3.0, 1e-12);
}

TEST(PooledSummary, RatioOfMeansAggregation) {
    DerivedSet d;
    d["AA"] = {theta_point("AA", 2000, 0.1, 0.1, 1), theta_point("AA", 2001, 0.3, 0.15, 1)};
    AnalysisConfig cfg;
    cfg.aggregation = Aggregation::RatioOfMeans;
    EXPECT_NEAR(*pooled_summary(d, cfg, 0.0).mean_theta, 0.125 / 0.2, 1e-12);
}

TEST(PooledSummary, YearRangeAndEmptyScreen) {
    DerivedSet d;
    d["AA"] = {theta_point("AA", 1970, 0.1, 0.1, 1), theta_point("AA", 2000, 0.02, 0.04, 1)};
    AnalysisConfig cfg;
    const auto s = pooled_summary(d, cfg, 0.0);
    EXPECT_EQ(s.n_theta, 1u);
    EXPECT_NEAR(*s.mean_theta, 2.0, 1e-12);
    EXPECT_FALSE(s.reg_diffs.has_value());
    EXPECT_FALSE(s.reg_diffs_note.empty());
    EXPECT_EQ(code_of([&] { (void)pooled_summary(d, cfg, 0.05); }), ErrorCode::EmptyAfterScreen);
    EXPECT_EQ(code_of([&] { (void)pooled_summary(d, cfg, -1.0); }), ErrorCode::InvalidConfig);
}

TEST(LadderSweep, NoOpScreenGivesEqualCounts) {
    DerivedSet d;
    d["AA"] = {theta_point("AA", 2000, 0.02, 0.01, 1), theta_point("AA", 2001, -0.05, 0.01, 1),
               theta_point("AA", 2002, 0.3, 0.2, 1)};
    AnalysisConfig cfg;
    cfg.screen_ladder = {0.0, 0.01};
    const auto l = ladder_sweep(d, cfg);
    ASSERT_EQ(l.size(), 2u);
    EXPECT_EQ(l[0].n_theta, 3u);
    EXPECT_EQ(l[1].n_theta, 3u);
}

TEST(LadderSweep, PointAtTwoPercentBookkeeping) {
    DerivedSet d;
    d["AA"] = {theta_point("AA", 2000, 0.02, 0.01, 1)};
    const auto l = ladder_sweep(d, AnalysisConfig{});
    ASSERT_EQ(l.size(), 8u);
    EXPECT_EQ(l[0].n_theta, 1u);
    EXPECT_EQ(l[1].n_theta, 1u);
    for (std::size_t i = 2; i < l.size(); ++i) {
        EXPECT_EQ(l[i].n_theta, 0u);
        EXPECT_TRUE(l[i].empty);
    }
}

TEST(LadderSweep, CountsNeverIncreaseOnSyntheticWorlds) {
    for (auto kind : {WorldKind::Thrift, WorldKind::FreeGrowth}) {
        DemoWorldOptions opt;
        opt.kind = kind;
        opt.noise_sd = 0.01;
        AnalysisConfig cfg;
        cfg.last_year = 2100;
        const auto l = ladder_sweep(derive_all(generate_worlds(opt), cfg.convention), cfg);
        for (std::size_t i = 1; i < l.size(); ++i) {
            EXPECT_LE(l[i].n_theta, l[i - 1].n_theta);
            EXPECT_LE(l[i].n_ratio, l[i - 1].n_ratio);
            EXPECT_LE(l[i].n_levels, l[i - 1].n_levels);
            EXPECT_LE(l[i].n_diffs, l[i - 1].n_diffs);
        }
    }
}

TEST(YearlySeries, ThriftThetaIsFlatAtOne) {
    DemoWorldOptions opt;
    AnalysisConfig cfg;
    cfg.last_year = 2100;
    const auto y = yearly_series(derive_all(generate_worlds(opt), cfg.convention), cfg, Quantity::Theta, 0.01);
    EXPECT_EQ(y.smoothing, SmoothingMode::Loess);
    for (const auto& e : y.entries) {
        EXPECT_NEAR(e.mean, 1.0, 1e-9);
        EXPECT_NEAR(e.smoothed, 1.0, 1e-9);
    }
}

TEST(YearlySeries, FreeGrowthRatioIsFlatAtZero) {
    DemoWorldOptions opt;
    opt.kind = WorldKind::FreeGrowth;
    AnalysisConfig cfg;
    cfg.last_year = 2100;
    const auto y = yearly_series(derive_all(generate_worlds(opt), cfg.convention), cfg, Quantity::Ratio, 0.01);
    for (const auto& e : y.entries) {
        EXPECT_NEAR(e.mean, 0.0, 1e-12);
        EXPECT_NEAR(e.smoothed, 0.0, 1e-12);
    }
}

TEST(YearlySeries, TwoYearsByHandAndLineReproduced) {
    // 2000: (0.4 * 1 + 0.6 * 1) / 2 = 0.5; 2001: 0.7 from one country.
    DerivedSet d;
    d["AA"] = {theta_point("AA", 2000, 0.1, 0.04, 1), theta_point("AA", 2001, 0.1, 0.07, 2)};
    d["BB"] = {theta_point("BB", 2000, 0.1, 0.06, 1)};
    const auto y = yearly_series(d, AnalysisConfig{}, Quantity::Theta, 0.01);
    ASSERT_EQ(y.entries.size(), 2u);
    EXPECT_EQ(y.smoothing, SmoothingMode::GlobalFit);
    EXPECT_NEAR(y.entries[0].mean, 0.5, 1e-12);
    EXPECT_EQ(y.entries[0].count, 2u);
    EXPECT_NEAR(y.entries[1].mean, 0.7, 1e-12);
    EXPECT_NEAR(y.entries[0].smoothed, 0.5, 1e-10);
    EXPECT_NEAR(y.entries[1].smoothed, 0.7, 1e-10);
}

TEST(YearlySeries, EmptyRangeRaises) {
    DerivedSet d;
    d["AA"] = {theta_point("AA", 1950, 0.1, 0.04, 1)};
    EXPECT_EQ(code_of([&] { (void)yearly_series(d, AnalysisConfig{}, Quantity::Theta, 0.01); }),
              ErrorCode::EmptyYearRange);
}

TEST(AnalysisConfig, Validation) {
    AnalysisConfig c;
    EXPECT_NO_THROW(c.validate());
    c.screen_ladder = {0.01, 0.01};
    EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::InvalidConfig);
    c = {};
    c.first_year = 2030;
    EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::InvalidConfig);
    c = {};
    c.loess.degree = 0;
    EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::InvalidConfig);
}

TEST(Snapshot, JsonRoundTripIsStable) {
    const auto snap = build_snapshot(load_fixture(), AnalysisConfig{});
    const auto text = snapshot_to_json(snap);
    const auto back = snapshot_from_json(text);
    EXPECT_EQ(snapshot_to_json(back), text);
    EXPECT_EQ(back.fingerprint, snap.fingerprint);
    EXPECT_EQ(back.derived, snap.derived);
    EXPECT_EQ(snap.ladder.size(), 8u);
    EXPECT_EQ(code_of([] { (void)snapshot_from_json("{\"schema_version\": \"other\"}"); }), ErrorCode::BadSnapshot);
    EXPECT_EQ(code_of([] { (void)snapshot_from_json("not json"); }), ErrorCode::BadSnapshot);
}

TEST(Snapshot, ThreadCountDoesNotChangeBytes) {
    const auto panels = generate_worlds({});
    AnalysisConfig cfg;
    cfg.last_year = 2100;
    EXPECT_EQ(snapshot_to_json(build_snapshot(panels, cfg, 1)), snapshot_to_json(build_snapshot(panels, cfg, 8)));
}

TEST(PooledSummary, GdpScaleInvariance) {
    auto panels = load_fixture();
    const auto base = pooled_summary(derive_all(panels, Convention::BeginOfPeriod), AnalysisConfig{}, 0.01);
    for (auto& [c, p] : panels)
        for (auto& o : p) o.gdp = *o.gdp * 1234.5;
    const auto scaled = pooled_summary(derive_all(panels, Convention::BeginOfPeriod), AnalysisConfig{}, 0.01);
    EXPECT_NEAR(*scaled.mean_ratio, *base.mean_ratio, 1e-12);
    EXPECT_NEAR(*scaled.mean_theta, *base.mean_theta, 1e-12);
    EXPECT_NEAR(scaled.reg_levels->slope, base.reg_levels->slope, 1e-12);
    EXPECT_NEAR(scaled.reg_diffs->slope, base.reg_diffs->slope, 1e-12);
    EXPECT_NEAR(*scaled.reg_diffs->slope_se, *base.reg_diffs->slope_se, 1e-12);
}
