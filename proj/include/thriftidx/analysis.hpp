#pragma once

#include "thriftidx/derive.hpp"
#include "thriftidx/ingest.hpp"
#include "thriftidx/stats.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace thriftidx {

enum class Weighting { Gdp, Unweighted };
enum class MissingGdpPolicy { Exclude, UnitWeight };

/// How pooled ratio / theta are aggregated.
///   PointwiseMean: weighted mean of the per-observation ratios.
///   RatioOfMeans:  weighted mean of numerators over weighted mean of denominators.
enum class Aggregation { PointwiseMean, RatioOfMeans };

enum class Quantity { Ratio, Theta };

struct AnalysisConfig {
    std::vector<double> screen_ladder = default_screen_ladder();
    Weighting weighting = Weighting::Gdp;
    Convention convention = Convention::BeginOfPeriod;
    int first_year = 1980;
    int last_year = 2022;
    MissingGdpPolicy missing_gdp = MissingGdpPolicy::Exclude;
    Aggregation aggregation = Aggregation::PointwiseMean;
    /// Screen used for the yearly series and the headline table.
    double display_screen = 0.01;
    stats::LoessOptions loess;

    /// Throws Error(InvalidConfig) on a non-increasing or negative ladder, an
    /// inverted year range, or bad LOESS parameters.
    void validate() const;
};

/// Derived points for every country, keyed by country code.
using DerivedSet = std::map<std::string, std::vector<DerivedPoint>>;

/// Runs derive_series on every panel. Countries are split across `threads`
/// workers; the result does not depend on the thread count.
DerivedSet derive_all(const PanelSet& panels, Convention convention, unsigned threads = 1);

struct AggregateSummary {
    double screen = 0.0;
    Weighting weighting = Weighting::Gdp;
    std::optional<double> mean_ratio;
    std::optional<double> mean_theta;
    std::optional<stats::RegressionResult> reg_levels;  // s* on g
    std::optional<stats::RegressionResult> reg_diffs;   // d_s* on d_g
    std::string reg_levels_note;  // why reg_levels is absent, if it is
    std::string reg_diffs_note;
    std::size_t n_ratio = 0;
    std::size_t n_theta = 0;
    std::size_t n_levels = 0;
    std::size_t n_diffs = 0;
    std::size_t countries = 0;
    /// Set by ladder_sweep for levels where nothing survived the screen.
    bool empty = false;
};

/// Weight of a point under the config, or nullopt when it is excluded.
std::optional<double> resolve_weight(const DerivedPoint& point, const AnalysisConfig& config);

/// Pooled statistics over all countries at one screen. Level statistics screen
/// on |g|, difference statistics on |d_g|. Throws Error(EmptyAfterScreen) when
/// no observation survives.
AggregateSummary pooled_summary(const DerivedSet& derived, const AnalysisConfig& config, double screen);

/// One summary per ladder threshold; empty levels are marked, not fatal.
std::vector<AggregateSummary> ladder_sweep(const DerivedSet& derived, const AnalysisConfig& config);

struct YearlyEntry {
    int year = 0;
    double mean = 0.0;
    std::size_t count = 0;
    double total_weight = 0.0;
    double smoothed = 0.0;
    bool smoothing_fallback = false;
};

enum class SmoothingMode {
    Loess,
    /// Too few years for LOESS: a single weighted polynomial fitted to all
    /// years (degree reduced to fit).
    GlobalFit,
};

struct YearlySeries {
    Quantity quantity = Quantity::Ratio;
    double screen = 0.0;
    SmoothingMode smoothing = SmoothingMode::Loess;
    std::vector<YearlyEntry> entries;
};

/// Per-year weighted mean of the quantity over countries passing the screen,
/// with a LOESS companion weighted by each year's total weight.
/// Throws Error(EmptyYearRange) when no year in range has data.
YearlySeries yearly_series(const DerivedSet& derived, const AnalysisConfig& config, Quantity quantity,
                           double screen);

enum class WorldKind {
    Thrift,      // all net saving becomes capital growth
    FreeGrowth,  // capital grows with no net saving
};

struct WorldSpec {
    WorldKind kind = WorldKind::Thrift;
    std::string country = "ZZ";
    int first_year = 1980;
    /// Number of observations; `path` holds one value per year after the first.
    int years = 0;
    double k0 = 100.0;
    /// Thrift: s* per year. Free growth: g per year.
    std::vector<double> path;
    double noise_sd = 0.0;
    std::uint64_t seed = 0;
};

/// One synthetic country. The first year carries zero saving (it has no
/// predecessor, so its saving never enters a derived quantity); GDP is set to
/// capital. Throws Error(InvalidPath) on an invalid spec.
Panel generate_world(const WorldSpec& spec);

struct DemoWorldOptions {
    WorldKind kind = WorldKind::Thrift;
    std::size_t countries = 50;
    int min_years = 20;
    int max_years = 40;
    int first_year = 1980;
    double noise_sd = 0.0;
    std::uint64_t seed = 1;
};

/// A set of synthetic countries (codes W001, W002, ...) with varied paths.
/// Paths move by at least 0.005 per year so no acceleration is degenerate.
PanelSet generate_worlds(const DemoWorldOptions& options);

}  // namespace thriftidx
