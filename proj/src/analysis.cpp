#include "thriftidx/analysis.hpp"

#include "thriftidx/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

namespace thriftidx {

void AnalysisConfig::validate() const {
    if (screen_ladder.empty()) throw Error(ErrorCode::InvalidConfig, "screen ladder is empty");
    for (std::size_t i = 0; i < screen_ladder.size(); ++i) {
        if (!std::isfinite(screen_ladder[i]) || screen_ladder[i] < 0.0)
            throw Error(ErrorCode::InvalidConfig, "screen thresholds must be nonnegative");
        if (i > 0 && screen_ladder[i] <= screen_ladder[i - 1])
            throw Error(ErrorCode::InvalidConfig, "screen ladder must be strictly increasing");
    }
    if (first_year > last_year) throw Error(ErrorCode::InvalidConfig, "year range start after end");
    if (!std::isfinite(display_screen) || display_screen < 0.0)
        throw Error(ErrorCode::InvalidConfig, "display screen must be nonnegative");
    if (!(loess.span > 0.0 && loess.span <= 1.0)) throw Error(ErrorCode::InvalidConfig, "loess span must lie in (0, 1]");
    if (loess.degree < 1 || loess.degree > 2) throw Error(ErrorCode::InvalidConfig, "loess degree must be 1 or 2");
}

DerivedSet derive_all(const PanelSet& panels, Convention convention, unsigned threads) {
    std::vector<const Panel*> work;
    work.reserve(panels.size());
    for (const auto& [country, panel] : panels) work.push_back(&panel);

    std::vector<std::vector<DerivedPoint>> results(work.size());
    const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(work.size())));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < work.size(); ++i) results[i] = derive_series(*work[i], convention);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < work.size(); i += n_threads)
                    results[i] = derive_series(*work[i], convention);
            });
        }
    }

    DerivedSet out;
    std::size_t i = 0;
    for (const auto& [country, panel] : panels) out.emplace(country, std::move(results[i++]));
    return out;
}

std::optional<double> resolve_weight(const DerivedPoint& point, const AnalysisConfig& config) {
    if (config.weighting == Weighting::Unweighted) return 1.0;
    if (point.weight) {
        if (*point.weight > 0.0) return *point.weight;
        return std::nullopt;
    }
    if (config.missing_gdp == MissingGdpPolicy::UnitWeight) return 1.0;
    return std::nullopt;
}

namespace {

bool in_range(const DerivedPoint& p, const AnalysisConfig& c) {
    return p.year >= c.first_year && p.year <= c.last_year;
}

std::optional<double> ratio_of_means(const std::vector<stats::WeightedSample>& s) {
    std::vector<stats::WeightedValue> num, den;
    for (const auto& p : s) {
        num.push_back({p.y, p.w});
        den.push_back({p.x, p.w});
    }
    const double d = stats::weighted_mean(den);
    if (d == 0.0) return std::nullopt;
    return stats::weighted_mean(num) / d;
}

void regress(const std::vector<stats::WeightedSample>& samples, std::optional<stats::RegressionResult>& out,
             std::string& note) {
    if (samples.empty()) {
        note = "no observations";
        return;
    }
    try {
        out = stats::weighted_ols(samples);
    } catch (const Error& e) {
        note = std::string(to_string(e.code())) + ": " + e.what();
    }
}

}  // namespace

AggregateSummary pooled_summary(const DerivedSet& derived, const AnalysisConfig& config, double screen) {
    if (!std::isfinite(screen) || screen < 0.0) throw Error(ErrorCode::InvalidConfig, "screen must be nonnegative");

    const ScreenSpec growth{screen, ScreenTarget::Growth};
    const ScreenSpec accel{screen, ScreenTarget::Acceleration};

    std::vector<stats::WeightedValue> ratios, thetas;
    std::vector<stats::WeightedSample> levels, diffs;
    std::size_t countries = 0;

    for (const auto& [country, points] : derived) {
        bool contributed = false;
        for (const auto& p : points) {
            if (!in_range(p, config)) continue;
            const auto w = resolve_weight(p, config);
            if (!w) continue;
            if (passes_screen(p, growth)) {
                levels.push_back({*p.g, *p.s_star, *w});
                if (p.ratio) ratios.push_back({*p.ratio, *w});
                contributed = true;
            }
            if (passes_screen(p, accel)) {
                diffs.push_back({*p.d_g, *p.d_s_star, *w});
                if (p.theta) thetas.push_back({*p.theta, *w});
                contributed = true;
            }
        }
        if (contributed) ++countries;
    }
    if (levels.empty() && diffs.empty())
        throw Error(ErrorCode::EmptyAfterScreen, "no observations survive screen " + std::to_string(screen));

    AggregateSummary s;
    s.screen = screen;
    s.weighting = config.weighting;
    s.countries = countries;
    s.n_levels = levels.size();
    s.n_diffs = diffs.size();
    if (config.aggregation == Aggregation::PointwiseMean) {
        s.n_ratio = ratios.size();
        s.n_theta = thetas.size();
        if (!ratios.empty()) s.mean_ratio = stats::weighted_mean(ratios);
        if (!thetas.empty()) s.mean_theta = stats::weighted_mean(thetas);
    } else {
        s.n_ratio = levels.size();
        s.n_theta = diffs.size();
        if (!levels.empty()) s.mean_ratio = ratio_of_means(levels);
        if (!diffs.empty()) s.mean_theta = ratio_of_means(diffs);
    }
    regress(levels, s.reg_levels, s.reg_levels_note);
    regress(diffs, s.reg_diffs, s.reg_diffs_note);
    return s;
}

std::vector<AggregateSummary> ladder_sweep(const DerivedSet& derived, const AnalysisConfig& config) {
    std::vector<AggregateSummary> out;
    out.reserve(config.screen_ladder.size());
    for (const double screen : config.screen_ladder) {
        try {
            out.push_back(pooled_summary(derived, config, screen));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyAfterScreen) throw;
            AggregateSummary empty;
            empty.screen = screen;
            empty.weighting = config.weighting;
            empty.empty = true;
            empty.reg_levels_note = empty.reg_diffs_note = "no observations";
            out.push_back(std::move(empty));
        }
    }
    return out;
}

YearlySeries yearly_series(const DerivedSet& derived, const AnalysisConfig& config, Quantity quantity,
                           double screen) {
    if (!std::isfinite(screen) || screen < 0.0) throw Error(ErrorCode::InvalidConfig, "screen must be nonnegative");
    const ScreenSpec spec{screen, quantity == Quantity::Ratio ? ScreenTarget::Growth : ScreenTarget::Acceleration};

    std::map<int, std::vector<stats::WeightedValue>> by_year;
    for (const auto& [country, points] : derived) {
        for (const auto& p : points) {
            if (!in_range(p, config) || !passes_screen(p, spec)) continue;
            const auto& v = quantity == Quantity::Ratio ? p.ratio : p.theta;
            if (!v) continue;
            if (const auto w = resolve_weight(p, config)) by_year[p.year].push_back({*v, *w});
        }
    }
    if (by_year.empty())
        throw Error(ErrorCode::EmptyYearRange, "no observations in " + std::to_string(config.first_year) + "-" +
                                                   std::to_string(config.last_year) + " at this screen");

    YearlySeries series;
    series.quantity = quantity;
    series.screen = screen;
    std::vector<stats::WeightedSample> smooth_in;
    for (const auto& [year, values] : by_year) {
        YearlyEntry e;
        e.year = year;
        e.mean = stats::weighted_mean(values);
        e.count = values.size();
        for (const auto& v : values) e.total_weight += v.weight;
        smooth_in.push_back({static_cast<double>(year), e.mean, e.total_weight});
        series.entries.push_back(e);
    }

    const auto n = series.entries.size();
    const auto needed = static_cast<std::size_t>(config.loess.degree) + 2;
    std::vector<stats::LoessFit> fits;
    if (n >= needed) {
        series.smoothing = SmoothingMode::Loess;
        fits = stats::loess(smooth_in, config.loess);
    } else {
        series.smoothing = SmoothingMode::GlobalFit;
        stats::LoessOptions global;
        global.span = 1.0;
        global.tricube = false;
        global.degree = std::min(config.loess.degree, static_cast<int>(n) - 1);
        fits = stats::loess(smooth_in, global);
    }
    for (std::size_t i = 0; i < n; ++i) {
        series.entries[i].smoothed = fits[i].fitted;
        series.entries[i].smoothing_fallback = fits[i].fallback;
    }
    return series;
}

Panel generate_world(const WorldSpec& spec) {
    if (!(spec.k0 > 0.0) || !std::isfinite(spec.k0)) throw Error(ErrorCode::InvalidPath, "k0 must be positive");
    if (!(spec.noise_sd >= 0.0) || !std::isfinite(spec.noise_sd))
        throw Error(ErrorCode::InvalidPath, "noise_sd must be nonnegative");
    if (spec.years < 1 || spec.path.size() + 1 != static_cast<std::size_t>(spec.years))
        throw Error(ErrorCode::InvalidPath, "path must hold exactly years-1 values");
    if (spec.first_year < 1800 || spec.first_year + spec.years - 1 > 2100)
        throw Error(ErrorCode::InvalidPath, "years must lie within 1800-2100");
    for (const double v : spec.path)
        if (!std::isfinite(v) || !(1.0 + v > 0.0)) throw Error(ErrorCode::InvalidPath, "path values must exceed -1");

    Panel panel;
    panel.reserve(static_cast<std::size_t>(spec.years));
    double k = spec.k0;
    panel.push_back({spec.country, spec.first_year, 0.0, k, std::nullopt});
    for (std::size_t i = 0; i < spec.path.size(); ++i) {
        const double rate = spec.path[i];
        const double s_net = spec.kind == WorldKind::Thrift ? rate * k : 0.0;
        k = spec.kind == WorldKind::Thrift ? k + s_net : k * (1.0 + rate);
        panel.push_back({spec.country, spec.first_year + static_cast<int>(i) + 1, s_net, k, std::nullopt});
    }

    if (spec.noise_sd > 0.0) {
        std::mt19937_64 rng(spec.seed);
        std::normal_distribution<double> eps(0.0, spec.noise_sd);
        for (auto& o : panel) o.k *= std::exp(eps(rng));
    }
    for (auto& o : panel) o.gdp = o.k;
    return panel;
}

PanelSet generate_worlds(const DemoWorldOptions& options) {
    if (options.min_years < 1 || options.max_years < options.min_years || options.countries == 0 ||
        options.countries > 999)
        throw Error(ErrorCode::InvalidPath, "invalid demo world options");
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<int> years(options.min_years, options.max_years);
    std::uniform_real_distribution<double> start(0.02, 0.12);
    std::uniform_real_distribution<double> step(0.005, 0.03);
    std::uniform_real_distribution<double> k0(50.0, 5000.0);
    std::bernoulli_distribution up(0.5);

    PanelSet out;
    for (std::size_t c = 0; c < options.countries; ++c) {
        WorldSpec spec;
        spec.kind = options.kind;
        char code[8];
        std::snprintf(code, sizeof code, "W%03zu", c + 1);
        spec.country = code;
        spec.first_year = options.first_year;
        spec.years = years(rng);
        spec.k0 = k0(rng);
        spec.noise_sd = options.noise_sd;
        spec.seed = rng();
        double level = start(rng);
        for (int t = 1; t < spec.years; ++t) {
            // Random walk kept inside [0.005, 0.2]; a step that would leave the
            // band is taken in the other direction.
            const double d = step(rng);
            double next = up(rng) ? level + d : level - d;
            if (next < 0.005 || next > 0.2) next = 2.0 * level - next;
            level = next;
            spec.path.push_back(level);
        }
        out.emplace(spec.country, generate_world(spec));
    }
    return out;
}

}  // namespace thriftidx
