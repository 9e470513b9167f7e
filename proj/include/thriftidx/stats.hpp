#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace thriftidx::stats {

struct WeightedValue {
    double value = 0.0;
    double weight = 0.0;
};

struct WeightedSample {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
};

/// Sum(w*v) / Sum(w). Throws Error(AllZeroWeights) if no weight is positive.
double weighted_mean(std::span<const WeightedValue> values);

/// Single-regressor weighted least squares with analytic weights.
struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    /// Classical SE with n-2 degrees of freedom; absent when n < 3, zero on a
    /// perfect fit.
    std::optional<double> slope_se;
    double r2 = 0.0;
    std::size_t n = 0;  // samples with w > 0
    /// (slope - 1) / slope_se; absent when n < 3 or the fit is perfect.
    std::optional<double> t_vs_one;
    bool perfect_fit = false;
};

/// Samples with zero weight are ignored. Throws Error(TooFewSamples) with
/// fewer than two positively weighted samples, Error(DegenerateX) when all of
/// them share one x.
RegressionResult weighted_ols(std::span<const WeightedSample> samples);

struct LoessOptions {
    double span = 0.75;
    int degree = 2;
    /// Test hook: false replaces the tricube kernel by uniform distance
    /// weights over the neighbourhood.
    bool tricube = true;
};

struct LoessFit {
    double x = 0.0;
    double fitted = 0.0;
    /// The local polynomial was singular and a local weighted mean was used.
    bool fallback = false;
};

/// Deterministic LOESS without robustness iterations. For every input x a
/// polynomial of `degree` is fitted by weighted least squares over the
/// ceil(span*n) nearest neighbours; the kernel weight multiplies the supplied
/// observation weight. Results are returned in input order.
/// Throws Error(TooFewPoints) when there are fewer than degree+2 distinct x
/// values (degree+1 with uniform weights) or the neighbourhood is smaller than
/// degree+1.
std::vector<LoessFit> loess(std::span<const WeightedSample> points, const LoessOptions& options = {});

}  // namespace thriftidx::stats
