#include "thriftidx/stats.hpp"

#include "thriftidx/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace thriftidx::stats {

namespace {

// Residual sum of squares this small relative to the total counts as an
// exact fit (residual RMS below 1e-10 of the spread).
constexpr double kPerfectFitRatio = 1e-20;

bool sample_less(const WeightedSample& a, const WeightedSample& b) {
    return std::tie(a.x, a.y, a.w) < std::tie(b.x, b.y, b.w);
}

void check_weight(double w) {
    if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::InvalidConfig, "weights must be finite and nonnegative");
}

}  // namespace

double weighted_mean(std::span<const WeightedValue> values) {
    std::vector<WeightedValue> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return std::tie(a.value, a.weight) < std::tie(b.value, b.weight);
    });
    double sw = 0.0;
    double swv = 0.0;
    for (const auto& v : sorted) {
        check_weight(v.weight);
        if (v.weight == 0.0) continue;
        sw += v.weight;
        swv += v.weight * v.value;
    }
    if (!(sw > 0.0)) throw Error(ErrorCode::AllZeroWeights, "weighted mean needs a positive weight");
    return swv / sw;
}

RegressionResult weighted_ols(std::span<const WeightedSample> samples) {
    std::vector<WeightedSample> s;
    s.reserve(samples.size());
    for (const auto& p : samples) {
        check_weight(p.w);
        if (p.w > 0.0) s.push_back(p);
    }
    if (s.size() < 2) throw Error(ErrorCode::TooFewSamples, "regression needs at least two weighted samples");
    std::sort(s.begin(), s.end(), sample_less);
    if (s.front().x == s.back().x) throw Error(ErrorCode::DegenerateX, "regressor has zero weighted variance");

    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (const auto& p : s) {
        sw += p.w;
        swx += p.w * p.x;
        swy += p.w * p.y;
    }
    const double xbar = swx / sw;
    const bool constant_y = std::all_of(s.begin(), s.end(), [&](const auto& p) { return p.y == s.front().y; });
    const double ybar = constant_y ? s.front().y : swy / sw;

    double sxx = 0.0, sxy = 0.0, sst = 0.0;
    for (const auto& p : s) {
        const double dx = p.x - xbar;
        const double dy = p.y - ybar;
        sxx += p.w * dx * dx;
        sxy += p.w * dx * dy;
        sst += p.w * dy * dy;
    }

    RegressionResult r;
    r.n = s.size();
    r.slope = constant_y ? 0.0 : sxy / sxx;
    r.intercept = ybar - r.slope * xbar;

    double ssr = 0.0;
    for (const auto& p : s) {
        const double e = p.y - r.intercept - r.slope * p.x;
        ssr += p.w * e * e;
    }
    r.perfect_fit = constant_y || ssr <= kPerfectFitRatio * sst;
    r.r2 = r.perfect_fit ? 1.0 : std::clamp(1.0 - ssr / sst, 0.0, 1.0);

    if (r.n >= 3) {
        if (r.perfect_fit) {
            r.slope_se = 0.0;
        } else {
            const double sigma2 = ssr / static_cast<double>(r.n - 2);
            r.slope_se = std::sqrt(sigma2 / sxx);
            r.t_vs_one = (r.slope - 1.0) / *r.slope_se;
        }
    }
    return r;
}

std::vector<LoessFit> loess(std::span<const WeightedSample> points, const LoessOptions& options) {
    if (!(options.span > 0.0 && options.span <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "loess span must lie in (0, 1]");
    if (options.degree < 0 || options.degree > 2)
        throw Error(ErrorCode::InvalidConfig, "loess degree must be 0, 1 or 2");
    for (const auto& p : points) check_weight(p.w);

    const std::size_t n = points.size();
    const auto terms = static_cast<std::size_t>(options.degree + 1);

    // Work on a canonically ordered copy so neighbour ties resolve the same
    // way regardless of input order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sample_less(points[a], points[b]); });
    std::vector<WeightedSample> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = points[order[i]];

    std::size_t distinct = n == 0 ? 0 : 1;
    for (std::size_t i = 1; i < n; ++i)
        if (pts[i].x != pts[i - 1].x) ++distinct;
    const std::size_t need_distinct = terms + (options.tricube ? 1 : 0);
    if (distinct < need_distinct) throw Error(ErrorCode::TooFewPoints, "too few distinct x values for loess");

    const auto q = static_cast<std::size_t>(std::ceil(options.span * static_cast<double>(n) - 1e-9));
    if (q < terms) throw Error(ErrorCode::TooFewPoints, "loess neighbourhood smaller than degree+1");

    std::vector<LoessFit> sorted_fits(n);
    std::vector<std::size_t> nbr(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = pts[i].x;
        std::iota(nbr.begin(), nbr.end(), std::size_t{0});
        std::stable_sort(nbr.begin(), nbr.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(pts[a].x - x0) < std::abs(pts[b].x - x0);
        });
        const double h = std::abs(pts[nbr[q - 1]].x - x0);

        std::vector<double> wts;
        std::vector<std::size_t> used;
        for (std::size_t k = 0; k < q; ++k) {
            const auto j = nbr[k];
            double kernel = 1.0;
            if (options.tricube) {
                const double u = h > 0.0 ? std::abs(pts[j].x - x0) / h : 0.0;
                const double c = 1.0 - u * u * u;
                kernel = u < 1.0 ? c * c * c : 0.0;
            }
            const double w = kernel * pts[j].w;
            if (w > 0.0) {
                wts.push_back(w);
                used.push_back(j);
            }
        }

        LoessFit& fit = sorted_fits[i];
        fit.x = x0;
        bool solved = false;
        if (terms > 1 && used.size() >= terms && h > 0.0) {
            Eigen::MatrixXd a(static_cast<Eigen::Index>(used.size()), static_cast<Eigen::Index>(terms));
            Eigen::VectorXd b(static_cast<Eigen::Index>(used.size()));
            for (std::size_t r = 0; r < used.size(); ++r) {
                const double sw = std::sqrt(wts[r]);
                const double u = (pts[used[r]].x - x0) / h;
                double pw = 1.0;
                for (std::size_t c = 0; c < terms; ++c) {
                    a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sw * pw;
                    pw *= u;
                }
                b(static_cast<Eigen::Index>(r)) = sw * pts[used[r]].y;
            }
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
            qr.setThreshold(1e-12);
            if (qr.rank() == static_cast<Eigen::Index>(terms)) {
                fit.fitted = qr.solve(b)(0);
                solved = true;
            }
        }
        if (!solved) {
            // Degree 0 is exactly this weighted mean; for higher degrees it is
            // the singular-fit fallback.
            double sw = 0.0, swy = 0.0;
            for (std::size_t r = 0; r < used.size(); ++r) {
                sw += wts[r];
                swy += wts[r] * pts[used[r]].y;
            }
            if (sw > 0.0) {
                fit.fitted = swy / sw;
                fit.fallback = terms > 1;
            } else {
                double sy = 0.0;
                for (std::size_t k = 0; k < q; ++k) sy += pts[nbr[k]].y;
                fit.fitted = sy / static_cast<double>(q);
                fit.fallback = true;
            }
        }
    }

    std::vector<LoessFit> fits(n);
    for (std::size_t i = 0; i < n; ++i) fits[order[i]] = sorted_fits[i];
    return fits;
}

}  // namespace thriftidx::stats
