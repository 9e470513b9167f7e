#pragma once

#include "thriftidx/analysis.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thriftidx {

inline constexpr std::string_view kSnapshotSchema = "thriftidx.snapshot/1";
inline constexpr std::string_view kApiSchema = "thriftidx.api/1";

/// Everything computed for one dataset and configuration. Built once by
/// `analyze` and treated as immutable afterwards.
struct AnalysisSnapshot {
    std::string schema_version{kSnapshotSchema};
    AnalysisConfig config;
    std::string fingerprint;  // FNV-1a 64 of the normalized panel dump
    DerivedSet derived;
    std::vector<AggregateSummary> ladder;
    /// Absent when no year in range has data at the display screen.
    std::optional<YearlySeries> yearly_ratio;
    std::optional<YearlySeries> yearly_theta;
};

/// Derives, sweeps the ladder and computes both yearly series at the
/// configured display screen.
AnalysisSnapshot build_snapshot(const PanelSet& panels, const AnalysisConfig& config, unsigned threads = 1);

std::string dataset_fingerprint(const PanelSet& panels);

using ojson = nlohmann::ordered_json;

// Stable-key JSON views shared by the snapshot file, the report module and the
// HTTP API. Absent values serialize as null.
ojson config_json(const AnalysisConfig& config);
AnalysisConfig config_from_json(const ojson& j);
ojson regression_json(const std::optional<stats::RegressionResult>& r, const std::string& note);
ojson summary_json(const AggregateSummary& s);
AggregateSummary summary_from_json(const ojson& j);
ojson yearly_json(const YearlySeries& y);
YearlySeries yearly_from_json(const ojson& j);
ojson point_json(const DerivedPoint& p);
DerivedPoint point_from_json(const std::string& country, const ojson& j);

std::string_view to_string(Weighting w);
std::string_view to_string(Convention c);
std::string_view to_string(MissingGdpPolicy m);
std::string_view to_string(Aggregation a);
std::string_view to_string(Quantity q);
std::string_view to_string(SmoothingMode m);

std::string snapshot_to_json(const AnalysisSnapshot& snapshot);
/// Throws Error(BadSnapshot) on malformed documents or a schema mismatch.
AnalysisSnapshot snapshot_from_json(std::string_view text);

}  // namespace thriftidx
