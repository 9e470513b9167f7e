#pragma once

#include "thriftidx/error.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thriftidx {

/// One row of a WID-style long-format file.
struct RawRecord {
    std::string country;
    std::string variable;
    std::string percentile;
    int year = 0;
    double value = 0.0;

    bool operator==(const RawRecord&) const = default;
};

enum class MatchMode { Exact, Prefix };

/// Maps WID variable codes onto the three roles the analysis needs.
struct RoleMap {
    std::string net_saving_code = "msavin";
    std::string capital_code = "mnweal";
    std::string gdp_code = "mgdpro";
    std::string percentile_filter = "p0p100";
    MatchMode match_mode = MatchMode::Prefix;

    /// Throws Error(InvalidRoleMap) unless the codes are nonempty and distinct.
    void validate() const;
};

/// One country-year of inputs: net saving, market-value capital and an
/// optional GDP weight basis, all in constant local currency.
struct Observation {
    std::string country;
    int year = 0;
    double s_net = 0.0;
    double k = 0.0;
    std::optional<double> gdp;

    bool operator==(const Observation&) const = default;
};

using Panel = std::vector<Observation>;             // one country, year-sorted
using PanelSet = std::map<std::string, Panel>;      // keyed by country code

struct RowIssue {
    std::size_t line = 0;  // 1-based physical line in the input
    ErrorCode code = ErrorCode::BadNumber;
    std::string message;
};

struct ParseResult {
    std::vector<RawRecord> records;
    std::vector<RowIssue> errors;  // BadNumber and other row-level problems
};

struct ParseOptions {
    char delimiter = ';';
    /// Empty means "auto": the first nonblank line is a header naming the
    /// columns. Otherwise these names describe every line, header included
    /// (i.e. there is no header line).
    std::vector<std::string> columns;
};

/// Parses delimiter-separated WID long-format text. Well-formed rows come back
/// in file order; malformed rows are collected in `errors` with line numbers.
/// Throws Error(EmptyInput) when there are no data lines and
/// Error(MissingColumn) when the header lacks a required column.
ParseResult parse_records(std::string_view input, const ParseOptions& options = {});
ParseResult parse_records(std::istream& input, const ParseOptions& options = {});

struct AssembleResult {
    PanelSet panels;
    std::vector<std::string> warnings;
};

/// Builds one year-sorted panel per country from parsed records. A country-year
/// qualifies when both net saving and capital are present; GDP is attached
/// when available. The result does not depend on record order.
AssembleResult assemble_panel(const std::vector<RawRecord>& records, const RoleMap& roles);

/// Ingest configuration read from a key=value file.
struct IngestConfig {
    RoleMap roles;
    char delimiter = ';';
};

/// Reads `key = value` lines; '#' starts a comment. Recognised keys:
/// net_saving_code, capital_code, gdp_code, percentile, match_mode
/// (exact|prefix), delimiter (a single character or "tab").
IngestConfig parse_ingest_config(std::string_view text);

/// Normalized panel dump: `country,year,s_net,k,gdp` with an empty gdp cell
/// when absent.
void write_panel_csv(std::ostream& out, const PanelSet& panels);

/// Reads the normalized dump written by write_panel_csv.
PanelSet read_panel_csv(std::string_view text);

/// True when the first nonblank line looks like a normalized panel header.
bool looks_like_panel_csv(std::string_view text);

/// Replacement weights keyed by (country, year), e.g. GDP converted to a
/// common currency.
using WeightOverrides = std::map<std::pair<std::string, int>, double>;

/// Reads `country,year,weight` rows after that header. Weights must be
/// finite and nonnegative; throws Error(BadNumber) or Error(MissingColumn).
WeightOverrides read_weight_overrides(std::string_view text);

/// Replaces gdp wherever an override exists; returns how many observations
/// were changed.
std::size_t apply_weight_overrides(PanelSet& panels, const WeightOverrides& overrides);

}  // namespace thriftidx
