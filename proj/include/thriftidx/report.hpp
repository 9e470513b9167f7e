#pragma once

#include "thriftidx/snapshot.hpp"

#include <optional>
#include <string>
#include <utility>

namespace thriftidx::report {

enum class TableKind { Headline, Ladder, PerCountry };
enum class TableFormat { Csv, Json, Text };

struct TableSpec {
    TableKind kind = TableKind::Headline;
    double screen = 0.01;  // ignored by the ladder table
    TableFormat format = TableFormat::Csv;
};

/// Renders a table from the snapshot. Numbers carry 4 significant digits;
/// column and key order are fixed. Throws Error(UnknownScreenLevel) when
/// the screen is not one of the snapshot's ladder levels.
std::string render_table(const AnalysisSnapshot& snapshot, const TableSpec& spec);

struct FigureSpec {
    Quantity quantity = Quantity::Ratio;
    /// Defaults to the snapshot's configured year range; must lie inside it.
    std::optional<std::pair<int, int>> year_range;
    /// Defaults to the snapshot's display screen.
    std::optional<double> screen;
    bool include_loess = true;
    double width = 800.0;
    double height = 450.0;
};

/// Self-contained SVG of the yearly weighted averages, optionally with the
/// smoothed companion. Throws Error(EmptySeries) when there is nothing to plot.
std::string render_figure(const AnalysisSnapshot& snapshot, const FigureSpec& spec);

/// Plot-area geometry, exposed so tests can check coordinates independently.
struct PlotFrame {
    double left = 0, top = 0, width = 0, height = 0;
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;

    [[nodiscard]] double px(double year) const { return left + (year - x_min) / (x_max - x_min) * width; }
    [[nodiscard]] double py(double value) const { return top + (y_max - value) / (y_max - y_min) * height; }
};

/// "%.4g" with negative zero folded to "0".
std::string format_sig4(double v);

std::string table_filename(const TableSpec& spec, Weighting weighting);
std::string figure_filename(const FigureSpec& spec, double screen, Weighting weighting);

std::string_view to_string(TableKind k);
std::string_view to_string(TableFormat f);

}  // namespace thriftidx::report
