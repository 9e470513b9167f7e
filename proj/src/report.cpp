#include "thriftidx/report.hpp"

#include "thriftidx/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <variant>
#include <vector>

namespace thriftidx::report {

std::string_view to_string(TableKind k) {
    switch (k) {
        case TableKind::Headline: return "headline";
        case TableKind::Ladder: return "ladder";
        case TableKind::PerCountry: return "per-country";
    }
    return "?";
}

std::string_view to_string(TableFormat f) {
    switch (f) {
        case TableFormat::Csv: return "csv";
        case TableFormat::Json: return "json";
        case TableFormat::Text: return "txt";
    }
    return "?";
}

std::string format_sig4(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

namespace {

constexpr std::string_view kSlopeNote = "slope = 1 under thrift theory";
constexpr std::string_view kMeanNote = "mean = 1 under thrift theory";
constexpr std::string_view kPerfectFit = "undefined (perfect fit)";

struct Number {
    double v;
};
using Cell = std::variant<std::monostate, std::string, Number, std::size_t, int>;

struct Table {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

Cell num(const std::optional<double>& v) { return v ? Cell{Number{*v}} : Cell{}; }

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, std::string>) return v;
            else if constexpr (std::is_same_v<T, Number>) return format_sig4(v.v);
            else return std::to_string(v);
        },
        c);
}

ojson cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> ojson {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, Number>) return std::stod(format_sig4(v.v));
            else return v;
        },
        c);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string render(const Table& t, TableKind kind, TableFormat format) {
    std::ostringstream out;
    switch (format) {
        case TableFormat::Csv: {
            for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
            out << '\n';
            for (const auto& row : t.rows) {
                for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(row[i]));
                out << '\n';
            }
            break;
        }
        case TableFormat::Json: {
            ojson j;
            j["table"] = to_string(kind);
            j["title"] = t.title;
            j["columns"] = t.columns;
            ojson rows = ojson::array();
            for (const auto& row : t.rows) {
                ojson r;
                for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
                rows.push_back(std::move(r));
            }
            j["rows"] = std::move(rows);
            out << j.dump(2) << '\n';
            break;
        }
        case TableFormat::Text: {
            std::vector<std::vector<std::string>> cells;
            cells.push_back(t.columns);
            for (const auto& row : t.rows) {
                std::vector<std::string> r;
                for (const auto& c : row) r.push_back(cell_text(c));
                cells.push_back(std::move(r));
            }
            std::vector<std::size_t> width(t.columns.size(), 0);
            for (const auto& r : cells)
                for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
            out << t.title << '\n';
            for (std::size_t ri = 0; ri < cells.size(); ++ri) {
                std::string line;
                for (std::size_t i = 0; i < cells[ri].size(); ++i) {
                    if (i) line += "  ";
                    line += cells[ri][i];
                    line.append(width[i] - cells[ri][i].size(), ' ');
                }
                while (!line.empty() && line.back() == ' ') line.pop_back();
                out << line << '\n';
                if (ri == 0) {
                    std::size_t total = 0;
                    for (const auto w : width) total += w;
                    out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
                }
            }
            break;
        }
    }
    return out.str();
}

const AggregateSummary& find_level(const AnalysisSnapshot& snap, double screen) {
    for (const auto& l : snap.ladder)
        if (std::abs(l.screen - screen) <= 1e-12) return l;
    throw Error(ErrorCode::UnknownScreenLevel, "screen " + format_sig4(screen) + " is not a ladder level");
}

std::string weighting_label(Weighting w) { return w == Weighting::Gdp ? "GDP-weighted" : "unweighted"; }

Cell t_cell(const std::optional<stats::RegressionResult>& r) {
    if (!r) return {};
    if (r->perfect_fit && r->n >= 3) return std::string(kPerfectFit);
    return num(r->t_vs_one);
}

Table headline_table(const AnalysisSnapshot& snap, double screen) {
    const auto& s = find_level(snap, screen);
    Table t;
    t.title = "Headline statistics, " + weighting_label(s.weighting) + ", screen " + format_sig4(s.screen);
    t.columns = {"statistic", "estimate", "std_error", "n", "t_vs_one", "intercept", "r2", "h0"};
    t.rows.push_back({std::string("mean_ratio"), num(s.mean_ratio), {}, s.n_ratio, {}, {}, {}, std::string(kMeanNote)});
    t.rows.push_back({std::string("mean_theta"), num(s.mean_theta), {}, s.n_theta, {}, {}, {}, std::string(kMeanNote)});
    const auto reg_row = [&](const char* name, const std::optional<stats::RegressionResult>& r, std::size_t n) {
        if (!r) return std::vector<Cell>{std::string(name), {}, {}, n, {}, {}, {}, std::string(kSlopeNote)};
        return std::vector<Cell>{std::string(name), Number{r->slope}, num(r->slope_se), r->n,        t_cell(r),
                                 Number{r->intercept}, Number{r->r2},  std::string(kSlopeNote)};
    };
    t.rows.push_back(reg_row("slope_s_star_on_g", s.reg_levels, s.n_levels));
    t.rows.push_back(reg_row("slope_d_s_star_on_d_g", s.reg_diffs, s.n_diffs));
    return t;
}

Table ladder_table(const AnalysisSnapshot& snap) {
    Table t;
    t.title = "Screening ladder, " + weighting_label(snap.config.weighting);
    t.columns = {"screen",  "n_ratio",  "mean_ratio",   "n_theta",     "mean_theta",  "n_levels", "slope_levels",
                 "se_levels", "n_diffs", "slope_diffs", "se_diffs", "countries"};
    for (const auto& s : snap.ladder) {
        const auto slope = [](const auto& r) { return r ? Cell{Number{r->slope}} : Cell{}; };
        const auto se = [](const auto& r) { return r ? num(r->slope_se) : Cell{}; };
        t.rows.push_back({Number{s.screen}, s.n_ratio, num(s.mean_ratio), s.n_theta, num(s.mean_theta), s.n_levels,
                          slope(s.reg_levels), se(s.reg_levels), s.n_diffs, slope(s.reg_diffs), se(s.reg_diffs),
                          s.countries});
    }
    return t;
}

Table per_country_table(const AnalysisSnapshot& snap, double screen) {
    find_level(snap, screen);
    Table t;
    t.title = "Per-country statistics, " + weighting_label(snap.config.weighting) + ", screen " + format_sig4(screen);
    t.columns = {"country", "first_year", "last_year", "n_ratio", "mean_ratio", "n_theta", "mean_theta",
                 "slope_levels", "slope_diffs"};
    for (const auto& [code, points] : snap.derived) {
        if (points.empty()) continue;
        std::vector<Cell> row{code, points.front().year, points.back().year};
        DerivedSet one{{code, points}};
        try {
            const auto s = pooled_summary(one, snap.config, screen);
            const auto slope = [](const auto& r) { return r ? Cell{Number{r->slope}} : Cell{}; };
            row.insert(row.end(), {s.n_ratio, num(s.mean_ratio), s.n_theta, num(s.mean_theta),
                                   slope(s.reg_levels), slope(s.reg_diffs)});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyAfterScreen) throw;
            row.insert(row.end(), {std::size_t{0}, Cell{}, std::size_t{0}, Cell{}, Cell{}, Cell{}});
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string quantity_label(Quantity q) { return q == Quantity::Ratio ? "s*/g(K)" : "theta = Δs*/Δg(K)"; }

}  // namespace

std::string render_table(const AnalysisSnapshot& snapshot, const TableSpec& spec) {
    switch (spec.kind) {
        case TableKind::Headline: return render(headline_table(snapshot, spec.screen), spec.kind, spec.format);
        case TableKind::Ladder: return render(ladder_table(snapshot), spec.kind, spec.format);
        case TableKind::PerCountry: return render(per_country_table(snapshot, spec.screen), spec.kind, spec.format);
    }
    return {};
}

std::string render_figure(const AnalysisSnapshot& snapshot, const FigureSpec& spec) {
    const auto& cfg = snapshot.config;
    const double screen = spec.screen.value_or(cfg.display_screen);
    const auto range = spec.year_range.value_or(std::pair{cfg.first_year, cfg.last_year});
    if (range.first > range.second || range.first < cfg.first_year || range.second > cfg.last_year)
        throw Error(ErrorCode::InvalidConfig, "figure year range must lie within the snapshot range");

    std::optional<YearlySeries> series;
    const auto& stored = spec.quantity == Quantity::Ratio ? snapshot.yearly_ratio : snapshot.yearly_theta;
    if (std::abs(screen - cfg.display_screen) <= 1e-12) {
        series = stored;
    } else {
        try {
            series = yearly_series(snapshot.derived, cfg, spec.quantity, screen);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyYearRange) throw;
        }
    }
    std::vector<YearlyEntry> entries;
    if (series)
        for (const auto& e : series->entries)
            if (e.year >= range.first && e.year <= range.second) entries.push_back(e);
    if (entries.empty()) throw Error(ErrorCode::EmptySeries, "no yearly values to plot");

    PlotFrame f;
    f.left = 70.0;
    f.top = 50.0;
    f.width = spec.width - f.left - 20.0;
    f.height = spec.height - f.top - 50.0;
    if (f.width <= 0.0 || f.height <= 0.0) throw Error(ErrorCode::InvalidConfig, "figure dimensions too small");
    f.x_min = entries.front().year;
    f.x_max = entries.back().year;
    if (f.x_min == f.x_max) {
        f.x_min -= 1.0;
        f.x_max += 1.0;
    }
    f.y_min = f.y_max = entries.front().mean;
    for (const auto& e : entries) {
        f.y_min = std::min(f.y_min, e.mean);
        f.y_max = std::max(f.y_max, e.mean);
        if (spec.include_loess) {
            f.y_min = std::min(f.y_min, e.smoothed);
            f.y_max = std::max(f.y_max, e.smoothed);
        }
    }
    if (f.y_max - f.y_min <= 1e-12 * std::max(1.0, std::abs(f.y_max))) {
        f.y_min -= 0.5;
        f.y_max += 0.5;
    }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed6(spec.width) << "\" height=\""
        << fixed6(spec.height) << "\" viewBox=\"0 0 " << fixed6(spec.width) << ' ' << fixed6(spec.height) << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fixed6(spec.width) << "\" height=\"" << fixed6(spec.height)
        << "\" fill=\"#ffffff\"/>\n";

    const std::string title = "Average " + quantity_label(spec.quantity) + ", " + weighting_label(cfg.weighting) +
                              ", screen " + format_sig4(screen) + ", " + std::to_string(range.first) + "-" +
                              std::to_string(range.second);
    svg << "<text id=\"title\" x=\"" << fixed6(spec.width / 2) << "\" y=\"25.000000\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << xml_escape(title) << "</text>\n";

    const double x0 = f.left, x1 = f.left + f.width, y0 = f.top, y1 = f.top + f.height;
    svg << "<g id=\"axes\" stroke=\"#333333\" stroke-width=\"1\">\n";
    svg << "<line x1=\"" << fixed6(x0) << "\" y1=\"" << fixed6(y1) << "\" x2=\"" << fixed6(x1) << "\" y2=\""
        << fixed6(y1) << "\"/>\n";
    svg << "<line x1=\"" << fixed6(x0) << "\" y1=\"" << fixed6(y0) << "\" x2=\"" << fixed6(x0) << "\" y2=\""
        << fixed6(y1) << "\"/>\n";
    svg << "</g>\n";

    svg << "<g id=\"x-ticks\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">\n";
    const int first_tick = static_cast<int>(std::ceil(f.x_min));
    const int last_tick = static_cast<int>(std::floor(f.x_max));
    const int step = std::max(1, (last_tick - first_tick + 7) / 8);
    for (int yr = first_tick; yr <= last_tick; yr += step) {
        svg << "<text x=\"" << fixed6(f.px(yr)) << "\" y=\"" << fixed6(y1 + 18.0) << "\">" << yr << "</text>\n";
    }
    svg << "</g>\n";

    svg << "<g id=\"y-ticks\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = f.y_min + (f.y_max - f.y_min) * i / 4.0;
        svg << "<text x=\"" << fixed6(x0 - 6.0) << "\" y=\"" << fixed6(f.py(v) + 4.0) << "\">" << format_sig4(v)
            << "</text>\n";
    }
    svg << "</g>\n";

    svg << "<text id=\"x-label\" x=\"" << fixed6(f.left + f.width / 2) << "\" y=\"" << fixed6(spec.height - 8.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">Year</text>\n";
    svg << "<text id=\"y-label\" x=\"16.000000\" y=\"" << fixed6(f.top + f.height / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16.000000 "
        << fixed6(f.top + f.height / 2) << ")\">" << xml_escape(quantity_label(spec.quantity)) << "</text>\n";

    const auto polyline = [&](const char* id, const char* colour, auto value_of) {
        svg << "<polyline id=\"" << id << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (i) svg << ' ';
            svg << fixed6(f.px(entries[i].year)) << ',' << fixed6(f.py(value_of(entries[i])));
        }
        svg << "\"/>\n";
    };
    polyline("series", "#EF3B2C", [](const YearlyEntry& e) { return e.mean; });
    if (spec.include_loess) polyline("loess", "#386CB0", [](const YearlyEntry& e) { return e.smoothed; });
    svg << "</svg>\n";
    return svg.str();
}

std::string table_filename(const TableSpec& spec, Weighting weighting) {
    std::string name = "table_" + std::string(to_string(spec.kind));
    if (spec.kind != TableKind::Ladder) name += "_screen" + format_sig4(spec.screen);
    return name + "_" + std::string(to_string(weighting)) + "." + std::string(to_string(spec.format));
}

std::string figure_filename(const FigureSpec& spec, double screen, Weighting weighting) {
    return "figure_" + std::string(to_string(spec.quantity)) + "_screen" + format_sig4(screen) + "_" +
           std::string(to_string(weighting)) + ".svg";
}

}  // namespace thriftidx::report
