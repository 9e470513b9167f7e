#include "thriftidx/ingest.hpp"

#include "thriftidx/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <iterator>
#include <ostream>
#include <sstream>
#include <tuple>

namespace thriftidx {

namespace {

constexpr int kMinYear = 1800;
constexpr int kMaxYear = 2100;

constexpr std::array<std::string_view, 5> kRequired = {"country", "variable", "percentile", "year",
                                                       "value"};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_blank(std::string_view line) { return detail::trim(line).empty(); }

enum class Role { NetSaving, Capital, Gdp };

std::optional<Role> role_of(std::string_view variable, const RoleMap& roles) {
    // Longest matching code wins so that one code being a prefix of another
    // does not make the mapping ambiguous.
    std::optional<Role> best;
    std::size_t best_len = 0;
    const auto consider = [&](const std::string& code, Role role) {
        const bool hit = roles.match_mode == MatchMode::Exact ? variable == code
                                                              : variable.starts_with(code);
        if (hit && code.size() > best_len) {
            best = role;
            best_len = code.size();
        }
    };
    consider(roles.net_saving_code, Role::NetSaving);
    consider(roles.capital_code, Role::Capital);
    consider(roles.gdp_code, Role::Gdp);
    return best;
}

std::string_view role_name(Role r) {
    switch (r) {
        case Role::NetSaving: return "net saving";
        case Role::Capital: return "capital";
        case Role::Gdp: return "gdp";
    }
    return "?";
}

}  // namespace

void RoleMap::validate() const {
    if (net_saving_code.empty() || capital_code.empty() || gdp_code.empty())
        throw Error(ErrorCode::InvalidRoleMap, "role map codes must be nonempty");
    if (net_saving_code == capital_code || net_saving_code == gdp_code || capital_code == gdp_code)
        throw Error(ErrorCode::InvalidRoleMap, "role map codes must be pairwise distinct");
}

ParseResult parse_records(std::string_view input, const ParseOptions& options) {
    const auto all_lines = detail::lines(input);

    std::size_t first = 0;
    while (first < all_lines.size() && is_blank(all_lines[first])) ++first;
    if (first == all_lines.size()) throw Error(ErrorCode::EmptyInput, "input has no content");

    std::vector<std::string> names;
    std::size_t data_begin = first;
    if (options.columns.empty()) {
        for (auto field : detail::split(all_lines[first], options.delimiter))
            names.push_back(lower(detail::unquote(field)));
        data_begin = first + 1;
    } else {
        for (const auto& c : options.columns) names.push_back(lower(detail::trim(c)));
    }

    std::array<std::size_t, kRequired.size()> idx{};
    std::string missing;
    for (std::size_t r = 0; r < kRequired.size(); ++r) {
        const auto it = std::find(names.begin(), names.end(), kRequired[r]);
        if (it == names.end()) {
            if (!missing.empty()) missing += ", ";
            missing += kRequired[r];
        } else {
            idx[r] = static_cast<std::size_t>(std::distance(names.begin(), it));
        }
    }
    if (!missing.empty()) throw Error(ErrorCode::MissingColumn, "missing column(s): " + missing);
    const std::size_t needed = *std::max_element(idx.begin(), idx.end()) + 1;

    ParseResult result;
    bool any_data = false;
    for (std::size_t i = data_begin; i < all_lines.size(); ++i) {
        const auto line = all_lines[i];
        if (is_blank(line)) continue;
        any_data = true;
        const std::size_t line_no = i + 1;
        const auto fields = detail::split(line, options.delimiter);
        if (fields.size() < needed) {
            result.errors.push_back({line_no, ErrorCode::BadField, "expected at least " + std::to_string(needed) +
                                                  " fields, found " + std::to_string(fields.size())});
            continue;
        }
        RawRecord rec;
        rec.country = std::string(detail::unquote(fields[idx[0]]));
        rec.variable = std::string(detail::unquote(fields[idx[1]]));
        rec.percentile = std::string(detail::unquote(fields[idx[2]]));
        const auto year_text = detail::unquote(fields[idx[3]]);
        const auto value_text = detail::unquote(fields[idx[4]]);

        if (rec.country.size() < 2 || rec.country.size() > 5) {
            result.errors.push_back({line_no, ErrorCode::BadField, "country code '" + rec.country + "' must be 2-5 characters"});
            continue;
        }
        const auto year = detail::parse_int(year_text);
        if (!year) {
            result.errors.push_back({line_no, ErrorCode::BadNumber, "year '" + std::string(year_text) + "'"});
            continue;
        }
        if (*year < kMinYear || *year > kMaxYear) {
            result.errors.push_back({line_no, ErrorCode::BadNumber, "year " + std::to_string(*year) + " outside [1800, 2100]"});
            continue;
        }
        const auto value = detail::parse_double(value_text);
        if (!value) {
            result.errors.push_back({line_no, ErrorCode::BadNumber, "value '" + std::string(value_text) + "'"});
            continue;
        }
        rec.year = static_cast<int>(*year);
        rec.value = *value;
        result.records.push_back(std::move(rec));
    }
    if (!any_data) throw Error(ErrorCode::EmptyInput, "input has no data rows");
    return result;
}

ParseResult parse_records(std::istream& input, const ParseOptions& options) {
    std::ostringstream buf;
    buf << input.rdbuf();
    return parse_records(std::string_view(buf.str()), options);
}

AssembleResult assemble_panel(const std::vector<RawRecord>& records, const RoleMap& roles) {
    roles.validate();

    struct Keyed {
        std::string_view country;
        Role role;
        int year;
        double value;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(records.size());
    for (const auto& r : records) {
        if (r.percentile != roles.percentile_filter) continue;
        if (const auto role = role_of(r.variable, roles))
            keyed.push_back({r.country, *role, r.year, r.value});
    }
    // Canonical order makes the fold (and any error it raises) independent of
    // input row order.
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        return std::tie(a.country, a.year, a.role, a.value) < std::tie(b.country, b.year, b.role, b.value);
    });

    struct Slots {
        std::optional<double> s_net, k, gdp;
    };
    std::map<std::pair<std::string, int>, Slots> cells;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        const auto& e = keyed[i];
        if (i > 0) {
            const auto& p = keyed[i - 1];
            if (p.country == e.country && p.year == e.year && p.role == e.role) {
                if (p.value != e.value) {
                    throw Error(ErrorCode::ConflictingDuplicate,
                                std::string(e.country) + " " + std::to_string(e.year) + " " +
                                    std::string(role_name(e.role)) + ": " + detail::format_roundtrip(p.value) +
                                    " vs " + detail::format_roundtrip(e.value));
                }
                continue;  // equal duplicate collapses
            }
        }
        auto& slot = cells[{std::string(e.country), e.year}];
        switch (e.role) {
            case Role::NetSaving: slot.s_net = e.value; break;
            case Role::Capital: slot.k = e.value; break;
            case Role::Gdp: slot.gdp = e.value; break;
        }
    }

    AssembleResult out;
    for (const auto& [key, slot] : cells) {
        const auto& [country, year] = key;
        if (!slot.s_net || !slot.k) continue;
        if (*slot.k <= 0.0) {
            out.warnings.push_back(country + " " + std::to_string(year) +
                                   ": capital <= 0, observation rejected");
            continue;
        }
        Observation obs{country, year, *slot.s_net, *slot.k, slot.gdp};
        if (obs.gdp && *obs.gdp < 0.0) {
            out.warnings.push_back(country + " " + std::to_string(year) + ": negative gdp ignored");
            obs.gdp.reset();
        }
        out.panels[country].push_back(std::move(obs));
    }
    if (out.panels.empty())
        throw Error(ErrorCode::NoQualifyingCountries,
                    "no country reports both net saving and capital under the role map");
    return out;
}

IngestConfig parse_ingest_config(std::string_view text) {
    IngestConfig cfg;
    std::size_t line_no = 0;
    for (auto line : detail::lines(text)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::InvalidConfig, "config line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = lower(detail::trim(line.substr(0, eq)));
        const std::string value(detail::unquote(line.substr(eq + 1)));
        if (key == "net_saving_code") {
            cfg.roles.net_saving_code = value;
        } else if (key == "capital_code") {
            cfg.roles.capital_code = value;
        } else if (key == "gdp_code") {
            cfg.roles.gdp_code = value;
        } else if (key == "percentile") {
            cfg.roles.percentile_filter = value;
        } else if (key == "match_mode") {
            if (value == "exact") cfg.roles.match_mode = MatchMode::Exact;
            else if (value == "prefix") cfg.roles.match_mode = MatchMode::Prefix;
            else throw Error(ErrorCode::InvalidConfig, "match_mode must be exact or prefix");
        } else if (key == "delimiter") {
            if (value == "tab") cfg.delimiter = '\t';
            else if (value.size() == 1) cfg.delimiter = value[0];
            else throw Error(ErrorCode::InvalidConfig, "delimiter must be one character or 'tab'");
        } else {
            throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
        }
    }
    cfg.roles.validate();
    return cfg;
}

void write_panel_csv(std::ostream& out, const PanelSet& panels) {
    out << "country,year,s_net,k,gdp\n";
    for (const auto& [country, panel] : panels) {
        for (const auto& o : panel) {
            out << country << ',' << o.year << ',' << detail::format_roundtrip(o.s_net) << ','
                << detail::format_roundtrip(o.k) << ',';
            if (o.gdp) out << detail::format_roundtrip(*o.gdp);
            out << '\n';
        }
    }
}

bool looks_like_panel_csv(std::string_view text) {
    for (auto line : detail::lines(text)) {
        if (is_blank(line)) continue;
        return detail::trim(line) == "country,year,s_net,k,gdp";
    }
    return false;
}

PanelSet read_panel_csv(std::string_view text) {
    const auto all = detail::lines(text);
    if (all.empty()) throw Error(ErrorCode::EmptyInput, "panel file is empty");
    if (!looks_like_panel_csv(text))
        throw Error(ErrorCode::MissingColumn, "panel header must be country,year,s_net,k,gdp");

    PanelSet panels;
    bool header_seen = false;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (is_blank(all[i])) continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto where = "panel line " + std::to_string(i + 1);
        const auto f = detail::split(all[i], ',');
        if (f.size() != 5) throw Error(ErrorCode::BadNumber, where + ": expected 5 fields");
        const auto year = detail::parse_int(f[1]);
        const auto s_net = detail::parse_double(f[2]);
        const auto k = detail::parse_double(f[3]);
        if (!year || !s_net || !k) throw Error(ErrorCode::BadNumber, where + ": unparseable number");
        if (*k <= 0.0) throw Error(ErrorCode::BadNumber, where + ": capital must be positive");
        Observation o{std::string(detail::trim(f[0])), static_cast<int>(*year), *s_net, *k, std::nullopt};
        if (!detail::trim(f[4]).empty()) {
            const auto gdp = detail::parse_double(f[4]);
            if (!gdp || *gdp < 0.0) throw Error(ErrorCode::BadNumber, where + ": bad gdp");
            o.gdp = *gdp;
        }
        panels[o.country].push_back(std::move(o));
    }
    for (auto& [country, panel] : panels) {
        std::sort(panel.begin(), panel.end(), [](const auto& a, const auto& b) { return a.year < b.year; });
        for (std::size_t i = 1; i < panel.size(); ++i)
            if (panel[i].year == panel[i - 1].year)
                throw Error(ErrorCode::ConflictingDuplicate,
                            country + " " + std::to_string(panel[i].year) + " appears twice in panel");
    }
    if (panels.empty()) throw Error(ErrorCode::EmptyInput, "panel file has no rows");
    return panels;
}

WeightOverrides read_weight_overrides(std::string_view text) {
    const auto all = detail::lines(text);
    WeightOverrides out;
    bool header_seen = false;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (is_blank(all[i])) continue;
        if (!header_seen) {
            if (detail::trim(all[i]) != "country,year,weight")
                throw Error(ErrorCode::MissingColumn, "weight file header must be country,year,weight");
            header_seen = true;
            continue;
        }
        const auto where = "weight line " + std::to_string(i + 1);
        const auto f = detail::split(all[i], ',');
        if (f.size() != 3) throw Error(ErrorCode::BadNumber, where + ": expected 3 fields");
        const auto year = detail::parse_int(f[1]);
        const auto w = detail::parse_double(f[2]);
        if (!year || !w || *w < 0.0) throw Error(ErrorCode::BadNumber, where + ": bad year or weight");
        const auto [it, fresh] = out.emplace(std::pair{std::string(detail::trim(f[0])), static_cast<int>(*year)}, *w);
        if (!fresh && it->second != *w)
            throw Error(ErrorCode::ConflictingDuplicate, where + ": conflicting weight for " + it->first.first);
    }
    if (!header_seen) throw Error(ErrorCode::EmptyInput, "weight file is empty");
    return out;
}

std::size_t apply_weight_overrides(PanelSet& panels, const WeightOverrides& overrides) {
    std::size_t changed = 0;
    for (auto& [country, panel] : panels)
        for (auto& o : panel)
            if (const auto it = overrides.find({country, o.year}); it != overrides.end()) {
                o.gdp = it->second;
                ++changed;
            }
    return changed;
}

}  // namespace thriftidx
