#include "thriftidx/cli.hpp"

#include "thriftidx/analysis.hpp"
#include "thriftidx/api.hpp"
#include "thriftidx/error.hpp"
#include "thriftidx/identities.hpp"
#include "thriftidx/ingest.hpp"
#include "thriftidx/report.hpp"
#include "thriftidx/snapshot.hpp"
#include "text_util.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <unistd.h>

namespace thriftidx::cli {

namespace {

namespace fs = std::filesystem;

struct UsageFailure {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

char parse_delimiter(const std::string& text) {
    if (text == "tab" || text == "\\t") return '\t';
    if (text.size() != 1) throw UsageFailure{"delimiter must be a single character or 'tab'"};
    return text[0];
}

std::pair<int, int> parse_years(const std::string& text) {
    const auto sep = text.find_first_of(":-", 1);
    if (sep == std::string::npos) throw UsageFailure{"year range must look like 1980:2022"};
    const auto a = detail::parse_int(std::string_view(text).substr(0, sep));
    const auto b = detail::parse_int(std::string_view(text).substr(sep + 1));
    if (!a || !b || *a > *b) throw UsageFailure{"bad year range '" + text + "'"};
    return {static_cast<int>(*a), static_cast<int>(*b)};
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const auto part : detail::split(text, ',')) {
        const auto v = detail::parse_double(part);
        if (!v) throw UsageFailure{"bad number '" + std::string(part) + "' in list"};
        out.push_back(*v);
    }
    return out;
}

void merge_panels(PanelSet& into, PanelSet from) {
    for (auto& [country, panel] : from) {
        auto& dst = into[country];
        for (auto& o : panel) {
            const auto it = std::find_if(dst.begin(), dst.end(), [&](const auto& d) { return d.year == o.year; });
            if (it == dst.end()) {
                dst.push_back(std::move(o));
            } else if (!(*it == o)) {
                throw Error(ErrorCode::ConflictingDuplicate,
                            country + " " + std::to_string(o.year) + " differs between input files");
            }
        }
        std::sort(dst.begin(), dst.end(), [](const auto& a, const auto& b) { return a.year < b.year; });
    }
}

struct InputOptions {
    std::vector<std::string> inputs;
    std::string config_path;
    std::string delimiter;
    std::string match_mode;
    std::string percentile;
    bool strict = false;
};

void add_input_options(CLI::App* cmd, InputOptions& o) {
    cmd->add_option("--input,-i", o.inputs, "WID long-format file or normalized panel CSV")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--config", o.config_path, "key=value ingest config")->check(CLI::ExistingFile);
    cmd->add_option("--delimiter", o.delimiter, "field delimiter of WID files (default ';')");
    cmd->add_option("--match-mode", o.match_mode, "variable code matching")
        ->check(CLI::IsMember({"exact", "prefix"}));
    cmd->add_option("--percentile", o.percentile, "percentile filter (default p0p100)");
    cmd->add_flag("--strict", o.strict, "fail on any malformed row");
}

PanelSet load_panels(const InputOptions& o, std::ostream& err) {
    IngestConfig cfg;
    if (!o.config_path.empty()) cfg = parse_ingest_config(read_file(o.config_path));
    if (!o.delimiter.empty()) cfg.delimiter = parse_delimiter(o.delimiter);
    if (!o.match_mode.empty()) cfg.roles.match_mode = o.match_mode == "exact" ? MatchMode::Exact : MatchMode::Prefix;
    if (!o.percentile.empty()) cfg.roles.percentile_filter = o.percentile;

    PanelSet panels;
    std::vector<RawRecord> records;
    std::size_t row_errors = 0;
    for (const auto& path : o.inputs) {
        const auto text = read_file(path);
        if (looks_like_panel_csv(text)) {
            merge_panels(panels, read_panel_csv(text));
            continue;
        }
        auto parsed = parse_records(text, ParseOptions{cfg.delimiter, {}});
        for (const auto& issue : parsed.errors)
            err << "warning: " << path << ":" << issue.line << ": " << to_string(issue.code) << ": " << issue.message
                << '\n';
        row_errors += parsed.errors.size();
        records.insert(records.end(), std::make_move_iterator(parsed.records.begin()),
                       std::make_move_iterator(parsed.records.end()));
    }
    if (o.strict && row_errors > 0)
        throw Error(ErrorCode::BadNumber, std::to_string(row_errors) + " malformed row(s) in strict mode");
    if (!records.empty()) {
        auto assembled = assemble_panel(records, cfg.roles);
        for (const auto& w : assembled.warnings) err << "warning: " << w << '\n';
        merge_panels(panels, std::move(assembled.panels));
    }
    if (panels.empty()) throw Error(ErrorCode::NoQualifyingCountries, "no usable observations in the inputs");
    return panels;
}

std::string panel_csv(const PanelSet& panels) {
    std::ostringstream s;
    write_panel_csv(s, panels);
    return s.str();
}

void emit(const std::string& content, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file_atomic(path, content);
    }
}

// ---------------------------------------------------------------- commands

struct AnalyzeOptions {
    InputOptions in;
    double screen = 0.01;
    std::string weight = "gdp";
    std::string convention = "begin";
    std::string years = "1980:2022";
    std::string ladder;
    std::string aggregation = "pointwise";
    std::string missing_gdp = "exclude";
    double loess_span = 0.75;
    int loess_degree = 2;
    unsigned threads = 1;
    std::string out;
    std::string derived_csv;
    std::string panel_csv;
    std::string weights;
};

AnalysisConfig analysis_config(const AnalyzeOptions& o) {
    AnalysisConfig c;
    if (!o.ladder.empty()) c.screen_ladder = parse_number_list(o.ladder);
    c.weighting = o.weight == "gdp" ? Weighting::Gdp : Weighting::Unweighted;
    c.convention = o.convention == "begin" ? Convention::BeginOfPeriod : Convention::EndOfPeriod;
    std::tie(c.first_year, c.last_year) = parse_years(o.years);
    c.aggregation = o.aggregation == "pointwise" ? Aggregation::PointwiseMean : Aggregation::RatioOfMeans;
    c.missing_gdp = o.missing_gdp == "exclude" ? MissingGdpPolicy::Exclude : MissingGdpPolicy::UnitWeight;
    c.display_screen = o.screen;
    c.loess.span = o.loess_span;
    c.loess.degree = o.loess_degree;
    // The headline screen is always one of the ladder levels.
    auto& ladder = c.screen_ladder;
    if (std::none_of(ladder.begin(), ladder.end(), [&](double s) { return std::abs(s - o.screen) <= 1e-12; })) {
        ladder.push_back(o.screen);
        std::sort(ladder.begin(), ladder.end());
    }
    c.validate();
    return c;
}

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
    const auto config = analysis_config(o);
    auto panels = load_panels(o.in, err);
    if (!o.weights.empty()) {
        const auto n = apply_weight_overrides(panels, read_weight_overrides(read_file(o.weights)));
        err << "weights overridden for " << n << " observations\n";
    }
    const auto snap = build_snapshot(panels, config, o.threads);
    write_file_atomic(o.out, snapshot_to_json(snap));
    if (!o.panel_csv.empty()) write_file_atomic(o.panel_csv, panel_csv(panels));
    if (!o.derived_csv.empty()) {
        std::ostringstream s;
        std::vector<DerivedPoint> all;
        for (const auto& [code, points] : snap.derived) all.insert(all.end(), points.begin(), points.end());
        write_derived_csv(s, all);
        write_file_atomic(o.derived_csv, s.str());
    }
    out << "snapshot " << o.out << ": " << snap.derived.size() << " countries, fingerprint " << snap.fingerprint
        << '\n';
    out << report::render_table(snap, {report::TableKind::Headline, config.display_screen, report::TableFormat::Text});
    return kOk;
}

int cmd_ingest(const InputOptions& in, const std::string& out_path, std::ostream& out, std::ostream& err) {
    const auto panels = load_panels(in, err);
    emit(panel_csv(panels), out_path, out);
    std::size_t n = 0;
    for (const auto& [c, p] : panels) n += p.size();
    err << "ingested " << panels.size() << " countries, " << n << " observations\n";
    return kOk;
}

struct ReportOptions {
    std::string snapshot;
    std::string table;
    std::string figure;
    std::string format = "csv";
    std::optional<double> screen;
    std::string years;
    bool no_loess = false;
    double width = 800.0;
    double height = 450.0;
    std::string out;
    std::string out_dir;
};

AnalysisSnapshot load_snapshot(const std::string& path) {
    if (!fs::exists(path)) throw Error(ErrorCode::SnapshotMissing, "snapshot " + path + " not found");
    return snapshot_from_json(read_file(path));
}

int cmd_report(const ReportOptions& o, std::ostream& out) {
    if (o.table.empty() == o.figure.empty()) throw UsageFailure{"give exactly one of --table or --figure"};
    const auto snap = load_snapshot(o.snapshot);
    std::string content, name;
    if (!o.table.empty()) {
        report::TableSpec spec;
        spec.kind = o.table == "headline" ? report::TableKind::Headline
                    : o.table == "ladder" ? report::TableKind::Ladder
                                          : report::TableKind::PerCountry;
        spec.format = o.format == "csv" ? report::TableFormat::Csv
                      : o.format == "json" ? report::TableFormat::Json
                                           : report::TableFormat::Text;
        spec.screen = o.screen.value_or(snap.config.display_screen);
        content = report::render_table(snap, spec);
        name = report::table_filename(spec, snap.config.weighting);
    } else {
        report::FigureSpec spec;
        spec.quantity = o.figure == "ratio" ? Quantity::Ratio : Quantity::Theta;
        if (!o.years.empty()) spec.year_range = parse_years(o.years);
        spec.screen = o.screen;
        spec.include_loess = !o.no_loess;
        spec.width = o.width;
        spec.height = o.height;
        content = report::render_figure(snap, spec);
        name = report::figure_filename(spec, o.screen.value_or(snap.config.display_screen), snap.config.weighting);
    }
    if (!o.out_dir.empty()) {
        fs::create_directories(o.out_dir);
        const auto path = (fs::path(o.out_dir) / name).string();
        write_file_atomic(path, content);
        out << path << '\n';
    } else {
        emit(content, o.out, out);
    }
    return kOk;
}

struct IdentityOptions {
    std::string ledger_path;
    std::optional<double> d_k, c, c_s, c_p, w_s, d_hd, d_h, y;
    double tol = 1e-12;
    std::string format = "text";
};

int cmd_identities(IdentityOptions o, std::ostream& out, std::ostream& err) {
    if (!o.ledger_path.empty()) {
        const auto text = read_file(o.ledger_path);
        std::size_t line_no = 0;
        for (auto line : detail::lines(text)) {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            const auto value = eq == std::string_view::npos ? std::nullopt : detail::parse_double(line.substr(eq + 1));
            if (!value) throw UsageFailure{"ledger line " + std::to_string(line_no) + ": expected key=number"};
            const auto key = detail::trim(line.substr(0, eq));
            std::optional<double>* slot = key == "dK"    ? &o.d_k
                                          : key == "C"   ? &o.c
                                          : key == "C_s" ? &o.c_s
                                          : key == "C_p" ? &o.c_p
                                          : key == "W_s" ? &o.w_s
                                          : key == "D_H" ? &o.d_hd
                                          : key == "dH"  ? &o.d_h
                                          : key == "Y"   ? &o.y
                                                         : nullptr;
            if (!slot) throw UsageFailure{"unknown ledger key '" + std::string(key) + "'"};
            if (!*slot) *slot = *value;  // flags given on the command line win
        }
    }
    if (!o.d_k || !o.c_s || !o.c_p || !o.w_s || !o.d_hd)
        throw UsageFailure{"ledger needs dK, C_s, C_p, W_s and D_H"};

    auto ledger = identities::IdentityLedger::from_components(*o.d_k, *o.c_s, *o.c_p, *o.w_s, *o.d_hd);
    if (o.c) ledger.c = *o.c;
    if (o.d_h) ledger.d_h = *o.d_h;
    ledger.y = o.y;
    const auto r = identities::check_net_output(ledger, o.tol);

    if (o.format == "json") {
        ojson j;
        j["dK"] = ledger.d_k;
        j["C"] = ledger.c;
        j["C_s"] = ledger.c_s;
        j["C_p"] = ledger.c_p;
        j["W_s"] = ledger.w_s;
        j["D_H"] = ledger.d_hd;
        j["dH"] = ledger.d_h;
        j["Y_extended"] = r.y_extended;
        j["Y_reduced"] = r.y_reduced;
        j["residual"] = r.residual;
        j["tolerance"] = r.tolerance;
        j["pass"] = r.pass;
        out << j.dump(2) << '\n';
    } else {
        out << "Y = dK + dH + C_p         = " << detail::format_roundtrip(r.y_extended) << '\n'
            << "Y = dK + C + W_s - D(H)   = " << detail::format_roundtrip(r.y_reduced) << '\n'
            << "residual                  = " << detail::format_roundtrip(r.residual) << '\n'
            << "tolerance                 = " << detail::format_roundtrip(r.tolerance) << '\n'
            << (r.pass ? "PASS" : "FAIL") << '\n';
    }
    if (!r.pass) {
        err << "error: DataError InvariantViolation: net output routes differ by "
            << detail::format_roundtrip(r.residual) << '\n';
        return kDataError;
    }
    return kOk;
}

struct GenerateOptions {
    std::string kind = "thrift";
    std::size_t countries = 50;
    int min_years = 20;
    int max_years = 40;
    int first_year = 1980;
    double noise = 0.0;
    std::uint64_t seed = 1;
    std::string path;
    double k0 = 100.0;
    std::string country = "ZZ";
    std::string out;
};

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
    const auto kind = o.kind == "thrift" ? WorldKind::Thrift : WorldKind::FreeGrowth;
    PanelSet panels;
    if (!o.path.empty()) {
        WorldSpec spec;
        spec.kind = kind;
        spec.country = o.country;
        spec.first_year = o.first_year;
        spec.path = parse_number_list(o.path);
        spec.years = static_cast<int>(spec.path.size()) + 1;
        spec.k0 = o.k0;
        spec.noise_sd = o.noise;
        spec.seed = o.seed;
        panels.emplace(spec.country, generate_world(spec));
    } else {
        DemoWorldOptions d;
        d.kind = kind;
        d.countries = o.countries;
        d.min_years = o.min_years;
        d.max_years = o.max_years;
        d.first_year = o.first_year;
        d.noise_sd = o.noise;
        d.seed = o.seed;
        panels = generate_worlds(d);
    }
    emit(panel_csv(panels), o.out, out);
    return kOk;
}

struct ServeCmdOptions {
    std::string snapshot;
    std::optional<int> port;
    std::string host = "127.0.0.1";
    std::string cors_origin = "*";
    std::string static_dir;
};

int cmd_serve(const ServeCmdOptions& o, std::ostream& out) {
    auto snap = std::make_shared<const AnalysisSnapshot>(load_snapshot(o.snapshot));
    api::ServeOptions opts;
    opts.host = o.host;
    opts.cors_origin = o.cors_origin;
    opts.static_dir = o.static_dir;
    if (o.port) {
        opts.port = *o.port;
    } else if (const char* env = std::getenv("THRIFTIDX_PORT")) {
        const auto p = detail::parse_int(env);
        if (!p || *p < 1 || *p > 65535) throw UsageFailure{"THRIFTIDX_PORT must be a port number"};
        opts.port = static_cast<int>(*p);
    }

    // Block the shutdown signals here so a dedicated thread can wait for them;
    // worker threads inherit the mask.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    api::Server server(snap, opts);
    const int port = server.bind();
    out << "serving " << snap->derived.size() << " countries on http://" << opts.host << ':' << port << '\n'
        << std::flush;
    std::thread waiter([&server, signals] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });
    waiter.detach();
    server.listen();
    return kOk;
}

std::pair<std::string_view, int> classify(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidConfig:
        case ErrorCode::InvalidRoleMap:
            return {"UsageError", kUsageError};
        default:
            return {"DataError", kDataError};
    }
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path() && !fs::exists(target.parent_path()))
        throw Error(ErrorCode::Io, "directory " + target.parent_path().string() + " does not exist");
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
        f << content;
        f.close();
        if (!f) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error(ErrorCode::Io, "cannot rename onto " + path + ": " + ec.message());
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Thrift-index analysis of national-accounts panels", "thriftidx"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    InputOptions ingest_in;
    std::string ingest_out;
    auto* ingest = app.add_subcommand("ingest", "parse WID files into a normalized panel CSV");
    add_input_options(ingest, ingest_in);
    ingest->add_option("--out,-o", ingest_out, "panel CSV path (default stdout)");

    AnalyzeOptions an;
    auto* analyze = app.add_subcommand("analyze", "compute a snapshot from panels");
    add_input_options(analyze, an.in);
    analyze->add_option("--screen", an.screen, "headline and figure screen")->check(CLI::NonNegativeNumber);
    analyze->add_option("--weight", an.weight)->check(CLI::IsMember({"gdp", "none"}));
    analyze->add_option("--convention", an.convention, "capital denominator timing")
        ->check(CLI::IsMember({"begin", "end"}));
    analyze->add_option("--years", an.years, "year range, e.g. 1980:2022");
    analyze->add_option("--ladder", an.ladder, "comma-separated screen thresholds");
    analyze->add_option("--aggregation", an.aggregation)->check(CLI::IsMember({"pointwise", "ratio-of-means"}));
    analyze->add_option("--missing-gdp", an.missing_gdp)->check(CLI::IsMember({"exclude", "unit-weight"}));
    analyze->add_option("--loess-span", an.loess_span)->check(CLI::Range(1e-9, 1.0));
    analyze->add_option("--loess-degree", an.loess_degree)->check(CLI::IsMember({1, 2}));
    analyze->add_option("--threads", an.threads)->check(CLI::Range(1u, 256u));
    analyze->add_option("--out,-o", an.out, "snapshot JSON path")->required();
    analyze->add_option("--weights", an.weights, "country,year,weight file replacing GDP weights")
        ->check(CLI::ExistingFile);
    analyze->add_option("--derived-csv", an.derived_csv, "also write derived points");
    analyze->add_option("--panel-csv", an.panel_csv, "also write the normalized panel");

    ReportOptions rep;
    auto* report = app.add_subcommand("report", "render tables and figures from a snapshot");
    report->add_option("--snapshot,-s", rep.snapshot)->required();
    report->add_option("--table", rep.table)->check(CLI::IsMember({"headline", "ladder", "per-country"}));
    report->add_option("--figure", rep.figure)->check(CLI::IsMember({"ratio", "theta"}));
    report->add_option("--format", rep.format)->check(CLI::IsMember({"csv", "json", "text"}));
    report->add_option("--screen", rep.screen)->check(CLI::NonNegativeNumber);
    report->add_option("--years", rep.years);
    report->add_flag("--no-loess", rep.no_loess);
    report->add_option("--width", rep.width)->check(CLI::PositiveNumber);
    report->add_option("--height", rep.height)->check(CLI::PositiveNumber);
    report->add_option("--out,-o", rep.out, "output file (default stdout)");
    report->add_option("--out-dir", rep.out_dir, "directory; the file name encodes kind, screen, weighting");

    IdentityOptions id;
    auto* idc = app.add_subcommand("identities", "check the net-output identities on a ledger");
    idc->add_option("--ledger", id.ledger_path, "key=value file (dK, C, C_s, C_p, W_s, D_H, dH, Y)")
        ->check(CLI::ExistingFile);
    idc->add_option("--dK", id.d_k, "capital growth");
    idc->add_option("--C", id.c, "total consumption (default C_s + C_p)");
    idc->add_option("--Cs", id.c_s, "invested consumption");
    idc->add_option("--Cp", id.c_p, "pure consumption");
    idc->add_option("--Ws", id.w_s, "self-invested work");
    idc->add_option("--DH", id.d_hd, "human depreciation");
    idc->add_option("--dH", id.d_h, "human-capital growth (default C_s + W_s - D_H)");
    idc->add_option("--Y", id.y, "stated net output");
    idc->add_option("--tol", id.tol)->check(CLI::NonNegativeNumber);
    idc->add_option("--format", id.format)->check(CLI::IsMember({"text", "json"}));

    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "write synthetic thrift or free-growth panels");
    generate->add_option("--kind", gen.kind)->check(CLI::IsMember({"thrift", "free-growth"}));
    generate->add_option("--countries", gen.countries)->check(CLI::Range(1, 999));
    generate->add_option("--min-years", gen.min_years)->check(CLI::Range(2, 300));
    generate->add_option("--max-years", gen.max_years)->check(CLI::Range(2, 300));
    generate->add_option("--first-year", gen.first_year)->check(CLI::Range(1800, 2100));
    generate->add_option("--noise", gen.noise)->check(CLI::NonNegativeNumber);
    generate->add_option("--seed", gen.seed);
    generate->add_option("--path", gen.path, "single world: comma-separated s* (thrift) or g (free growth)");
    generate->add_option("--k0", gen.k0)->check(CLI::PositiveNumber);
    generate->add_option("--country", gen.country);
    generate->add_option("--out,-o", gen.out, "panel CSV path (default stdout)");

    ServeCmdOptions sv;
    auto* serve = app.add_subcommand("serve", "serve a snapshot over a read-only HTTP API");
    serve->add_option("--snapshot,-s", sv.snapshot)->required();
    serve->add_option("--port,-p", sv.port, "default $THRIFTIDX_PORT or 8080")->check(CLI::Range(1, 65535));
    serve->add_option("--host", sv.host);
    serve->add_option("--cors-origin", sv.cors_origin);
    serve->add_option("--static-dir", sv.static_dir, "explorer bundle served under /app")
        ->check(CLI::ExistingDirectory);

    std::vector<const char*> argv{"thriftidx"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: UsageError " << e.get_name() << ": " << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(ingest_in, ingest_out, out, err);
        if (analyze->parsed()) return cmd_analyze(an, out, err);
        if (report->parsed()) return cmd_report(rep, out);
        if (idc->parsed()) return cmd_identities(id, out, err);
        if (generate->parsed()) return cmd_generate(gen, out);
        if (serve->parsed()) return cmd_serve(sv, out);
    } catch (const UsageFailure& e) {
        err << "error: UsageError BadArgument: " << e.message << '\n';
        return kUsageError;
    } catch (const Error& e) {
        const auto [cls, exit_code] = classify(e.code());
        err << "error: " << cls << ' ' << to_string(e.code()) << ": " << e.what() << '\n';
        return exit_code;
    } catch (const std::exception& e) {
        err << "error: InternalError Exception: " << e.what() << '\n';
        return kInternalError;
    }
    return kInternalError;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace thriftidx::cli
