// io.cpp: CSV/JSON serialization

#include "starkspec/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace starkspec::io {

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw std::invalid_argument("unknown format '" + s + "' (expected csv or json)");
}

std::string format_real(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

double parse_real(const std::string& s) {
    if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw std::invalid_argument("not a real number: '" + s + "'");
    return v;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

bool parse_bool(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw std::invalid_argument("not a boolean: '" + s + "'");
}

namespace {

int parse_int(const std::string& s) {
    int v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out(1);
    for (char c : line) {
        if (c == ',')
            out.emplace_back();
        else
            out.back() += c;
    }
    return out;
}

// Column lookup by header name; throws if the header does not match exactly.
void expect_header(const CsvTable& t, const std::vector<std::string>& want) {
    if (t.header != want) throw std::invalid_argument("unexpected CSV header");
    for (const auto& r : t.rows)
        if (r.size() != want.size()) throw std::invalid_argument("CSV row has wrong field count");
}

std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

std::optional<double> parse_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_real(s);
}

json opt_json(const std::optional<double>& v) { return v ? real(*v) : json(nullptr); }

ExceptionalKind parse_kind(const std::string& s) {
    for (auto k : {ExceptionalKind::Degenerate, ExceptionalKind::NondegenerateCandidate,
                   ExceptionalKind::Unresolved})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown classification '" + s + "'");
}

CrossingKind parse_crossing(const std::string& s) {
    for (auto k : {CrossingKind::ParityCrossing, CrossingKind::AvoidedCrossing,
                   CrossingKind::NearDegeneracyOnset})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown crossing kind '" + s + "'");
}

const std::vector<std::string> kGfunHeader{"x",      "E",           "G_plus",
                                           "G_minus", "reliable_plus", "reliable_minus"};
const std::vector<std::string> kSpectrumHeader{"g", "level_index", "parity", "energy", "resolved"};
const std::vector<std::string> kPolesHeader{"n", "E_pole", "x_pole", "classification", "residual"};
const std::vector<std::string> kCrossingsHeader{"kind",     "g_at",    "energy_at",
                                                "gap",      "parity_a", "index_a",
                                                "parity_b", "index_b"};
const std::vector<std::string> kOracleHeader{"index", "energy", "parity", "converged"};
const std::vector<std::string> kCompareHeader{"parity", "energy_series", "energy_oracle",
                                              "abs_diff"};

}  // namespace

json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_csv(std::ostream& os, const CsvTable& t) {
    auto line = [&](const std::vector<std::string>& f) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i) os << ',';
            os << f[i];
        }
        os << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("CSV input is empty");
    t.header = split_line(line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        t.rows.push_back(split_line(line));
    }
    return t;
}

// ---------------------------------------------------------------------------

std::vector<GfunRow> gfun_rows(const std::vector<GSample<>>& plus,
                               const std::vector<GSample<>>& minus) {
    if (plus.size() != minus.size()) throw std::invalid_argument("gfun_rows: size mismatch");
    std::vector<GfunRow> out;
    out.reserve(plus.size());
    auto value = [](const GSample<>& s) -> std::optional<double> {
        if (s.pole || !std::isfinite(s.value)) return std::nullopt;
        return s.value;
    };
    for (std::size_t i = 0; i < plus.size(); ++i)
        out.push_back({plus[i].x, plus[i].energy, value(plus[i]), value(minus[i]),
                       plus[i].reliable, minus[i].reliable});
    return out;
}

std::vector<SpectrumRow> spectrum_rows(const SpectrumTable& t) {
    std::vector<SpectrumRow> out;
    for (std::size_t c = 0; c < t.g_grid.size(); ++c)
        for (const auto& l : t.levels[c])
            out.push_back({t.g_grid[c], l.index, l.parity, l.energy, l.resolved});
    return out;
}

std::vector<OracleRow> oracle_rows(const OracleSpectrum& s) {
    std::vector<OracleRow> out;
    for (std::size_t i = 0; i < s.energies.size(); ++i)
        out.push_back({static_cast<int>(i), s.energies[i], s.parities[i],
                       static_cast<int>(i) < s.converged_count});
    return out;
}

// ---------------------------------------------------------------------------

CsvTable to_csv(const std::vector<GfunRow>& rows) {
    CsvTable t{kGfunHeader, {}};
    for (const auto& r : rows)
        t.rows.push_back({format_real(r.x), format_real(r.energy), opt_real(r.g_plus),
                          opt_real(r.g_minus), format_bool(r.reliable_plus),
                          format_bool(r.reliable_minus)});
    return t;
}

CsvTable to_csv(const std::vector<SpectrumRow>& rows) {
    CsvTable t{kSpectrumHeader, {}};
    for (const auto& r : rows)
        t.rows.push_back({format_real(r.g), std::to_string(r.level_index), std::to_string(r.parity),
                          format_real(r.energy), format_bool(r.resolved)});
    return t;
}

CsvTable to_csv(const std::vector<ExceptionalPoint>& rows) {
    CsvTable t{kPolesHeader, {}};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.n), format_real(r.energy), format_real(r.x),
                          to_string(r.classification), format_real(r.residual)});
    return t;
}

CsvTable to_csv(const std::vector<CrossingEvent>& rows) {
    CsvTable t{kCrossingsHeader, {}};
    for (const auto& r : rows)
        t.rows.push_back({to_string(r.kind), format_real(r.g_at), format_real(r.energy_at),
                          format_real(r.gap), std::to_string(r.a.parity),
                          std::to_string(r.a.index), std::to_string(r.b.parity),
                          std::to_string(r.b.index)});
    return t;
}

CsvTable to_csv(const std::vector<OracleRow>& rows) {
    CsvTable t{kOracleHeader, {}};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.index), format_real(r.energy), std::to_string(r.parity),
                          format_bool(r.converged)});
    return t;
}

CsvTable to_csv(const std::vector<CompareRow>& rows) {
    CsvTable t{kCompareHeader, {}};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.parity), format_real(r.energy_series),
                          format_real(r.energy_oracle), format_real(r.abs_diff)});
    return t;
}

// ---------------------------------------------------------------------------

std::vector<GfunRow> gfun_from_csv(const CsvTable& t) {
    expect_header(t, kGfunHeader);
    std::vector<GfunRow> out;
    for (const auto& r : t.rows)
        out.push_back({parse_real(r[0]), parse_real(r[1]), parse_opt(r[2]), parse_opt(r[3]),
                       parse_bool(r[4]), parse_bool(r[5])});
    return out;
}

std::vector<SpectrumRow> spectrum_from_csv(const CsvTable& t) {
    expect_header(t, kSpectrumHeader);
    std::vector<SpectrumRow> out;
    for (const auto& r : t.rows)
        out.push_back({parse_real(r[0]), parse_int(r[1]), parse_int(r[2]), parse_real(r[3]),
                       parse_bool(r[4])});
    return out;
}

std::vector<ExceptionalPoint> poles_from_csv(const CsvTable& t) {
    expect_header(t, kPolesHeader);
    std::vector<ExceptionalPoint> out;
    for (const auto& r : t.rows)
        out.push_back({parse_int(r[0]), parse_real(r[1]), parse_real(r[2]), parse_kind(r[3]),
                       parse_real(r[4])});
    return out;
}

std::vector<CrossingEvent> crossings_from_csv(const CsvTable& t) {
    expect_header(t, kCrossingsHeader);
    std::vector<CrossingEvent> out;
    for (const auto& r : t.rows)
        out.push_back({parse_crossing(r[0]), parse_real(r[1]), parse_real(r[2]), parse_real(r[3]),
                       {parse_int(r[4]), parse_int(r[5])}, {parse_int(r[6]), parse_int(r[7])}});
    return out;
}

std::vector<OracleRow> oracle_from_csv(const CsvTable& t) {
    expect_header(t, kOracleHeader);
    std::vector<OracleRow> out;
    for (const auto& r : t.rows)
        out.push_back({parse_int(r[0]), parse_real(r[1]), parse_int(r[2]), parse_bool(r[3])});
    return out;
}

std::vector<CompareRow> compare_from_csv(const CsvTable& t) {
    expect_header(t, kCompareHeader);
    std::vector<CompareRow> out;
    for (const auto& r : t.rows)
        out.push_back({parse_int(r[0]), parse_real(r[1]), parse_real(r[2]), parse_real(r[3])});
    return out;
}

// ---------------------------------------------------------------------------

json to_json(const std::vector<GfunRow>& rows) {
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"x", real(r.x)},
                     {"E", real(r.energy)},
                     {"G_plus", opt_json(r.g_plus)},
                     {"G_minus", opt_json(r.g_minus)},
                     {"reliable_plus", r.reliable_plus},
                     {"reliable_minus", r.reliable_minus}});
    return a;
}

json to_json(const std::vector<SpectrumRow>& rows) {
    json a = json::array();
    for (std::size_t i = 0; i < rows.size();) {
        json levels = json::array();
        std::size_t j = i;
        for (; j < rows.size() && rows[j].g == rows[i].g; ++j)
            levels.push_back({{"level_index", rows[j].level_index},
                              {"parity", rows[j].parity},
                              {"energy", real(rows[j].energy)},
                              {"resolved", rows[j].resolved}});
        a.push_back({{"g", real(rows[i].g)}, {"levels", std::move(levels)}});
        i = j;
    }
    return a;
}

json to_json(const std::vector<ExceptionalPoint>& rows) {
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"n", r.n},
                     {"E_pole", real(r.energy)},
                     {"x_pole", real(r.x)},
                     {"classification", to_string(r.classification)},
                     {"residual", real(r.residual)}});
    return a;
}

json to_json(const std::vector<CrossingEvent>& rows) {
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"kind", to_string(r.kind)},
                     {"g_at", real(r.g_at)},
                     {"energy_at", real(r.energy_at)},
                     {"gap", real(r.gap)},
                     {"a", {{"parity", r.a.parity}, {"index", r.a.index}}},
                     {"b", {{"parity", r.b.parity}, {"index", r.b.index}}}});
    return a;
}

json to_json(const std::vector<OracleRow>& rows) {
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"index", r.index},
                     {"energy", real(r.energy)},
                     {"parity", r.parity},
                     {"converged", r.converged}});
    return a;
}

json to_json(const std::vector<CompareRow>& rows) {
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"parity", r.parity},
                     {"energy_series", real(r.energy_series)},
                     {"energy_oracle", real(r.energy_oracle)},
                     {"abs_diff", real(r.abs_diff)}});
    return a;
}

// ---------------------------------------------------------------------------

std::string sidecar_path(const std::string& out_path) { return out_path + ".meta.json"; }

void emit(const std::string& path, const std::string& data, const json& meta) {
    if (path.empty() || path == "-") {
        std::cout << data;
        std::cout.flush();
        return;
    }
    auto write = [](const std::string& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + p + "' for writing");
        f << text;
        if (!f) throw std::runtime_error("failed writing '" + p + "'");
    };
    write(path, data);
    write(sidecar_path(path), meta.dump(2) + "\n");
}

}  // namespace starkspec::io
