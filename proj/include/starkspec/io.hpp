// io.hpp: CSV/JSON emitters and parsers for every data product, plus sidecar metadata
//
// CSV: ',' delimiter, '.' decimal point, LF line endings, mandatory header. Reals are
// written with 17 significant digits so every file re-parses to the same doubles.

#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "starkspec/oracle.hpp"
#include "starkspec/series.hpp"
#include "starkspec/spectrum.hpp"

namespace starkspec::io {

using json = nlohmann::ordered_json;

enum class Format { Csv, Json };

Format parse_format(const std::string& s);

std::string format_real(double v);  // "" for NaN
double parse_real(const std::string& s);  // "" → NaN
std::string format_bool(bool b);
bool parse_bool(const std::string& s);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const CsvTable& t);
CsvTable read_csv(std::istream& is);

// ---------------------------------------------------------------------------
// Row types

struct GfunRow {
    double x, energy;
    std::optional<double> g_plus, g_minus;  // empty on a pole
    bool reliable_plus, reliable_minus;
};

struct SpectrumRow {
    double g;
    int level_index;
    int parity;
    double energy;
    bool resolved;
};

struct OracleRow {
    int index;
    double energy;
    int parity;
    bool converged;
};

struct CompareRow {
    int parity;
    double energy_series, energy_oracle, abs_diff;
};

std::vector<GfunRow> gfun_rows(const std::vector<GSample<>>& plus,
                               const std::vector<GSample<>>& minus);
std::vector<SpectrumRow> spectrum_rows(const SpectrumTable& t);
std::vector<OracleRow> oracle_rows(const OracleSpectrum& s);

CsvTable to_csv(const std::vector<GfunRow>& rows);
CsvTable to_csv(const std::vector<SpectrumRow>& rows);
CsvTable to_csv(const std::vector<ExceptionalPoint>& rows);
CsvTable to_csv(const std::vector<CrossingEvent>& rows);
CsvTable to_csv(const std::vector<OracleRow>& rows);
CsvTable to_csv(const std::vector<CompareRow>& rows);

std::vector<GfunRow> gfun_from_csv(const CsvTable& t);
std::vector<SpectrumRow> spectrum_from_csv(const CsvTable& t);
std::vector<ExceptionalPoint> poles_from_csv(const CsvTable& t);
std::vector<CrossingEvent> crossings_from_csv(const CsvTable& t);
std::vector<OracleRow> oracle_from_csv(const CsvTable& t);
std::vector<CompareRow> compare_from_csv(const CsvTable& t);

json to_json(const std::vector<GfunRow>& rows);
json to_json(const std::vector<SpectrumRow>& rows);  // nested by g
json to_json(const std::vector<ExceptionalPoint>& rows);
json to_json(const std::vector<CrossingEvent>& rows);
json to_json(const std::vector<OracleRow>& rows);
json to_json(const std::vector<CompareRow>& rows);

// Reals inside JSON documents go through format_real as well, so JSON output is as
// deterministic as CSV.
json real(double v);

// ---------------------------------------------------------------------------
// Output

template <typename Row>
std::string render(const std::vector<Row>& rows, Format f) {
    if (f == Format::Json) return to_json(rows).dump(2) + "\n";
    std::ostringstream os;
    write_csv(os, to_csv(rows));
    return os.str();
}

std::string sidecar_path(const std::string& out_path);

// Writes `data` to `path` ("-" or empty: stdout) and, for a real path, the sidecar next to it.
void emit(const std::string& path, const std::string& data, const json& meta);

}  // namespace starkspec::io
