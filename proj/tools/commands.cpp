// commands.cpp: subcommand handlers

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "starkspec/io.hpp"
#include "starkspec/oracle.hpp"
#include "starkspec/series.hpp"
#include "starkspec/spectrum.hpp"

namespace starkspec::cli {

namespace {

using io::json;

constexpr double kStrictTol = 1e-8;

Truncation truncation(const RunConfig& c, int factor = 1) {
    const int n = c.n_terms * factor;
    if (n < 2) throw std::invalid_argument("--nterms must be at least 2");
    return c.fixed_terms ? Truncation::fixed(n) : Truncation{n, true, 1500, 1e-16};
}

SweepOptions sweep_options(const RunConfig& c, int factor = 1) {
    SweepOptions o;
    o.roots.pole_halfwidth = c.pole_halfwidth;
    o.roots.tol_E = c.tol_e;
    o.roots.graze = c.graze;
    o.roots.truncation = truncation(c, factor);
    o.exceptional.tol_v = c.tol_v;
    o.e_step = c.e_step;
    o.threads = c.threads;
    if (!(o.e_step > 0)) throw std::invalid_argument("--estep must be positive");
    return o;
}

bool differs(double a, double b) { return !(std::abs(a - b) <= kStrictTol * (1 + std::abs(b))); }

json meta(const RunConfig& c, int levels) {
    json m;
    m["tool"] = "starkspec";
    m["version"] = kVersion;
    m["subcommand"] = c.subcommand;
    m["params"] = {{"delta", io::real(c.delta)}, {"gamma", io::real(c.gamma)}};
    if (c.subcommand == "spectrum" || c.subcommand == "crossings") {
        m["params"]["g_min"] = io::real(c.g_min);
        m["params"]["g_max"] = io::real(c.g_max);
        m["params"]["g_steps"] = c.g_steps;
    } else {
        m["params"]["g"] = io::real(c.g);
    }
    m["truncation"] = {{"nterms", c.n_terms},
                       {"adaptive", !c.fixed_terms},
                       {"strict", c.strict}};
    m["tolerances"] = {{"tol_E", io::real(c.tol_e)},
                       {"pole_halfwidth", io::real(c.pole_halfwidth)},
                       {"graze", io::real(c.graze)},
                       {"tol_V", io::real(c.tol_v)},
                       {"estep", io::real(c.e_step)}};
    if (levels > 0) m["levels"] = levels;
    m["format"] = c.format;
    return m;
}

// Flags every level whose energy moves by more than kStrictTol under doubled truncation.
int strict_flag(std::vector<Level>& col, const std::vector<Level>& ref) {
    int flagged = 0;
    for (auto& l : col) {
        const auto it = std::find_if(ref.begin(), ref.end(), [&](const Level& r) {
            return r.parity == l.parity && r.index == l.index;
        });
        if (it == ref.end() || differs(l.energy, it->energy)) {
            if (l.resolved) ++flagged;
            l.resolved = false;
        }
    }
    return flagged;
}

SpectrumTable sweep(const RunConfig& c, int levels, json& m) {
    auto table = spectrum_sweep(c.delta, c.gamma, c.g_min, c.g_max, c.g_steps, levels,
                                sweep_options(c));
    if (c.strict) {
        const auto ref = spectrum_sweep(c.delta, c.gamma, c.g_min, c.g_max, c.g_steps, levels,
                                        sweep_options(c, 2));
        int flagged = 0;
        for (std::size_t i = 0; i < table.levels.size(); ++i)
            flagged += strict_flag(table.levels[i], ref.levels[i]);
        m["strict_flagged"] = flagged;
        if (flagged) std::cerr << "strict: " << flagged << " level(s) unstable under doubled N\n";
    }
    return table;
}

}  // namespace

int run_gfun(const RunConfig& c) {
    const auto p = validate_params(c.delta, c.gamma, c.g);
    const auto fmt = io::parse_format(c.format);
    const double g2 = p.g * p.g;
    const double lo = c.energy_window ? c.e_min + g2 : c.x_min;
    const double hi = c.energy_window ? c.e_max + g2 : c.x_max;

    auto plus = g_profile(p, Parity::Plus, lo, hi, c.grid, truncation(c));
    auto minus = g_profile(p, Parity::Minus, lo, hi, c.grid, truncation(c));
    json m = meta(c, 0);
    m["window"] = {{"x_min", io::real(lo)}, {"x_max", io::real(hi)}, {"grid", c.grid}};
    if (c.strict) {
        int flagged = 0;
        for (auto* prof : {&plus, &minus}) {
            const auto sector = prof == &plus ? Parity::Plus : Parity::Minus;
            const auto ref = g_profile(p, sector, lo, hi, c.grid, truncation(c, 2));
            for (std::size_t i = 0; i < prof->size(); ++i) {
                auto& s = (*prof)[i];
                if (std::isfinite(s.value) && std::isfinite(ref[i].value) &&
                    differs(s.value, ref[i].value)) {
                    s.reliable = false;
                    ++flagged;
                }
            }
        }
        m["strict_flagged"] = flagged;
        if (flagged) std::cerr << "strict: " << flagged << " sample(s) unstable under doubled N\n";
    }
    io::emit(c.out, io::render(io::gfun_rows(plus, minus), fmt), m);
    return kOk;
}

int run_spectrum(const RunConfig& c) {
    validate_params(c.delta, c.gamma, c.g_min);
    validate_params(c.delta, c.gamma, c.g_max);
    const auto fmt = io::parse_format(c.format);
    const int levels = c.levels > 0 ? c.levels : 14;
    json m = meta(c, levels);
    const auto table = sweep(c, levels, m);
    io::emit(c.out, io::render(io::spectrum_rows(table), fmt), m);
    return kOk;
}

int run_poles(const RunConfig& c) {
    const auto p = validate_params(c.delta, c.gamma, c.g);
    const auto fmt = io::parse_format(c.format);
    if (c.n_max < 1) throw std::invalid_argument("--nmax must be at least 1");
    ExceptionalOptions eo;
    eo.tol_v = c.tol_v;
    std::vector<ExceptionalPoint> rows;
    for (int n = 1; n <= c.n_max; ++n) rows.push_back(classify_exceptional(p, Parity::Plus, n, eo));
    json m = meta(c, 0);
    m["n_max"] = c.n_max;
    io::emit(c.out, io::render(rows, fmt), m);
    return kOk;
}

int run_crossings(const RunConfig& c) {
    validate_params(c.delta, c.gamma, c.g_min);
    validate_params(c.delta, c.gamma, c.g_max);
    const auto fmt = io::parse_format(c.format);
    const int levels = c.levels > 0 ? c.levels : 14;
    json m = meta(c, levels);
    const auto table = sweep(c, levels, m);
    const auto report = detect_crossings(table, c.threshold);

    m["gap_threshold"] = io::real(c.threshold);
    json amb = json::array();
    for (const auto& a : report.ambiguities)
        amb.push_back({{"g", io::real(a.g)},
                       {"parity", a.parity},
                       {"index", a.index},
                       {"reason", a.reason}});
    m["ambiguities"] = std::move(amb);
    if (!report.ambiguities.empty())
        std::cerr << "tracking: " << report.ambiguities.size() << " ambiguity report(s)\n";
    io::emit(c.out, io::render(report.events, fmt), m);
    return kOk;
}

int run_oracle(const RunConfig& c) {
    const auto p = validate_params(c.delta, c.gamma, c.g);
    const auto fmt = io::parse_format(c.format);
    const int levels = c.levels > 0 ? c.levels : 10;
    const auto s = oracle_spectrum(p, levels, c.cutoff, true);
    json m = meta(c, levels);
    m["cutoff"] = c.cutoff;
    m["converged_count"] = s.converged_count;
    io::emit(c.out, io::render(io::oracle_rows(s), fmt), m);
    return kOk;
}

int run_compare(const RunConfig& c) {
    const auto p = validate_params(c.delta, c.gamma, c.g);
    const auto fmt = io::parse_format(c.format);
    const int levels = c.levels > 0 ? c.levels : 10;

    auto column = spectrum_column(p, 2 * levels, sweep_options(c), levels);
    json m = meta(c, levels);
    if (c.strict && p.g > kGMin) {
        const int flagged =
            strict_flag(column, spectrum_column(p, 2 * levels, sweep_options(c, 2), levels));
        m["strict_flagged"] = flagged;
    }

    const int dim = 2 * (c.cutoff + 1);
    OracleSpectrum o;
    for (int want = std::min(dim, 2 * levels + 10);; want = std::min(dim, 2 * want)) {
        o = oracle_spectrum(p, want, c.cutoff, true);
        if ((static_cast<int>(oracle_levels(o, 1, levels).size()) == levels &&
             static_cast<int>(oracle_levels(o, -1, levels).size()) == levels) ||
            want == dim)
            break;
    }

    std::vector<io::CompareRow> rows;
    double worst = 0;
    for (int par : {1, -1}) {
        const auto ref = oracle_levels(o, par, levels);
        std::vector<double> mine;
        for (const auto& l : column)
            if (l.parity == par && l.index < levels) mine.push_back(l.energy);
        const std::size_t n = std::min(ref.size(), mine.size());
        if (n < static_cast<std::size_t>(levels)) worst = INFINITY;
        for (std::size_t k = 0; k < n; ++k) {
            const double d = std::abs(mine[k] - ref[k]);
            worst = std::max(worst, d);
            rows.push_back({par, mine[k], ref[k], d});
        }
    }
    m["cutoff"] = c.cutoff;
    m["oracle_converged_count"] = o.converged_count;
    m["tol"] = io::real(c.tol);
    m["max_abs_diff"] = io::real(worst);
    std::cerr << "max|diff| = " << io::format_real(worst) << "\n";
    io::emit(c.out, io::render(rows, fmt), m);
    return worst <= c.tol ? kOk : kSoftFailure;
}

}  // namespace starkspec::cli
