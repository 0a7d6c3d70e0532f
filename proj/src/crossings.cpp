// crossings.cpp: parity crossings, avoided crossings and near-degeneracy onset over a sweep

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "starkspec/spectrum.hpp"

namespace starkspec {

const char* to_string(CrossingKind k) noexcept {
    switch (k) {
        case CrossingKind::ParityCrossing: return "ParityCrossing";
        case CrossingKind::AvoidedCrossing: return "AvoidedCrossing";
        case CrossingKind::NearDegeneracyOnset: return "NearDegeneracyOnset";
    }
    return "?";
}

namespace {

// energies[c][k]: level of rank k in column c, one parity.
using Track = std::vector<std::vector<double>>;

Track split(const SpectrumTable& t, int parity, int& common) {
    Track out(t.levels.size());
    common = std::numeric_limits<int>::max();
    for (std::size_t c = 0; c < t.levels.size(); ++c) {
        for (const auto& l : t.levels[c])
            if (l.parity == parity) out[c].push_back(l.energy);
        std::sort(out[c].begin(), out[c].end());
        common = std::min(common, static_cast<int>(out[c].size()));
    }
    if (t.levels.empty()) common = 0;
    return out;
}

int sgn(double v) { return (v > 0) - (v < 0); }

void parity_crossings(const SpectrumTable& t, const Track& plus, int kp, const Track& minus,
                      int km, const CrossingOptions& opt, CrossingReport& r) {
    const auto& g = t.g_grid;
    for (int i = 0; i < kp; ++i) {
        for (int j = 0; j < km; ++j) {
            int last = -1;
            for (std::size_t c = 0; c < g.size(); ++c) {
                const double d = plus[c][i] - minus[c][j];
                if (sgn(d) == 0) continue;
                if (last >= 0 && sgn(d) != sgn(plus[last][i] - minus[last][j])) {
                    const double d0 = plus[last][i] - minus[last][j];
                    const double f = d0 / (d0 - d);
                    double g_at = g[last] + f * (g[c] - g[last]);
                    double e_at = plus[last][i] + f * (plus[c][i] - plus[last][i]);
                    if (opt.refine && g[last] > kGMin) {
                        const auto p = validate_params(t.delta, t.gamma, g_at);
                        const int n = static_cast<int>(std::lround(indicial_exponent(p, e_at)));
                        if (n >= 1) {
                            try {
                                if (auto gs = find_degenerate_g(t.delta, t.gamma, Parity::Plus, n,
                                                                g[last], g[c], opt.tol_g, 8)) {
                                    g_at = *gs;
                                    e_at = pole_energy(validate_params(t.delta, t.gamma, g_at), n);
                                }
                            } catch (const std::runtime_error&) {
                                // keep the interpolated estimate
                            }
                        }
                    }
                    r.events.push_back({CrossingKind::ParityCrossing, g_at, e_at, 0.0, {1, i},
                                        {-1, j}});
                }
                last = static_cast<int>(c);
            }
        }
    }
}

void avoided_crossings(const SpectrumTable& t, const Track& tr, int parity, int k_max,
                       const CrossingOptions& opt, CrossingReport& r) {
    const auto& g = t.g_grid;
    for (int k = 0; k + 1 < k_max; ++k) {
        auto gap = [&](std::size_t c) { return tr[c][k + 1] - tr[c][k]; };
        for (std::size_t c = 1; c + 1 < g.size(); ++c) {
            const double a = gap(c - 1), b = gap(c), d = gap(c + 1);
            if (!(b < a && b < d) || b > opt.avoided_max_gap) continue;
            // Vertex of the parabola through the three samples.
            double g_at = g[c], gap_at = b;
            const double h0 = g[c] - g[c - 1], h1 = g[c + 1] - g[c];
            const double s0 = (b - a) / h0, s1 = (d - b) / h1;
            const double curv = 2 * (s1 - s0) / (h0 + h1);
            if (curv > 0) {
                const double slope = s0 + 0.5 * curv * h0;  // at g[c]
                const double shift = std::clamp(-slope / curv, -h0, h1);
                const double v = b + slope * shift + 0.5 * curv * shift * shift;
                if (v > 0) {
                    g_at = g[c] + shift;
                    gap_at = v;
                }
            }
            r.events.push_back({CrossingKind::AvoidedCrossing, g_at,
                                0.5 * (tr[c][k] + tr[c][k + 1]), gap_at, {parity, k},
                                {parity, k + 1}});
        }
    }
}

void onsets(const SpectrumTable& t, const Track& plus, const Track& minus, int k_max,
            double threshold, CrossingReport& r) {
    const auto& g = t.g_grid;
    for (int k = 0; k < k_max; ++k) {
        std::size_t first = g.size();
        for (std::size_t c = g.size(); c-- > 0;) {
            if (!(std::abs(plus[c][k] - minus[c][k]) < threshold)) break;
            first = c;
        }
        if (first == g.size()) continue;
        r.events.push_back({CrossingKind::NearDegeneracyOnset, g[first],
                            0.5 * (plus[first][k] + minus[first][k]),
                            std::abs(plus[first][k] - minus[first][k]), {1, k}, {-1, k}});
    }
}

void ambiguities(const SpectrumTable& t, const Track& tr, int parity, int k_max,
                 CrossingReport& r) {
    const auto& g = t.g_grid;
    for (std::size_t c = 0; c < g.size(); ++c) {
        for (const auto& l : t.levels[c]) {
            if (l.parity == parity && !l.resolved && l.index < k_max)
                r.ambiguities.push_back({g[c], parity, l.index,
                                         l.quality == ZeroQuality::Grazing ? "grazing zero"
                                                                           : "zero inside pole window"});
        }
    }
    // Rank labels are checked against nearest-energy continuation from the two previous columns.
    for (std::size_t c = 2; c < g.size(); ++c) {
        for (int k = 0; k < k_max; ++k) {
            const double step = tr[c - 1][k] - tr[c - 2][k];
            const double guess = tr[c - 1][k] + step * (g[c] - g[c - 1]) / (g[c - 1] - g[c - 2]);
            int nearest = 0;
            for (int m = 1; m < static_cast<int>(tr[c].size()); ++m)
                if (std::abs(tr[c][m] - guess) < std::abs(tr[c][nearest] - guess)) nearest = m;
            const double jump = std::abs(tr[c][k] - tr[c - 1][k]);
            if (nearest != k)
                r.ambiguities.push_back({g[c], parity, k,
                                         "nearest continuation is rank " + std::to_string(nearest)});
            else if (jump > 3 * std::abs(step) + 1e-6)
                r.ambiguities.push_back({g[c], parity, k, "energy jump exceeds 3x local step"});
        }
    }
}

}  // namespace

CrossingReport detect_crossings(const SpectrumTable& table, double gap_threshold,
                                const CrossingOptions& opt) {
    CrossingReport r;
    if (table.g_grid.size() != table.levels.size())
        throw std::invalid_argument("detect_crossings: table has mismatched g grid and columns");
    int kp = 0, km = 0;
    const Track plus = split(table, 1, kp);
    const Track minus = split(table, -1, km);

    parity_crossings(table, plus, kp, minus, km, opt, r);
    avoided_crossings(table, plus, 1, kp, opt, r);
    avoided_crossings(table, minus, -1, km, opt, r);
    onsets(table, plus, minus, std::min(kp, km), gap_threshold, r);
    ambiguities(table, plus, 1, kp, r);
    ambiguities(table, minus, -1, km, r);

    std::stable_sort(r.events.begin(), r.events.end(),
                     [](const CrossingEvent& a, const CrossingEvent& b) { return a.g_at < b.g_at; });
    return r;
}

int count_pair_crossings(const CrossingReport& r, int k) {
    return static_cast<int>(std::count_if(r.events.begin(), r.events.end(), [&](const CrossingEvent& e) {
        return e.kind == CrossingKind::ParityCrossing && e.a.index == k && e.b.index == k;
    }));
}

}  // namespace starkspec
