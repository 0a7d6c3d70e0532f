// Acceptance checks, one per invocation: `acceptance <criterion>`.
// Prints a single result line and exits 0 on PASS, 1 on FAIL.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "starkspec/model.hpp"
#include "starkspec/oracle.hpp"
#include "starkspec/series.hpp"
#include "starkspec/spectrum.hpp"

using namespace starkspec;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Relative to the size of the terms entering K₀, K̄₀, C₀, C̄₀: each of these can itself be the
// small difference of O(1) terms, and the identity is only meaningful up to that scale.
Outcome determinant_identity() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> ud(0.0, 2.0), ug(-0.95, 0.95), uc(0.0, 1.6),
        ue(-3.0, 8.0);
    double worst = 0, worst_products = 0;
    for (int i = 0; i < 1000; ++i) {
        const double d = ud(rng), ga = ug(rng), g = uc(rng), e = ue(rng);
        const auto p = validate_params(d, ga, g);
        const double w = p.w, ew = std::abs(e) + g * w;
        const double sk0 = ew * (w + g) + std::abs(ga * d) * w;   // also bounds C̄₀
        const double skb0 = std::abs(d) * (w + g) + std::abs(ga) * w * ew;  // also bounds C₀
        const double scale = std::max(sk0 * sk0 + skb0 * skb0, std::numeric_limits<double>::min());
        for (Parity s : {Parity::Plus, Parity::Minus}) {
            const auto c = constants(p, s, e);
            const double det = std::abs(initial_determinant(c));
            worst = std::max(worst, det / scale);
            const double prod = std::max({std::abs(c.k0 * c.cbar0), std::abs(c.kbar0 * c.c0),
                                          std::numeric_limits<double>::min()});
            worst_products = std::max(worst_products, det / prod);
        }
    }
    return {worst <= 1e-12,
            fmt("max |K0 Cbar0 - Kbar0 C0| / term scale = %.3g (tol 1e-12); "
                "relative to the products themselves %.3g",
                worst, worst_products)};
}

Outcome g0_exactness() {
    const double delta = 0.4, gamma = 0.5;
    // Independent enumeration of (1 ± γ)n ± Δ.
    std::vector<double> want;
    for (int n = 0; n < 40; ++n) {
        want.push_back((1 + gamma) * n + delta);
        want.push_back((1 - gamma) * n - delta);
    }
    std::sort(want.begin(), want.end());
    want.resize(10);

    const auto col = spectrum_column(validate_params(delta, gamma, 1e-6), 10);
    double series = INFINITY;
    if (col.size() >= 10) {
        series = 0;
        for (int i = 0; i < 10; ++i) series = std::max(series, std::abs(col[i].energy - want[i]));
    }
    const auto o = oracle_spectrum(validate_params(delta, gamma, 0.0), 10, kDefaultCutoff, true);
    double oracle = INFINITY;
    if (o.energies.size() >= 10) {
        oracle = 0;
        for (int i = 0; i < 10; ++i) oracle = std::max(oracle, std::abs(o.energies[i] - want[i]));
    }
    return {series <= 1e-4 && oracle <= 1e-12,
            fmt("series max|dE| = %.3g (tol 1e-4), oracle max|dE| = %.3g (tol 1e-12)", series,
                oracle)};
}

Outcome oracle_equivalence() {
    double worst = 0;
    for (double g : {0.1, 0.4, 0.8, 1.2}) {
        const auto p = validate_params(0.4, 0.5, g);
        const auto col = spectrum_column(p, 20, {}, 10);
        const auto o = oracle_spectrum(p, 60, kDefaultCutoff, true);
        for (int par : {1, -1}) {
            const auto ref = oracle_levels(o, par, 10);
            std::vector<double> mine;
            for (const auto& l : col)
                if (l.parity == par && l.index < 10) mine.push_back(l.energy);
            if (ref.size() < 10 || mine.size() < 10) return {false, fmt("missing levels at g = %g", g)};
            for (int k = 0; k < 10; ++k) worst = std::max(worst, std::abs(mine[k] - ref[k]));
        }
    }
    return {worst <= 1e-6, fmt("max|E_series - E_oracle| = %.3g over 80 levels (tol 1e-6)", worst)};
}

// Distance in x from the pole to the nearest zero of each sector.
std::pair<double, double> nearest_zeros(const ModelParams<>& p, double ep) {
    RootOptions opt;
    opt.pole_halfwidth = 1e-9;
    std::pair<double, double> out{INFINITY, INFINITY};
    for (Parity s : {Parity::Plus, Parity::Minus}) {
        double& best = s == Parity::Plus ? out.first : out.second;
        for (const auto& z : find_regular_zeros(p, s, ep - 0.05, ep + 0.05, 400, opt))
            if (std::abs(z.energy - ep) < std::abs(best)) best = z.energy - ep;
    }
    return out;
}

Outcome singularity_lifting() {
    const auto p0 = validate_params(0.4, 0.5, 0.3);
    const double xs = pole_energy(p0, 1) + p0.g * p0.g;
    const bool x_ok = std::abs(xs - 0.55) <= 1e-12;

    const auto gs = find_degenerate_g(0.4, 0.5, Parity::Plus, 1, 0.1, 0.4);
    if (!gs) return {false, "find_degenerate_g found no lift in [0.1, 0.4]"};
    const bool g_ok = std::abs(*gs - 0.20808) <= 1e-3;

    // G is finite at the pole when g = g_s exactly; the zeros meet there in the limit
    // g -> g_s, so they are measured just off it.
    double spread = 0;
    for (double eps : {-1e-7, 1e-7}) {
        const auto p = validate_params(0.4, 0.5, *gs + eps);
        const auto [zp, zm] = nearest_zeros(p, pole_energy(p, 1));
        spread = std::max(spread, std::abs(zp - zm));
    }
    const bool c_ok = spread <= 1e-4;
    std::ostringstream s;
    s << fmt("x_s = %.15g ", xs) << (x_ok ? "(ok)" : "(off)")
      << fmt("; g_s = %.6f vs 0.20808 +- 1e-3 ", *gs) << (g_ok ? "(ok)" : "(off)")
      << fmt("; zero separation at g_s +- 1e-7 = %.3g, tol 1e-4 ", spread)
      << (c_ok ? "(ok)" : "(off)");
    return {x_ok && g_ok && c_ok, s.str()};
}

CrossingReport sweep_report(double gamma, double g_max, int steps, int levels, double threshold) {
    const auto t = spectrum_sweep(0.4, gamma, 0.0, g_max, steps, levels);
    return detect_crossings(t, threshold);
}

Outcome rabi_braiding() {
    const auto r = sweep_report(0.0, 1.6, 400, 14, 4e-5);
    bool ok = true;
    std::ostringstream s;
    s << "pair crossings (ranks 1..4):";
    for (int k = 1; k <= 4; ++k) {
        const int n = count_pair_crossings(r, k);
        s << ' ' << n;
        ok = ok && n == k;
    }
    s << " (want 1 2 3 4)";
    return {ok, s.str()};
}

Outcome stark_crossings() {
    const auto t = spectrum_sweep(0.4, 0.5, 0.0, 1.6, 400, 14);
    const auto r = detect_crossings(t, 4e-5);
    bool ok = true;
    std::ostringstream s;
    s << "pair crossings (ranks 1..4):";
    for (int k = 1; k <= 4; ++k) {
        const int n = count_pair_crossings(r, k);
        s << ' ' << n;
        ok = ok && n <= 2;
    }
    int same = 0;
    for (const auto& e : r.events)
        if (e.kind == CrossingKind::ParityCrossing && e.a.parity == e.b.parity) ++same;
    // Same-parity levels must stay strictly ordered in every column.
    for (const auto& col : t.levels)
        for (int par : {1, -1}) {
            double prev = -INFINITY;
            for (const auto& l : col)
                if (l.parity == par) {
                    if (!(l.energy > prev)) ++same;
                    prev = l.energy;
                }
        }
    double best = INFINITY;
    for (const auto& e : r.events)
        if (e.kind == CrossingKind::AvoidedCrossing && std::abs(e.g_at - 0.5) <= 0.1 && e.gap > 0)
            best = std::min(best, std::abs(e.g_at - 0.5));
    const bool avoided = std::isfinite(best);
    ok = ok && same == 0 && avoided;
    s << " (want <= 2); same-parity crossings: " << same
      << "; avoided crossing near g = 0.5: " << (avoided ? "found" : "none");
    return {ok, s.str()};
}

Outcome near_degeneracy() {
    const auto p = validate_params(0.4, 0.95, 0.6);
    const auto o = oracle_spectrum(p, 20, kDefaultCutoff, true);
    const double gap =
        std::abs(oracle_levels(o, 1, 1).at(0) - oracle_levels(o, -1, 1).at(0));
    const auto r = sweep_report(0.95, 1.6, 320, 4, 4e-5);
    double onset = INFINITY;
    for (const auto& e : r.events)
        if (e.kind == CrossingKind::NearDegeneracyOnset && e.a.index == 0 && e.b.index == 0)
            onset = std::min(onset, e.g_at);
    const bool ok = gap < 4e-5 && onset <= 0.6;
    std::ostringstream s;
    s << fmt("oracle gap at g = 0.6: %.4g (want < 4e-5); ", gap);
    if (std::isfinite(onset))
        s << fmt("onset at g = %.4g (want <= 0.6)", onset);
    else
        s << "no onset in [0, 1.6]";
    return {ok, s.str()};
}

Outcome truncation_stability() {
    const double halfwidth = RootOptions{}.pole_halfwidth;
    double worst = 0, at_x = 0, at_g = 0, at_gamma = 0;
    int samples = 0;
    for (double gamma : {0.0, 0.5})
        for (double g : {0.2, 0.8, 1.4}) {
            const auto p = validate_params(0.4, gamma, g);
            std::vector<double> poles{normalization_pole(p)};
            for (int n = 1; pole_energy(p, n) <= 6.0; ++n) poles.push_back(pole_energy(p, n));
            for (int i = 0; i <= 700; ++i) {
                const double x = -1.0 + 0.01 * i;
                const double e = x - g * g;
                if (std::any_of(poles.begin(), poles.end(),
                                [&](double ep) { return std::abs(e - ep) <= halfwidth; }))
                    continue;
                for (Parity s : {Parity::Plus, Parity::Minus}) {
                    const double a = g_function(p, s, e, 12).value;
                    const double b = g_function(p, s, e, 24).value;
                    const double rel = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
                    ++samples;
                    if (!(rel <= worst)) {
                        worst = rel;
                        at_x = x, at_g = g, at_gamma = gamma;
                    }
                }
            }
        }
    std::ostringstream s;
    s << fmt("max relative |G(12) - G(24)| = %.3g (tol 1e-8) at gamma = %g, g = %g", worst,
             at_gamma, at_g)
      << fmt(", x = %g; ", at_x) << samples << " samples";
    return {worst <= 1e-8, s.str()};
}

int run(const std::string& args) {
    const int status = std::system((std::string(STARKSPEC_CLI) + " " + args + " 2>/dev/null").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Outcome determinism() {
    const std::vector<std::pair<std::string, std::string>> cmds{
        {"spectrum --delta 0.4 --gamma 0.5 --gmin 0 --gmax 1.2 --gsteps 40 --levels 10 "
         "--threads 4 --out",
         "det_spectrum"},
        {"gfun --delta 0.4 --gamma 0.5 --g 0.4 --grid 301 --out", "det_gfun"},
        {"crossings --delta 0.4 --gamma 0 --gmin 0 --gmax 1.2 --gsteps 60 --levels 8 --out",
         "det_crossings"}};
    int compared = 0;
    for (const auto& [cmd, stem] : cmds)
        for (const char* ext : {".csv", ".json"}) {
            const std::string format = ext[1] == 'c' ? "csv" : "json";
            const std::string a = stem + "_a" + ext, b = stem + "_b" + ext;
            if (run(cmd + " " + a + " --format " + format) != 0 ||
                run(cmd + " " + b + " --format " + format) != 0)
                return {false, "CLI failed: " + cmd};
            if (slurp(a).empty() || slurp(a) != slurp(b)) return {false, "data differs: " + a};
            if (slurp(a + ".meta.json") != slurp(b + ".meta.json"))
                return {false, "sidecar differs: " + a};
            compared += 2;
        }
    return {true, std::to_string(compared) + " file pairs byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
        {1, {"determinant identity", determinant_identity}},
        {2, {"g = 0 exactness", g0_exactness}},
        {3, {"oracle equivalence", oracle_equivalence}},
        {4, {"singularity lifting", singularity_lifting}},
        {5, {"Rabi braiding", rabi_braiding}},
        {6, {"Stark crossings", stark_crossings}},
        {7, {"near-degeneracy onset", near_degeneracy}},
        {8, {"truncation stability", truncation_stability}},
        {9, {"determinism", determinism}}};
    if (argc != 2 || !criteria.count(std::atoi(argv[1]))) {
        std::fprintf(stderr, "usage: acceptance <1-9>\n");
        return 2;
    }
    const int id = std::atoi(argv[1]);
    const auto& [name, check] = criteria.at(id);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d (%s): %s  %s  [%.1f s]\n", id, name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    return o.pass ? 0 : 1;
}
