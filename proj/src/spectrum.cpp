// spectrum.cpp: pole-aware root finding on G±, exceptional points and g sweeps

#include "starkspec/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace starkspec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Sample {
    double e;
    double g;    // G±(e); NaN if unusable
    int segment; // number of poles below e
};

int sign(double v) { return (v > 0) - (v < 0); }

class Scanner {
public:
    Scanner(const ModelParams<>& p, Parity sector, const RootOptions& opt)
        : p_(p), sector_(sector), opt_(opt) {}

    double g(double e) const {
        const auto s = detail::evaluate_g(p_, sector_, e, opt_.truncation);
        return std::isfinite(s.value) ? s.value : kNaN;
    }

    double bisect(double a, double ga, double b) const {
        while (b - a > opt_.tol_E) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            const double gm = g(m);
            if (!std::isfinite(gm)) break;
            if (gm == 0.0) return m;
            if (sign(gm) == sign(ga)) {
                a = m;
                ga = gm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    }

    // Golden-section minimization of σ·G on [a, b]; stops early once σ·G turns negative.
    std::pair<double, double> dip(double a, double b, int sigma) const {
        constexpr double r = 0.6180339887498949;
        double c = b - r * (b - a), d = a + r * (b - a);
        double fc = sigma * g(c), fd = sigma * g(d);
        for (int it = 0; it < 80 && b - a > opt_.tol_E; ++it) {
            if (!(fc > 0)) return {c, fc};
            if (!(fd > 0)) return {d, fd};
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = sigma * g(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = sigma * g(d);
            }
        }
        return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
    }

private:
    ModelParams<> p_;
    Parity sector_;
    RootOptions opt_;
};

}  // namespace

std::vector<RegularZero> find_regular_zeros(const ModelParams<>& p, Parity sector, double e_min,
                                            double e_max, int grid, const RootOptions& opt) {
    if (!(e_min < e_max)) throw std::invalid_argument("find_regular_zeros: need E_min < E_max");
    if (grid < 16) throw std::invalid_argument("find_regular_zeros: grid must be at least 16");
    detail::require_disk(p);

    const double delta = opt.pole_halfwidth;
    const double eta = std::max(opt.pole_gap, 10.0 * kPoleAbort * p.one_minus_gamma2());

    // Poles whose exclusion window touches [e_min, e_max].
    std::vector<double> poles;
    {
        const double x_lo = indicial_exponent(p, e_min - delta);
        const double x_hi = indicial_exponent(p, e_max + delta);
        for (int n = std::max(1, static_cast<int>(std::ceil(x_lo))); n <= x_hi; ++n)
            poles.push_back(pole_energy(p, n));
        const double e0 = normalization_pole(p);
        if (e0 > e_min - delta && e0 < e_max + delta) poles.push_back(e0);
        std::sort(poles.begin(), poles.end());
    }
    auto near_pole = [&](double e) {
        return std::any_of(poles.begin(), poles.end(),
                           [&](double ep) { return std::abs(e - ep) < delta; });
    };
    auto segment_of = [&](double e) {
        return static_cast<int>(std::lower_bound(poles.begin(), poles.end(), e) - poles.begin());
    };

    std::vector<double> es;
    es.reserve(static_cast<std::size_t>(grid) + 4 * poles.size());
    const double h = (e_max - e_min) / (grid - 1);
    for (int i = 0; i < grid; ++i) {
        const double e = i == grid - 1 ? e_max : e_min + i * h;
        if (!near_pole(e)) es.push_back(e);
    }
    for (double ep : poles) {
        for (double e : {ep - delta, ep - eta, ep + eta, ep + delta})
            if (e >= e_min && e <= e_max) es.push_back(e);
    }
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());

    const Scanner scan(p, sector, opt);
    std::vector<Sample> s;
    s.reserve(es.size());
    for (double e : es) s.push_back({e, scan.g(e), segment_of(e)});

    std::vector<RegularZero> zeros;
    auto emit = [&](double e, bool bracketed) {
        ZeroQuality q = ZeroQuality::Grazing;
        if (bracketed) q = near_pole(e) ? ZeroQuality::NearPole : ZeroQuality::Bracketed;
        zeros.push_back({e, is_resolved(q), q});
    };
    auto usable = [&](std::size_t i, std::size_t j) {
        return s[i].segment == s[j].segment && std::isfinite(s[i].g) && std::isfinite(s[j].g);
    };

    // A sign change through a pole the exclusion list missed shows up as |G| growing
    // under refinement; such brackets are dropped.
    auto settled = [&](double e, double ga, double gb) {
        const double ge = scan.g(e);
        return std::isfinite(ge) && std::abs(ge) <= std::max(std::abs(ga), std::abs(gb));
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].g == 0.0) emit(s[i].e, true);
        if (i + 1 < s.size() && usable(i, i + 1) && sign(s[i].g) * sign(s[i + 1].g) < 0) {
            const double e = scan.bisect(s[i].e, s[i].g, s[i + 1].e);
            if (settled(e, s[i].g, s[i + 1].g)) emit(e, true);
        }
    }

    // Interior dips of |G| without a sign change: a close pair of zeros or a grazing touch.
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (!usable(i - 1, i) || !usable(i, i + 1)) continue;
        const int sg = sign(s[i].g);
        if (sg == 0 || sign(s[i - 1].g) != sg || sign(s[i + 1].g) != sg) continue;
        const double a = std::abs(s[i].g);
        if (!(a < std::abs(s[i - 1].g) && a <= std::abs(s[i + 1].g))) continue;
        const auto [em, fm] = scan.dip(s[i - 1].e, s[i + 1].e, sg);
        if (fm < 0) {
            emit(scan.bisect(s[i - 1].e, s[i - 1].g, em), true);
            emit(scan.bisect(em, sg * fm, s[i + 1].e), true);
        } else if (fm == 0) {
            emit(em, true);
        } else if (fm < opt.graze) {
            emit(em, false);
        }
    }

    std::sort(zeros.begin(), zeros.end(),
              [](const RegularZero& a, const RegularZero& b) { return a.energy < b.energy; });
    std::vector<RegularZero> out;
    for (const auto& z : zeros) {
        if (!out.empty() && z.energy - out.back().energy <= 2 * opt.tol_E) {
            if (z.resolved && !out.back().resolved) out.back() = z;
            continue;
        }
        out.push_back(z);
    }
    return out;
}

// ---------------------------------------------------------------------------

const char* to_string(ExceptionalKind k) noexcept {
    switch (k) {
        case ExceptionalKind::Degenerate: return "Degenerate";
        case ExceptionalKind::NondegenerateCandidate: return "NondegenerateCandidate";
        case ExceptionalKind::Unresolved: return "Unresolved";
    }
    return "?";
}

VResidual v_residual(const ModelParams<>& p, Parity sector, int n) {
    if (n < 1) throw std::invalid_argument("exceptional points start at n = 1");
    const double e = pole_energy(p, n);
    CoefficientRecursion<double> rec(constants(p, sector, e), p);
    try {
        while (rec.n() < n - 1) rec.next();
    } catch (const PoleEncountered& hit) {
        throw PoleCollision(n, hit.n());
    }
    const auto sys = rec.system(n);
    auto norm = [](double v, double scale) { return scale > 0 ? v / scale : 0.0; };
    return {e, norm(sys.v(0), sys.v_scale(0)), norm(sys.v(1), sys.v_scale(1)), sys.v_scale(0),
            sys.v_scale(1)};
}

ExceptionalPoint classify_exceptional(const ModelParams<>& p, Parity sector, int n,
                                      const ExceptionalOptions& opt) {
    detail::require_disk(p);
    const auto v = v_residual(p, sector, n);
    const double residual = std::max(std::abs(v.v0), std::abs(v.v1));
    ExceptionalKind kind = ExceptionalKind::Unresolved;
    if (residual <= opt.tol_v)
        kind = ExceptionalKind::Degenerate;
    else if (residual > opt.clear)
        kind = ExceptionalKind::NondegenerateCandidate;
    return {n, v.energy, v.energy + p.g * p.g, kind, residual};
}

std::optional<double> find_degenerate_g(double delta, double gamma, Parity sector, int n,
                                        double g_lo, double g_hi, double tol_g, int samples) {
    g_lo = std::max(g_lo, 2 * kGMin);
    if (!(g_lo < g_hi) || samples < 2) return std::nullopt;

    // Vₙ lies in the one-dimensional range of the singular adjugate, so both components
    // vanish together. Follow the one with the larger normalizer at the window centre.
    const auto mid = v_residual(validate_params(delta, gamma, 0.5 * (g_lo + g_hi)), sector, n);
    const bool first = mid.scale0 >= mid.scale1;
    auto f = [&](double g) {
        const auto v = v_residual(validate_params(delta, gamma, g), sector, n);
        return first ? v.v0 : v.v1;
    };

    double ga = g_lo, fa = f(ga);
    for (int i = 1; i < samples; ++i) {
        const double gb = i == samples - 1 ? g_hi : g_lo + (g_hi - g_lo) * i / (samples - 1);
        const double fb = f(gb);
        if (fa == 0.0) return ga;
        if (sign(fa) * sign(fb) < 0) {
            double a = ga, b = gb, fa_ = fa;
            const double stop = std::min(tol_g, 1e-13 * (1.0 + std::abs(b)));
            while (b - a > stop) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                const double fm = f(m);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if (sign(fm) == sign(fa_)) {
                    a = m;
                    fa_ = fm;
                } else {
                    b = m;
                }
            }
            const double root = 0.5 * (a + b);
            // A jump through a singularity also changes sign; a genuine root leaves a
            // residual at round-off level.
            if (std::abs(f(root)) <= 1e-6) return root;
        }
        ga = gb;
        fa = fb;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

double spectrum_lower_bound(const ModelParams<>& p) noexcept {
    return -p.g * p.g / (1.0 - std::abs(p.gamma)) - std::abs(p.delta);
}

std::vector<Level> spectrum_column(const ModelParams<>& p, int level_count,
                                   const SweepOptions& opt, int per_parity_min) {
    std::vector<Level> all;
    auto count_parity = [&](int par) {
        return static_cast<int>(
            std::count_if(all.begin(), all.end(), [&](const Level& l) { return l.parity == par; }));
    };
    auto enough = [&] {
        return static_cast<int>(all.size()) >= level_count && count_parity(1) >= per_parity_min &&
               count_parity(-1) >= per_parity_min;
    };

    if (!(p.g > kGMin)) {
        for (const auto& l : g0_levels(p, level_count + 2 * per_parity_min + 2))
            all.push_back({l.energy, l.parity, true, 0, ZeroQuality::Bracketed});
    } else {
        const double h = opt.e_step;
        double lo = spectrum_lower_bound(p) - 0.1;
        const double limit = lo + 1e3;
        int next_pole = 1;
        while (!enough() && lo < limit) {
            const double hi = lo + opt.chunk;
            const int grid = std::max(16, static_cast<int>(std::ceil((hi - lo + h) / h)) + 1);
            for (Parity sec : {Parity::Plus, Parity::Minus}) {
                for (const auto& z : find_regular_zeros(p, sec, lo - h, hi, grid, opt.roots)) {
                    const bool dup = std::any_of(all.begin(), all.end(), [&](const Level& l) {
                        return l.parity == sign_of(sec) &&
                               std::abs(l.energy - z.energy) <= 2 * opt.roots.tol_E;
                    });
                    if (!dup) all.push_back({z.energy, sign_of(sec), z.resolved, 0, z.quality});
                }
            }
            // Lifted poles are eigenvalues of both parities that no sign change reveals.
            for (; pole_energy(p, next_pole) <= hi; ++next_pole) {
                if (pole_energy(p, next_pole) < lo - h) continue;
                const auto ep = classify_exceptional(p, Parity::Plus, next_pole, opt.exceptional);
                if (ep.classification != ExceptionalKind::Degenerate) continue;
                for (int par : {1, -1}) {
                    const bool have = std::any_of(all.begin(), all.end(), [&](const Level& l) {
                        return l.parity == par && std::abs(l.energy - ep.energy) < 1e-6;
                    });
                    if (!have) all.push_back({ep.energy, par, true, 0, ZeroQuality::Exceptional});
                }
            }
            lo = hi;
        }
    }

    std::sort(all.begin(), all.end(), [](const Level& a, const Level& b) {
        return a.energy != b.energy ? a.energy < b.energy : a.parity > b.parity;
    });
    // Lowest level_count, extended until both parities reach per_parity_min.
    std::vector<Level> out;
    int np = 0, nm = 0;
    for (const auto& l : all) {
        if (static_cast<int>(out.size()) >= level_count && np >= per_parity_min &&
            nm >= per_parity_min)
            break;
        out.push_back(l);
        out.back().index = l.parity > 0 ? np++ : nm++;
    }
    return out;
}

SpectrumTable spectrum_sweep(double delta, double gamma, double g_min, double g_max, int g_steps,
                             int level_count, const SweepOptions& opt) {
    if (g_steps < 2) throw std::invalid_argument("spectrum_sweep: g_steps must be at least 2");
    if (level_count < 1) throw std::invalid_argument("spectrum_sweep: level_count must be >= 1");
    if (!(g_min <= g_max)) throw std::invalid_argument("spectrum_sweep: need g_min <= g_max");
    validate_params(delta, gamma, g_min);

    SpectrumTable t;
    t.delta = delta;
    t.gamma = gamma;
    t.requested_count = level_count;
    t.g_grid.resize(static_cast<std::size_t>(g_steps));
    for (int i = 0; i < g_steps; ++i)
        t.g_grid[i] = i == g_steps - 1 ? g_max : g_min + (g_max - g_min) * i / (g_steps - 1);
    t.levels.resize(t.g_grid.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::size_t i = next++; i < t.g_grid.size() && !failed; i = next++) {
            try {
                t.levels[i] =
                    spectrum_column(validate_params(delta, gamma, t.g_grid[i]), level_count, opt);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    int n_threads = opt.threads > 0 ? opt.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::clamp(n_threads, 1, g_steps);
    if (n_threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return t;
}

}  // namespace starkspec
