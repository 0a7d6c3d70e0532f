// spectrum.hpp: regular spectrum from the zeros of G±, exceptional points from the
// step determinant, sweeps over g and crossing analysis

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "starkspec/model.hpp"
#include "starkspec/series.hpp"

namespace starkspec {

// ---------------------------------------------------------------------------
// Regular spectrum

enum class ZeroQuality {
    Bracketed,    // sign change refined by bisection
    NearPole,     // bracketed, but inside the pole exclusion window
    Grazing,      // |G| dips below the grazing threshold without changing sign
    Exceptional,  // degenerate exceptional energy (lifted pole)
};

inline bool is_resolved(ZeroQuality q) noexcept {
    return q == ZeroQuality::Bracketed || q == ZeroQuality::Exceptional;
}

struct RegularZero {
    double energy;
    bool resolved;
    ZeroQuality quality;
};

struct RootOptions {
    double pole_halfwidth = 1e-4;  // δ_pole: grid points closer than this to a pole are dropped
    double pole_gap = 1e-8;        // closest approach to a pole when re-bracketing
    double tol_E = 1e-10;
    double graze = 1e-5;
    Truncation truncation{};
};

std::vector<RegularZero> find_regular_zeros(const ModelParams<>& p, Parity sector, double e_min,
                                            double e_max, int grid, const RootOptions& opt = {});

// ---------------------------------------------------------------------------
// Exceptional points

enum class ExceptionalKind { Degenerate, NondegenerateCandidate, Unresolved };

const char* to_string(ExceptionalKind k) noexcept;

struct ExceptionalPoint {
    int n;
    double energy;
    double x;
    ExceptionalKind classification;
    double residual;  // max over components of |Vₙ|/(largest additive term)
};

struct ExceptionalOptions {
    double tol_v = 1e-8;   // Degenerate at or below this
    double clear = 1e-5;   // NondegenerateCandidate above this
};

// Vₙ evaluated at E = E_pole(n), components normalized by their largest additive term.
struct VResidual {
    double energy;
    double v0, v1;         // signed, normalized
    double scale0, scale1; // raw normalizers
};

VResidual v_residual(const ModelParams<>& p, Parity sector, int n);

ExceptionalPoint classify_exceptional(const ModelParams<>& p, Parity sector, int n,
                                      const ExceptionalOptions& opt = {});

// g in [g_lo, g_hi] at which the pole n is lifted (Vₙ(E_pole) = 0).
std::optional<double> find_degenerate_g(double delta, double gamma, Parity sector, int n,
                                        double g_lo, double g_hi, double tol_g = 1e-10,
                                        int samples = 64);

// ---------------------------------------------------------------------------
// Sweeps

struct Level {
    double energy;
    int parity;     // ±1
    bool resolved;
    int index;      // rank within its parity in this column
    ZeroQuality quality = ZeroQuality::Bracketed;
};

struct SpectrumTable {
    double delta{0};
    double gamma{0};
    std::vector<double> g_grid;
    std::vector<std::vector<Level>> levels;  // per g, ascending in energy
    int requested_count{0};
};

struct SweepOptions {
    RootOptions roots{};
    ExceptionalOptions exceptional{};
    double e_step = 0.01;  // scan spacing in E
    double chunk = 1.0;    // the scan window grows upward in chunks of this width
    int threads = 0;       // 0: hardware concurrency
};

// Rigorous lower bound on the spectrum: E ≥ −g²/(1−|γ|) − |Δ|.
double spectrum_lower_bound(const ModelParams<>& p) noexcept;

// The `level_count` lowest levels at fixed g, and at least `per_parity_min` of each parity.
std::vector<Level> spectrum_column(const ModelParams<>& p, int level_count,
                                   const SweepOptions& opt = {}, int per_parity_min = 0);

SpectrumTable spectrum_sweep(double delta, double gamma, double g_min, double g_max, int g_steps,
                             int level_count, const SweepOptions& opt = {});

// ---------------------------------------------------------------------------
// Crossings

enum class CrossingKind { ParityCrossing, AvoidedCrossing, NearDegeneracyOnset };

const char* to_string(CrossingKind k) noexcept;

struct LevelRef {
    int parity;
    int index;
};

struct CrossingEvent {
    CrossingKind kind;
    double g_at;
    double energy_at;
    double gap;
    LevelRef a, b;
};

struct TrackingAmbiguity {
    double g;
    int parity;
    int index;
    std::string reason;
};

struct CrossingReport {
    std::vector<CrossingEvent> events;
    std::vector<TrackingAmbiguity> ambiguities;
};

struct CrossingOptions {
    double avoided_max_gap = 0.1;  // a same-parity gap minimum above this is ordinary repulsion
    bool refine = true;            // locate parity crossings on the lifted pole
    double tol_g = 1e-10;
};

CrossingReport detect_crossings(const SpectrumTable& table, double gap_threshold,
                                const CrossingOptions& opt = {});

// Number of ParityCrossing events between level +k and level −k.
int count_pair_crossings(const CrossingReport& r, int k);

}  // namespace starkspec
