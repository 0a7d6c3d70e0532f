// series.hpp: power-series solution around the regular singular point z₀ = −w and the
// G± connection functions built from it
//
// With φ(z) = e^{−wz} ρ(y), φ̄(z) = e^{−wz} ρ̄(y), y = z + w, the holomorphic (r = 0)
// solution is ρ = Σ αₙ yⁿ, ρ̄ = Σ ᾱₙ yⁿ with ᾱ₀ = 1. At z = 0 (y = w) the exponential
// prefactor is 1, so G±(E; 0) = ρ̄(w) − ρ(w).
//
// The recursion is carried out on βₙ = αₙ wⁿ, the terms of the series at y = w. For
// small w the raw αₙ grow like (2w)⁻ⁿ while βₙ stay O(2⁻ⁿ).

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "starkspec/errors.hpp"
#include "starkspec/model.hpp"

namespace starkspec {

// Below this Rabi coupling the singular points ±w merge and the series has no disk
// to live in; callers fall back to the g = 0 levels.
inline constexpr double kGMin = 1e-6;

// |n − x_γ| thresholds: abort the recursion, or just flag the sample.
inline constexpr double kPoleAbort = 1e-9;
inline constexpr double kPoleFlag = 1e-6;

// Normalization threshold for the n = 0 equations.
inline constexpr double kSingularInit = 1e-14;

// A fixed-N sample counts as reliable when its last term is this small relative to the
// largest term.
inline constexpr double kReliableTail = 1e-8;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar = double>
struct SeriesCoefficients {
    Vec<Scalar> alpha;       // αₙ, n = 0..N
    Vec<Scalar> alpha_bar;   // ᾱₙ
    Vec<Scalar> alpha_w;     // αₙ wⁿ
    Vec<Scalar> alpha_bar_w; // ᾱₙ wⁿ
    Scalar w{0};
    int n_terms{0};          // N
    Scalar tail_estimate{0}; // |α_N wᴺ| + |ᾱ_N wᴺ|
    std::optional<int> near_pole;
};

template <typename Scalar>
std::pair<Scalar, Scalar> initial_coefficients(const ConstantSet<Scalar>& c) {
    using std::abs;
    const Scalar tiny = Scalar(kSingularInit);
    if (abs(c.k0) < tiny && abs(c.c0) < tiny)
        throw SingularInitialization("K0 and C0 both vanish; alpha_0 is undetermined");
    // −K̄₀/K₀ and −C̄₀/C₀ agree by the determinant identity; use the better-conditioned one.
    const Scalar alpha0 = abs(c.k0) >= abs(c.c0) ? -c.kbar0 / c.k0 : -c.cbar0 / c.c0;
    return {alpha0, Scalar(1)};
}

// One step of the matrix recursion
//   [[K₀ₙ, K̄₀], [C₀, C̄₀ₙ]] (αₙ, ᾱₙ)ᵀ = rhsₙ,   (αₙ, ᾱₙ)ᵀ = Dₙ⁻¹ Vₙ,   Vₙ = adj · rhsₙ.
// Everything is expressed in the w-scaled coefficients βₙ = αₙ wⁿ; Vₙ then carries an
// extra factor wⁿ, which the normalized residual does not see.
template <typename Scalar = double>
struct StepSystem {
    Scalar det;              // Dₙ(E) = 4w²n(1−γ²)²(n − x_γ)
    Scalar distance;         // n − x_γ
    Eigen::Matrix<Scalar, 2, 1> v;
    Eigen::Matrix<Scalar, 2, 1> v_scale;  // largest additive term in each component
};

template <typename Scalar = double>
class CoefficientRecursion {
public:
    CoefficientRecursion(const ConstantSet<Scalar>& c, const ModelParams<Scalar>& p)
        : c_(c), w_(p.w), s_(p.one_minus_gamma2()), x_(indicial_exponent(p, c.energy)) {
        const auto [a0, b0] = initial_coefficients(c);
        b1_ = a0;  // β₀ = α₀
        bb1_ = b0;
    }

    int n() const noexcept { return n_; }
    Scalar beta() const noexcept { return b1_; }
    Scalar beta_bar() const noexcept { return bb1_; }
    const std::optional<int>& near_pole() const noexcept { return near_pole_; }

    StepSystem<Scalar> system(int n) const noexcept {
        using std::abs;
        const Scalar nn = Scalar(n);
        const Scalar m00 = Scalar(2) * w_ * s_ * nn + c_.k0;
        const Scalar m01 = c_.kbar0;
        const Scalar m10 = c_.c0;
        const Scalar m11 = Scalar(2) * w_ * s_ * nn + c_.cbar0;

        const Scalar k1n = s_ * (nn - Scalar(1)) - c_.k1;
        const Scalar cb1n = s_ * (nn - Scalar(1)) - c_.cbar1;
        const Scalar w2 = w_ * w_;

        // rhs terms, first component then second
        const Scalar t0[4] = {w_ * k1n * b1_, -w_ * c_.kbar1 * bb1_, -w2 * c_.k2 * b2_,
                              -w2 * c_.kbar2 * bb2_};
        const Scalar t1[4] = {-w_ * c_.c1 * b1_, w_ * cb1n * bb1_, -w2 * c_.c2 * b2_,
                              -w2 * c_.cbar2 * bb2_};
        const Scalar r0 = t0[0] + t0[1] + t0[2] + t0[3];
        const Scalar r1 = t1[0] + t1[1] + t1[2] + t1[3];

        StepSystem<Scalar> out;
        out.distance = nn - x_;
        out.det = Scalar(4) * w2 * nn * s_ * s_ * out.distance;
        out.v << m11 * r0 - m01 * r1, -m10 * r0 + m00 * r1;
        Scalar sc0 = 0, sc1 = 0;
        for (int i = 0; i < 4; ++i) {
            sc0 = std::max({sc0, abs(m11 * t0[i]), abs(m01 * t1[i])});
            sc1 = std::max({sc1, abs(m10 * t0[i]), abs(m00 * t1[i])});
        }
        out.v_scale << sc0, sc1;
        return out;
    }

    // Advances to n + 1 and returns (βₙ₊₁, β̄ₙ₊₁).
    std::pair<Scalar, Scalar> next() {
        using std::abs;
        const int n = n_ + 1;
        const auto sys = system(n);
        if (abs(sys.distance) < Scalar(kPoleAbort)) throw PoleEncountered(n);
        if (!near_pole_ && abs(sys.distance) < Scalar(kPoleFlag)) near_pole_ = n;
        const Scalar beta = sys.v(0) / sys.det;
        const Scalar beta_bar = sys.v(1) / sys.det;
        b2_ = b1_;
        bb2_ = bb1_;
        b1_ = beta;
        bb1_ = beta_bar;
        n_ = n;
        return {beta, beta_bar};
    }

private:
    ConstantSet<Scalar> c_;
    Scalar w_, s_, x_;
    int n_ = 0;
    Scalar b1_{0}, bb1_{0};  // βₙ, β̄ₙ
    Scalar b2_{0}, bb2_{0};  // βₙ₋₁, β̄ₙ₋₁ (zero below n = 0)
    std::optional<int> near_pole_;
};

template <typename Scalar>
SeriesCoefficients<Scalar> recurse(const ConstantSet<Scalar>& c, const ModelParams<Scalar>& p,
                                   int N) {
    using std::abs;
    using std::pow;
    if (N < 1) throw std::invalid_argument("recurse: N must be at least 1");
    CoefficientRecursion<Scalar> rec(c, p);

    SeriesCoefficients<Scalar> out;
    out.w = p.w;
    out.n_terms = N;
    out.alpha_w.resize(N + 1);
    out.alpha_bar_w.resize(N + 1);
    out.alpha_w(0) = rec.beta();
    out.alpha_bar_w(0) = rec.beta_bar();
    for (int n = 1; n <= N; ++n) {
        const auto [b, bb] = rec.next();
        out.alpha_w(n) = b;
        out.alpha_bar_w(n) = bb;
    }
    out.alpha.resize(N + 1);
    out.alpha_bar.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        const Scalar wn = pow(p.w, n);
        out.alpha(n) = out.alpha_w(n) / wn;
        out.alpha_bar(n) = out.alpha_bar_w(n) / wn;
    }
    out.tail_estimate = abs(out.alpha_w(N)) + abs(out.alpha_bar_w(N));
    out.near_pole = rec.near_pole();
    return out;
}

// Truncated ρ(y), ρ̄(y), valid inside the disk |y| < 2w.
template <typename Scalar>
std::pair<Scalar, Scalar> eval_rho_pair(const SeriesCoefficients<Scalar>& sc, Scalar y) {
    using std::abs;
    if (!(abs(y) < Scalar(2) * sc.w))
        throw OutsideDisk("eval_rho_pair: |y| must be below the convergence radius 2w");
    // Horner in t = y/w over the scaled coefficients.
    const Scalar t = y / sc.w;
    Scalar rho = 0, rho_bar = 0;
    for (int n = sc.n_terms; n >= 0; --n) {
        rho = rho * t + sc.alpha_w(n);
        rho_bar = rho_bar * t + sc.alpha_bar_w(n);
    }
    return {rho, rho_bar};
}

// ---------------------------------------------------------------------------
// G± at z = 0

struct Truncation {
    int min_terms = 12;      // N; the only term count when `adaptive` is off
    bool adaptive = true;    // keep adding terms until the tail is at round-off level
    int max_terms = 1500;
    double rel_tail = 1e-16; // stop when 3 consecutive terms are below rel_tail·(largest term)

    static Truncation fixed(int n) { return Truncation{n, false, n, 0.0}; }
};

template <typename Scalar = double>
struct GSample {
    Scalar energy{0};
    Scalar x{0};          // E + g²
    Scalar value{0};      // G±(E; 0); NaN when E sits on a pole
    bool reliable{false};
    int n_terms{0};
    Scalar tail{0};
    std::optional<int> near_pole;
    std::optional<int> pole;  // set when the recursion hit Dₙ = 0
};

namespace detail {

template <typename Scalar>
GSample<Scalar> evaluate_g(const ModelParams<Scalar>& p, Parity sector, Scalar E,
                           const Truncation& t) {
    using std::abs;
    GSample<Scalar> out;
    out.energy = E;
    out.x = E + p.g * p.g;
    try {
        CoefficientRecursion<Scalar> rec(constants(p, sector, E), p);
        Scalar rho = rec.beta(), rho_bar = rec.beta_bar();
        Scalar largest = std::max(abs(rho), abs(rho_bar));
        Scalar last = largest;
        int small_run = 0;
        bool converged = false;
        const int cap = t.adaptive ? std::max(t.max_terms, t.min_terms) : t.min_terms;
        while (rec.n() < cap) {
            const auto [b, bb] = rec.next();
            rho += b;
            rho_bar += bb;
            last = abs(b) + abs(bb);
            largest = std::max(largest, last);
            if (t.adaptive && rec.n() >= t.min_terms) {
                small_run = last <= Scalar(t.rel_tail) * largest ? small_run + 1 : 0;
                if (small_run >= 3) {
                    converged = true;
                    break;
                }
            }
        }
        using std::isfinite;
        out.value = rho_bar - rho;
        out.n_terms = rec.n();
        out.tail = last;
        out.near_pole = rec.near_pole();
        if (!t.adaptive) converged = last <= Scalar(kReliableTail) * largest;
        out.reliable = converged && !out.near_pole && isfinite(out.value);
    } catch (const PoleEncountered& e) {
        out.value = std::numeric_limits<Scalar>::quiet_NaN();
        out.pole = e.n();
        out.reliable = false;
    }
    return out;
}

template <typename Scalar>
void require_disk(const ModelParams<Scalar>& p) {
    if (!(p.g > Scalar(kGMin)))
        throw DomainError("G functions need g > 1e-6; use g0_levels below that");
}

}  // namespace detail

// Plain truncation at N terms.
template <typename Scalar>
GSample<Scalar> g_function(const ModelParams<Scalar>& p, Parity sector, Scalar E, int N) {
    detail::require_disk(p);
    return detail::evaluate_g(p, sector, E, Truncation::fixed(N));
}

template <typename Scalar>
GSample<Scalar> g_function(const ModelParams<Scalar>& p, Parity sector, Scalar E,
                           const Truncation& t) {
    detail::require_disk(p);
    return detail::evaluate_g(p, sector, E, t);
}

// Uniform samples in x = E + g², endpoints included.
template <typename Scalar>
std::vector<GSample<Scalar>> g_profile(const ModelParams<Scalar>& p, Parity sector, Scalar x_min,
                                       Scalar x_max, int grid, const Truncation& t) {
    if (!(x_min < x_max)) throw std::invalid_argument("g_profile: need x_min < x_max");
    if (grid < 2) throw std::invalid_argument("g_profile: grid must be at least 2");
    detail::require_disk(p);
    std::vector<GSample<Scalar>> out;
    out.reserve(static_cast<std::size_t>(grid));
    const Scalar step = (x_max - x_min) / Scalar(grid - 1);
    for (int i = 0; i < grid; ++i) {
        const Scalar x = i == grid - 1 ? x_max : x_min + Scalar(i) * step;
        out.push_back(detail::evaluate_g(p, sector, x - p.g * p.g, t));
    }
    return out;
}

template <typename Scalar>
std::vector<GSample<Scalar>> g_profile(const ModelParams<Scalar>& p, Parity sector, Scalar x_min,
                                       Scalar x_max, int grid, int N) {
    return g_profile(p, sector, x_min, x_max, grid, Truncation::fixed(N));
}

}  // namespace starkspec
