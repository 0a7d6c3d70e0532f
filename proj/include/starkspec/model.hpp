// model.hpp: Rabi–Stark model parameters, recursion constants and closed-form analytics
//
// Hamiltonian (ω = 1):  H = a†a + Δσᶻ + gσˣ(a + a†) + γσᶻa†a.
// All energies are in units of the oscillator frequency.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "starkspec/errors.hpp"

namespace starkspec {

enum class Parity : int { Plus = 1, Minus = -1 };

inline constexpr int sign_of(Parity p) noexcept { return static_cast<int>(p); }
inline constexpr Parity flipped(Parity p) noexcept {
    return p == Parity::Plus ? Parity::Minus : Parity::Plus;
}
inline const char* to_string(Parity p) noexcept { return p == Parity::Plus ? "+1" : "-1"; }

template <typename Scalar = double>
struct ModelParams {
    Scalar delta{0};  // two-level splitting Δ
    Scalar gamma{0};  // Stark coupling γ, |γ| < 1
    Scalar g{0};      // Rabi coupling
    Scalar w{0};      // g / sqrt(1 - γ²), location of the regular singular points ±w

    Scalar one_minus_gamma2() const noexcept { return Scalar(1) - gamma * gamma; }
};

template <typename Scalar>
ModelParams<Scalar> validate_params(Scalar delta, Scalar gamma, Scalar g) {
    using std::isfinite;
    if (!isfinite(delta) || !isfinite(gamma) || !isfinite(g))
        throw DomainError("model parameters must be finite");
    if (!(gamma * gamma < Scalar(1)))
        throw DomainError("Stark coupling must satisfy gamma^2 < 1 (got gamma = " +
                          std::to_string(static_cast<double>(gamma)) + ")");
    if (g < Scalar(0))
        throw DomainError("Rabi coupling g must be non-negative");
    using std::sqrt;
    return ModelParams<Scalar>{delta, gamma, g, g / sqrt(Scalar(1) - gamma * gamma)};
}

inline ModelParams<double> validate_params(double delta, double gamma, double g) {
    return validate_params<double>(delta, gamma, g);
}

// The negative-parity sector is the positive one under Δ → −Δ, γ → −γ.
template <typename Scalar>
struct SignedCouplings {
    Scalar delta;
    Scalar gamma;
};

template <typename Scalar>
SignedCouplings<Scalar> signed_couplings(const ModelParams<Scalar>& p, Parity sector) noexcept {
    if (sector == Parity::Plus) return {p.delta, p.gamma};
    return {-p.delta, -p.gamma};
}

// Coefficients of the two coupled first-order equations around z₀ = −w in y = z + w:
//   (1−γ²)(y−2w) y ρ'  = (K₂y²+K₁y+K₀) ρ + (K̄₂y²+K̄₁y+K̄₀) ρ̄
//   (1−γ²)(y−2w) y ρ̄' = (C̄₂y²+C̄₁y+C̄₀) ρ̄ + (C₂y²+C₁y+C₀) ρ
template <typename Scalar = double>
struct ConstantSet {
    Scalar k2, k1, k0;
    Scalar kbar2, kbar1, kbar0;
    Scalar cbar2, cbar1, cbar0;
    Scalar c2, c1, c0;
    Scalar energy;
};

template <typename Scalar>
ConstantSet<Scalar> constants(const ModelParams<Scalar>& p, Parity sector, Scalar E) {
    const auto [d, ga] = signed_couplings(p, sector);
    const Scalar g = p.g;
    const Scalar w = p.w;
    const Scalar s = p.one_minus_gamma2();
    const Scalar gd = ga * d;

    ConstantSet<Scalar> c{};
    c.energy = E;
    c.k2 = s * w - g;
    c.k1 = E - g * g + Scalar(2) * g * w + gd;
    c.k0 = -((E + g * w) * (w + g) + gd * w);
    c.kbar2 = -ga * g;
    c.kbar1 = -(d + ga * (E - Scalar(2) * g * w));
    c.kbar0 = d * (w + g) + ga * w * (E - g * w);
    // C̄(y) = Λ̄(z) + wΓ(z) expanded about z = −w; the mirror image of K(y) under g → −g.
    c.cbar2 = s * w + g;
    c.cbar1 = E - g * g - Scalar(2) * g * w + gd;
    c.cbar0 = -((E - g * w) * (w - g) + gd * w);
    c.c2 = ga * g;
    c.c1 = -(ga * (E + Scalar(2) * g * w) + d);
    c.c0 = ga * w * (E + g * w) + d * (w - g);
    return c;
}

// K₀C̄₀ − K̄₀C₀; vanishes identically.
template <typename Scalar>
Scalar initial_determinant(const ConstantSet<Scalar>& c) noexcept {
    return c.k0 * c.cbar0 - c.kbar0 * c.c0;
}

// Indicial exponent x_γ = (E + g² + γΔ)/(1 − γ²); the product γΔ is sector independent.
template <typename Scalar>
Scalar indicial_exponent(const ModelParams<Scalar>& p, Scalar E) noexcept {
    return (E + p.g * p.g + p.gamma * p.delta) / p.one_minus_gamma2();
}

template <typename Scalar = double>
struct Pole {
    int n;
    Scalar energy;
    Scalar x;  // E + g²
};

template <typename Scalar>
Scalar pole_energy(const ModelParams<Scalar>& p, int n) noexcept {
    return Scalar(n) * p.one_minus_gamma2() - p.g * p.g - p.gamma * p.delta;
}

// Zeros of Dₙ(E) for n = 1..n_max. The sector argument is kept for symmetry with the
// other sector-resolved calls: (−γ)(−Δ) = γΔ, so both sectors share the same poles.
template <typename Scalar>
std::vector<Pole<Scalar>> pole_energies(const ModelParams<Scalar>& p, Parity sector, int n_max) {
    const auto [d, ga] = signed_couplings(p, sector);
    std::vector<Pole<Scalar>> out;
    out.reserve(static_cast<std::size_t>(std::max(n_max, 0)));
    for (int n = 1; n <= n_max; ++n) {
        const Scalar e = Scalar(n) * p.one_minus_gamma2() - p.g * p.g - ga * d;
        out.push_back({n, e, e + p.g * p.g});
    }
    return out;
}

// K₀ and C₀ vanish together at E + gw = −γΔw/(w + g) (using w²(1−γ²) = g²). The kernel
// of the n = 0 system is then (1, 0), so the ᾱ₀ = 1 normalization puts a pole into G±
// there in both sectors. At γ = 0 this is the x = 0 pole of the Rabi G-function.
template <typename Scalar>
Scalar normalization_pole(const ModelParams<Scalar>& p) noexcept {
    return -p.g * p.w - p.gamma * p.delta * p.w / (p.w + p.g);
}

// ---------------------------------------------------------------------------
// g = 0 levels: E = (1 ± γ)n ± Δ for the eigenstates |n⟩⊗|↑⟩, |n⟩⊗|↓⟩.
// The branch label is not the parity; parity is (−1)ⁿ times the branch sign.

enum class Branch { UpperPlus, LowerMinus };

template <typename Scalar = double>
struct GZeroLevel {
    int n;
    Branch branch;
    Scalar energy;
    int parity;
};

template <typename Scalar>
std::vector<GZeroLevel<Scalar>> g0_levels(const ModelParams<Scalar>& p, int count) {
    std::vector<GZeroLevel<Scalar>> out;
    if (count <= 0) return out;

    auto level = [&](int n, Branch b) {
        const int bs = b == Branch::UpperPlus ? 1 : -1;
        const Scalar e = (Scalar(1) + Scalar(bs) * p.gamma) * Scalar(n) + Scalar(bs) * p.delta;
        const int par = (n % 2 == 0 ? 1 : -1) * bs;
        return GZeroLevel<Scalar>{n, b, e, par};
    };
    auto before = [](const GZeroLevel<Scalar>& a, const GZeroLevel<Scalar>& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        if (a.branch != b.branch) return a.branch == Branch::LowerMinus;
        return a.n < b.n;
    };

    // Both branches are non-decreasing in n; merge until `count` are emitted.
    // The lower branch is flat when γ = 1, which validate_params excludes.
    int nu = 0, nl = 0;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count) {
        auto up = level(nu, Branch::UpperPlus);
        auto lo = level(nl, Branch::LowerMinus);
        if (before(lo, up)) {
            out.push_back(lo);
            ++nl;
        } else {
            out.push_back(up);
            ++nu;
        }
    }
    return out;
}

}  // namespace starkspec
