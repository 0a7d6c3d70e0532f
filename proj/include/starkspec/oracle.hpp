// oracle.hpp: truncated Fock-space diagonalization of the Rabi–Stark Hamiltonian
//
// Basis |n, s⟩, n = 0..cutoff, s ∈ {↑, ↓}, stored at index 2n + s in the σᶻ-diagonal
// (unrotated) frame. Used as an independent reference for the series engine.

#pragma once

#include <Eigen/Core>

#include <vector>

#include "starkspec/model.hpp"

namespace starkspec {

inline constexpr int kDefaultCutoff = 200;
inline constexpr int kCutoffStep = 25;      // extra quanta for the convergence re-run
inline constexpr double kConvergedTol = 1e-8;

struct FockHamiltonian {
    int cutoff{0};
    Eigen::MatrixXd matrix;
    Eigen::VectorXd parity;  // diagonal of P = (−1)^{a†a}σᶻ in the same basis
    ModelParams<> params;
};

struct OracleSpectrum {
    std::vector<double> energies;  // ascending
    std::vector<int> parities;     // ±1
    int converged_count{0};        // leading levels stable to 1e−8 under cutoff + 25
    int mixed_clusters{0};         // degenerate clusters whose parity needed re-diagonalizing P
};

FockHamiltonian build_hamiltonian(const ModelParams<>& p, int cutoff);

// Lowest `want` eigenvalues with parity labels. With `check_convergence` the problem is
// solved again at cutoff + 25 to fill converged_count; otherwise converged_count is 0.
OracleSpectrum diagonalize(const FockHamiltonian& h, int want, bool check_convergence = true);

OracleSpectrum oracle_spectrum(const ModelParams<>& p, int want, int cutoff = kDefaultCutoff,
                               bool check_convergence = true);

// Lowest `count` levels of one parity, drawn from a single diagonalization.
std::vector<double> oracle_levels(const OracleSpectrum& s, int parity, int count);

}  // namespace starkspec
