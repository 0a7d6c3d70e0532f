// oracle.cpp: dense Fock-basis Hamiltonian and its symmetric eigendecomposition

#include "starkspec/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace starkspec {

FockHamiltonian build_hamiltonian(const ModelParams<>& p, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("build_hamiltonian: cutoff must be at least 1");
    const Eigen::Index dim = 2 * (cutoff + 1);
    FockHamiltonian h;
    h.cutoff = cutoff;
    h.params = p;
    h.matrix = Eigen::MatrixXd::Zero(dim, dim);
    h.parity.resize(dim);
    for (int n = 0; n <= cutoff; ++n) {
        const Eigen::Index up = 2 * n, dn = 2 * n + 1;
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        h.matrix(up, up) = n + (p.delta + p.gamma * n);
        h.matrix(dn, dn) = n - (p.delta + p.gamma * n);
        h.parity(up) = sign;
        h.parity(dn) = -sign;
        if (n < cutoff) {
            // σˣ(a + a†) flips the spin and moves one quantum.
            const double v = p.g * std::sqrt(n + 1.0);
            h.matrix(up, 2 * (n + 1) + 1) = h.matrix(2 * (n + 1) + 1, up) = v;
            h.matrix(dn, 2 * (n + 1)) = h.matrix(2 * (n + 1), dn) = v;
        }
    }
    return h;
}

namespace {

struct Eigenpairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

Eigenpairs solve(const FockHamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
    if (es.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver did not converge");
    Eigenpairs out{es.eigenvalues(), es.eigenvectors()};

    Eigen::MatrixXd r = out.vectors.transpose() * h.matrix * out.vectors;
    r.diagonal().setZero();
    const double norm = h.matrix.norm();
    if (r.norm() > 1e-12 * std::max(norm, 1.0))
        throw ConvergenceError("eigenvector residual above 1e-12 of the Hamiltonian norm");
    return out;
}

std::vector<int> parity_labels(const FockHamiltonian& h, const Eigenpairs& e, int want,
                               int& mixed) {
    const Eigen::Index dim = e.values.size();
    std::vector<int> par(static_cast<std::size_t>(want), 0);
    mixed = 0;
    for (Eigen::Index i = 0; i < want;) {
        // Cluster of numerically degenerate levels starting at i.
        Eigen::Index j = i + 1;
        while (j < dim && e.values(j) - e.values(j - 1) <= 1e-9 * (1.0 + std::abs(e.values(j))))
            ++j;
        const auto v = e.vectors.middleCols(i, j - i);
        const Eigen::MatrixXd q = v.transpose() * h.parity.asDiagonal() * v;
        bool clean = true;
        for (Eigen::Index k = 0; k < j - i; ++k) clean = clean && std::abs(q(k, k)) > 0.999;
        if (clean) {
            for (Eigen::Index k = i; k < std::min<Eigen::Index>(j, want); ++k)
                par[k] = q(k - i, k - i) > 0 ? 1 : -1;
        } else {
            // Mixed degenerate subspace: the eigenvalues of P restricted to it are ±1.
            ++mixed;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pq(q);
            for (Eigen::Index k = i; k < std::min<Eigen::Index>(j, want); ++k)
                par[k] = pq.eigenvalues()(k - i) > 0 ? 1 : -1;
        }
        i = j;
    }
    return par;
}

}  // namespace

OracleSpectrum diagonalize(const FockHamiltonian& h, int want, bool check_convergence) {
    const int dim = static_cast<int>(h.matrix.rows());
    if (want < 1 || want > dim)
        throw std::invalid_argument("diagonalize: want must lie in [1, 2(cutoff+1)]");
    const auto e = solve(h);

    OracleSpectrum out;
    out.energies.assign(e.values.data(), e.values.data() + want);
    out.parities = parity_labels(h, e, want, out.mixed_clusters);

    if (check_convergence) {
        const auto bigger = diagonalize(build_hamiltonian(h.params, h.cutoff + kCutoffStep), want,
                                        false);
        while (out.converged_count < want &&
               std::abs(out.energies[out.converged_count] -
                        bigger.energies[out.converged_count]) <= kConvergedTol)
            ++out.converged_count;
    }
    return out;
}

OracleSpectrum oracle_spectrum(const ModelParams<>& p, int want, int cutoff,
                               bool check_convergence) {
    return diagonalize(build_hamiltonian(p, cutoff), want, check_convergence);
}

std::vector<double> oracle_levels(const OracleSpectrum& s, int parity, int count) {
    std::vector<double> out;
    for (std::size_t i = 0; i < s.energies.size() && static_cast<int>(out.size()) < count; ++i)
        if (s.parities[i] == parity) out.push_back(s.energies[i]);
    return out;
}

}  // namespace starkspec
