#include <cmath>

#include "doctest.h"

#include "starkspec/oracle.hpp"

using namespace starkspec;

TEST_CASE("cutoff 1 matrix by hand") {
    const double d = 0.4, ga = 0.5, g = 0.3;
    const auto h = build_hamiltonian(validate_params(d, ga, g), 1);
    REQUIRE(h.matrix.rows() == 4);
    // order: |0↑⟩, |0↓⟩, |1↑⟩, |1↓⟩
    Eigen::Matrix4d want;
    want << d, 0, 0, g,
            0, -d, g, 0,
            0, g, 1 + d + ga, 0,
            g, 0, 0, 1 - d - ga;
    CHECK((h.matrix - want).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.parity(0) == 1);
    CHECK(h.parity(1) == -1);
    CHECK(h.parity(2) == -1);
    CHECK(h.parity(3) == 1);
    CHECK_THROWS(build_hamiltonian(validate_params(d, ga, g), 0));
}

TEST_CASE("Hamiltonian is symmetric and parity block diagonal") {
    const auto h = build_hamiltonian(validate_params(0.4, 0.5, 0.8), 60);
    CHECK((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    const auto dim = h.matrix.rows();
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            if (h.parity(i) != h.parity(j)) CHECK(h.matrix(i, j) == 0.0);
    // P commutes with H
    const Eigen::MatrixXd p = h.parity.asDiagonal();
    CHECK((p * h.matrix - h.matrix * p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("g = 0 oracle reproduces the analytic ladder") {
    const auto p = validate_params(0.4, 0.5, 0.0);
    const auto o = oracle_spectrum(p, 7);
    const auto ref = g0_levels(p, 7);
    const double want[] = {-0.4, 0.1, 0.4, 0.6, 1.1, 1.6, 1.9};
    for (int i = 0; i < 7; ++i) {
        CHECK(std::abs(o.energies[i] - ref[i].energy) <= 1e-12);
        CHECK(std::abs(o.energies[i] - want[i]) <= 1e-12);
        CHECK(o.parities[i] == ref[i].parity);
    }
    CHECK(o.converged_count == 7);
}

TEST_CASE("delta = 0, gamma = 0 levels pair up with opposite parity") {
    const auto o = oracle_spectrum(validate_params(0.0, 0.0, 0.6), 10, 120);
    for (int i = 0; i < 10; i += 2) {
        CHECK(o.energies[i + 1] - o.energies[i] <= 1e-9);
        CHECK(o.parities[i] + o.parities[i + 1] == 0);
        CHECK(o.energies[i] == doctest::Approx(i / 2 - 0.36).epsilon(1e-10));
    }
}

TEST_CASE("cutoff convergence and variational bound") {
    const auto p = validate_params(0.4, 0.5, 1.2);
    const auto o = oracle_spectrum(p, 10, 200);
    CHECK(o.converged_count == 10);
    double last = INFINITY;
    for (int c : {5, 10, 20, 40, 80}) {
        const double e0 = oracle_spectrum(p, 1, c, false).energies[0];
        CHECK(e0 <= last + 1e-13);
        last = e0;
    }
    CHECK(oracle_spectrum(p, 1, 3, true).converged_count == 0);
}

TEST_CASE("oracle argument checks") {
    const auto h = build_hamiltonian(validate_params(0.4, 0.5, 0.4), 3);
    CHECK_THROWS(diagonalize(h, 0));
    CHECK_THROWS(diagonalize(h, 9));
    CHECK(diagonalize(h, 8, false).energies.size() == 8);
}

TEST_CASE("oracle_levels selects by parity") {
    const auto o = oracle_spectrum(validate_params(0.4, 0.5, 0.4), 10);
    const auto plus = oracle_levels(o, 1, 3);
    const auto minus = oracle_levels(o, -1, 3);
    CHECK(plus.size() == 3);
    CHECK(minus.size() == 3);
    CHECK(minus[0] == doctest::Approx(-0.47795675).epsilon(1e-8));
    CHECK(plus[0] == doctest::Approx(-0.24588113).epsilon(1e-8));
}
