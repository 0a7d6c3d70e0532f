// errors.hpp: exception types raised by the solver layers

#pragma once

#include <stdexcept>
#include <string>

namespace starkspec {

// Parameters outside the model's domain (γ² ≥ 1, g < 0, non-finite input).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Both K₀ and C₀ vanish, so the n = 0 equations do not fix α₀.
class SingularInitialization : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The step determinant Dₙ(E) vanished: E sits on a pole of G±.
class PoleEncountered : public std::runtime_error {
public:
    explicit PoleEncountered(int n)
        : std::runtime_error("recursion step determinant vanished at n = " + std::to_string(n)),
          n_(n) {}
    int n() const noexcept { return n_; }

private:
    int n_;
};

class OutsideDisk : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class PoleCollision : public std::runtime_error {
public:
    PoleCollision(int n, int m)
        : std::runtime_error("pole n = " + std::to_string(n) + " collides with pole m = " +
                             std::to_string(m)),
          n_(n), m_(m) {}
    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }

private:
    int n_, m_;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace starkspec
