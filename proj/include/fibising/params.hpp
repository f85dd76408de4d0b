#pragma once

#include <cmath>
#include <string>

#include "fibising/errors.hpp"

namespace fibising {

/// Couplings J0 (letter A) and J1 (letter B) of the chain. Always positive.
class CouplingParams {
public:
    CouplingParams(double j0, double j1) : j0_(j0), j1_(j1) {
        if (!(j0 > 0.0) || !(j1 > 0.0) || !std::isfinite(j0) || !std::isfinite(j1)) {
            throw DomainError("couplings must be finite and positive (J0=" + std::to_string(j0) +
                              ", J1=" + std::to_string(j1) + ")");
        }
    }

    /// Builds the couplings from the ratio r = J0/J1 and J1.
    static CouplingParams from_ratio(double r, double j1) {
        if (!(r > 0.0)) throw DomainError("ratio r must be positive");
        return {r * j1, j1};
    }

    double j0() const { return j0_; }
    double j1() const { return j1_; }
    double ratio() const { return j0_ / j1_; }

    /// Couplings with the roles of the two letters exchanged.
    CouplingParams dual() const { return {j1_, j0_}; }

    bool operator==(const CouplingParams&) const = default;

private:
    double j0_;
    double j1_;
};

/// Rescaled squared-energy variable s >= 0. Physical energies are E = +-2 sqrt(s).
class SpectralVariable {
public:
    explicit SpectralVariable(double s) : s_(s) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw DomainError("spectral variable must be finite and non-negative, got " +
                              std::to_string(s));
        }
    }
    double value() const { return s_; }
    double energy() const { return 2.0 * std::sqrt(s_); }

private:
    double s_;
};

}  // namespace fibising
