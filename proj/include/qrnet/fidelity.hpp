#pragma once

// Werner-state fidelity model. Storage depolarises a pair towards the
// maximally mixed state (F = 1/4) with time constant t_coh; entanglement
// swapping composes two Werner pairs.

#include <span>

#include "qrnet/model.hpp"

namespace qrnet {

/// Fidelity of a Werner pair, always within [0.25, 1].
class Fidelity {
public:
    static constexpr double kMixed = 0.25;

    constexpr Fidelity() = default;
    // Throws InputError outside [0.25, 1].
    explicit Fidelity(double value);

    constexpr double value() const { return value_; }
    constexpr operator double() const { return value_; }

    friend constexpr auto operator<=>(Fidelity, Fidelity) = default;

private:
    double value_ = 1.0;
};

namespace fidelity {

/// 0.25 + (f0 - 0.25) * exp(-wait / t_coh).
Fidelity decay(Fidelity f0, Seconds wait, Seconds t_coh);

/// f1*f2 + (1 - f1)(1 - f2)/3. Symmetric; (1, f) -> f.
Fidelity swap(Fidelity f1, Fidelity f2);

/// Left fold of swap over the path, source side first.
Fidelity chain_fidelity(std::span<const Fidelity> links);

}  // namespace fidelity
}  // namespace qrnet
