#include "qrnet/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qrnet {

Fidelity::Fidelity(double value) : value_(value) {
    if (!(value >= kMixed && value <= 1.0)) {
        throw InputError("fidelity " + std::to_string(value) + " outside [0.25, 1]");
    }
}

namespace fidelity {

Fidelity decay(Fidelity f0, Seconds wait, Seconds t_coh) {
    if (!(wait >= 0.0) || !std::isfinite(wait)) {
        throw InputError("decay wait must be finite and >= 0");
    }
    if (!(t_coh > 0.0)) {
        throw InputError("decay t_coh must be > 0");
    }
    const double f = Fidelity::kMixed + (f0.value() - Fidelity::kMixed) * std::exp(-wait / t_coh);
    // Rounding can push the result a few ulps past its exact bounds.
    return Fidelity(std::clamp(f, Fidelity::kMixed, f0.value()));
}

Fidelity swap(Fidelity f1, Fidelity f2) {
    const double a = f1.value();
    const double b = f2.value();
    const double f = a * b + (1.0 - a) * (1.0 - b) / 3.0;
    // Exact result never exceeds the weaker input.
    return Fidelity(std::clamp(f, Fidelity::kMixed, std::min(a, b)));
}

Fidelity chain_fidelity(std::span<const Fidelity> links) {
    if (links.empty()) {
        throw InputError("chain_fidelity needs at least one link");
    }
    Fidelity acc = links.front();
    for (std::size_t i = 1; i < links.size(); ++i) {
        acc = swap(acc, links[i]);
    }
    return acc;
}

}  // namespace fidelity
}  // namespace qrnet
