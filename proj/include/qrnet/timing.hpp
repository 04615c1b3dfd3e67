#pragma once

// Feasibility checks for PQC-protected feedforward: a stored qubit survives
// only if every classical delay it waits on finishes strictly inside the
// memory coherence time. Slack is signed; negative means deficit.

#include <cstddef>
#include <optional>
#include <span>

#include "qrnet/model.hpp"

namespace qrnet::timing {

struct HopTiming {
    Seconds t_encrypt = 0.0;
    Seconds t_comm = 0.0;
    Seconds t_decrypt = 0.0;

    Seconds total() const { return t_encrypt + t_comm + t_decrypt; }
};

struct FeasibilityResult {
    bool feasible = false;
    Seconds slack = 0.0;
    // Set by checks that aggregate over a set of messages.
    std::optional<std::size_t> binding_index;

    friend bool operator==(const FeasibilityResult&, const FeasibilityResult&) = default;
};

/// encrypt + comm + decrypt < t_coh.
FeasibilityResult check_single_hop(const HopTiming& hop, Seconds t_coh);

/// Simultaneous broadcast to one end node: the slowest message binds. Each
/// message's own t_decrypt is ignored; the end node's t_decrypt_end is used.
/// Ties pick the lowest index.
FeasibilityResult check_parallel(std::span<const HopTiming> messages, Seconds t_decrypt_end,
                                 Seconds t_coh_end);

/// Dependent rounds: delays accumulate.
FeasibilityResult check_sequential(std::span<const HopTiming> rounds, Seconds t_coh);

/// Smallest coherence time that is still infeasible; any larger value passes.
Seconds min_required_coherence_single_hop(const HopTiming& hop);
Seconds min_required_coherence_parallel(std::span<const HopTiming> messages, Seconds t_decrypt_end);
Seconds min_required_coherence_sequential(std::span<const HopTiming> rounds);

}  // namespace qrnet::timing
