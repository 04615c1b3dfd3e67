#include "qrnet/timing.hpp"

#include <cmath>

namespace qrnet::timing {

namespace {

void require_finite(const HopTiming& h) {
    if (!std::isfinite(h.t_encrypt) || !std::isfinite(h.t_comm) || !std::isfinite(h.t_decrypt)) {
        throw InputError("hop timing must be finite");
    }
    if (h.t_encrypt < 0.0 || h.t_comm < 0.0 || h.t_decrypt < 0.0) {
        throw InputError("hop timing must be non-negative");
    }
}

void require_coherence(Seconds t_coh) {
    if (!std::isfinite(t_coh) || t_coh <= 0.0) {
        throw InputError("coherence time must be finite and > 0");
    }
}

struct Binding {
    Seconds delay;
    std::size_t index;
};

Binding slowest_message(std::span<const HopTiming> messages, Seconds t_decrypt_end) {
    if (messages.empty()) {
        throw InputError("parallel check needs at least one message");
    }
    if (!std::isfinite(t_decrypt_end) || t_decrypt_end < 0.0) {
        throw InputError("t_decrypt_end must be finite and non-negative");
    }
    Binding worst{0.0, 0};
    for (std::size_t i = 0; i < messages.size(); ++i) {
        require_finite(messages[i]);
        const HopTiming hop{messages[i].t_encrypt, messages[i].t_comm, t_decrypt_end};
        const Seconds d = hop.total();
        if (i == 0 || d > worst.delay) {
            worst = {d, i};
        }
    }
    return worst;
}

Seconds accumulated(std::span<const HopTiming> rounds) {
    if (rounds.empty()) {
        throw InputError("sequential check needs at least one round");
    }
    require_finite(rounds[0]);
    Seconds sum = rounds[0].total();
    for (std::size_t i = 1; i < rounds.size(); ++i) {
        require_finite(rounds[i]);
        sum += rounds[i].total();
    }
    return sum;
}

FeasibilityResult verdict(Seconds t_coh, Seconds delay, std::optional<std::size_t> binding) {
    const Seconds slack = t_coh - delay;
    return {slack > 0.0, slack, binding};
}

}  // namespace

FeasibilityResult check_single_hop(const HopTiming& hop, Seconds t_coh) {
    require_finite(hop);
    require_coherence(t_coh);
    return verdict(t_coh, hop.total(), std::nullopt);
}

FeasibilityResult check_parallel(std::span<const HopTiming> messages, Seconds t_decrypt_end,
                                 Seconds t_coh_end) {
    require_coherence(t_coh_end);
    const auto worst = slowest_message(messages, t_decrypt_end);
    return verdict(t_coh_end, worst.delay, worst.index);
}

FeasibilityResult check_sequential(std::span<const HopTiming> rounds, Seconds t_coh) {
    require_coherence(t_coh);
    return verdict(t_coh, accumulated(rounds), std::nullopt);
}

Seconds min_required_coherence_single_hop(const HopTiming& hop) {
    require_finite(hop);
    return hop.total();
}

Seconds min_required_coherence_parallel(std::span<const HopTiming> messages, Seconds t_decrypt_end) {
    return slowest_message(messages, t_decrypt_end).delay;
}

Seconds min_required_coherence_sequential(std::span<const HopTiming> rounds) {
    return accumulated(rounds);
}

}  // namespace qrnet::timing
