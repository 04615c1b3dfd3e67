#pragma once

// Slotted Monte Carlo simulation of entanglement distribution along a
// repeater chain with PQC-protected feedforward.
//
// Time is divided into slots of length slot_duration. In each slot every
// link that holds no pair makes one attempt, succeeding with probability
// p_success; a pair generated in slot k is stored at time (k+1)*slot_duration.
// A repeater swaps as soon as both adjacent pairs are stored and sends its
// correction to the destination end node. Qubits waiting at repeaters or at
// the destination are discarded once their age exceeds the holding node's
// t_coh, which breaks the whole swapped segment they belong to; the broken
// links regenerate. In a parallel chain the destination also discards a half
// that can no longer receive every correction before its t_coh, provided the
// scenario is feasible at all. The source end node consumes its half on
// arrival.
//
// A trial succeeds when all corrections reach the destination while its
// stored half is younger than its t_coh. Generation time is not part of that
// wait, so a scenario with p_success = 1 succeeds exactly when the matching
// timing check is feasible.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrnet/fidelity.hpp"
#include "qrnet/model.hpp"
#include "qrnet/timing.hpp"

namespace qrnet::engine {

inline constexpr std::int64_t kSlotHorizon = 1'000'000;

enum class FailureReason { memory_expired, message_late, horizon_exceeded };

std::string_view to_string(FailureReason reason);

struct TrialOutcome {
    bool success = false;
    // Last correction decrypted, measured from the first attempt at t = 0.
    // Present whenever every correction was delivered, even if too late.
    std::optional<Seconds> t_dist;
    std::optional<Fidelity> f_end;
    std::optional<FailureReason> failure_reason;
    std::int64_t slots_used = 0;
    // Per-link fidelity after storage decay, in path order. Set on success.
    std::vector<Fidelity> link_fidelities;

    friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

struct LinkDiagnostic {
    NodePair endpoints;
    double re_tcoh_product = 0.0;

    friend bool operator==(const LinkDiagnostic&, const LinkDiagnostic&) = default;
};

struct RunSummary {
    std::int64_t n_trials = 0;
    std::int64_t successes = 0;
    double success_rate = 0.0;
    std::optional<Seconds> mean_t_dist;
    std::optional<double> f_end_mean;
    std::optional<double> f_end_min;
    double mean_slots_used = 0.0;
    std::int64_t memory_expired = 0;
    std::int64_t message_late = 0;
    std::int64_t horizon_exceeded = 0;
    // R_e * t_coh per link, with t_coh the smaller of the two endpoint
    // memories. Diagnostic only.
    std::vector<LinkDiagnostic> re_tcoh_product;

    friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

struct MonteCarloRun {
    std::vector<TrialOutcome> trials;  // index order
    RunSummary summary;
};

/// Per-trial seed: the (index+1)-th output of SplitMix64 started at
/// master_seed, i.e. mix(master_seed + (index + 1) * 0x9E3779B97F4A7C15).
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index);

/// Static analysis of the scenario's feedforward timing with the check that
/// matches its protocol. Throws InputError on an invalid scenario.
timing::FeasibilityResult analyze(const ScenarioConfig& config);

/// Smallest coherence time (of the binding memory) that the analyzer still
/// rejects; anything larger is feasible.
Seconds required_coherence(const ScenarioConfig& config);

/// Runs one trial. Deterministic in (config, seed).
TrialOutcome run_trial(const ScenarioConfig& config, std::uint64_t seed);

/// n_trials independent trials seeded via trial_seed(master_seed, i).
/// Trials may run on several threads; results are assembled in index order.
MonteCarloRun run_monte_carlo(const ScenarioConfig& config, std::int64_t n_trials,
                              std::uint64_t master_seed);

RunSummary summarize(const ScenarioConfig& config, const std::vector<TrialOutcome>& trials);

/// Sets one numeric field addressed by a dotted path, e.g. slot_duration,
/// nodes.R1.memory.t_coh, nodes.*.memory.t_coh, quantum_links.0.p_success,
/// classical_channels.1.propagation_delay, crypto_profiles.kyber512-class.t_encrypt,
/// adversary.t_eve, rounds_L. List segments take an index, an id/name, or *.
void set_parameter(ScenarioConfig& config, std::string_view path, double value);

struct SweepRow {
    double value = 0.0;
    RunSummary summary;
};

/// One independent Monte Carlo per value, rows in the given order. Every row
/// uses master_seed, so a row equals a standalone run with that value.
std::vector<SweepRow> sweep(const ScenarioConfig& config, std::string_view path,
                            const std::vector<double>& values, std::int64_t n_trials,
                            std::uint64_t master_seed);

}  // namespace qrnet::engine
