#pragma once

// Hybrid quantum-classical man-in-the-middle model. The adversary holds an
// intercepted pair for t_eve + t_pqc; the attack completes unnoticed only if
// that is strictly shorter than its own memory's coherence time. The held
// pair always decays, which a QBER detector can pick up.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qrnet/fidelity.hpp"
#include "qrnet/model.hpp"

namespace qrnet::adversary {

enum class AttackOutcome { undetectable_success, decoheres };

std::string_view to_string(AttackOutcome outcome);

AttackOutcome attack_outcome(const AdversaryConfig& a);

/// Fidelity of a pair after sitting in the adversary's memory for the full
/// adversarial delay.
Fidelity intercepted_fidelity(Fidelity f_in, const AdversaryConfig& a);

/// Werner single-basis error rate 2(1 - F)/3.
double qber_of(Fidelity f);

struct DetectionReport {
    double baseline_mean_qber = 0.0;
    double observed_mean_qber = 0.0;
    double z_score = 0.0;  // +/-inf on a zero-variance baseline
    bool flagged = false;
    double threshold_sigma = 3.0;
};

/// One-sided z-test of the observed mean QBER against the baseline:
/// z = (mean(obs) - mean(base)) / (sd(base) / sqrt(|obs|)), sd with n - 1.
/// A zero-variance baseline flags iff the observed mean is higher.
DetectionReport detect(std::span<const double> baseline, std::span<const double> observed,
                       double threshold_sigma);

struct QberSample {
    double fidelity = 0.0;  // end-to-end fidelity of the measured pairs
    double qber = 0.0;      // measured error fraction

    friend bool operator==(const QberSample&, const QberSample&) = default;
};

/// QBER estimates from the engine. Each sample takes the end-to-end
/// fidelity of one successful trial (failed trials are redrawn), replaces the
/// intercepted link's fidelity when `attack` is given, and measures `shots`
/// pairs. Deterministic in seed.
std::vector<QberSample> sample_qber(const ScenarioConfig& config, const AdversaryConfig* attack,
                                    std::size_t n_samples, std::size_t shots, std::uint64_t seed);

}  // namespace qrnet::adversary
