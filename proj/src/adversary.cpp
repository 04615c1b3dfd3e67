#include "qrnet/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "qrnet/engine.hpp"

namespace qrnet::adversary {

namespace {

constexpr int kMaxRedraws = 10'000;

double mean(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs, double m) {
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::string_view to_string(AttackOutcome outcome) {
    return outcome == AttackOutcome::undetectable_success ? "undetectable_success" : "decoheres";
}

AttackOutcome attack_outcome(const AdversaryConfig& a) {
    return a.total_delay() < a.t_coh_eve ? AttackOutcome::undetectable_success : AttackOutcome::decoheres;
}

Fidelity intercepted_fidelity(Fidelity f_in, const AdversaryConfig& a) {
    return fidelity::decay(f_in, a.total_delay(), a.t_coh_eve);
}

double qber_of(Fidelity f) { return 2.0 * (1.0 - f.value()) / 3.0; }

DetectionReport detect(std::span<const double> baseline, std::span<const double> observed,
                       double threshold_sigma) {
    if (baseline.size() < 2 || observed.size() < 2) {
        throw InputError("detect needs at least 2 baseline and 2 observed samples");
    }
    if (!(threshold_sigma > 0.0) || !std::isfinite(threshold_sigma)) {
        throw InputError("threshold_sigma must be finite and > 0");
    }
    DetectionReport r;
    r.threshold_sigma = threshold_sigma;
    r.baseline_mean_qber = mean(baseline);
    r.observed_mean_qber = mean(observed);
    const double diff = r.observed_mean_qber - r.baseline_mean_qber;
    const double sd = sample_sd(baseline, r.baseline_mean_qber);
    if (sd > 0.0) {
        r.z_score = diff / (sd / std::sqrt(static_cast<double>(observed.size())));
    } else if (diff > 0.0) {
        r.z_score = std::numeric_limits<double>::infinity();
    } else if (diff < 0.0) {
        r.z_score = -std::numeric_limits<double>::infinity();
    } else {
        r.z_score = 0.0;
    }
    r.flagged = r.z_score > threshold_sigma;
    return r;
}

std::vector<QberSample> sample_qber(const ScenarioConfig& config, const AdversaryConfig* attack,
                                    std::size_t n_samples, std::size_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw InputError("shots must be >= 1");
    }
    const ChainPath path = resolve_chain(config);
    std::size_t intercepted = path.links.size();
    if (attack != nullptr) {
        for (std::size_t j = 0; j < path.links.size(); ++j) {
            const auto& ep = config.quantum_links[path.links[j]].endpoints;
            const auto& want = attack->intercept_link;
            if ((ep[0] == want[0] && ep[1] == want[1]) || (ep[0] == want[1] && ep[1] == want[0])) {
                intercepted = j;
            }
        }
        if (intercepted == path.links.size()) {
            throw InputError("intercept_link " + attack->intercept_link[0] + "-" + attack->intercept_link[1] +
                             " is not a link of the chain");
        }
    }

    std::vector<QberSample> samples;
    samples.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        std::mt19937_64 rng(engine::trial_seed(seed, i));
        std::optional<engine::TrialOutcome> trial;
        for (int tries = 0; tries < kMaxRedraws && !trial; ++tries) {
            auto t = engine::run_trial(config, rng());
            if (t.success) {
                trial = std::move(t);
            }
        }
        if (!trial) {
            throw InputError("scenario produced no successful trial to sample QBER from");
        }
        auto links = trial->link_fidelities;
        if (attack != nullptr) {
            links[intercepted] = intercepted_fidelity(links[intercepted], *attack);
        }
        const Fidelity f = fidelity::chain_fidelity(links);
        std::binomial_distribution<std::uint64_t> errors(shots, qber_of(f));
        samples.push_back({f.value(), static_cast<double>(errors(rng)) / static_cast<double>(shots)});
    }
    return samples;
}

}  // namespace qrnet::adversary
