#include "qrnet/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <thread>

namespace qrnet::engine {

namespace {

// Everything a trial needs, resolved once from the scenario and laid out in
// path order: link j joins path node j and j + 1.
struct Plan {
    Protocol protocol = Protocol::single_hop;
    Seconds tau = 0.0;
    std::optional<Seconds> window;
    std::vector<double> p_success;
    std::vector<double> base_fidelity;
    std::vector<Seconds> t_coh;  // per path node
    // single_hop: the source's message. parallel_chain: one per repeater, path
    // order, t_decrypt already the destination's. sequential_rounds: rounds.
    std::vector<timing::HopTiming> hops;
    Seconds t_decrypt_end = 0.0;
};

void require_valid(const ScenarioConfig& config) {
    auto violations = validate_scenario(config);
    if (violations.empty()) {
        return;
    }
    std::string msg = "invalid scenario";
    for (const auto& v : violations) {
        msg += "; " + v.path + ": " + v.message;
    }
    throw InputError(msg);
}

timing::HopTiming hop_between(const ScenarioConfig& config, const NodeSpec& from, const NodeSpec& to) {
    const auto* channel = find_channel(config, from.id, to.id);
    if (channel == nullptr) {
        throw InputError("missing channel " + from.id + "-" + to.id);
    }
    return {config.profiles.lookup(from.crypto).t_encrypt, channel->t_comm(),
            config.profiles.lookup(to.crypto).t_decrypt};
}

Plan make_plan(const ScenarioConfig& config) {
    require_valid(config);
    const ChainPath path = resolve_chain(config);

    Plan plan;
    plan.protocol = config.protocol;
    plan.tau = config.slot_duration;
    plan.window = config.distribution_window;
    for (auto l : path.links) {
        plan.p_success.push_back(config.quantum_links[l].p_success);
        plan.base_fidelity.push_back(config.quantum_links[l].base_fidelity);
    }
    for (auto n : path.nodes) {
        plan.t_coh.push_back(config.nodes[n].memory.t_coh);
    }

    const NodeSpec& src = config.nodes[path.source()];
    const NodeSpec& dst = config.nodes[path.destination()];
    plan.t_decrypt_end = config.profiles.lookup(dst.crypto).t_decrypt;
    switch (config.protocol) {
        case Protocol::single_hop:
            plan.hops.push_back(hop_between(config, src, dst));
            break;
        case Protocol::parallel_chain:
            for (std::size_t k = 1; k + 1 < path.nodes.size(); ++k) {
                auto hop = hop_between(config, config.nodes[path.nodes[k]], dst);
                hop.t_decrypt = plan.t_decrypt_end;
                plan.hops.push_back(hop);
            }
            break;
        case Protocol::sequential_rounds:
            // Dependent rounds alternate direction, starting at the source.
            for (int r = 0; r < config.rounds_L; ++r) {
                plan.hops.push_back(r % 2 == 0 ? hop_between(config, src, dst)
                                               : hop_between(config, dst, src));
            }
            break;
    }
    return plan;
}

Seconds coherence_for_check(const Plan& plan) {
    if (plan.protocol == Protocol::sequential_rounds) {
        // Both end nodes hold their halves through every round.
        return std::min(plan.t_coh.front(), plan.t_coh.back());
    }
    return plan.t_coh.back();
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

TrialOutcome simulate(const Plan& plan, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t m = plan.p_success.size();
    const std::size_t dest = m;  // path node index of the destination

    // Slot indices; a pair from slot k is stored at (k + 1) * tau.
    std::vector<std::optional<std::int64_t>> stored(m);
    // swapped[i] is the slot of the BSM at path node i (interior nodes only).
    std::vector<std::optional<std::int64_t>> swapped(m + 1);
    auto at = [&](std::int64_t k) { return static_cast<double>(k + 1) * plan.tau; };
    auto span = [&](std::int64_t from, std::int64_t to) { return static_cast<double>(to - from) * plan.tau; };

    // In a parallel chain the destination drops a half that can no longer
    // receive every correction in time, unless no fresh half could either.
    bool discard_doomed = false;
    if (plan.protocol == Protocol::parallel_chain) {
        discard_doomed = timing::check_parallel(plan.hops, plan.t_decrypt_end, plan.t_coh[dest]).feasible;
    }
    // Lower bound on the destination's wait for a half stored in slot k_s:
    // pending swaps happen no earlier than the current slot.
    auto doomed = [&](std::int64_t k_s, std::int64_t now) {
        for (std::size_t i = 1; i < m; ++i) {
            const Seconds w = span(k_s, swapped[i].value_or(now)) + plan.hops[i - 1].total();
            if (!(plan.t_coh[dest] - w > 0.0)) {
                return true;
            }
        }
        return false;
    };

    TrialOutcome out;
    bool complete = false;
    bool window_closed = false;
    std::int64_t slot = 0;
    for (; slot < kSlotHorizon; ++slot) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!stored[j] && uniform01(rng) < plan.p_success[j]) {
                stored[j] = slot;
            }
        }

        // Expire segments whose waiting boundary half is older than its
        // node's t_coh. The source half is consumed on arrival and never waits.
        for (std::size_t j = 0; j < m; ++j) {
            if (!stored[j]) {
                continue;
            }
            const std::size_t left = j;
            std::size_t right = j;
            while (right + 1 < m && swapped[right + 1]) {
                ++right;
            }
            const Seconds left_age = span(*stored[left], slot);
            const Seconds right_age = span(*stored[right], slot);
            const bool left_expired = left != 0 && left_age > plan.t_coh[left];
            bool right_expired = right_age > plan.t_coh[right + 1];
            if (right + 1 == dest && discard_doomed && doomed(*stored[right], slot)) {
                right_expired = true;
            }
            if (left_expired || right_expired) {
                for (std::size_t k = left; k <= right; ++k) {
                    stored[k].reset();
                    if (k > left) {
                        swapped[k].reset();
                    }
                }
            }
            j = right;
        }

        for (std::size_t i = 1; i < m; ++i) {
            if (!swapped[i] && stored[i - 1] && stored[i]) {
                swapped[i] = slot;
            }
        }

        complete = std::all_of(stored.begin(), stored.end(), [](const auto& s) { return s.has_value(); }) &&
                   std::all_of(swapped.begin() + 1, swapped.end() - 1,
                               [](const auto& s) { return s.has_value(); });
        if (complete) {
            ++slot;
            break;
        }
        if (plan.window && at(slot) >= *plan.window) {
            window_closed = true;
            ++slot;
            break;
        }
    }
    out.slots_used = slot;

    if (!complete) {
        out.failure_reason = window_closed ? FailureReason::memory_expired : FailureReason::horizon_exceeded;
        return out;
    }

    // Feedforward phase. `wait` is how long the destination's half waits
    // after being stored; it is what the timing checks bound.
    const std::int64_t k_dest = *stored[m - 1];
    const Seconds s_dest = at(k_dest);
    Seconds wait = 0.0;
    Seconds t_dist = 0.0;
    Seconds t_coh_limit = plan.t_coh[dest];
    switch (plan.protocol) {
        case Protocol::single_hop:
            wait = timing::min_required_coherence_single_hop(plan.hops[0]);
            t_dist = s_dest + wait;
            break;
        case Protocol::parallel_chain:
            for (std::size_t i = 1; i < m; ++i) {
                const Seconds delay = plan.hops[i - 1].total();
                const Seconds w = span(k_dest, *swapped[i]) + delay;
                const Seconds arrival = at(*swapped[i]) + delay;
                if (i == 1 || w > wait) {
                    wait = w;
                }
                t_dist = std::max(t_dist, arrival);
            }
            break;
        case Protocol::sequential_rounds:
            wait = timing::min_required_coherence_sequential(plan.hops);
            t_dist = s_dest + wait;
            t_coh_limit = coherence_for_check(plan);
            break;
    }
    out.t_dist = t_dist;

    if (!(t_coh_limit - wait > 0.0)) {
        out.failure_reason = FailureReason::message_late;
        return out;
    }
    if (plan.window && !(t_dist < *plan.window)) {
        out.failure_reason = FailureReason::memory_expired;
        return out;
    }

    out.success = true;
    out.link_fidelities.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t left = j;
        const std::size_t right = j + 1;
        Seconds left_wait = 0.0;
        Seconds right_wait = 0.0;
        if (left == 0) {
            left_wait = plan.protocol == Protocol::sequential_rounds ? wait : 0.0;
        } else {
            left_wait = span(*stored[j], *swapped[left]);
        }
        if (right == dest) {
            right_wait = wait;
        } else {
            right_wait = span(*stored[j], *swapped[right]);
        }
        Fidelity f = fidelity::decay(Fidelity(plan.base_fidelity[j]), left_wait, plan.t_coh[left]);
        f = fidelity::decay(f, right_wait, plan.t_coh[right]);
        out.link_fidelities.push_back(f);
    }
    out.f_end = fidelity::chain_fidelity(out.link_fidelities);
    return out;
}

std::uint64_t splitmix_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

bool parse_index(std::string_view s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_path(std::string_view path) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        auto dot = path.find('.', start);
        parts.push_back(path.substr(start, dot - start));
        if (dot == std::string_view::npos) {
            break;
        }
        start = dot + 1;
    }
    return parts;
}

[[noreturn]] void bad_path(std::string_view path, std::string_view why) {
    throw InputError("invalid parameter path '" + std::string(path) + "': " + std::string(why));
}

// Applies fn to the elements of `items` picked by selector: "*", an index,
// or a name as produced by name_of.
template <typename T, typename NameOf, typename Fn>
void select(std::vector<T>& items, std::string_view selector, std::string_view path, NameOf name_of,
            Fn fn) {
    std::size_t matched = 0;
    std::size_t index = 0;
    const bool numeric = parse_index(selector, index);
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (selector == "*" || (numeric && i == index) || name_of(items[i], selector)) {
            fn(items[i]);
            ++matched;
        }
    }
    if (matched == 0) {
        bad_path(path, "selector '" + std::string(selector) + "' matches nothing");
    }
}

bool pair_named(const NodePair& p, std::string_view s) {
    return s == p[0] + "-" + p[1] || s == p[1] + "-" + p[0];
}

}  // namespace

std::string_view to_string(FailureReason reason) {
    switch (reason) {
        case FailureReason::memory_expired:
            return "memory_expired";
        case FailureReason::message_late:
            return "message_late";
        case FailureReason::horizon_exceeded:
            return "horizon_exceeded";
    }
    return "?";
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return splitmix_mix(master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15ULL);
}

timing::FeasibilityResult analyze(const ScenarioConfig& config) {
    const Plan plan = make_plan(config);
    switch (plan.protocol) {
        case Protocol::single_hop:
            return timing::check_single_hop(plan.hops[0], coherence_for_check(plan));
        case Protocol::parallel_chain:
            return timing::check_parallel(plan.hops, plan.t_decrypt_end, coherence_for_check(plan));
        case Protocol::sequential_rounds:
            return timing::check_sequential(plan.hops, coherence_for_check(plan));
    }
    throw InputError("unknown protocol");
}

Seconds required_coherence(const ScenarioConfig& config) {
    const Plan plan = make_plan(config);
    switch (plan.protocol) {
        case Protocol::single_hop:
            return timing::min_required_coherence_single_hop(plan.hops[0]);
        case Protocol::parallel_chain:
            return timing::min_required_coherence_parallel(plan.hops, plan.t_decrypt_end);
        case Protocol::sequential_rounds:
            return timing::min_required_coherence_sequential(plan.hops);
    }
    throw InputError("unknown protocol");
}

TrialOutcome run_trial(const ScenarioConfig& config, std::uint64_t seed) {
    return simulate(make_plan(config), seed);
}

RunSummary summarize(const ScenarioConfig& config, const std::vector<TrialOutcome>& trials) {
    RunSummary s;
    s.n_trials = static_cast<std::int64_t>(trials.size());
    double t_dist_sum = 0.0;
    double f_sum = 0.0;
    double slots_sum = 0.0;
    for (const auto& t : trials) {
        slots_sum += static_cast<double>(t.slots_used);
        if (t.success) {
            ++s.successes;
            t_dist_sum += *t.t_dist;
            f_sum += t.f_end->value();
            s.f_end_min = s.f_end_min ? std::min(*s.f_end_min, t.f_end->value()) : t.f_end->value();
        } else if (t.failure_reason) {
            switch (*t.failure_reason) {
                case FailureReason::memory_expired:
                    ++s.memory_expired;
                    break;
                case FailureReason::message_late:
                    ++s.message_late;
                    break;
                case FailureReason::horizon_exceeded:
                    ++s.horizon_exceeded;
                    break;
            }
        }
    }
    if (s.n_trials > 0) {
        s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.n_trials);
        s.mean_slots_used = slots_sum / static_cast<double>(s.n_trials);
    }
    if (s.successes > 0) {
        s.mean_t_dist = t_dist_sum / static_cast<double>(s.successes);
        s.f_end_mean = f_sum / static_cast<double>(s.successes);
    }

    const ChainPath path = resolve_chain(config);
    for (auto l : path.links) {
        const auto& link = config.quantum_links[l];
        const double rate = link.gen_rate.value_or(link.p_success / config.slot_duration);
        const double t_coh = std::min(config.nodes[*find_node(config, link.endpoints[0])].memory.t_coh,
                                      config.nodes[*find_node(config, link.endpoints[1])].memory.t_coh);
        s.re_tcoh_product.push_back({link.endpoints, rate * t_coh});
    }
    return s;
}

MonteCarloRun run_monte_carlo(const ScenarioConfig& config, std::int64_t n_trials,
                              std::uint64_t master_seed) {
    if (n_trials < 1) {
        throw InputError("n_trials must be >= 1");
    }
    const Plan plan = make_plan(config);
    MonteCarloRun run;
    run.trials.resize(static_cast<std::size_t>(n_trials));

    const auto n = static_cast<std::size_t>(n_trials);
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, std::max<std::size_t>(1, n / 256));
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            run.trials[i] = simulate(plan, trial_seed(master_seed, i));
        }
    };
    if (workers <= 1) {
        work(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin < end) {
                pool.emplace_back(work, begin, end);
            }
        }
    }
    run.summary = summarize(config, run.trials);
    return run;
}

void set_parameter(ScenarioConfig& config, std::string_view path, double value) {
    if (!std::isfinite(value)) {
        bad_path(path, "value must be finite");
    }
    const auto parts = split_path(path);
    auto field = [&](std::size_t n) {
        if (parts.size() != n) {
            bad_path(path, "wrong number of segments");
        }
        return parts.back();
    };
    const auto head = parts.front();

    if (parts.size() == 1) {
        if (head == "slot_duration") {
            config.slot_duration = value;
        } else if (head == "distribution_window") {
            config.distribution_window = value;
        } else if (head == "rounds_L") {
            if (value != std::floor(value) || value < 1.0 || value > 1e6) {
                bad_path(path, "rounds_L takes a positive integer");
            }
            config.rounds_L = static_cast<int>(value);
        } else {
            bad_path(path, "not a numeric scenario field");
        }
        return;
    }

    if (head == "nodes") {
        if (field(4) != "t_coh" || parts[2] != "memory") {
            bad_path(path, "node paths end in memory.t_coh");
        }
        select(config.nodes, parts[1], path, [](const NodeSpec& n, std::string_view s) { return n.id == s; },
               [&](NodeSpec& n) { n.memory.t_coh = value; });
    } else if (head == "quantum_links") {
        const auto f = field(3);
        double QuantumLinkSpec::*member = nullptr;
        if (f == "p_success") {
            member = &QuantumLinkSpec::p_success;
        } else if (f == "base_fidelity") {
            member = &QuantumLinkSpec::base_fidelity;
        } else if (f != "gen_rate") {
            bad_path(path, "unknown link field");
        }
        select(config.quantum_links, parts[1], path,
               [](const QuantumLinkSpec& l, std::string_view s) { return pair_named(l.endpoints, s); },
               [&](QuantumLinkSpec& l) {
                   if (member != nullptr) {
                       l.*member = value;
                   } else {
                       l.gen_rate = value;
                   }
               });
    } else if (head == "classical_channels") {
        const auto f = field(3);
        double ClassicalChannelSpec::*member = nullptr;
        if (f == "propagation_delay") {
            member = &ClassicalChannelSpec::propagation_delay;
        } else if (f == "processing_delay") {
            member = &ClassicalChannelSpec::processing_delay;
        } else {
            bad_path(path, "unknown channel field");
        }
        select(config.classical_channels, parts[1], path,
               [](const ClassicalChannelSpec& c, std::string_view s) { return pair_named(c.endpoints, s); },
               [&](ClassicalChannelSpec& c) { c.*member = value; });
    } else if (head == "crypto_profiles") {
        const auto f = field(3);
        double CryptoProfile::*member = nullptr;
        if (f == "t_encrypt") {
            member = &CryptoProfile::t_encrypt;
        } else if (f == "t_decrypt") {
            member = &CryptoProfile::t_decrypt;
        } else {
            bad_path(path, "unknown profile field");
        }
        auto profiles = config.profiles.profiles();
        select(profiles, parts[1], path, [](const CryptoProfile& p, std::string_view s) { return p.name == s; },
               [&](CryptoProfile& p) { p.*member = value; });
        CryptoRegistry rebuilt;
        for (auto& p : profiles) {
            rebuilt.add_or_replace(std::move(p));
        }
        config.profiles = std::move(rebuilt);
    } else if (head == "adversary") {
        if (!config.adversary) {
            bad_path(path, "scenario has no adversary");
        }
        const auto f = field(2);
        if (f == "t_eve") {
            config.adversary->t_eve = value;
        } else if (f == "t_pqc") {
            config.adversary->t_pqc = value;
        } else if (f == "t_coh_eve") {
            config.adversary->t_coh_eve = value;
        } else {
            bad_path(path, "unknown adversary field");
        }
    } else {
        bad_path(path, "unknown section");
    }
}

std::vector<SweepRow> sweep(const ScenarioConfig& config, std::string_view path,
                            const std::vector<double>& values, std::int64_t n_trials,
                            std::uint64_t master_seed) {
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (double v : values) {
        ScenarioConfig point = config;
        set_parameter(point, path, v);
        rows.push_back({v, run_monte_carlo(point, n_trials, master_seed).summary});
    }
    return rows;
}

}  // namespace qrnet::engine
