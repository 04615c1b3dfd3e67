#include "qrnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

namespace qrnet {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view s,
                               const std::array<std::pair<std::string_view, Enum>, N>& table) {
    for (const auto& [name, value] : table) {
        if (name == s) {
            return value;
        }
    }
    return std::nullopt;
}

constexpr std::array<std::pair<std::string_view, CryptoKind>, 2> kCryptoKinds{{
    {"kem", CryptoKind::kem},
    {"signature", CryptoKind::signature},
}};
constexpr std::array<std::pair<std::string_view, MemoryTier>, 2> kTiers{{
    {"short_lived", MemoryTier::short_lived},
    {"long_lived", MemoryTier::long_lived},
}};
constexpr std::array<std::pair<std::string_view, NodeRole>, 4> kRoles{{
    {"end_node", NodeRole::end_node},
    {"repeater", NodeRole::repeater},
    {"core", NodeRole::core},
    {"edge", NodeRole::edge},
}};
constexpr std::array<std::pair<std::string_view, Protocol>, 3> kProtocols{{
    {"single_hop", Protocol::single_hop},
    {"parallel_chain", Protocol::parallel_chain},
    {"sequential_rounds", Protocol::sequential_rounds},
}};
constexpr std::array<std::pair<std::string_view, SecurityFamily>, 3> kFamilies{{
    {"symmetric", SecurityFamily::symmetric},
    {"factoring_or_dlog_based", SecurityFamily::factoring_or_dlog_based},
    {"pqc", SecurityFamily::pqc},
}};

template <typename Enum, std::size_t N>
std::string_view enum_name(Enum value,
                           const std::array<std::pair<std::string_view, Enum>, N>& table) {
    for (const auto& [name, v] : table) {
        if (v == value) {
            return name;
        }
    }
    return "?";
}

bool same_pair(const NodePair& p, std::string_view a, std::string_view b) {
    return (p[0] == a && p[1] == b) || (p[0] == b && p[1] == a);
}

std::pair<std::string, std::string> unordered(const NodePair& p) {
    return p[0] < p[1] ? std::pair{p[0], p[1]} : std::pair{p[1], p[0]};
}

std::string describe(const NodePair& p) { return p[0] + "-" + p[1]; }

std::string indexed(std::string_view list, std::size_t i) {
    return std::string(list) + "[" + std::to_string(i) + "]";
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }
bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

struct ChainAttempt {
    std::optional<ChainPath> path;
    std::vector<Violation> issues;
};

// Walks the quantum-link graph from the source end node. Only links whose
// endpoints are distinct, known nodes take part; reference errors on other
// links are reported elsewhere.
ChainAttempt try_resolve_chain(const ScenarioConfig& config) {
    ChainAttempt out;
    std::vector<std::size_t> ends;
    for (std::size_t i = 0; i < config.nodes.size(); ++i) {
        if (config.nodes[i].role == NodeRole::end_node) {
            ends.push_back(i);
        }
    }
    if (ends.size() != 2) {
        out.issues.push_back({"nodes", "expected exactly 2 end_node nodes, found " +
                                           std::to_string(ends.size())});
        return out;
    }

    std::size_t destination = config.nodes[ends[0]].id > config.nodes[ends[1]].id ? ends[0] : ends[1];
    if (config.destination) {
        auto d = find_node(config, *config.destination);
        if (!d || config.nodes[*d].role != NodeRole::end_node) {
            out.issues.push_back({"destination", "'" + *config.destination + "' is not an end_node"});
            return out;
        }
        destination = *d;
    }
    const std::size_t source = destination == ends[0] ? ends[1] : ends[0];

    // adjacency: node -> (neighbour, link index)
    std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> adj;
    std::size_t usable_links = 0;
    for (std::size_t l = 0; l < config.quantum_links.size(); ++l) {
        const auto& ep = config.quantum_links[l].endpoints;
        auto a = find_node(config, ep[0]);
        auto b = find_node(config, ep[1]);
        if (!a || !b || *a == *b) {
            continue;
        }
        adj[*a].emplace_back(*b, l);
        adj[*b].emplace_back(*a, l);
        ++usable_links;
    }

    for (const auto& [node, nbrs] : adj) {
        const bool is_end = node == source || node == destination;
        if (nbrs.size() > (is_end ? 1u : 2u)) {
            out.issues.push_back({"quantum_links", "node '" + config.nodes[node].id +
                                                       "' has degree " + std::to_string(nbrs.size()) +
                                                       "; links must form a simple path"});
        }
    }
    if (!out.issues.empty()) {
        return out;
    }

    ChainPath path;
    path.nodes.push_back(source);
    std::size_t prev_link = config.quantum_links.size();
    std::size_t cur = source;
    while (cur != destination) {
        const auto it = adj.find(cur);
        std::optional<std::pair<std::size_t, std::size_t>> next;
        if (it != adj.end()) {
            for (const auto& edge : it->second) {
                if (edge.second != prev_link) {
                    next = edge;
                }
            }
        }
        if (!next) {
            out.issues.push_back({"quantum_links", "no path of quantum links from '" +
                                                       config.nodes[source].id + "' to '" +
                                                       config.nodes[destination].id + "'"});
            return out;
        }
        path.links.push_back(next->second);
        path.nodes.push_back(next->first);
        prev_link = next->second;
        cur = next->first;
    }

    if (path.links.size() != usable_links) {
        out.issues.push_back({"quantum_links", "links not on the end-to-end path"});
    }
    std::set<std::size_t> on_path(path.nodes.begin(), path.nodes.end());
    for (std::size_t i = 0; i < config.nodes.size(); ++i) {
        if (!on_path.contains(i)) {
            out.issues.push_back({indexed("nodes", i), "node '" + config.nodes[i].id +
                                                           "' is not on the end-to-end path"});
        }
    }
    if (out.issues.empty()) {
        out.path = std::move(path);
    }
    return out;
}

}  // namespace

std::string_view to_string(CryptoKind kind) { return enum_name(kind, kCryptoKinds); }
std::string_view to_string(MemoryTier tier) { return enum_name(tier, kTiers); }
std::string_view to_string(NodeRole role) { return enum_name(role, kRoles); }
std::string_view to_string(Protocol protocol) { return enum_name(protocol, kProtocols); }
std::string_view to_string(SecurityFamily family) { return enum_name(family, kFamilies); }

std::optional<CryptoKind> parse_crypto_kind(std::string_view s) { return parse_enum(s, kCryptoKinds); }
std::optional<MemoryTier> parse_memory_tier(std::string_view s) { return parse_enum(s, kTiers); }
std::optional<NodeRole> parse_node_role(std::string_view s) { return parse_enum(s, kRoles); }
std::optional<Protocol> parse_protocol(std::string_view s) { return parse_enum(s, kProtocols); }
std::optional<SecurityFamily> parse_security_family(std::string_view s) {
    return parse_enum(s, kFamilies);
}

ProfileNotFound::ProfileNotFound(std::string_view name)
    : InputError("profile not found: '" + std::string(name) + "'") {}

CryptoRegistry CryptoRegistry::defaults() {
    CryptoRegistry r;
    // Sizes in bytes from the round-3 / FIPS parameter sets. Latencies are
    // placeholders in the right order of magnitude for a desktop core.
    r.add_or_replace({"kyber512-class", 30e-6, 40e-6, 800, 768, 128, CryptoKind::kem, true});
    r.add_or_replace({"kyber768-class", 45e-6, 55e-6, 1184, 1088, 192, CryptoKind::kem, true});
    r.add_or_replace({"frodo1344-class", 1.5e-3, 1.5e-3, 21520, 21632, 256, CryptoKind::kem, true});
    r.add_or_replace({"dilithium-class", 250e-6, 80e-6, 1312, 2420, 128, CryptoKind::signature, true});
    r.add_or_replace({"sphincs-class", 150e-3, 400e-6, 32, 7856, 128, CryptoKind::signature, true});
    return r;
}

void CryptoRegistry::add_or_replace(CryptoProfile profile) {
    if (auto* existing = find(profile.name)) {
        *existing = std::move(profile);
        return;
    }
    profiles_.push_back(std::move(profile));
}

const CryptoProfile* CryptoRegistry::find(std::string_view name) const {
    auto it = std::find_if(profiles_.begin(), profiles_.end(),
                           [&](const CryptoProfile& p) { return p.name == name; });
    return it == profiles_.end() ? nullptr : &*it;
}

CryptoProfile* CryptoRegistry::find(std::string_view name) {
    return const_cast<CryptoProfile*>(std::as_const(*this).find(name));
}

const CryptoProfile& CryptoRegistry::lookup(std::string_view name) const {
    if (const auto* p = find(name)) {
        return *p;
    }
    throw ProfileNotFound(name);
}

int effective_security(int claimed_bits, SecurityFamily family) {
    if (claimed_bits < 0) {
        throw InputError("claimed_bits must be non-negative");
    }
    switch (family) {
        case SecurityFamily::symmetric:
            return claimed_bits / 2;
        case SecurityFamily::factoring_or_dlog_based:
            return 0;
        case SecurityFamily::pqc:
            return claimed_bits;
    }
    return claimed_bits;
}

std::optional<std::size_t> find_node(const ScenarioConfig& config, std::string_view id) {
    for (std::size_t i = 0; i < config.nodes.size(); ++i) {
        if (config.nodes[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

const ClassicalChannelSpec* find_channel(const ScenarioConfig& config, std::string_view a,
                                         std::string_view b) {
    for (const auto& ch : config.classical_channels) {
        if (same_pair(ch.endpoints, a, b)) {
            return &ch;
        }
    }
    return nullptr;
}

ChainPath resolve_chain(const ScenarioConfig& config) {
    auto attempt = try_resolve_chain(config);
    if (!attempt.path) {
        std::string msg = "invalid chain topology";
        for (const auto& v : attempt.issues) {
            msg += "; " + v.path + ": " + v.message;
        }
        throw InputError(msg);
    }
    return *attempt.path;
}

std::vector<Violation> validate_scenario(const ScenarioConfig& config) {
    std::vector<Violation> out;
    auto add = [&](std::string path, std::string message) {
        out.push_back({std::move(path), std::move(message)});
    };

    if (!finite_pos(config.slot_duration)) {
        add("slot_duration", "must be finite and > 0");
    }
    if (config.n_trials < 1) {
        add("n_trials", "must be >= 1");
    }
    if (config.rounds_L < 1) {
        add("rounds_L", "must be >= 1");
    }
    if (config.distribution_window && !finite_pos(*config.distribution_window)) {
        add("distribution_window", "must be finite and > 0");
    }

    for (const auto& p : config.profiles.profiles()) {
        const std::string base = "crypto_profiles[" + p.name + "]";
        if (p.name.empty()) {
            add(base + ".name", "must not be empty");
        }
        if (!finite_nonneg(p.t_encrypt)) {
            add(base + ".t_encrypt", "must be finite and >= 0");
        }
        if (!finite_nonneg(p.t_decrypt)) {
            add(base + ".t_decrypt", "must be finite and >= 0");
        }
        if (p.claimed_security_bits < 0) {
            add(base + ".claimed_security_bits", "must be >= 0");
        }
    }

    std::set<std::string> ids;
    for (std::size_t i = 0; i < config.nodes.size(); ++i) {
        const auto& n = config.nodes[i];
        const std::string base = indexed("nodes", i);
        if (n.id.empty()) {
            add(base + ".id", "must not be empty");
        } else if (!ids.insert(n.id).second) {
            add(base + ".id", "duplicate node id '" + n.id + "'");
        }
        if (!finite_pos(n.memory.t_coh)) {
            add(base + ".memory.t_coh", "node '" + n.id + "': must be finite and > 0");
        }
        if (!config.profiles.contains(n.crypto)) {
            add(base + ".crypto", "node '" + n.id + "': profile not found: '" + n.crypto + "'");
        }
    }

    auto check_endpoints = [&](const NodePair& ep, const std::string& base, std::string_view what) {
        bool ok = true;
        for (std::size_t k = 0; k < 2; ++k) {
            if (!find_node(config, ep[k])) {
                add(base + ".endpoints", std::string(what) + " " + describe(ep) +
                                             ": unknown node id '" + ep[k] + "'");
                ok = false;
            }
        }
        if (ep[0] == ep[1]) {
            add(base + ".endpoints", std::string(what) + " " + describe(ep) + ": endpoints must be distinct");
            ok = false;
        }
        return ok;
    };

    std::set<std::pair<std::string, std::string>> link_pairs;
    for (std::size_t i = 0; i < config.quantum_links.size(); ++i) {
        const auto& l = config.quantum_links[i];
        const std::string base = indexed("quantum_links", i);
        const std::string name = "link " + describe(l.endpoints);
        check_endpoints(l.endpoints, base, "link");
        if (!link_pairs.insert(unordered(l.endpoints)).second) {
            add(base, name + ": duplicate link");
        }
        if (!(std::isfinite(l.p_success) && l.p_success > 0.0 && l.p_success <= 1.0)) {
            add(base + ".p_success", name + ": must be in (0, 1]");
        }
        if (!(std::isfinite(l.base_fidelity) && l.base_fidelity >= 0.25 && l.base_fidelity <= 1.0)) {
            add(base + ".base_fidelity", name + ": must be in [0.25, 1]");
        }
        if (l.gen_rate) {
            const double rate = *l.gen_rate;
            if (!finite_pos(rate)) {
                add(base + ".gen_rate", name + ": must be finite and > 0");
            } else if (finite_pos(config.slot_duration) && l.p_success > 0.0) {
                const double implied = l.p_success / config.slot_duration;
                if (std::abs(rate - implied) > 1e-9 * implied) {
                    add(base + ".gen_rate", name + ": must equal p_success / slot_duration");
                }
            }
        }
    }

    std::set<std::pair<std::string, std::string>> channel_pairs;
    for (std::size_t i = 0; i < config.classical_channels.size(); ++i) {
        const auto& c = config.classical_channels[i];
        const std::string base = indexed("classical_channels", i);
        const std::string name = "channel " + describe(c.endpoints);
        check_endpoints(c.endpoints, base, "channel");
        if (!channel_pairs.insert(unordered(c.endpoints)).second) {
            add(base, name + ": duplicate channel");
        }
        if (!finite_nonneg(c.propagation_delay)) {
            add(base + ".propagation_delay", name + ": must be finite and >= 0");
        }
        if (!finite_nonneg(c.processing_delay)) {
            add(base + ".processing_delay", name + ": must be finite and >= 0");
        }
    }

    if (config.adversary) {
        const auto& a = *config.adversary;
        if (!finite_nonneg(a.t_eve)) {
            add("adversary.t_eve", "must be finite and >= 0");
        }
        if (!finite_nonneg(a.t_pqc)) {
            add("adversary.t_pqc", "must be finite and >= 0");
        }
        if (!finite_pos(a.t_coh_eve)) {
            add("adversary.t_coh_eve", "must be finite and > 0");
        }
        const bool known = std::any_of(config.quantum_links.begin(), config.quantum_links.end(),
                                       [&](const QuantumLinkSpec& l) {
                                           return same_pair(l.endpoints, a.intercept_link[0],
                                                            a.intercept_link[1]);
                                       });
        if (!known) {
            add("adversary.intercept_link", "no quantum link " + describe(a.intercept_link));
        }
    }

    auto chain = try_resolve_chain(config);
    out.insert(out.end(), chain.issues.begin(), chain.issues.end());
    if (chain.path) {
        const auto& path = *chain.path;
        const auto hops = path.links.size();
        switch (config.protocol) {
            case Protocol::single_hop:
            case Protocol::sequential_rounds:
                if (hops != 1) {
                    add("quantum_links", std::string(to_string(config.protocol)) +
                                             " needs exactly one link between the end nodes, found " +
                                             std::to_string(hops));
                }
                break;
            case Protocol::parallel_chain:
                if (hops < 2) {
                    add("quantum_links", "parallel_chain needs at least one repeater");
                }
                break;
        }

        // Every node pair that carries a classical message needs a channel.
        const auto& dst = config.nodes[path.destination()].id;
        std::vector<std::string> senders;
        if (config.protocol == Protocol::parallel_chain) {
            for (std::size_t k = 1; k + 1 < path.nodes.size(); ++k) {
                senders.push_back(config.nodes[path.nodes[k]].id);
            }
        } else {
            senders.push_back(config.nodes[path.source()].id);
        }
        for (const auto& s : senders) {
            if (!find_channel(config, s, dst)) {
                add("classical_channels", "missing channel " + s + "-" + dst);
            }
        }
    }

    return out;
}

}  // namespace qrnet
