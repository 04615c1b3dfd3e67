#pragma once

// Domain types shared by every qrnet module: node, link and channel specs,
// the crypto-profile registry, and the scenario description consumed by the
// analyzer and the simulator.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrnet/errors.hpp"

namespace qrnet {

using Seconds = double;
using NodePair = std::array<std::string, 2>;

enum class CryptoKind { kem, signature };
enum class MemoryTier { short_lived, long_lived };
enum class NodeRole { end_node, repeater, core, edge };
enum class Protocol { single_hop, parallel_chain, sequential_rounds };
enum class SecurityFamily { symmetric, factoring_or_dlog_based, pqc };

std::string_view to_string(CryptoKind kind);
std::string_view to_string(MemoryTier tier);
std::string_view to_string(NodeRole role);
std::string_view to_string(Protocol protocol);
std::string_view to_string(SecurityFamily family);

// Parsers return nullopt for unrecognised names.
std::optional<CryptoKind> parse_crypto_kind(std::string_view s);
std::optional<MemoryTier> parse_memory_tier(std::string_view s);
std::optional<NodeRole> parse_node_role(std::string_view s);
std::optional<Protocol> parse_protocol(std::string_view s);
std::optional<SecurityFamily> parse_security_family(std::string_view s);

/// Latency and size profile of one PQC algorithm class. Only the timing and
/// sizes are modelled; no cryptography is performed.
struct CryptoProfile {
    std::string name;
    Seconds t_encrypt = 0.0;
    Seconds t_decrypt = 0.0;
    std::uint64_t public_key_bytes = 0;
    std::uint64_t ciphertext_or_sig_bytes = 0;
    int claimed_security_bits = 0;
    CryptoKind kind = CryptoKind::kem;
    // Set on shipped defaults whose latencies are placeholders, not benchmarks.
    bool illustrative = false;
};

class ProfileNotFound : public InputError {
public:
    explicit ProfileNotFound(std::string_view name);
};

/// Named set of crypto profiles. Insertion order is preserved so listings are
/// stable.
class CryptoRegistry {
public:
    CryptoRegistry() = default;

    /// The shipped profiles: kyber512-class, kyber768-class, frodo1344-class,
    /// dilithium-class and sphincs-class. Key and ciphertext/signature sizes
    /// follow the published parameter sets; latencies are illustrative.
    static CryptoRegistry defaults();

    // Replaces an existing profile with the same name.
    void add_or_replace(CryptoProfile profile);

    const CryptoProfile& lookup(std::string_view name) const;
    const CryptoProfile* find(std::string_view name) const;
    CryptoProfile* find(std::string_view name);
    bool contains(std::string_view name) const { return find(name) != nullptr; }

    const std::vector<CryptoProfile>& profiles() const { return profiles_; }
    bool empty() const { return profiles_.empty(); }

private:
    std::vector<CryptoProfile> profiles_;
};

struct MemorySpec {
    Seconds t_coh = 1.0;
    MemoryTier tier = MemoryTier::short_lived;
};

struct NodeSpec {
    std::string id;
    NodeRole role = NodeRole::repeater;
    MemorySpec memory;
    std::string crypto;  // name in the scenario's registry
};

struct ClassicalChannelSpec {
    NodePair endpoints;
    Seconds propagation_delay = 0.0;
    Seconds processing_delay = 0.0;

    Seconds t_comm() const { return propagation_delay + processing_delay; }
};

struct QuantumLinkSpec {
    NodePair endpoints;
    // Attempts per second. When absent it is derived as p_success / slot_duration.
    std::optional<double> gen_rate;
    double p_success = 1.0;
    double base_fidelity = 1.0;
};

struct AdversaryConfig {
    Seconds t_eve = 0.0;
    Seconds t_pqc = 0.0;
    Seconds t_coh_eve = 1.0;
    NodePair intercept_link;

    Seconds total_delay() const { return t_eve + t_pqc; }
};

struct ScenarioConfig {
    std::vector<NodeSpec> nodes;
    std::vector<QuantumLinkSpec> quantum_links;
    std::vector<ClassicalChannelSpec> classical_channels;
    Protocol protocol = Protocol::single_hop;
    int rounds_L = 1;
    std::optional<AdversaryConfig> adversary;
    std::uint64_t seed = 0;
    std::int64_t n_trials = 1000;
    Seconds slot_duration = 1e-3;

    // Defaults merged with any profiles declared in the scenario file.
    CryptoRegistry profiles = CryptoRegistry::defaults();
    // End node that receives corrections. Defaults to the end node with the
    // lexicographically greater id.
    std::optional<std::string> destination;
    // Optional bound on end-to-end distribution time, measured from the first
    // attempt. Trials that cannot finish inside it fail as memory_expired.
    std::optional<Seconds> distribution_window;
};

struct Violation {
    std::string path;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
    friend auto operator<=>(const Violation&, const Violation&) = default;
};

/// Ordered repeater chain extracted from a scenario: node and link indices
/// from the source end node to the destination end node.
struct ChainPath {
    std::vector<std::size_t> nodes;
    std::vector<std::size_t> links;

    std::size_t source() const { return nodes.front(); }
    std::size_t destination() const { return nodes.back(); }
};

/// Effective security of a primitive against a quantum adversary: Grover
/// halves symmetric strength (floor), Shor breaks factoring/discrete-log
/// schemes outright, PQC claims are taken at face value.
int effective_security(int claimed_bits, SecurityFamily family);

/// Every type invariant that fails, each with a path to the offending field.
/// Empty means the scenario is runnable.
std::vector<Violation> validate_scenario(const ScenarioConfig& config);

std::optional<std::size_t> find_node(const ScenarioConfig& config, std::string_view id);

// Channels are undirected; endpoint order does not matter.
const ClassicalChannelSpec* find_channel(const ScenarioConfig& config,
                                         std::string_view a, std::string_view b);

/// Builds the source-to-destination chain. Throws InputError when the
/// topology is not a simple path between two end nodes.
ChainPath resolve_chain(const ScenarioConfig& config);

}  // namespace qrnet
