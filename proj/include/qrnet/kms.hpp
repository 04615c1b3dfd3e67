#pragma once

// Handshake counts and re-key cycle time for PQC key management. A handshake
// is one pairwise key exchange between an unordered pair of nodes.

#include <cstdint>
#include <optional>

#include "qrnet/model.hpp"

namespace qrnet::kms {

enum class Mode { full_mesh, hierarchical };

struct KmsConfig {
    std::int64_t n_nodes = 2;
    std::optional<std::int64_t> cluster_size;  // hierarchical only
    Seconds per_handshake_time = 1e-3;         // includes KEM latency
    Seconds t_auth = 0.0;
    std::int64_t parallelism = 1;
};

/// n(n - 1)/2.
std::int64_t full_mesh_handshakes(std::int64_t n);

/// One-level hierarchy: ceil(n/c) clusters, each member keys with its head and
/// the heads form a full mesh. A single cluster degenerates to a star.
std::int64_t hierarchical_handshakes(std::int64_t n, std::int64_t cluster_size);

/// ceil(handshakes / p) batches, each taking per_handshake_time + t_auth.
Seconds rekey_cycle_time(std::int64_t handshakes, Seconds per_handshake_time, Seconds t_auth,
                         std::int64_t parallelism);

std::int64_t handshakes(const KmsConfig& config, Mode mode);
Seconds rekey_cycle_time(const KmsConfig& config, Mode mode);

}  // namespace qrnet::kms
