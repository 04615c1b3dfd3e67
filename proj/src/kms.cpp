#include "qrnet/kms.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qrnet::kms {

namespace {

// n(n-1)/2 overflows int64 somewhere above 4.29e9 nodes.
constexpr std::int64_t kMaxNodes = 3'000'000'000;

void require_nodes(std::int64_t n) {
    if (n < 2) {
        throw InputError("n_nodes must be >= 2, got " + std::to_string(n));
    }
    if (n > kMaxNodes) {
        throw InputError("n_nodes too large");
    }
}

}  // namespace

std::int64_t full_mesh_handshakes(std::int64_t n) {
    require_nodes(n);
    return n * (n - 1) / 2;
}

std::int64_t hierarchical_handshakes(std::int64_t n, std::int64_t cluster_size) {
    require_nodes(n);
    if (cluster_size < 2 || cluster_size > n) {
        throw InputError("cluster_size must satisfy 2 <= c <= n, got c = " + std::to_string(cluster_size) +
                         ", n = " + std::to_string(n));
    }
    const std::int64_t heads = (n + cluster_size - 1) / cluster_size;
    return (n - heads) + heads * (heads - 1) / 2;
}

Seconds rekey_cycle_time(std::int64_t handshakes, Seconds per_handshake_time, Seconds t_auth,
                         std::int64_t parallelism) {
    if (parallelism < 1) {
        throw InputError("parallelism must be >= 1");
    }
    if (handshakes < 0) {
        throw InputError("handshake count must be >= 0");
    }
    if (!std::isfinite(per_handshake_time) || per_handshake_time < 0.0 || !std::isfinite(t_auth) ||
        t_auth < 0.0) {
        throw InputError("handshake and auth times must be finite and >= 0");
    }
    const std::int64_t batches = (handshakes + parallelism - 1) / parallelism;
    return static_cast<double>(batches) * (per_handshake_time + t_auth);
}

std::int64_t handshakes(const KmsConfig& config, Mode mode) {
    if (mode == Mode::full_mesh) {
        return full_mesh_handshakes(config.n_nodes);
    }
    if (!config.cluster_size) {
        throw InputError("hierarchical mode needs cluster_size");
    }
    return hierarchical_handshakes(config.n_nodes, *config.cluster_size);
}

Seconds rekey_cycle_time(const KmsConfig& config, Mode mode) {
    if (!(config.per_handshake_time > 0.0)) {
        throw InputError("per_handshake_time must be > 0");
    }
    return rekey_cycle_time(handshakes(config, mode), config.per_handshake_time, config.t_auth,
                            config.parallelism);
}

}  // namespace qrnet::kms
