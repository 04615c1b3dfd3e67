#include <doctest.h>

#include "qrnet/kms.hpp"
#include "support/oracles.hpp"

using namespace qrnet;
using namespace qrnet::kms;

TEST_CASE("full mesh counts") {
    CHECK(full_mesh_handshakes(2) == 1);
    CHECK(full_mesh_handshakes(4) == 6);
    CHECK(full_mesh_handshakes(100) == 4950);
    for (int n = 2; n <= 200; ++n) {
        CHECK(full_mesh_handshakes(n) == oracles::count_unordered_pairs(n));
    }
    CHECK_THROWS_AS(full_mesh_handshakes(1), InputError);
}

TEST_CASE("hierarchical counts") {
    CHECK(hierarchical_handshakes(4, 4) == 3);
    CHECK(hierarchical_handshakes(4, 2) == 3);
    CHECK(hierarchical_handshakes(1000, 10) == 5850);
    for (int n = 2; n <= 120; ++n) {
        for (int c = 2; c <= n; ++c) {
            const auto h = hierarchical_handshakes(n, c);
            CHECK(h == oracles::layout_hierarchical_edges(n, c));
            CHECK(h <= full_mesh_handshakes(n));
        }
        CHECK(hierarchical_handshakes(n, n) == n - 1);
    }
    CHECK_THROWS_AS(hierarchical_handshakes(10, 1), InputError);
    CHECK_THROWS_AS(hierarchical_handshakes(10, 11), InputError);
}

TEST_CASE("rekey cycle time") {
    CHECK(rekey_cycle_time(0, 2e-3, 0.0, 1) == 0.0);
    CHECK(rekey_cycle_time(6, 2e-3, 0.0, 1) == doctest::Approx(12e-3));
    CHECK(rekey_cycle_time(6, 2e-3, 0.0, 4) == doctest::Approx(4e-3));
    CHECK(rekey_cycle_time(6, 2e-3, 1e-3, 4) == doctest::Approx(6e-3));
    for (int h = 0; h <= 60; ++h) {
        double previous = rekey_cycle_time(h, 1.0, 0.0, 1);
        for (int p = 1; p <= 12; ++p) {
            const double t = rekey_cycle_time(h, 1.0, 0.0, p);
            CHECK(t == oracles::schedule_makespan(h, p, 1.0));
            CHECK(t <= previous);
            previous = t;
            if (h % p == 0) {
                CHECK(t * p == doctest::Approx(rekey_cycle_time(h, 1.0, 0.0, 1)));
            }
        }
    }
    CHECK_THROWS_AS(rekey_cycle_time(1, 1.0, 0.0, 0), InputError);
    CHECK_THROWS_AS(rekey_cycle_time(-1, 1.0, 0.0, 1), InputError);
}

TEST_CASE("config overloads") {
    KmsConfig c;
    c.n_nodes = 4;
    c.per_handshake_time = 2e-3;
    c.parallelism = 4;
    CHECK(handshakes(c, Mode::full_mesh) == 6);
    CHECK(rekey_cycle_time(c, Mode::full_mesh) == doctest::Approx(4e-3));
    CHECK_THROWS_AS(handshakes(c, Mode::hierarchical), InputError);
    c.cluster_size = 2;
    CHECK(handshakes(c, Mode::hierarchical) == 3);
    c.per_handshake_time = 0.0;
    CHECK_THROWS_AS(rekey_cycle_time(c, Mode::full_mesh), InputError);
}
