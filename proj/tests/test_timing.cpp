#include <doctest.h>

#include <limits>
#include <random>
#include <vector>

#include "qrnet/timing.hpp"

using namespace qrnet;
using namespace qrnet::timing;

TEST_CASE("single hop") {
    auto r = check_single_hop({1, 2, 1}, 10);
    CHECK(r.feasible);
    CHECK(r.slack == 6);
    CHECK_FALSE(r.binding_index);

    r = check_single_hop({3, 4, 3}, 10);
    CHECK_FALSE(r.feasible);
    CHECK(r.slack == 0);

    r = check_single_hop({0, 0, 0}, 5);
    CHECK(r.feasible);
    CHECK(r.slack == 5);

    r = check_single_hop({5, 5, 5}, 10);
    CHECK_FALSE(r.feasible);
    CHECK(r.slack == -5);

    CHECK_THROWS_AS(check_single_hop({std::numeric_limits<double>::infinity(), 0, 0}, 1), InputError);
    CHECK_THROWS_AS(check_single_hop({std::nan(""), 0, 0}, 1), InputError);
    CHECK_THROWS_AS(check_single_hop({1, 1, 1}, 0), InputError);
}

TEST_CASE("parallel") {
    const std::vector<HopTiming> one{{1, 2, 99}};
    auto r = check_parallel(one, 1, 10);
    auto s = check_single_hop({1, 2, 1}, 10);
    CHECK(r.feasible == s.feasible);
    CHECK(r.slack == s.slack);
    CHECK(r.binding_index == 0u);

    const std::vector<HopTiming> two{{1, 1, 0}, {2, 5, 0}};
    r = check_parallel(two, 1, 10);
    CHECK(r.feasible);
    CHECK(r.slack == 2);
    CHECK(r.binding_index == 1u);

    const std::vector<HopTiming> same(5, HopTiming{1, 1, 0});
    r = check_parallel(same, 1, 4);
    CHECK(r.slack == 1);
    CHECK(r.binding_index == 0u);

    CHECK_THROWS_AS(check_parallel(std::vector<HopTiming>{}, 1, 10), InputError);
}

TEST_CASE("sequential") {
    CHECK(check_sequential(std::vector<HopTiming>{{1, 2, 1}}, 10) == check_single_hop({1, 2, 1}, 10));

    const std::vector<HopTiming> rounds{{1, 1, 1}, {1, 1, 1}};
    auto r = check_sequential(rounds, 7);
    CHECK(r.feasible);
    CHECK(r.slack == 1);
    CHECK_FALSE(r.binding_index);

    r = check_sequential(rounds, 6);
    CHECK_FALSE(r.feasible);
    CHECK(r.slack == 0);

    CHECK_THROWS_AS(check_sequential(std::vector<HopTiming>{}, 1), InputError);
}

TEST_CASE("min required coherence") {
    CHECK(min_required_coherence_single_hop({1, 2, 1}) == 4);
    const std::vector<HopTiming> two{{1, 1, 0}, {2, 5, 0}};
    CHECK(min_required_coherence_parallel(two, 1) == 8);
    const std::vector<HopTiming> rounds{{1, 1, 1}, {1, 1, 1}};
    CHECK(min_required_coherence_sequential(rounds) == 6);
}

TEST_CASE("properties over random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(0.0, 5e-3);
    auto hop = [&] { return HopTiming{d(rng), d(rng), d(rng)}; };

    for (int i = 0; i < 2000; ++i) {
        const double t_coh = 1e-4 + d(rng) * 3;
        std::vector<HopTiming> msgs(1 + i % 6);
        for (auto& h : msgs) {
            h = hop();
        }

        // sum >= max for non-negative terms
        const auto par = check_parallel(msgs, msgs[0].t_decrypt, t_coh);
        std::vector<HopTiming> rounds = msgs;
        for (auto& r : rounds) {
            r.t_decrypt = msgs[0].t_decrypt;
        }
        const auto seq = check_sequential(rounds, t_coh);
        CHECK(seq.slack <= par.slack);

        // increasing a component never makes an infeasible case feasible
        const auto before = check_single_hop(msgs[0], t_coh);
        HopTiming worse = msgs[0];
        worse.t_comm += d(rng);
        CHECK((before.feasible || !check_single_hop(worse, t_coh).feasible));
        // increasing coherence never makes a feasible case infeasible
        CHECK((!before.feasible || check_single_hop(msgs[0], t_coh * 1.5).feasible));

        // inverse round trip
        const double need = min_required_coherence_parallel(msgs, msgs[0].t_decrypt);
        CHECK_FALSE(check_parallel(msgs, msgs[0].t_decrypt, need).feasible);
        CHECK(check_parallel(msgs, msgs[0].t_decrypt, need + 1e-9).feasible);
        const double need_seq = min_required_coherence_sequential(rounds);
        CHECK_FALSE(check_sequential(rounds, need_seq).feasible);
        CHECK(check_sequential(rounds, need_seq + 1e-9).feasible);
    }
}
