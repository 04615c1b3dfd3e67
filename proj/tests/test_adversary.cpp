#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qrnet/adversary.hpp"
#include "support/scenarios.hpp"

using namespace qrnet;
using namespace qrnet::adversary;

namespace {

AdversaryConfig attack(double t_eve, double t_pqc, double t_coh_eve) {
    return {t_eve, t_pqc, t_coh_eve, {"A", "B"}};
}

}  // namespace

TEST_CASE("attack outcome examples") {
    CHECK(attack_outcome(attack(3, 4, 10)) == AttackOutcome::undetectable_success);
    CHECK(attack_outcome(attack(6, 5, 10)) == AttackOutcome::decoheres);
    CHECK(attack_outcome(attack(4, 6, 10)) == AttackOutcome::decoheres);
    CHECK(attack_outcome(attack(0, 0, 1e-9)) == AttackOutcome::undetectable_success);
    CHECK(to_string(AttackOutcome::decoheres) == "decoheres");
}

TEST_CASE("attack outcome is monotone") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 2000; ++i) {
        const auto a = attack(u(rng), u(rng), u(rng) + 1e-3);
        const double bump = u(rng);
        auto later = a;
        later.t_eve += bump;
        auto slower = a;
        slower.t_pqc += bump;
        auto longer = a;
        longer.t_coh_eve += bump;
        if (attack_outcome(a) == AttackOutcome::decoheres) {
            CHECK(attack_outcome(later) == AttackOutcome::decoheres);
            CHECK(attack_outcome(slower) == AttackOutcome::decoheres);
        } else {
            CHECK(attack_outcome(longer) == AttackOutcome::undetectable_success);
        }
    }
}

TEST_CASE("intercepted fidelity") {
    CHECK(intercepted_fidelity(Fidelity(0.9), attack(0, 0, 1)).value() == 0.9);
    CHECK(intercepted_fidelity(Fidelity(0.25), attack(1, 2, 1)).value() == 0.25);
    CHECK(intercepted_fidelity(Fidelity(1.0), attack(0.5, 0.5, 1)).value() ==
          doctest::Approx(0.5259095808785818).epsilon(1e-14));
}

TEST_CASE("qber mapping") {
    CHECK(qber_of(Fidelity(1.0)) == 0.0);
    CHECK(qber_of(Fidelity(0.25)) == 0.5);
    CHECK(qber_of(Fidelity(0.85)) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK_THROWS_AS(qber_of(Fidelity(1.2)), InputError);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> f(0.25, 1.0);
    std::uniform_real_distribution<double> t(0.0, 5.0);
    for (int i = 0; i < 5000; ++i) {
        const double a = f(rng);
        const double b = f(rng);
        if (a < b) {
            CHECK(qber_of(Fidelity(a)) > qber_of(Fidelity(b)));
        }
        const auto atk = attack(t(rng), t(rng), t(rng) + 1e-6);
        CHECK(qber_of(intercepted_fidelity(Fidelity(a), atk)) >= qber_of(Fidelity(a)));
    }
}

TEST_CASE("detector") {
    SUBCASE("same samples give z = 0") {
        const std::vector<double> s{0.01, 0.03, 0.02, 0.05};
        const auto r = detect(s, s, 3.0);
        CHECK(r.z_score == 0.0);
        CHECK_FALSE(r.flagged);
    }
    SUBCASE("zero-variance baseline") {
        const std::vector<double> zero(10, 0.0);
        const std::vector<double> high(10, 0.2);
        CHECK(detect(zero, high, 3.0).flagged);
        CHECK(std::isinf(detect(zero, high, 3.0).z_score));
        CHECK_FALSE(detect(high, zero, 3.0).flagged);
        CHECK(detect(zero, zero, 3.0).z_score == 0.0);
    }
    SUBCASE("z-score by hand") {
        // baseline mean 2, sample sd 1; observed mean 3 over 4 samples.
        const std::vector<double> base{1, 2, 3};
        const std::vector<double> obs{3, 3, 3, 3};
        const auto r = detect(base, obs, 1.5);
        CHECK(r.z_score == doctest::Approx(2.0));
        CHECK(r.flagged);
        CHECK(r.baseline_mean_qber == 2.0);
        CHECK(r.observed_mean_qber == 3.0);
    }
    SUBCASE("input errors") {
        const std::vector<double> one{0.1};
        const std::vector<double> two{0.1, 0.2};
        CHECK_THROWS_AS(detect(one, two, 3.0), InputError);
        CHECK_THROWS_AS(detect(two, one, 3.0), InputError);
        CHECK_THROWS_AS(detect(two, two, 0.0), InputError);
    }
}

TEST_CASE("qber sampling through the engine") {
    testing::ChainSpec spec;
    spec.protocol = Protocol::single_hop;
    spec.base_fidelity = 0.95;
    spec.p_success = 0.5;
    const auto config = make_chain(spec);

    const auto base = sample_qber(config, nullptr, 200, 1000, 7);
    REQUIRE(base.size() == 200);
    CHECK(base == sample_qber(config, nullptr, 200, 1000, 7));
    double mean = 0.0;
    for (const auto& s : base) {
        CHECK(s.fidelity == 0.95);
        mean += s.qber / 200.0;
    }
    // Binomial mean 2(1-0.95)/3 with sd sqrt(q(1-q)/1000)/sqrt(200).
    const double q = 2 * 0.05 / 3;
    CHECK(std::abs(mean - q) < 3 * std::sqrt(q * (1 - q) / 1000.0 / 200.0));

    const auto strong = attack(1.0, 1.0, 1.0);
    const auto hit = sample_qber(config, &strong, 200, 1000, 8);
    for (const auto& s : hit) {
        CHECK(s.fidelity < 0.95);
    }
    std::vector<double> bq, hq;
    for (const auto& s : base) bq.push_back(s.qber);
    for (const auto& s : hit) hq.push_back(s.qber);
    CHECK(detect(bq, hq, 3.0).flagged);

    auto wrong = strong;
    wrong.intercept_link = {"A", "Z"};
    CHECK_THROWS_AS(sample_qber(config, &wrong, 5, 10, 0), InputError);
    CHECK_THROWS_AS(sample_qber(config, nullptr, 5, 0, 0), InputError);
}
