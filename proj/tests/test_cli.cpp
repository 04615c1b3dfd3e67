#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "qrnet/cli.hpp"
#include "qrnet/scenario_io.hpp"
#include "support/scenarios.hpp"

using namespace qrnet;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code = -1;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "qrnet");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("qrnet_cli_test_" + std::to_string(::getpid()) + "_" +
                                             std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

    fs::path write(const std::string& name, const std::string& text) const {
        const auto p = path_ / name;
        std::ofstream(p) << text;
        return p;
    }
    fs::path write(const std::string& name, const ScenarioConfig& config) const {
        return write(name, to_json(config).dump(2));
    }

private:
    fs::path path_;
};

}  // namespace

TEST_CASE("check exit codes") {
    TempDir dir;
    testing::ChainSpec spec;
    spec.protocol = Protocol::single_hop;
    spec.t_encrypt = 1e-3;
    spec.t_comm = 2e-3;
    spec.t_decrypt = 1e-3;

    spec.t_coh_end = 5e-3;
    auto ok = invoke({"check", dir.write("ok.json", make_chain(spec)).string()});
    CHECK(ok.code == 0);
    const auto j = nlohmann::json::parse(ok.out);
    CHECK(j.at("slack").get<double>() > 0.0);
    CHECK(j.at("feasible").get<bool>());

    spec.t_coh_end = 4e-3;
    CHECK(invoke({"check", dir.write("edge.json", make_chain(spec)).string()}).code == 1);

    auto raw = to_json(make_chain(spec));
    raw["colour"] = "blue";
    const auto bad = invoke({"check", dir.write("bad.json", raw.dump()).string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("colour") != std::string::npos);

    CHECK(invoke({"check", (dir.path() / "missing.json").string()}).code == 2);
    CHECK(invoke({"check", dir.write("junk.json", "{not json").string()}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("simulate is reproducible") {
    TempDir dir;
    testing::ChainSpec spec;
    spec.repeaters = 2;
    spec.p_success = 0.4;
    spec.t_comm = 1e-3;
    spec.t_coh_repeater = 3e-3;
    spec.t_coh_end = 4e-3;
    const auto scenario = dir.write("s.json", make_chain(spec)).string();
    const auto a = (dir.path() / "a").string();
    const auto b = (dir.path() / "b").string();

    CHECK(invoke({"--seed", "11", "--out", a, "simulate", scenario, "--trials", "500"}).code == 0);
    CHECK(invoke({"simulate", scenario, "--trials", "500", "--seed", "11", "--out", b}).code == 0);
    CHECK(slurp(fs::path(a) / "trials.csv") == slurp(fs::path(b) / "trials.csv"));
    CHECK(slurp(fs::path(a) / "summary.json") == slurp(fs::path(b) / "summary.json"));
    CHECK(line_count(slurp(fs::path(a) / "trials.csv")) == 501);

    const auto one = (dir.path() / "one").string();
    CHECK(invoke({"simulate", scenario, "--trials", "1", "--out", one}).code == 0);
    const auto csv = slurp(fs::path(one) / "trials.csv");
    CHECK(line_count(csv) == 2);
    CHECK(csv.rfind("trial_index,success,failure_reason,slots_used,t_dist_s,f_end\n", 0) == 0);

    SUBCASE("single-value sweep matches simulate") {
        const auto sw = (dir.path() / "sw").string();
        CHECK(invoke({"sweep", scenario, "--param", "nodes.B.memory.t_coh", "--values", "0.004", "--trials", "500",
                      "--seed", "11", "--out", sw})
                  .code == 0);
        const auto rows = nlohmann::json::parse(slurp(fs::path(sw) / "sweep.json"));
        const auto summary = nlohmann::json::parse(slurp(fs::path(a) / "summary.json"));
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].at("summary") == summary);
        CHECK(line_count(slurp(fs::path(sw) / "sweep.csv")) == 2);
    }
    SUBCASE("bad sweep path") {
        CHECK(invoke({"sweep", scenario, "--param", "nodes.Q.memory.t_coh", "--values", "1"}).code == 2);
    }
}

TEST_CASE("deterministic simulate agrees with check") {
    TempDir dir;
    testing::ChainSpec spec;
    spec.repeaters = 1;
    spec.t_encrypt = 1e-3;
    spec.t_comm = 2e-3;
    spec.t_decrypt = 1e-3;
    for (double t_coh : {3e-3, 10e-3}) {
        spec.t_coh_end = t_coh;
        const auto scenario = dir.write("d.json", make_chain(spec)).string();
        const int verdict = invoke({"check", scenario}).code;
        const auto sim = invoke({"simulate", scenario, "--trials", "20", "--out", dir.path().string()});
        REQUIRE(sim.code == 0);
        const double rate = nlohmann::json::parse(sim.out).at("success_rate").get<double>();
        CHECK(rate == (verdict == 0 ? 1.0 : 0.0));
    }
}

TEST_CASE("kms command") {
    TempDir dir;
    const auto r = invoke({"kms", "--n", "4", "--mode", "full_mesh"});
    CHECK(r.code == 0);
    CHECK(r.out == "n,mode,cluster_size,handshakes,t_key_s\n4,full_mesh,,6,0.006\n");

    const auto both = invoke({"--out", dir.path().string(), "kms", "--n", "4,1000", "--cluster-size", "4"});
    CHECK(both.code == 0);
    CHECK(line_count(slurp(dir.path() / "kms.csv")) == 5);
    CHECK(both.out.find("1000,hierarchical,4,") != std::string::npos);

    const auto cfg = dir.write("k.json", R"({"n_nodes": 4, "per_handshake_time": 0.002, "parallelism": 4})");
    CHECK(invoke({"kms", "--config", cfg.string(), "--mode", "full_mesh"}).out.find("4,full_mesh,,6,0.004") !=
          std::string::npos);
    CHECK(invoke({"kms", "--config", dir.write("k2.json", R"({"n_nodes": 4, "nodes": 3})").string()}).code == 2);
    CHECK(invoke({"kms", "--n", "1"}).code == 2);
    CHECK(invoke({"kms", "--n", "5", "--mode", "hierarchical"}).code == 2);
}

TEST_CASE("adversary command") {
    TempDir dir;
    testing::ChainSpec spec;
    spec.protocol = Protocol::single_hop;
    spec.base_fidelity = 0.95;
    auto config = make_chain(spec);
    CHECK(invoke({"adversary", dir.write("none.json", config).string()}).code == 2);

    config.adversary = AdversaryConfig{1.0, 1.0, 1.0, {"A", "B"}};
    const auto out = (dir.path() / "adv").string();
    const auto hit = invoke({"adversary", dir.write("hit.json", config).string(), "--samples", "100",
                             "--baseline-samples", "100", "--out", out});
    CHECK(hit.code == 1);
    CHECK(nlohmann::json::parse(hit.out).at("flagged").get<bool>());
    CHECK(fs::exists(fs::path(out) / "samples.csv"));

    config.adversary = AdversaryConfig{0.0, 0.0, 1.0, {"A", "B"}};
    const auto null = invoke({"adversary", dir.write("null.json", config).string(), "--samples", "100",
                              "--baseline-samples", "100"});
    CHECK(null.code == 0);
}

TEST_CASE("profiles command") {
    const auto r = invoke({"profiles"});
    CHECK(r.code == 0);
    CHECK(r.out.find("kyber512") != std::string::npos);
    const auto j = invoke({"--format", "json", "profiles"});
    CHECK(nlohmann::json::parse(j.out).size() == 5);
}
