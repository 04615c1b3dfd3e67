#include "qrnet/cli.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qrnet/adversary.hpp"
#include "qrnet/engine.hpp"
#include "qrnet/kms.hpp"
#include "qrnet/report.hpp"
#include "qrnet/scenario_io.hpp"

namespace qrnet::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Signals that the offending input was already reported on `err`.
struct Reported {};

CommandResult guarded(std::ostream& err, const std::function<CommandResult()>& body) {
    try {
        return body();
    } catch (const Reported&) {
        return {kInputError, {}};
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return {kInputError, {}};
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return {kInputError, {}};
    }
}

ScenarioConfig load(const fs::path& path, std::ostream& err) {
    auto parsed = load_scenario_file(path);
    if (!parsed.ok()) {
        err << json{{"violations", to_json(parsed.violations)}}.dump(2) << '\n';
        throw Reported{};
    }
    return std::move(*parsed.config);
}

fs::path prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw InputError("cannot create output directory '" + dir.string() + "'");
    }
    return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& content) {
    const fs::path path = prepare_dir(dir) / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw InputError("cannot write '" + path.string() + "'");
    }
    os << content;
    os.close();
    if (!os) {
        throw InputError("cannot write '" + path.string() + "'");
    }
    return path;
}

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string row;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) {
            row += ',';
        }
        row += c;
        first = false;
    }
    return row + '\n';
}

template <typename T>
void read_optional(const json& j, const char* key, T& dst) {
    if (j.contains(key)) {
        dst = j.at(key).get<T>();
    }
}

kms::KmsConfig load_kms_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read kms config '" + path.string() + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed kms config: ") + e.what());
    }
    if (!j.is_object()) {
        throw InputError("kms config must be a JSON object");
    }
    static const std::set<std::string> known{"n_nodes", "cluster_size", "per_handshake_time", "t_auth",
                                             "parallelism"};
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) {
            throw InputError("kms config: unknown key '" + key + "'");
        }
    }
    kms::KmsConfig c;
    try {
        read_optional(j, "n_nodes", c.n_nodes);
        if (j.contains("cluster_size")) {
            c.cluster_size = j.at("cluster_size").get<std::int64_t>();
        }
        read_optional(j, "per_handshake_time", c.per_handshake_time);
        read_optional(j, "t_auth", c.t_auth);
        read_optional(j, "parallelism", c.parallelism);
    } catch (const json::exception& e) {
        throw InputError(std::string("kms config: ") + e.what());
    }
    return c;
}

}  // namespace

CommandResult cmd_check(const CheckOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScenarioConfig config = load(opts.scenario, err);
        const auto result = engine::analyze(config);
        const auto required = engine::required_coherence(config);
        if (opts.format == Format::csv) {
            out << "protocol,feasible,slack,binding_index,required_coherence\n"
                << csv_row({std::string(to_string(config.protocol)), result.feasible ? "true" : "false",
                            report::format_number(result.slack),
                            result.binding_index ? std::to_string(*result.binding_index) : "",
                            report::format_number(required)});
        } else {
            json j = report::to_json(result);
            j["protocol"] = std::string(to_string(config.protocol));
            j["required_coherence"] = required;
            out << j.dump(2) << '\n';
        }
        return CommandResult{result.feasible ? kOk : kNegativeVerdict, {}};
    });
}

CommandResult cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScenarioConfig config = load(opts.scenario, err);
        const auto trials = opts.trials.value_or(config.n_trials);
        const auto seed = opts.seed.value_or(config.seed);
        const auto run = engine::run_monte_carlo(config, trials, seed);

        std::ostringstream csv;
        report::write_trials_csv(csv, run.trials);
        const std::string summary = report::to_json(run.summary).dump(2) + "\n";

        CommandResult result;
        result.artifacts.push_back(write_file(opts.out, "trials.csv", csv.str()));
        result.artifacts.push_back(write_file(opts.out, "summary.json", summary));
        out << summary;
        return result;
    });
}

CommandResult cmd_adversary(const AdversaryOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScenarioConfig config = load(opts.scenario, err);
        if (!config.adversary) {
            throw InputError("scenario has no adversary section");
        }
        const auto& attack = *config.adversary;
        const auto seed = opts.seed.value_or(config.seed);
        const auto baseline =
            adversary::sample_qber(config, nullptr, opts.baseline_samples, opts.shots, engine::trial_seed(seed, 0));
        const auto observed =
            adversary::sample_qber(config, &attack, opts.samples, opts.shots, engine::trial_seed(seed, 1));

        std::vector<double> base_q;
        std::vector<double> obs_q;
        for (const auto& s : baseline) {
            base_q.push_back(s.qber);
        }
        for (const auto& s : observed) {
            obs_q.push_back(s.qber);
        }
        const auto detection = adversary::detect(base_q, obs_q, opts.threshold_sigma);

        json j = report::to_json(detection);
        j["attack_outcome"] = std::string(adversary::to_string(adversary::attack_outcome(attack)));
        j["delta_t"] = attack.total_delay();
        j["t_coh_eve"] = attack.t_coh_eve;
        j["baseline_samples"] = baseline.size();
        j["observed_samples"] = observed.size();
        j["shots"] = opts.shots;
        const std::string doc = j.dump(2) + "\n";
        out << doc;

        CommandResult result{detection.flagged ? kNegativeVerdict : kOk, {}};
        if (opts.out) {
            std::ostringstream csv;
            csv << "sample_index,side,fidelity,qber\n";
            for (std::size_t i = 0; i < baseline.size(); ++i) {
                csv << i << ",baseline," << report::format_number(baseline[i].fidelity) << ','
                    << report::format_number(baseline[i].qber) << '\n';
            }
            for (std::size_t i = 0; i < observed.size(); ++i) {
                csv << i << ",observed," << report::format_number(observed[i].fidelity) << ','
                    << report::format_number(observed[i].qber) << '\n';
            }
            result.artifacts.push_back(write_file(*opts.out, "detection.json", doc));
            result.artifacts.push_back(write_file(*opts.out, "samples.csv", csv.str()));
        }
        return result;
    });
}

CommandResult cmd_kms(const KmsOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        kms::KmsConfig base = opts.config ? load_kms_config(*opts.config) : kms::KmsConfig{};
        if (opts.cluster_size) {
            base.cluster_size = opts.cluster_size;
        }
        if (opts.per_handshake_time) {
            base.per_handshake_time = *opts.per_handshake_time;
        }
        if (opts.t_auth) {
            base.t_auth = *opts.t_auth;
        }
        if (opts.parallelism) {
            base.parallelism = *opts.parallelism;
        }
        std::vector<std::int64_t> ns = opts.n;
        if (ns.empty()) {
            if (!opts.config) {
                throw InputError("kms needs --n or a config with n_nodes");
            }
            ns.push_back(base.n_nodes);
        }

        std::vector<kms::Mode> modes;
        if (opts.mode == "full_mesh") {
            modes = {kms::Mode::full_mesh};
        } else if (opts.mode == "hierarchical") {
            modes = {kms::Mode::hierarchical};
        } else if (opts.mode == "both") {
            modes = {kms::Mode::full_mesh};
            if (base.cluster_size) {
                modes.push_back(kms::Mode::hierarchical);
            }
        } else {
            throw InputError("unknown kms mode '" + opts.mode + "'");
        }

        std::ostringstream csv;
        json rows = json::array();
        csv << "n,mode,cluster_size,handshakes,t_key_s\n";
        for (auto n : ns) {
            kms::KmsConfig c = base;
            c.n_nodes = n;
            for (auto mode : modes) {
                const auto h = kms::handshakes(c, mode);
                const auto t = kms::rekey_cycle_time(c, mode);
                const bool hier = mode == kms::Mode::hierarchical;
                const std::string mode_name = hier ? "hierarchical" : "full_mesh";
                csv << csv_row({std::to_string(n), mode_name, hier ? std::to_string(*c.cluster_size) : "",
                                std::to_string(h), report::format_number(t)});
                rows.push_back({{"n", n},
                                {"mode", mode_name},
                                {"cluster_size", hier ? json(*c.cluster_size) : json(nullptr)},
                                {"handshakes", h},
                                {"t_key_s", t}});
            }
        }
        out << (opts.format == Format::csv ? csv.str() : rows.dump(2) + "\n");
        CommandResult result;
        if (opts.out) {
            result.artifacts.push_back(write_file(*opts.out, "kms.csv", csv.str()));
        }
        return result;
    });
}

CommandResult cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScenarioConfig config = load(opts.scenario, err);
        if (opts.values.empty()) {
            throw InputError("sweep needs at least one value");
        }
        const auto rows = engine::sweep(config, opts.param, opts.values, opts.trials.value_or(config.n_trials),
                                        opts.seed.value_or(config.seed));
        std::ostringstream csv;
        report::write_sweep_csv(csv, rows);
        json j = json::array();
        for (const auto& r : rows) {
            j.push_back({{"parameter", opts.param}, {"value", r.value}, {"summary", report::to_json(r.summary)}});
        }
        const std::string doc = j.dump(2) + "\n";
        out << (opts.format == Format::csv ? csv.str() : doc);
        CommandResult result;
        if (opts.out) {
            result.artifacts.push_back(write_file(*opts.out, "sweep.csv", csv.str()));
            result.artifacts.push_back(write_file(*opts.out, "sweep.json", doc));
        }
        return result;
    });
}

CommandResult cmd_profiles(const ProfilesOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const CryptoRegistry registry = opts.scenario ? load(*opts.scenario, err).profiles : CryptoRegistry::defaults();
        if (opts.format == Format::json) {
            json arr = json::array();
            for (const auto& p : registry.profiles()) {
                arr.push_back(to_json(p));
            }
            out << arr.dump(2) << '\n';
        } else {
            out << "name,kind,t_encrypt,t_decrypt,public_key_bytes,ciphertext_or_sig_bytes,"
                   "claimed_security_bits,illustrative\n";
            for (const auto& p : registry.profiles()) {
                out << csv_row({p.name, std::string(to_string(p.kind)), report::format_number(p.t_encrypt),
                                report::format_number(p.t_decrypt), std::to_string(p.public_key_bytes),
                                std::to_string(p.ciphertext_or_sig_bytes), std::to_string(p.claimed_security_bits),
                                p.illustrative ? "true" : "false"});
            }
        }
        return CommandResult{};
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"qrnet: timing analysis and simulation of PQC-protected quantum networks"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string format_name;
    app.add_option("--seed", seed, "Master seed (overrides the scenario's)");
    app.add_option("--out", out_dir, "Output directory for written artifacts");
    app.add_option("--format", format_name, "Stdout format")->check(CLI::IsMember({"csv", "json"}));

    auto format_or = [&](Format fallback) {
        if (format_name.empty()) {
            return fallback;
        }
        return format_name == "csv" ? Format::csv : Format::json;
    };
    auto out_path = [&]() -> std::optional<fs::path> {
        if (out_dir.empty()) {
            return std::nullopt;
        }
        return fs::path(out_dir);
    };

    std::string scenario;
    std::optional<std::int64_t> trials;

    auto* check = app.add_subcommand("check", "Evaluate the timing inequality for a scenario");
    check->add_option("scenario", scenario, "Scenario JSON file")->required();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run; writes trials.csv and summary.json");
    simulate->add_option("scenario", scenario, "Scenario JSON file")->required();
    simulate->add_option("--trials", trials, "Number of trials (overrides n_trials)");

    AdversaryOptions adv;
    auto* adversary = app.add_subcommand("adversary", "QBER detection test for the scenario's adversary");
    adversary->add_option("scenario", scenario, "Scenario JSON file")->required();
    adversary->add_option("--samples", adv.samples, "Observed QBER samples")->capture_default_str();
    adversary->add_option("--baseline-samples", adv.baseline_samples, "Baseline QBER samples")
        ->capture_default_str();
    adversary->add_option("--shots", adv.shots, "Pairs measured per QBER sample")->capture_default_str();
    adversary->add_option("--threshold", adv.threshold_sigma, "Detection threshold in sigma")
        ->capture_default_str();

    KmsOptions kms_opts;
    auto* kms_cmd = app.add_subcommand("kms", "Handshake counts and re-key cycle time");
    kms_cmd->add_option("--config", kms_opts.config, "KmsConfig JSON file");
    kms_cmd->add_option("--n", kms_opts.n, "Node counts (comma separated)")->delimiter(',');
    kms_cmd->add_option("--mode", kms_opts.mode, "full_mesh, hierarchical or both")
        ->check(CLI::IsMember({"full_mesh", "hierarchical", "both"}))
        ->capture_default_str();
    kms_cmd->add_option("--cluster-size", kms_opts.cluster_size, "Hierarchical cluster size");
    kms_cmd->add_option("--handshake-time", kms_opts.per_handshake_time, "Seconds per handshake");
    kms_cmd->add_option("--t-auth", kms_opts.t_auth, "Authentication seconds per handshake");
    kms_cmd->add_option("--parallelism", kms_opts.parallelism, "Concurrent handshake lanes");

    SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo over a list of parameter values");
    sweep->add_option("scenario", scenario, "Scenario JSON file")->required();
    sweep->add_option("--param", sweep_opts.param, "Parameter path, e.g. nodes.*.memory.t_coh")->required();
    sweep->add_option("--values", sweep_opts.values, "Values (comma separated)")->delimiter(',')->required();
    sweep->add_option("--trials", trials, "Trials per value");

    auto* profiles = app.add_subcommand("profiles", "List the crypto-profile registry");
    profiles->add_option("scenario", scenario, "Optional scenario whose registry to list");

    for (auto* sub : {check, simulate, adversary, kms_cmd, sweep, profiles}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    try {
        CommandResult result;
        if (*check) {
            result = cmd_check({scenario, format_or(Format::json)}, out, err);
        } else if (*simulate) {
            result = cmd_simulate({scenario, trials, seed, out_path().value_or(".")}, out, err);
        } else if (*adversary) {
            adv.scenario = scenario;
            adv.seed = seed;
            adv.out = out_path();
            result = cmd_adversary(adv, out, err);
        } else if (*kms_cmd) {
            kms_opts.out = out_path();
            kms_opts.format = format_or(Format::csv);
            result = cmd_kms(kms_opts, out, err);
        } else if (*sweep) {
            sweep_opts.scenario = scenario;
            sweep_opts.trials = trials;
            sweep_opts.seed = seed;
            sweep_opts.out = out_path();
            sweep_opts.format = format_or(Format::csv);
            result = cmd_sweep(sweep_opts, out, err);
        } else if (*profiles) {
            ProfilesOptions p;
            if (!scenario.empty()) {
                p.scenario = scenario;
            }
            p.format = format_or(Format::csv);
            result = cmd_profiles(p, out, err);
        }
        return result.exit_code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace qrnet::cli
