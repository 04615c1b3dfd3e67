#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "qrnet/adversary.hpp"
#include "qrnet/engine.hpp"
#include "qrnet/kms.hpp"
#include "qrnet/report.hpp"
#include "qrnet/scenario_io.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

qrnet::ScenarioConfig parse_or_throw(const std::string& text) {
    auto parsed = qrnet::parse_scenario_text(text);
    if (!parsed.ok()) {
        throw qrnet::InputError(json{{"violations", qrnet::to_json(parsed.violations)}}.dump());
    }
    return std::move(*parsed.config);
}

json trial_json(std::size_t i, const qrnet::engine::TrialOutcome& t) {
    return {{"trial_index", i},
            {"success", t.success},
            {"failure_reason", t.failure_reason ? json(std::string(to_string(*t.failure_reason))) : json(nullptr)},
            {"slots_used", t.slots_used},
            {"t_dist_s", t.t_dist ? json(*t.t_dist) : json(nullptr)},
            {"f_end", t.f_end ? json(t.f_end->value()) : json(nullptr)}};
}

std::string validate(const std::string& text) {
    return json(qrnet::to_json(qrnet::parse_scenario_text(text).violations)).dump();
}

std::string check(const std::string& text) {
    const auto config = parse_or_throw(text);
    json j = qrnet::report::to_json(qrnet::engine::analyze(config));
    j["protocol"] = std::string(to_string(config.protocol));
    j["required_coherence"] = qrnet::engine::required_coherence(config);
    return j.dump();
}

std::string simulate(const std::string& text, std::optional<std::int64_t> trials,
                     std::optional<std::uint64_t> seed) {
    const auto config = parse_or_throw(text);
    qrnet::engine::MonteCarloRun run;
    {
        py::gil_scoped_release release;
        run = qrnet::engine::run_monte_carlo(config, trials.value_or(config.n_trials), seed.value_or(config.seed));
    }
    json rows = json::array();
    for (std::size_t i = 0; i < run.trials.size(); ++i) {
        rows.push_back(trial_json(i, run.trials[i]));
    }
    return json{{"summary", qrnet::report::to_json(run.summary)}, {"trials", rows}}.dump();
}

std::string sweep(const std::string& text, const std::string& param, const std::vector<double>& values,
                  std::optional<std::int64_t> trials, std::optional<std::uint64_t> seed) {
    const auto config = parse_or_throw(text);
    std::vector<qrnet::engine::SweepRow> rows;
    {
        py::gil_scoped_release release;
        rows = qrnet::engine::sweep(config, param, values, trials.value_or(config.n_trials),
                                    seed.value_or(config.seed));
    }
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"parameter", param}, {"value", r.value}, {"summary", qrnet::report::to_json(r.summary)}});
    }
    return out.dump();
}

std::string detect(const std::vector<double>& baseline, const std::vector<double>& observed, double threshold) {
    return qrnet::report::to_json(qrnet::adversary::detect(baseline, observed, threshold)).dump();
}

qrnet::AdversaryConfig attack(double t_eve, double t_pqc, double t_coh_eve) {
    return {t_eve, t_pqc, t_coh_eve, {}};
}

py::tuple feasibility(const qrnet::timing::FeasibilityResult& r) {
    return py::make_tuple(r.feasible, r.slack);
}

}  // namespace

PYBIND11_MODULE(_qrnet, m) {
    m.doc() = "Native core of the qrnet package";

    py::register_exception<qrnet::InputError>(m, "InputError", PyExc_ValueError);

    m.def("validate", &validate, py::arg("scenario_json"));
    m.def("check", &check, py::arg("scenario_json"));
    m.def("simulate", &simulate, py::arg("scenario_json"), py::arg("trials") = py::none(),
          py::arg("seed") = py::none());
    m.def("sweep", &sweep, py::arg("scenario_json"), py::arg("param"), py::arg("values"),
          py::arg("trials") = py::none(), py::arg("seed") = py::none());

    m.def(
        "check_single_hop",
        [](double enc, double comm, double dec, double t_coh) {
            return feasibility(qrnet::timing::check_single_hop({enc, comm, dec}, t_coh));
        },
        py::arg("t_encrypt"), py::arg("t_comm"), py::arg("t_decrypt"), py::arg("t_coh"));

    m.def(
        "decay", [](double f0, double wait, double t_coh) {
            return qrnet::fidelity::decay(qrnet::Fidelity(f0), wait, t_coh).value();
        },
        py::arg("f0"), py::arg("wait"), py::arg("t_coh"));
    m.def(
        "swap", [](double f1, double f2) {
            return qrnet::fidelity::swap(qrnet::Fidelity(f1), qrnet::Fidelity(f2)).value();
        },
        py::arg("f1"), py::arg("f2"));
    m.def(
        "chain_fidelity",
        [](const std::vector<double>& links) {
            std::vector<qrnet::Fidelity> fs(links.begin(), links.end());
            return qrnet::fidelity::chain_fidelity(fs).value();
        },
        py::arg("links"));

    m.def(
        "attack_outcome",
        [](double t_eve, double t_pqc, double t_coh_eve) {
            return std::string(to_string(qrnet::adversary::attack_outcome(attack(t_eve, t_pqc, t_coh_eve))));
        },
        py::arg("t_eve"), py::arg("t_pqc"), py::arg("t_coh_eve"));
    m.def(
        "intercepted_fidelity",
        [](double f, double t_eve, double t_pqc, double t_coh_eve) {
            return qrnet::adversary::intercepted_fidelity(qrnet::Fidelity(f), attack(t_eve, t_pqc, t_coh_eve)).value();
        },
        py::arg("f"), py::arg("t_eve"), py::arg("t_pqc"), py::arg("t_coh_eve"));
    m.def(
        "qber_of", [](double f) { return qrnet::adversary::qber_of(qrnet::Fidelity(f)); }, py::arg("f"));
    m.def("detect", &detect, py::arg("baseline"), py::arg("observed"), py::arg("threshold_sigma") = 3.0);

    m.def("full_mesh_handshakes", &qrnet::kms::full_mesh_handshakes, py::arg("n"));
    m.def("hierarchical_handshakes", &qrnet::kms::hierarchical_handshakes, py::arg("n"), py::arg("cluster_size"));
    m.def("rekey_cycle_time",
          py::overload_cast<std::int64_t, qrnet::Seconds, qrnet::Seconds, std::int64_t>(
              &qrnet::kms::rekey_cycle_time),
          py::arg("handshakes"), py::arg("per_handshake_time"), py::arg("t_auth") = 0.0,
          py::arg("parallelism") = 1);

    m.def(
        "effective_security",
        [](int bits, const std::string& family) {
            const auto f = qrnet::parse_security_family(family);
            if (!f) {
                throw qrnet::InputError("unknown security family '" + family + "'");
            }
            return qrnet::effective_security(bits, *f);
        },
        py::arg("claimed_bits"), py::arg("family"));
}
