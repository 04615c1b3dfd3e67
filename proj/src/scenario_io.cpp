#include "qrnet/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace qrnet {

using nlohmann::json;

namespace {

class Reader {
public:
    explicit Reader(std::vector<Violation>& out) : out_(out) {}

    void fail(const std::string& path, const std::string& msg) { out_.push_back({path, msg}); }

    bool read(const json& v, const std::string& path, double& dst) {
        if (!v.is_number()) {
            fail(path, "expected a number");
            return false;
        }
        dst = v.get<double>();
        return true;
    }

    bool read(const json& v, const std::string& path, std::int64_t& dst) {
        if (!v.is_number_integer()) {
            fail(path, "expected an integer");
            return false;
        }
        if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
            fail(path, "integer out of range");
            return false;
        }
        dst = v.get<std::int64_t>();
        return true;
    }

    bool read(const json& v, const std::string& path, int& dst) {
        std::int64_t wide = 0;
        if (!read(v, path, wide)) {
            return false;
        }
        if (wide < INT32_MIN || wide > INT32_MAX) {
            fail(path, "integer out of range");
            return false;
        }
        dst = static_cast<int>(wide);
        return true;
    }

    bool read(const json& v, const std::string& path, std::uint64_t& dst) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            fail(path, "expected a non-negative integer");
            return false;
        }
        dst = v.get<std::uint64_t>();
        return true;
    }

    bool read(const json& v, const std::string& path, bool& dst) {
        if (!v.is_boolean()) {
            fail(path, "expected a boolean");
            return false;
        }
        dst = v.get<bool>();
        return true;
    }

    bool read(const json& v, const std::string& path, std::string& dst) {
        if (!v.is_string()) {
            fail(path, "expected a string");
            return false;
        }
        dst = v.get<std::string>();
        return true;
    }

    bool read(const json& v, const std::string& path, NodePair& dst) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string()) {
            fail(path, "expected a pair of node ids");
            return false;
        }
        dst = {v[0].get<std::string>(), v[1].get<std::string>()};
        return true;
    }

    template <typename Enum, typename Parse>
    bool read_enum(const json& v, const std::string& path, Enum& dst, Parse parse) {
        std::string s;
        if (!read(v, path, s)) {
            return false;
        }
        auto e = parse(s);
        if (!e) {
            fail(path, "unrecognised value '" + s + "'");
            return false;
        }
        dst = *e;
        return true;
    }

private:
    std::vector<Violation>& out_;
};

// Tracks which keys of one JSON object were consumed so leftovers can be
// reported as unknown.
class ObjectScope {
public:
    ObjectScope(Reader& r, const json& obj, std::string path)
        : r_(r), obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            r_.fail(path_.empty() ? "$" : path_, "expected an object");
            valid_ = false;
        }
    }

    ObjectScope(const ObjectScope&) = delete;
    ObjectScope& operator=(const ObjectScope&) = delete;

    ~ObjectScope() {
        if (!valid_) {
            return;
        }
        for (const auto& [key, _] : obj_.items()) {
            if (!seen_.contains(key)) {
                r_.fail(child(key), "unknown key");
            }
        }
    }

    bool valid() const { return valid_; }

    std::string child(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    const json* get(std::string_view key, bool required) {
        if (!valid_) {
            return nullptr;
        }
        seen_.insert(std::string(key));
        auto it = obj_.find(key);
        if (it == obj_.end()) {
            if (required) {
                r_.fail(child(key), "missing required key");
            }
            return nullptr;
        }
        return &*it;
    }

    template <typename T>
    void required(std::string_view key, T& dst) {
        if (const json* v = get(key, true)) {
            r_.read(*v, child(key), dst);
        }
    }

    template <typename T>
    void optional(std::string_view key, T& dst) {
        if (const json* v = get(key, false)) {
            r_.read(*v, child(key), dst);
        }
    }

    template <typename T>
    void optional(std::string_view key, std::optional<T>& dst) {
        if (const json* v = get(key, false)) {
            T tmp{};
            if (r_.read(*v, child(key), tmp)) {
                dst = std::move(tmp);
            }
        }
    }

    template <typename Enum, typename Parse>
    void required_enum(std::string_view key, Enum& dst, Parse parse) {
        if (const json* v = get(key, true)) {
            r_.read_enum(*v, child(key), dst, parse);
        }
    }

    template <typename Enum, typename Parse>
    void optional_enum(std::string_view key, Enum& dst, Parse parse) {
        if (const json* v = get(key, false)) {
            r_.read_enum(*v, child(key), dst, parse);
        }
    }

private:
    Reader& r_;
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
    bool valid_ = true;
};

template <typename Fn>
void for_each_element(Reader& r, const json* arr, const std::string& path, Fn fn) {
    if (!arr) {
        return;
    }
    if (!arr->is_array()) {
        r.fail(path, "expected an array");
        return;
    }
    for (std::size_t i = 0; i < arr->size(); ++i) {
        fn((*arr)[i], path + "[" + std::to_string(i) + "]");
    }
}

CryptoProfile read_profile(Reader& r, const json& j, const std::string& path) {
    CryptoProfile p;
    ObjectScope s(r, j, path);
    s.required("name", p.name);
    s.required("t_encrypt", p.t_encrypt);
    s.required("t_decrypt", p.t_decrypt);
    s.required("public_key_bytes", p.public_key_bytes);
    s.required("ciphertext_or_sig_bytes", p.ciphertext_or_sig_bytes);
    s.required("claimed_security_bits", p.claimed_security_bits);
    s.required_enum("kind", p.kind, parse_crypto_kind);
    s.optional("illustrative", p.illustrative);
    return p;
}

NodeSpec read_node(Reader& r, const json& j, const std::string& path) {
    NodeSpec n;
    ObjectScope s(r, j, path);
    s.required("id", n.id);
    s.required_enum("role", n.role, parse_node_role);
    s.required("crypto", n.crypto);
    if (const json* mem = s.get("memory", true)) {
        ObjectScope m(r, *mem, s.child("memory"));
        m.required("t_coh", n.memory.t_coh);
        m.optional_enum("tier", n.memory.tier, parse_memory_tier);
    }
    return n;
}

QuantumLinkSpec read_link(Reader& r, const json& j, const std::string& path) {
    QuantumLinkSpec l;
    ObjectScope s(r, j, path);
    s.required("endpoints", l.endpoints);
    s.optional("gen_rate", l.gen_rate);
    s.required("p_success", l.p_success);
    s.required("base_fidelity", l.base_fidelity);
    return l;
}

ClassicalChannelSpec read_channel(Reader& r, const json& j, const std::string& path) {
    ClassicalChannelSpec c;
    ObjectScope s(r, j, path);
    s.required("endpoints", c.endpoints);
    s.required("propagation_delay", c.propagation_delay);
    s.optional("processing_delay", c.processing_delay);
    return c;
}

AdversaryConfig read_adversary(Reader& r, const json& j, const std::string& path) {
    AdversaryConfig a;
    ObjectScope s(r, j, path);
    s.required("t_eve", a.t_eve);
    s.required("t_pqc", a.t_pqc);
    s.required("t_coh_eve", a.t_coh_eve);
    s.required("intercept_link", a.intercept_link);
    return a;
}

}  // namespace

ParsedScenario parse_scenario(const json& doc) {
    ParsedScenario result;
    ScenarioConfig cfg;
    Reader r(result.violations);
    {
        ObjectScope top(r, doc, "");
        for_each_element(r, top.get("crypto_profiles", false), "crypto_profiles",
                         [&](const json& j, const std::string& path) {
                             auto p = read_profile(r, j, path);
                             cfg.profiles.add_or_replace(std::move(p));
                         });
        // Duplicate names inside the file are an error; overriding a default is not.
        if (const json* arr = doc.is_object() && doc.contains("crypto_profiles") ? &doc["crypto_profiles"] : nullptr;
            arr && arr->is_array()) {
            std::set<std::string> names;
            for (std::size_t i = 0; i < arr->size(); ++i) {
                const auto& e = (*arr)[i];
                if (e.is_object() && e.contains("name") && e["name"].is_string() &&
                    !names.insert(e["name"].get<std::string>()).second) {
                    r.fail("crypto_profiles[" + std::to_string(i) + "].name",
                           "duplicate profile name '" + e["name"].get<std::string>() + "'");
                }
            }
        }
        for_each_element(r, top.get("nodes", true), "nodes",
                         [&](const json& j, const std::string& path) {
                             cfg.nodes.push_back(read_node(r, j, path));
                         });
        for_each_element(r, top.get("quantum_links", true), "quantum_links",
                         [&](const json& j, const std::string& path) {
                             cfg.quantum_links.push_back(read_link(r, j, path));
                         });
        for_each_element(r, top.get("classical_channels", true), "classical_channels",
                         [&](const json& j, const std::string& path) {
                             cfg.classical_channels.push_back(read_channel(r, j, path));
                         });
        top.required_enum("protocol", cfg.protocol, parse_protocol);
        top.optional("rounds_L", cfg.rounds_L);
        if (const json* adv = top.get("adversary", false); adv && !adv->is_null()) {
            cfg.adversary = read_adversary(r, *adv, "adversary");
        }
        top.optional("seed", cfg.seed);
        top.optional("n_trials", cfg.n_trials);
        top.required("slot_duration", cfg.slot_duration);
        top.optional("destination", cfg.destination);
        top.optional("distribution_window", cfg.distribution_window);
    }
    if (!result.violations.empty()) {
        return result;
    }
    result.violations = validate_scenario(cfg);
    if (result.violations.empty()) {
        result.config = std::move(cfg);
    }
    return result;
}

ParsedScenario parse_scenario_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        ParsedScenario bad;
        bad.violations.push_back({"$", std::string("malformed JSON: ") + e.what()});
        return bad;
    }
    return parse_scenario(doc);
}

ParsedScenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        ParsedScenario bad;
        bad.violations.push_back({"$", "cannot read scenario file '" + path.string() + "'"});
        return bad;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

json to_json(const CryptoProfile& p) {
    return json{{"name", p.name},
                {"t_encrypt", p.t_encrypt},
                {"t_decrypt", p.t_decrypt},
                {"public_key_bytes", p.public_key_bytes},
                {"ciphertext_or_sig_bytes", p.ciphertext_or_sig_bytes},
                {"claimed_security_bits", p.claimed_security_bits},
                {"kind", std::string(to_string(p.kind))},
                {"illustrative", p.illustrative}};
}

json to_json(const ScenarioConfig& c) {
    json j;
    j["crypto_profiles"] = json::array();
    for (const auto& p : c.profiles.profiles()) {
        j["crypto_profiles"].push_back(to_json(p));
    }
    j["nodes"] = json::array();
    for (const auto& n : c.nodes) {
        j["nodes"].push_back({{"id", n.id},
                              {"role", std::string(to_string(n.role))},
                              {"memory", {{"t_coh", n.memory.t_coh}, {"tier", std::string(to_string(n.memory.tier))}}},
                              {"crypto", n.crypto}});
    }
    j["quantum_links"] = json::array();
    for (const auto& l : c.quantum_links) {
        json lj{{"endpoints", l.endpoints}, {"p_success", l.p_success}, {"base_fidelity", l.base_fidelity}};
        if (l.gen_rate) {
            lj["gen_rate"] = *l.gen_rate;
        }
        j["quantum_links"].push_back(std::move(lj));
    }
    j["classical_channels"] = json::array();
    for (const auto& ch : c.classical_channels) {
        j["classical_channels"].push_back({{"endpoints", ch.endpoints},
                                           {"propagation_delay", ch.propagation_delay},
                                           {"processing_delay", ch.processing_delay}});
    }
    j["protocol"] = std::string(to_string(c.protocol));
    j["rounds_L"] = c.rounds_L;
    if (c.adversary) {
        j["adversary"] = {{"t_eve", c.adversary->t_eve},
                          {"t_pqc", c.adversary->t_pqc},
                          {"t_coh_eve", c.adversary->t_coh_eve},
                          {"intercept_link", c.adversary->intercept_link}};
    }
    j["seed"] = c.seed;
    j["n_trials"] = c.n_trials;
    j["slot_duration"] = c.slot_duration;
    if (c.destination) {
        j["destination"] = *c.destination;
    }
    if (c.distribution_window) {
        j["distribution_window"] = *c.distribution_window;
    }
    return j;
}

json to_json(const Violation& v) { return json{{"path", v.path}, {"message", v.message}}; }

json to_json(const std::vector<Violation>& vs) {
    json arr = json::array();
    for (const auto& v : vs) {
        arr.push_back(to_json(v));
    }
    return arr;
}

}  // namespace qrnet
