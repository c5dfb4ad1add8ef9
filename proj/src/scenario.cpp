#include "sempub/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sempub/semantic.hpp"
#include "sempub/syntactic.hpp"

namespace sempub {

using nlohmann::json;

namespace {

ActionKind parse_action(const std::string& text) {
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "advertise") return ActionKind::Advertise;
    if (lower == "subscribe") return ActionKind::Subscribe;
    if (lower == "publish") return ActionKind::Publish;
    throw ScenarioError("unknown action '" + text + "'");
}

std::string payload_text(const Action& a) {
    return std::visit([](const auto& p) { return render(p); }, a.payload);
}

Scenario from_document(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ScenarioError("scenario document must be a JSON object");
    Scenario sc;
    for (const auto& b : doc.at("brokers")) sc.brokers.push_back(b.get<std::string>());
    for (const auto& e : doc.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw ScenarioError("edges must be [broker, broker] pairs");
        sc.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    for (const auto& c : doc.at("clients")) {
        sc.clients.push_back({c.at("id").get<std::string>(), c.at("broker").get<std::string>()});
    }
    if (auto it = doc.find("mode"); it != doc.end()) {
        try {
            sc.mode = parse_mode(it->get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(e.what());
        }
    }
    if (auto it = doc.find("knowledge"); it != doc.end() && !it->is_null()) {
        try {
            if (it->is_string()) {
                std::filesystem::path p = it->get<std::string>();
                if (p.is_relative()) p = base_dir / p;
                sc.knowledge = std::make_shared<const KnowledgeBase>(KnowledgeBase::load_file(p));
            } else {
                sc.knowledge = std::make_shared<const KnowledgeBase>(KnowledgeBase::load(it->dump()));
            }
        } catch (const KnowledgeError& e) {
            throw ScenarioError(std::string("knowledge: ") + e.what());
        }
    }
    if (auto it = doc.find("seed"); it != doc.end()) sc.seed = it->get<std::uint64_t>();

    std::size_t i = 0;
    for (const auto& step : doc.at("script")) {
        const std::string where = "script[" + std::to_string(i) + "]";
        Action a;
        a.kind = parse_action(step.at("action").get<std::string>());
        a.client = step.at("client").get<std::string>();
        const std::string text = step.at("payload").get<std::string>();
        const std::string id = step.contains("id") ? step["id"].get<std::string>()
                                                   : std::string(1, "asp"[static_cast<int>(a.kind)]) + std::to_string(i);
        try {
            switch (a.kind) {
                case ActionKind::Advertise: a.payload = parse_advertisement(text, id); break;
                case ActionKind::Subscribe: a.payload = parse_subscription(text, id); break;
                case ActionKind::Publish: a.payload = parse_event(text); break;
            }
        } catch (const ParseError& e) {
            throw ScenarioError(where + ": " + e.what());
        }
        sc.script.push_back(std::move(a));
        ++i;
    }
    validate(sc);
    return sc;
}

}  // namespace

std::string_view to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::Advertise: return "advertise";
        case ActionKind::Subscribe: return "subscribe";
        case ActionKind::Publish: return "publish";
    }
    return "?";
}

const ClientSpec& Scenario::client(const std::string& id) const {
    for (const auto& c : clients) {
        if (c.id == id) return c;
    }
    throw ScenarioError("unknown client '" + id + "'");
}

std::string Scenario::to_json() const {
    json doc = json::object();
    doc["brokers"] = brokers;
    doc["edges"] = json::array();
    for (const auto& [a, b] : edges) doc["edges"].push_back({a, b});
    doc["clients"] = json::array();
    for (const auto& c : clients) doc["clients"].push_back({{"id", c.id}, {"broker", c.broker}});
    doc["knowledge"] = json::parse(knowledge->to_json());
    doc["mode"] = std::string(to_string(mode));
    if (seed) doc["seed"] = *seed;
    doc["script"] = json::array();
    for (const auto& a : script) {
        json step = {{"action", std::string(to_string(a.kind))}, {"client", a.client}, {"payload", payload_text(a)}};
        if (const auto* s = std::get_if<Subscription>(&a.payload)) step["id"] = s->id;
        if (const auto* ad = std::get_if<Advertisement>(&a.payload)) step["id"] = ad->id;
        doc["script"].push_back(step);
    }
    return doc.dump(2);
}

Scenario load_scenario(std::string_view document, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("malformed scenario document: ") + e.what());
    }
    try {
        return from_document(doc, base_dir);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("malformed scenario document: ") + e.what());
    }
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str(), path.parent_path());
}

void validate(const Scenario& sc) {
    std::set<std::string> brokers;
    for (const auto& b : sc.brokers) {
        if (b.empty()) throw ScenarioError("empty broker id");
        if (!brokers.insert(b).second) throw ScenarioError("duplicate broker '" + b + "'");
    }
    if (brokers.empty()) throw ScenarioError("scenario declares no brokers");

    // Tree: |E| = |V| - 1 and connected.
    std::map<std::string, std::set<std::string>> adj;
    for (const auto& [a, b] : sc.edges) {
        if (!brokers.count(a) || !brokers.count(b)) {
            throw ScenarioError("edge (" + a + ", " + b + ") references an undeclared broker");
        }
        if (a == b) throw ScenarioError("self-loop at broker '" + a + "'");
        if (!adj[a].insert(b).second) throw ScenarioError("duplicate edge (" + a + ", " + b + ")");
        adj[b].insert(a);
    }
    if (sc.edges.size() + 1 != brokers.size()) {
        throw ScenarioError(sc.edges.size() + 1 > brokers.size() ? "overlay contains a cycle"
                                                                 : "overlay is disconnected");
    }
    std::set<std::string> reached{*brokers.begin()};
    std::vector<std::string> frontier{*brokers.begin()};
    while (!frontier.empty()) {
        const std::string b = frontier.back();
        frontier.pop_back();
        for (const auto& n : adj[b]) {
            if (reached.insert(n).second) frontier.push_back(n);
        }
    }
    if (reached.size() != brokers.size()) throw ScenarioError("overlay contains a cycle and is disconnected");

    std::set<std::string> clients;
    for (const auto& c : sc.clients) {
        if (c.id.empty()) throw ScenarioError("empty client id");
        if (!clients.insert(c.id).second) throw ScenarioError("duplicate client '" + c.id + "'");
        if (!brokers.count(c.broker)) {
            throw ScenarioError("client '" + c.id + "' references undeclared broker '" + c.broker + "'");
        }
    }

    const KnowledgeBase& kb = *sc.knowledge;
    std::set<std::string> sub_ids;
    std::set<std::string> adv_ids;
    std::map<std::string, std::vector<const Advertisement*>> advertised;
    for (std::size_t i = 0; i < sc.script.size(); ++i) {
        const auto& a = sc.script[i];
        const std::string where = "script[" + std::to_string(i) + "]";
        if (!clients.count(a.client)) throw ScenarioError(where + ": unknown client '" + a.client + "'");
        switch (a.kind) {
            case ActionKind::Advertise: {
                const auto& adv = std::get<Advertisement>(a.payload);
                if (!adv_ids.insert(adv.id).second) throw ScenarioError(where + ": duplicate advertisement id '" + adv.id + "'");
                advertised[a.client].push_back(&adv);
                break;
            }
            case ActionKind::Subscribe: {
                const auto& sub = std::get<Subscription>(a.payload);
                if (!sub_ids.insert(sub.id).second) throw ScenarioError(where + ": duplicate subscription id '" + sub.id + "'");
                break;
            }
            case ActionKind::Publish: {
                const auto& ev = std::get<Event>(a.payload);
                const auto& ads = advertised[a.client];
                const bool ok = std::any_of(ads.begin(), ads.end(), [&](const Advertisement* adv) {
                    return sc.mode == RoutingMode::Syntactic ? syntactic::determines(*adv, ev)
                                                             : semantic::sem_determines(*adv, ev, kb);
                });
                if (!ok) {
                    throw ScenarioError(where + ": publish by '" + a.client +
                                        "' is not determined by any earlier advertisement of that client");
                }
                break;
            }
        }
    }
}

}  // namespace sempub
