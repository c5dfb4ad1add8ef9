#include "sempub/simulator.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sempub/semantic.hpp"
#include "sempub/syntactic.hpp"

namespace sempub {

using nlohmann::json;

namespace {

std::set<Delivery> centralized(const Scenario& sc, const KnowledgeBase& kb) {
    std::set<Delivery> out;
    std::vector<std::pair<std::string, Subscription>> active;
    std::size_t event_index = 0;
    for (const auto& a : sc.script) {
        if (a.kind == ActionKind::Subscribe) {
            const auto& sub = std::get<Subscription>(a.payload);
            active.emplace_back(a.client, sc.mode == RoutingMode::Semantic ? semantic::normalize(sub, kb) : sub);
        } else if (a.kind == ActionKind::Publish) {
            const auto& ev = std::get<Event>(a.payload);
            if (sc.mode == RoutingMode::Semantic) {
                const auto augmented = semantic::augment(semantic::normalize(ev, kb), kb);
                for (const auto& [client, sub] : active) {
                    if (semantic::matches(augmented, sub)) out.insert({client, event_index});
                }
            } else {
                for (const auto& [client, sub] : active) {
                    if (syntactic::match_event(ev, sub)) out.insert({client, event_index});
                }
            }
            ++event_index;
        }
    }
    return out;
}

json delivery_list(const std::vector<Delivery>& ds) {
    json out = json::array();
    for (const auto& d : ds) out.push_back({{"client", d.client}, {"event", d.event}});
    return out;
}

constexpr std::array<MessageKind, 4> kKinds{MessageKind::Advertise, MessageKind::Subscribe,
                                            MessageKind::Publish, MessageKind::Notify};

}  // namespace

std::string_view to_string(VerdictStatus status) {
    switch (status) {
        case VerdictStatus::Pass: return "PASS";
        case VerdictStatus::Fail: return "FAIL";
        case VerdictStatus::MappingGap: return "MAPPING_GAP";
    }
    return "?";
}

std::uint64_t SimReport::total(MessageKind kind) const {
    std::uint64_t n = 0;
    for (const auto& [link, counts] : messages) n += counts[static_cast<std::size_t>(kind)];
    return n;
}

std::string SimReport::to_json() const {
    json doc = json::object();
    doc["mode"] = std::string(to_string(mode));
    doc["options"] = {{"covering", options.covering}, {"advertisement_gating", options.advertisement_gating}};
    if (seed) doc["seed"] = *seed;
    doc["events"] = events;
    doc["deliveries"] = delivery_list({deliveries.begin(), deliveries.end()});
    json links = json::object();
    for (const auto& [link, counts] : messages) {
        json c = json::object();
        for (auto k : kKinds) {
            if (counts[static_cast<std::size_t>(k)]) c[std::string(to_string(k))] = counts[static_cast<std::size_t>(k)];
        }
        links[link] = c;
    }
    doc["messages"] = links;
    json totals = json::object();
    for (auto k : kKinds) totals[std::string(to_string(k))] = total(k);
    doc["totals"] = totals;
    doc["suppressed_subscriptions"] = suppressed_subscriptions;
    doc["gated_subscriptions"] = gated_subscriptions;
    doc["verdict"] = {{"status", std::string(to_string(verdict.status))},
                      {"missing", delivery_list(verdict.missing)},
                      {"spurious", delivery_list(verdict.spurious)}};
    return doc.dump(2) + "\n";
}

std::string SimReport::to_text() const {
    std::ostringstream out;
    out << "mode " << to_string(mode) << "\n";
    if (seed) out << "seed " << *seed << "\n";
    out << "events " << events << "\n";
    for (const auto& [link, counts] : messages) {
        for (auto k : kKinds) {
            if (const auto n = counts[static_cast<std::size_t>(k)]) {
                out << "link " << link << " " << to_string(k) << " " << n << "\n";
            }
        }
    }
    for (auto k : kKinds) out << "total " << to_string(k) << " " << total(k) << "\n";
    out << "suppressed " << suppressed_subscriptions << "\n";
    out << "gated " << gated_subscriptions << "\n";
    out << "deliveries " << deliveries.size() << "\n";
    for (const auto& d : deliveries) out << "delivery " << d.client << " " << d.event << "\n";
    out << "verdict " << to_string(verdict.status) << "\n";
    return out.str();
}

SimReport run(const Scenario& sc, RoutingOptions options) {
    std::map<std::string, Broker> brokers;
    for (const auto& id : sc.brokers) brokers.emplace(id, Broker(id, sc.knowledge, sc.mode, options));
    for (const auto& [a, b] : sc.edges) {
        brokers.at(a).add_neighbor(b);
        brokers.at(b).add_neighbor(a);
    }
    for (const auto& c : sc.clients) brokers.at(c.broker).add_client(c.id);

    SimReport report;
    report.mode = sc.mode;
    report.options = options;
    report.seed = sc.seed;

    for (std::size_t step = 0; step < sc.script.size(); ++step) {
        const auto& action = sc.script[step];
        const auto& home = sc.client(action.client).broker;
        const auto from = LinkId::client(action.client);
        const auto to = LinkId::broker(home);
        std::vector<Message> wave;
        switch (action.kind) {
            case ActionKind::Advertise: wave.push_back({MessageKind::Advertise, action.payload, from, to}); break;
            case ActionKind::Subscribe: wave.push_back({MessageKind::Subscribe, action.payload, from, to}); break;
            case ActionKind::Publish: wave.push_back({MessageKind::Publish, action.payload, from, to}); break;
        }
        const std::size_t event_index = report.events;

        try {
            while (!wave.empty()) {
                std::stable_sort(wave.begin(), wave.end(),
                                 [](const Message& a, const Message& b) { return a.to < b.to; });
                std::vector<Message> next;
                for (const auto& msg : wave) {
                    report.messages[msg.from.str() + " -> " + msg.to.str()][static_cast<std::size_t>(msg.kind)]++;
                    if (msg.to.is_client()) {
                        report.deliveries.insert({msg.to.name, event_index});
                        continue;
                    }
                    auto out = brokers.at(msg.to.name).handle(msg);
                    next.insert(next.end(), std::make_move_iterator(out.begin()), std::make_move_iterator(out.end()));
                }
                wave = std::move(next);
            }
        } catch (const std::exception& e) {
            throw SimulationError("script[" + std::to_string(step) + "] (" + std::string(to_string(action.kind)) +
                                  " by " + action.client + "): " + e.what());
        }
        if (action.kind == ActionKind::Publish) ++report.events;
    }

    for (const auto& [id, b] : brokers) {
        report.suppressed_subscriptions += b.suppressed();
        report.gated_subscriptions += b.gated();
    }
    report.verdict = compare(sc, report.deliveries);
    return report;
}

std::set<Delivery> oracle_deliveries(const Scenario& sc) { return centralized(sc, *sc.knowledge); }

Verdict compare(const Scenario& sc, const std::set<Delivery>& observed) {
    const auto expected = oracle_deliveries(sc);
    Verdict v;
    std::set_difference(expected.begin(), expected.end(), observed.begin(), observed.end(),
                        std::back_inserter(v.missing));
    std::set_difference(observed.begin(), observed.end(), expected.begin(), expected.end(),
                        std::back_inserter(v.spurious));
    if (v.missing.empty() && v.spurious.empty()) {
        v.status = VerdictStatus::Pass;
        return v;
    }
    v.status = VerdictStatus::Fail;
    if (v.spurious.empty() && sc.mode == RoutingMode::Semantic && !sc.knowledge->mappings().empty()) {
        // A miss is the mapping gap when the oracle only finds it through a
        // mapping function.
        const auto without = centralized(sc, sc.knowledge->without_mappings());
        const bool all_mapping = std::none_of(v.missing.begin(), v.missing.end(),
                                              [&](const Delivery& d) { return without.count(d) != 0; });
        if (all_mapping) v.status = VerdictStatus::MappingGap;
    }
    return v;
}

Verdict verify(const Scenario& sc, RoutingOptions options) { return run(sc, options).verdict; }

}  // namespace sempub
