#include "sempub/routing.hpp"

#include <algorithm>
#include <cctype>

#include "sempub/semantic.hpp"
#include "sempub/syntactic.hpp"

namespace sempub {

std::string_view to_string(RoutingMode mode) {
    return mode == RoutingMode::Syntactic ? "syntactic" : "semantic";
}

RoutingMode parse_mode(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "syntactic") return RoutingMode::Syntactic;
    if (lower == "semantic") return RoutingMode::Semantic;
    throw std::invalid_argument("unknown routing mode '" + std::string(text) + "'");
}

std::string LinkId::str() const { return (is_broker() ? "broker:" : "client:") + name; }

std::string_view to_string(MessageKind kind) {
    switch (kind) {
        case MessageKind::Advertise: return "ADVERTISE";
        case MessageKind::Subscribe: return "SUBSCRIBE";
        case MessageKind::Publish: return "PUBLISH";
        case MessageKind::Notify: return "NOTIFY";
    }
    return "?";
}

Broker::Broker(std::string id, std::shared_ptr<const KnowledgeBase> kb, RoutingMode mode,
               RoutingOptions options)
    : id_(std::move(id)), kb_(kb ? std::move(kb) : std::make_shared<const KnowledgeBase>()),
      mode_(mode), options_(options) {}

void Broker::add_neighbor(const std::string& broker_id) { neighbors_.insert(broker_id); }
void Broker::add_client(const std::string& client_id) { clients_.insert(client_id); }

void Broker::require_link(const LinkId& link) const {
    const auto& known = link.is_broker() ? neighbors_ : clients_;
    if (!known.count(link.name)) throw RoutingError("broker " + id_ + ": unknown link " + link.str());
}

bool Broker::intersects(const Advertisement& adv, const Subscription& sub) const {
    return mode_ == RoutingMode::Syntactic ? syntactic::intersects(adv, sub)
                                           : semantic::intersects_normalized(adv, sub, *kb_);
}

bool Broker::covers(const Subscription& wider, const Subscription& narrower) const {
    return mode_ == RoutingMode::Syntactic ? syntactic::covers(wider, narrower)
                                           : semantic::covers_normalized(wider, narrower, *kb_);
}

bool Broker::gate_open(const Subscription& sub, const std::string& neighbor) const {
    if (!options_.advertisement_gating) return true;
    return std::any_of(advertisements_.begin(), advertisements_.end(), [&](const AdvertisementEntry& a) {
        return a.origin == LinkId::broker(neighbor) && intersects(a.adv, sub);
    });
}

bool Broker::covered_towards(std::size_t entry, const std::string& neighbor) const {
    if (!options_.covering) return false;
    const auto& sub = subscriptions_[entry].sub;
    for (std::size_t i = 0; i < subscriptions_.size(); ++i) {
        if (i == entry || !subscriptions_[i].forwarded_to.count(neighbor)) continue;
        if (covers(subscriptions_[i].sub, sub)) return true;
    }
    return false;
}

void Broker::forward(std::size_t entry, const std::string& neighbor, std::vector<Message>& out) {
    auto& e = subscriptions_[entry];
    e.forwarded_to.insert(neighbor);
    out.push_back(Message{MessageKind::Subscribe, e.sub, LinkId::broker(id_), LinkId::broker(neighbor)});
}

std::vector<Message> Broker::handle_advertise(const Advertisement& adv, const LinkId& from) {
    require_link(from);
    for (const auto& a : advertisements_) {
        if (a.adv.id == adv.id && a.origin == from) return {};
    }
    advertisements_.push_back(
        {mode_ == RoutingMode::Semantic ? semantic::normalize(adv, *kb_) : adv, from});
    const auto& stored = advertisements_.back().adv;

    std::vector<Message> out;
    for (const auto& n : neighbors_) {
        if (from == LinkId::broker(n)) continue;
        out.push_back(Message{MessageKind::Advertise, stored, LinkId::broker(id_), LinkId::broker(n)});
    }

    // Subscriptions that were held back for want of a publisher in this
    // direction now follow the advertisement towards its origin.
    if (from.is_broker()) {
        for (std::size_t i = 0; i < subscriptions_.size(); ++i) {
            const auto& e = subscriptions_[i];
            if (e.origin == from || e.forwarded_to.count(from.name)) continue;
            if (options_.advertisement_gating && !intersects(stored, e.sub)) continue;
            if (covered_towards(i, from.name)) {
                ++suppressed_;
                continue;
            }
            forward(i, from.name, out);
        }
    }
    return out;
}

std::vector<Message> Broker::handle_subscribe(const Subscription& sub, const LinkId& from) {
    require_link(from);
    for (const auto& s : subscriptions_) {
        if (s.sub.id == sub.id && s.origin == from) return {};
    }
    subscriptions_.push_back(
        {mode_ == RoutingMode::Semantic ? semantic::normalize(sub, *kb_) : sub, from, {}});
    const std::size_t entry = subscriptions_.size() - 1;

    std::vector<Message> out;
    for (const auto& n : neighbors_) {
        if (from == LinkId::broker(n)) continue;
        if (!gate_open(subscriptions_[entry].sub, n)) {
            ++gated_;
            continue;
        }
        if (covered_towards(entry, n)) {
            ++suppressed_;
            continue;
        }
        forward(entry, n, out);
    }
    return out;
}

std::vector<Message> Broker::handle_publish(const Event& event, const LinkId& from) {
    require_link(from);
    std::set<LinkId> targets;
    if (mode_ == RoutingMode::Semantic) {
        const auto augmented = semantic::augment(semantic::normalize(event, *kb_), *kb_);
        for (const auto& s : subscriptions_) {
            if (s.origin.is_broker() && s.origin == from) continue;
            if (!targets.count(s.origin) && semantic::matches(augmented, s.sub)) targets.insert(s.origin);
        }
    } else {
        for (const auto& s : subscriptions_) {
            if (s.origin.is_broker() && s.origin == from) continue;
            if (!targets.count(s.origin) && syntactic::match_event(event, s.sub)) targets.insert(s.origin);
        }
    }

    std::vector<Message> out;
    for (const auto& t : targets) {
        out.push_back(Message{t.is_client() ? MessageKind::Notify : MessageKind::Publish, event,
                              LinkId::broker(id_), t});
    }
    return out;
}

std::vector<Message> Broker::handle(const Message& msg) {
    switch (msg.kind) {
        case MessageKind::Advertise: return handle_advertise(std::get<Advertisement>(msg.payload), msg.from);
        case MessageKind::Subscribe: return handle_subscribe(std::get<Subscription>(msg.payload), msg.from);
        case MessageKind::Publish: return handle_publish(std::get<Event>(msg.payload), msg.from);
        case MessageKind::Notify: break;
    }
    throw RoutingError("broker " + id_ + ": NOTIFY is addressed to clients only");
}

}  // namespace sempub
