#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sempub/knowledge.hpp"
#include "sempub/model.hpp"

namespace sempub {

enum class RoutingMode { Syntactic, Semantic };

std::string_view to_string(RoutingMode mode);
RoutingMode parse_mode(std::string_view text);

// A broker's view of one of its links: a neighbor broker or an attached client.
struct LinkId {
    enum class Kind { Broker, Client };

    Kind kind = Kind::Broker;
    std::string name;

    static LinkId broker(std::string name) { return {Kind::Broker, std::move(name)}; }
    static LinkId client(std::string name) { return {Kind::Client, std::move(name)}; }

    bool is_broker() const { return kind == Kind::Broker; }
    bool is_client() const { return kind == Kind::Client; }
    std::string str() const;

    friend bool operator==(const LinkId&, const LinkId&) = default;
    friend auto operator<=>(const LinkId&, const LinkId&) = default;
};

enum class MessageKind { Advertise, Subscribe, Publish, Notify };

std::string_view to_string(MessageKind kind);

struct Message {
    MessageKind kind = MessageKind::Publish;
    std::variant<Advertisement, Subscription, Event> payload;
    LinkId from;
    LinkId to;
};

struct RoutingOptions {
    bool covering = true;
    bool advertisement_gating = true;
};

class RoutingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One event router. Tables grow monotonically; handlers process one message
// at a time and return the messages to send.
class Broker {
public:
    struct SubscriptionEntry {
        Subscription sub;  // normalized in semantic mode
        LinkId origin;
        std::set<std::string> forwarded_to;
    };

    struct AdvertisementEntry {
        Advertisement adv;  // normalized in semantic mode
        LinkId origin;
    };

    Broker(std::string id, std::shared_ptr<const KnowledgeBase> kb, RoutingMode mode,
           RoutingOptions options = {});

    void add_neighbor(const std::string& broker_id);
    void add_client(const std::string& client_id);

    std::vector<Message> handle_advertise(const Advertisement& adv, const LinkId& from);
    std::vector<Message> handle_subscribe(const Subscription& sub, const LinkId& from);
    std::vector<Message> handle_publish(const Event& event, const LinkId& from);
    std::vector<Message> handle(const Message& msg);

    const std::string& id() const { return id_; }
    const std::set<std::string>& neighbors() const { return neighbors_; }
    const std::set<std::string>& clients() const { return clients_; }
    const std::vector<SubscriptionEntry>& subscriptions() const { return subscriptions_; }
    const std::vector<AdvertisementEntry>& advertisements() const { return advertisements_; }

    // Forwarding decisions withheld by covering and by advertisement gating.
    std::uint64_t suppressed() const { return suppressed_; }
    std::uint64_t gated() const { return gated_; }

private:
    void require_link(const LinkId& link) const;
    bool intersects(const Advertisement& adv, const Subscription& sub) const;
    bool covers(const Subscription& wider, const Subscription& narrower) const;
    bool gate_open(const Subscription& sub, const std::string& neighbor) const;
    bool covered_towards(std::size_t entry, const std::string& neighbor) const;
    void forward(std::size_t entry, const std::string& neighbor, std::vector<Message>& out);

    std::string id_;
    std::shared_ptr<const KnowledgeBase> kb_;
    RoutingMode mode_;
    RoutingOptions options_;
    std::set<std::string> neighbors_;
    std::set<std::string> clients_;
    std::vector<SubscriptionEntry> subscriptions_;
    std::vector<AdvertisementEntry> advertisements_;
    std::uint64_t suppressed_ = 0;
    std::uint64_t gated_ = 0;
};

}  // namespace sempub
